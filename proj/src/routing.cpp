#include "rtdqs/routing.hpp"

#include <algorithm>

#include "rtdqs/event_queue.hpp"

namespace rtdqs {

std::optional<HopStamp> hop_costs(const NodeState& n, std::size_t queue_length, double link_distance,
                                  std::uint32_t pending_bytes, const RadioParams& r) {
  if (n.depleted || n.energy <= 0.0) return std::nullopt;
  HopStamp s;
  s.node = n.id;
  s.c_energy = (link_distance / r.range) * (n.initial_energy / n.energy);
  s.c_queue = static_cast<double>(queue_length) / static_cast<double>(r.queue_capacity);
  s.c_delay = static_cast<double>(queue_length + 1) * transmission_time(pending_bytes, r);
  return s;
}

double route_cost(const std::vector<HopStamp>& stamps, const Weights& w) {
  double sum = 0.0;
  for (const auto& s : stamps) sum += w.alpha_route * s.c_energy + w.beta_route * s.c_queue + w.gamma_route * s.c_delay;
  return sum;
}

double route_cost(const RouteRecord& rr, const Weights& w) { return route_cost(rr.stamps, w); }

double total_delay(const std::vector<HopStamp>& stamps) {
  double sum = 0.0;
  for (const auto& s : stamps) sum += s.c_delay;
  return sum;
}

void finalize(RouteRecord& rr, const Weights& w) {
  rr.c_routing = route_cost(rr.stamps, w);
  rr.c_delay_total = total_delay(rr.stamps);
}

std::optional<RouteRecord> select_route(const std::vector<RouteRecord>& candidates, const Weights& w) {
  if (candidates.empty()) return std::nullopt;
  std::size_t best = 0;
  double best_cost = route_cost(candidates[0], w);
  for (std::size_t i = 1; i < candidates.size(); ++i) {
    const double c = route_cost(candidates[i], w);
    const auto& a = candidates[i];
    const auto& b = candidates[best];
    if (c < best_cost || (c == best_cost && (a.hops.size() < b.hops.size() ||
                                             (a.hops.size() == b.hops.size() && a.hops < b.hops)))) {
      best = i;
      best_cost = c;
    }
  }
  return candidates[best];
}

std::optional<RouteRecord> select_shortest_route(const std::vector<RouteRecord>& candidates) {
  if (candidates.empty()) return std::nullopt;
  return *std::min_element(candidates.begin(), candidates.end(), [](const RouteRecord& a, const RouteRecord& b) {
    if (a.hops.size() != b.hops.size()) return a.hops.size() < b.hops.size();
    return a.hops < b.hops;
  });
}

}  // namespace rtdqs
