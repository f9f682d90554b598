#pragma once

#include <optional>
#include <vector>

#include "rtdqs/node.hpp"
#include "rtdqs/scenario.hpp"

namespace rtdqs {

/// Status one intermediate node writes into a reply on its way back.
struct HopStamp {
  NodeId node = 0;
  double c_energy = 0.0;
  double c_queue = 0.0;
  double c_delay = 0.0;  // seconds
  bool operator==(const HopStamp&) const = default;
};

struct RouteRecord {
  std::vector<NodeId> hops;      // endpoints included
  std::vector<HopStamp> stamps;  // one per intermediate node, in hop order
  double c_routing = 0.0;
  double c_delay_total = 0.0;

  std::size_t hop_count() const { return hops.empty() ? 0 : hops.size() - 1; }
  std::size_t intermediate_count() const { return hops.size() < 2 ? 0 : hops.size() - 2; }
};

/// Local cost stamp of a forwarding node:
///   c_energy = (link_distance / range) * (initial_energy / energy)
///   c_queue  = queue_length / queue_capacity
///   c_delay  = (queue_length + 1) * airtime(pending_bytes)
/// A depleted node produces no stamp.
std::optional<HopStamp> hop_costs(const NodeState& n, std::size_t queue_length, double link_distance,
                                  std::uint32_t pending_bytes, const RadioParams& r);

/// Weighted sum of the stamps.
double route_cost(const std::vector<HopStamp>& stamps, const Weights& w);
double route_cost(const RouteRecord& rr, const Weights& w);

double total_delay(const std::vector<HopStamp>& stamps);

/// Recomputes c_routing and c_delay_total from the stamps.
void finalize(RouteRecord& rr, const Weights& w);

/// Strict check that the accumulated delay leaves room before the deadline.
inline bool deadline_admissible(double deadline, double accumulated_delay) { return deadline > accumulated_delay; }
inline bool deadline_admissible(double deadline, const RouteRecord& rr) {
  return deadline_admissible(deadline, rr.c_delay_total);
}

/// Minimum route_cost; ties go to fewer hops, then the lexicographically smaller hop list.
/// Returns nullopt for an empty candidate list (no route).
std::optional<RouteRecord> select_route(const std::vector<RouteRecord>& candidates, const Weights& w);

/// Fewest hops, then lexicographic order. Plain DSR route choice used by the baseline.
std::optional<RouteRecord> select_shortest_route(const std::vector<RouteRecord>& candidates);

}  // namespace rtdqs
