#include "rtdqs/selection.hpp"

#include <algorithm>
#include <limits>

namespace rtdqs {

double c_soft(double miss_ratio, double residual_energy, double n_soft) {
  if (!(residual_energy > 0.0)) return std::numeric_limits<double>::infinity();
  return n_soft * miss_ratio / residual_energy;
}

double firm_weight(TxnClass cls, const Weights& w) {
  if (w.alpha_ss) return *w.alpha_ss;
  return cls == TxnClass::Firm ? 1.0 : 0.0;
}

double c_ss(TxnClass cls, std::size_t hops, const ProviderSnapshot& snap, const Weights& w) {
  const double a = firm_weight(cls, w);
  const double soft = c_soft(snap.mr, snap.energy, w.n_soft);
  if (soft == std::numeric_limits<double>::infinity()) return soft;
  double cost = 0.0;
  // A zero weight drops its term entirely so the other class's inputs cannot leak in.
  if (a > 0.0) cost += a * c_firm(hops, snap.p, w.n_firm);
  if (a < 1.0) cost += (1.0 - a) * soft;
  return cost;
}

std::optional<ServiceReply> select_service(const std::vector<ServiceReply>& replies, const Weights& w) {
  if (replies.empty()) return std::nullopt;
  std::size_t best = 0;
  double best_cost = replies[0].c_qos(w);
  for (std::size_t i = 1; i < replies.size(); ++i) {
    const double c = replies[i].c_qos(w);
    const auto& a = replies[i];
    const auto& b = replies[best];
    if (c < best_cost ||
        (c == best_cost && (a.hop_count < b.hop_count || (a.hop_count == b.hop_count && a.provider < b.provider)))) {
      best = i;
      best_cost = c;
    }
  }
  return replies[best];
}

std::optional<ServiceReply> closest_rtd_select(const std::vector<ServiceReply>& replies) {
  if (replies.empty()) return std::nullopt;
  return *std::min_element(replies.begin(), replies.end(), [](const ServiceReply& a, const ServiceReply& b) {
    if (a.hop_count != b.hop_count) return a.hop_count < b.hop_count;
    return a.provider < b.provider;
  });
}

void collect_reply(std::vector<ServiceReply>& replies, ServiceReply reply, const Weights& w) {
  auto it = std::find_if(replies.begin(), replies.end(),
                         [&](const ServiceReply& r) { return r.provider == reply.provider; });
  if (it == replies.end()) {
    replies.push_back(std::move(reply));
  } else if (reply.c_qos(w) < it->c_qos(w)) {
    *it = std::move(reply);
  }
}

}  // namespace rtdqs
