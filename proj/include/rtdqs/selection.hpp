#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "rtdqs/provider.hpp"
#include "rtdqs/routing.hpp"
#include "rtdqs/scenario.hpp"

namespace rtdqs {

struct ServiceRequest {
  std::uint64_t request_id = 0;
  NodeId requestor = 0;
  GroupId group;
  TxnClass txn_class = TxnClass::Firm;
  double deadline = 0.0;
  double issued_at = 0.0;
};

struct ServiceReply {
  std::uint64_t request_id = 0;
  NodeId provider = 0;
  std::size_t hop_count = 0;
  double c_ss = 0.0;
  RouteRecord route;  // requestor -> provider
  ProviderSnapshot snapshot;

  /// Requestor-side total: route cost of the stamped path plus the provider's service cost.
  double c_qos(const Weights& w) const { return route_cost(route, w) + c_ss; }
};

/// Firm-class cost: grows with distance in hops and the provider's overshoot period.
inline double c_firm(std::size_t hops, double overshoot_period, double n_firm) {
  return n_firm * static_cast<double>(hops) * overshoot_period;
}

/// Soft-class cost: grows with the miss ratio, shrinks with residual energy.
/// Infinite for an exhausted provider, which removes it from candidacy.
double c_soft(double miss_ratio, double residual_energy, double n_soft);

/// Weight of the firm term for a request class.
double firm_weight(TxnClass cls, const Weights& w);

double c_ss(TxnClass cls, std::size_t hops, const ProviderSnapshot& snap, const Weights& w);

/// Lowest C_QoS; ties by fewer hops, then smaller provider id.
std::optional<ServiceReply> select_service(const std::vector<ServiceReply>& replies, const Weights& w);

/// Baseline: nearest provider by hop count; ties by smaller provider id.
std::optional<ServiceReply> closest_rtd_select(const std::vector<ServiceReply>& replies);

/// Merges a reply into a collection, keeping one reply per provider (the cheaper one).
void collect_reply(std::vector<ServiceReply>& replies, ServiceReply reply, const Weights& w);

}  // namespace rtdqs
