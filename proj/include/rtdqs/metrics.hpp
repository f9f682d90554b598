#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "rtdqs/scenario.hpp"

namespace rtdqs {

/// What happened to a request's data packet at the provider side.
enum class RequestFate { Open, InTime, Late, DroppedDeadline };

struct TxnOutcome {
  std::uint64_t id = 0;
  NodeId requestor = 0;
  TxnClass txn_class = TxnClass::Firm;
  double issued = 0.0;
  double deadline = 0.0;
  std::optional<NodeId> provider;
  std::optional<double> reply_at;  // first reply received, even if late
  bool success = false;            // reply received within the requestor's patience
  RequestFate fate = RequestFate::Open;
};

/// Terminal states of unicast packets (DATA, SREP, RREP, RERR).
struct PacketCounters {
  std::uint64_t injected = 0;
  std::uint64_t delivered = 0;
  std::uint64_t dropped_overflow = 0;
  std::uint64_t dropped_deadline = 0;
  std::uint64_t dropped_energy = 0;
  std::uint64_t dropped_no_route = 0;
  std::uint64_t in_flight = 0;

  std::uint64_t accounted() const {
    return delivered + dropped_overflow + dropped_deadline + dropped_energy + dropped_no_route + in_flight;
  }
};

struct ProviderSummary {
  NodeId id = 0;
  double mr = 0.0;   // whole run
  double ate = 0.0;  // whole run
  double max_overshoot = 0.0;
  std::uint64_t episodes = 0;
  std::uint64_t violations = 0;
  std::uint64_t terminated = 0;
  std::uint64_t tardy = 0;
};

/// Raw outcome of one simulation run.
struct RunLog {
  std::vector<TxnOutcome> txns;
  double energy_charged = 0.0;   // sum of all consume() returns
  double energy_decrease = 0.0;  // sum over nodes of initial - residual
  double delivered_bits = 0.0;   // DATA payload bits at their final destination
  std::uint64_t overhead_packets = 0;
  PacketCounters counters;
  std::vector<ProviderSummary> providers;
  std::uint64_t depleted_nodes = 0;
  std::uint64_t post_depletion_charges = 0;
  std::size_t max_queue_occupancy = 0;
};

struct MetricsReport {
  double availability_ratio = 0.0;
  std::optional<double> avg_response_time;
  double deadline_miss_ratio = 0.0;
  std::optional<double> energy_per_bit;
  std::uint64_t overhead_packets = 0;
  std::vector<ProviderSummary> per_provider;
  PacketCounters counters;
};

double availability_ratio(const RunLog& log);
std::optional<double> avg_response_time(const RunLog& log);
double deadline_miss_ratio_pkts(const RunLog& log);
std::optional<double> energy_per_bit(const RunLog& log);
std::uint64_t overhead_packets(const RunLog& log);

MetricsReport compute_metrics(const RunLog& log);

}  // namespace rtdqs
