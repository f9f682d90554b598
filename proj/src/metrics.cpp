#include "rtdqs/metrics.hpp"

namespace rtdqs {

double availability_ratio(const RunLog& log) {
  if (log.txns.empty()) return 0.0;
  std::size_t ok = 0;
  for (const auto& t : log.txns)
    if (t.success) ++ok;
  return 100.0 * static_cast<double>(ok) / static_cast<double>(log.txns.size());
}

std::optional<double> avg_response_time(const RunLog& log) {
  double sum = 0.0;
  std::size_t n = 0;
  for (const auto& t : log.txns) {
    if (!t.success) continue;
    sum += *t.reply_at - t.issued;
    ++n;
  }
  if (n == 0) return std::nullopt;
  return sum / static_cast<double>(n);
}

double deadline_miss_ratio_pkts(const RunLog& log) {
  std::size_t missed = 0, total = 0;
  for (const auto& t : log.txns) {
    if (t.fate == RequestFate::Open) continue;
    ++total;
    if (t.fate != RequestFate::InTime) ++missed;
  }
  return total == 0 ? 0.0 : 100.0 * static_cast<double>(missed) / static_cast<double>(total);
}

std::optional<double> energy_per_bit(const RunLog& log) {
  if (log.delivered_bits <= 0.0) return std::nullopt;
  return log.energy_charged / log.delivered_bits;
}

std::uint64_t overhead_packets(const RunLog& log) { return log.overhead_packets; }

MetricsReport compute_metrics(const RunLog& log) {
  MetricsReport r;
  r.availability_ratio = availability_ratio(log);
  r.avg_response_time = avg_response_time(log);
  r.deadline_miss_ratio = deadline_miss_ratio_pkts(log);
  r.energy_per_bit = energy_per_bit(log);
  r.overhead_packets = overhead_packets(log);
  r.per_provider = log.providers;
  r.counters = log.counters;
  return r;
}

}  // namespace rtdqs
