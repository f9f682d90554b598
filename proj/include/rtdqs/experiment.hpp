#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "rtdqs/metrics.hpp"
#include "rtdqs/scenario.hpp"
#include "rtdqs/simulator.hpp"

namespace rtdqs {

/// Deadline of the generated traffic together with its transaction class.
struct DeadlineSpec {
  double seconds = 15.0;
  TxnClass txn_class = TxnClass::Firm;
  bool operator==(const DeadlineSpec&) const = default;
};

/// "15" -> firm, "25" -> soft (anything above 15 s is soft); "25:firm" forces a class.
DeadlineSpec parse_deadline(const std::string& text);
std::vector<DeadlineSpec> parse_deadlines(const std::string& csv);
std::vector<double> parse_numbers(const std::string& csv);
/// "1..5", "3", or "1,4,9".
std::vector<std::uint64_t> parse_seeds(const std::string& text);

/// Keeps the first round(pct * N / 100) LMH nodes as providers (at least one) and
/// demotes the rest to SMH with SMH defaults. Demoted nodes leave every group.
Scenario with_density(const Scenario& base, double density_pct);
/// Applies the deadline and class to every traffic source.
Scenario with_deadline(const Scenario& base, const DeadlineSpec& d);

struct RunResult {
  Protocol protocol = Protocol::Rtdqs;
  DeadlineSpec deadline;
  double density_pct = 0.0;
  std::uint64_t seed = 0;
  MetricsReport metrics;
};

RunResult run_single(const Scenario& scenario, Protocol protocol, std::uint64_t seed, std::ostream* trace = nullptr);

struct MetricStats {
  std::optional<double> mean;
  std::optional<double> stddev;  // sample stddev; absent with fewer than two values
};

struct CellSummary {
  Protocol protocol = Protocol::Rtdqs;
  DeadlineSpec deadline;
  double density_pct = 0.0;
  std::vector<std::uint64_t> seeds;
  MetricStats availability, response_time, miss_ratio, energy_per_bit, overhead;
};

struct SweepResult {
  std::vector<RunResult> runs;     // cell-major, seeds in the order given
  std::vector<CellSummary> cells;  // protocol, deadline, density nesting
};

/// Sample statistics over the present values.
MetricStats aggregate(const std::vector<std::optional<double>>& values);

/// `threads` = 0 picks the hardware concurrency. Cell order in the result does not
/// depend on the thread count.
SweepResult run_sweep(const Scenario& base, const std::vector<Protocol>& protocols,
                      const std::vector<DeadlineSpec>& deadlines, const std::vector<double>& densities,
                      const std::vector<std::uint64_t>& seeds, unsigned threads = 0);

extern const char* const kCsvHeader;

void write_run_rows(std::ostream& out, const std::vector<RunResult>& runs, bool header = true);
/// Per-seed rows of each cell followed by its "mean" and "stddev" rows.
void write_sweep_csv(std::ostream& out, const SweepResult& result);
void write_provider_csv(std::ostream& out, const std::vector<RunResult>& runs);

/// "<dir>/<stem>_providers.csv" next to `csv_path`.
std::string provider_csv_path(const std::string& csv_path);

}  // namespace rtdqs
