#include "rtdqs/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <mutex>
#include <set>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <thread>

namespace rtdqs {

namespace {

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, sep)) {
    item.erase(0, item.find_first_not_of(" \t"));
    item.erase(item.find_last_not_of(" \t") + 1);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

double to_number(const std::string& s) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    throw std::invalid_argument("not a number: " + s);
  }
  if (used != s.size()) throw std::invalid_argument("not a number: " + s);
  return v;
}

std::uint64_t to_seed(const std::string& s) {
  if (s.empty() || s.find_first_not_of("0123456789") != std::string::npos)
    throw std::invalid_argument("not a seed: " + s);
  return std::stoull(s);
}

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string opt(const std::optional<double>& v) { return v ? num(*v) : std::string(); }

std::string cell_name(Protocol p, const DeadlineSpec& d, double density) {
  return std::string(to_string(p)) + "/D=" + num(d.seconds) + ":" + to_string(d.txn_class) + "/density=" + num(density);
}

}  // namespace

const char* const kCsvHeader =
    "protocol,deadline_s,density_pct,seed,availability_pct,response_time_s,miss_ratio_pct,energy_per_bit_j,"
    "overhead_pkts";

DeadlineSpec parse_deadline(const std::string& text) {
  const auto colon = text.find(':');
  DeadlineSpec d;
  d.seconds = to_number(text.substr(0, colon));
  if (!(d.seconds > 0.0)) throw std::invalid_argument("deadline must be positive: " + text);
  if (colon == std::string::npos) {
    d.txn_class = d.seconds <= 15.0 ? TxnClass::Firm : TxnClass::Soft;
  } else {
    const auto cls = text.substr(colon + 1);
    if (cls == "firm") d.txn_class = TxnClass::Firm;
    else if (cls == "soft") d.txn_class = TxnClass::Soft;
    else throw std::invalid_argument("unknown transaction class: " + cls);
  }
  return d;
}

std::vector<DeadlineSpec> parse_deadlines(const std::string& csv) {
  std::vector<DeadlineSpec> out;
  for (const auto& item : split(csv, ',')) out.push_back(parse_deadline(item));
  return out;
}

std::vector<double> parse_numbers(const std::string& csv) {
  std::vector<double> out;
  for (const auto& item : split(csv, ',')) out.push_back(to_number(item));
  return out;
}

std::vector<std::uint64_t> parse_seeds(const std::string& text) {
  std::vector<std::uint64_t> out;
  if (const auto dots = text.find(".."); dots != std::string::npos) {
    const auto lo = to_seed(text.substr(0, dots));
    const auto hi = to_seed(text.substr(dots + 2));
    if (hi < lo) throw std::invalid_argument("empty seed range: " + text);
    for (auto s = lo; s <= hi; ++s) out.push_back(s);
    return out;
  }
  for (const auto& item : split(text, ',')) out.push_back(to_seed(item));
  if (out.empty()) throw std::invalid_argument("no seeds given");
  return out;
}

Scenario with_density(const Scenario& base, double density_pct) {
  if (!(density_pct > 0.0 && density_pct <= 100.0))
    throw std::invalid_argument("density must be in (0,100]: " + num(density_pct));
  Scenario s = base;
  const auto wanted = static_cast<std::size_t>(
      std::max(1.0, std::round(density_pct * static_cast<double>(s.nodes.size()) / 100.0)));
  const NodeSpec smh;
  std::set<NodeId> demoted;
  std::size_t kept = 0;
  for (auto& n : s.nodes) {
    if (n.node_class != NodeClass::LMH) continue;
    if (kept < wanted) {
      ++kept;
      continue;
    }
    n.node_class = NodeClass::SMH;
    n.initial_energy = smh.initial_energy;
    n.max_speed = smh.max_speed;
    n.pause_time = smh.pause_time;
    n.background_load.clear();
    demoted.insert(n.id);
  }
  if (kept < wanted)
    throw std::invalid_argument("scenario has only " + std::to_string(kept) + " providers; density " +
                                num(density_pct) + "% needs " + std::to_string(wanted));
  for (auto& [gid, members] : s.multicast_groups)
    members.erase(std::remove_if(members.begin(), members.end(), [&](NodeId m) { return demoted.count(m) > 0; }),
                  members.end());
  return s;
}

Scenario with_deadline(const Scenario& base, const DeadlineSpec& d) {
  Scenario s = base;
  for (auto& t : s.traffic) {
    t.deadline = d.seconds;
    t.txn_class = d.txn_class;
  }
  return s;
}

RunResult run_single(const Scenario& scenario, Protocol protocol, std::uint64_t seed, std::ostream* trace) {
  Scenario s = scenario;
  s.seed = seed;
  Simulator sim(s, protocol, trace);
  RunResult r;
  r.protocol = protocol;
  r.seed = seed;
  r.density_pct = s.density();
  if (!s.traffic.empty()) r.deadline = DeadlineSpec{s.traffic.front().deadline, s.traffic.front().txn_class};
  r.metrics = compute_metrics(sim.run());
  return r;
}

MetricStats aggregate(const std::vector<std::optional<double>>& values) {
  std::vector<double> xs;
  for (const auto& v : values)
    if (v) xs.push_back(*v);
  MetricStats m;
  if (xs.empty()) return m;
  double sum = 0.0;
  for (double x : xs) sum += x;
  const double mean = sum / static_cast<double>(xs.size());
  m.mean = mean;
  if (xs.size() >= 2) {
    double ss = 0.0;
    for (double x : xs) ss += (x - mean) * (x - mean);
    m.stddev = std::sqrt(ss / static_cast<double>(xs.size() - 1));
  }
  return m;
}

SweepResult run_sweep(const Scenario& base, const std::vector<Protocol>& protocols,
                      const std::vector<DeadlineSpec>& deadlines, const std::vector<double>& densities,
                      const std::vector<std::uint64_t>& seeds, unsigned threads) {
  if (auto v = validate(base); !v.empty()) throw ScenarioValidationError(std::move(v));
  if (protocols.empty() || deadlines.empty() || densities.empty() || seeds.empty())
    throw std::invalid_argument("sweep needs at least one protocol, deadline, density and seed");

  struct Job {
    std::size_t cell;
    Protocol protocol;
    DeadlineSpec deadline;
    double density;
    std::uint64_t seed;
    Scenario scenario;
  };
  std::vector<Job> jobs;
  SweepResult result;
  for (auto p : protocols)
    for (const auto& d : deadlines)
      for (double density : densities) {
        Scenario cell;
        try {
          cell = with_deadline(with_density(base, density), d);
        } catch (const std::exception& e) {
          throw std::runtime_error("sweep cell " + cell_name(p, d, density) + ": " + e.what());
        }
        CellSummary summary;
        summary.protocol = p;
        summary.deadline = d;
        summary.density_pct = density;
        summary.seeds = seeds;
        for (auto seed : seeds) jobs.push_back(Job{result.cells.size(), p, d, density, seed, cell});
        result.cells.push_back(std::move(summary));
      }

  result.runs.resize(jobs.size());
  std::atomic<std::size_t> next{0};
  std::mutex error_mutex;
  std::string error;
  auto worker = [&] {
    for (std::size_t i = next++; i < jobs.size(); i = next++) {
      const auto& job = jobs[i];
      try {
        auto r = run_single(job.scenario, job.protocol, job.seed);
        r.deadline = job.deadline;
        r.density_pct = job.density;
        result.runs[i] = std::move(r);
      } catch (const std::exception& e) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (error.empty())
          error = "sweep cell " + cell_name(job.protocol, job.deadline, job.density) + " seed " +
                  std::to_string(job.seed) + ": " + e.what();
        next = jobs.size();
      }
    }
  };
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, jobs.size()));
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  if (!error.empty()) throw std::runtime_error(error);

  for (std::size_t c = 0; c < result.cells.size(); ++c) {
    std::vector<std::optional<double>> av, rt, mr, epb, oh;
    for (std::size_t i = 0; i < jobs.size(); ++i) {
      if (jobs[i].cell != c) continue;
      const auto& m = result.runs[i].metrics;
      av.push_back(m.availability_ratio);
      rt.push_back(m.avg_response_time);
      mr.push_back(m.deadline_miss_ratio);
      epb.push_back(m.energy_per_bit);
      oh.push_back(static_cast<double>(m.overhead_packets));
    }
    auto& cell = result.cells[c];
    cell.availability = aggregate(av);
    cell.response_time = aggregate(rt);
    cell.miss_ratio = aggregate(mr);
    cell.energy_per_bit = aggregate(epb);
    cell.overhead = aggregate(oh);
  }
  return result;
}

void write_run_rows(std::ostream& out, const std::vector<RunResult>& runs, bool header) {
  if (header) out << kCsvHeader << '\n';
  for (const auto& r : runs) {
    const auto& m = r.metrics;
    out << to_string(r.protocol) << ',' << num(r.deadline.seconds) << ',' << num(r.density_pct) << ',' << r.seed << ','
        << num(m.availability_ratio) << ',' << opt(m.avg_response_time) << ',' << num(m.deadline_miss_ratio) << ','
        << opt(m.energy_per_bit) << ',' << m.overhead_packets << '\n';
  }
}

void write_sweep_csv(std::ostream& out, const SweepResult& result) {
  out << kCsvHeader << '\n';
  std::size_t run = 0;
  for (const auto& cell : result.cells) {
    const std::vector<RunResult> rows(result.runs.begin() + static_cast<long>(run),
                                      result.runs.begin() + static_cast<long>(run + cell.seeds.size()));
    run += cell.seeds.size();
    write_run_rows(out, rows, false);
    const std::string prefix =
        std::string(to_string(cell.protocol)) + ',' + num(cell.deadline.seconds) + ',' + num(cell.density_pct) + ',';
    out << prefix << "mean," << opt(cell.availability.mean) << ',' << opt(cell.response_time.mean) << ','
        << opt(cell.miss_ratio.mean) << ',' << opt(cell.energy_per_bit.mean) << ',' << opt(cell.overhead.mean) << '\n';
    out << prefix << "stddev," << opt(cell.availability.stddev) << ',' << opt(cell.response_time.stddev) << ','
        << opt(cell.miss_ratio.stddev) << ',' << opt(cell.energy_per_bit.stddev) << ',' << opt(cell.overhead.stddev)
        << '\n';
  }
}

void write_provider_csv(std::ostream& out, const std::vector<RunResult>& runs) {
  out << "protocol,deadline_s,density_pct,seed,node,mr_pct,ate_pct,max_overshoot_pct,episodes,violations\n";
  for (const auto& r : runs)
    for (const auto& p : r.metrics.per_provider)
      out << to_string(r.protocol) << ',' << num(r.deadline.seconds) << ',' << num(r.density_pct) << ',' << r.seed
          << ',' << p.id << ',' << num(p.mr) << ',' << num(p.ate) << ',' << num(p.max_overshoot) << ',' << p.episodes
          << ',' << p.violations << '\n';
}

std::string provider_csv_path(const std::string& csv_path) {
  const std::filesystem::path p(csv_path);
  return (p.parent_path() / (p.stem().string() + "_providers.csv")).string();
}

}  // namespace rtdqs
