#include <fstream>
#include <iostream>
#include <memory>

#include <CLI11.hpp>

#include "rtdqs/experiment.hpp"

using namespace rtdqs;

namespace {

constexpr int kOk = 0;
constexpr int kValidation = 1;
constexpr int kRuntime = 2;

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  return out;
}

int cmd_validate(const std::string& path) {
  const Scenario s = load_scenario(path);
  std::cout << "ok: " << s.nodes.size() << " nodes, " << s.provider_count() << " providers, " << s.traffic.size()
            << " traffic sources\n";
  return kOk;
}

int cmd_run(const std::string& path, const std::string& protocol_name, std::uint64_t seed,
            const std::string& trace_path, const std::string& out_path) {
  const auto protocol = protocol_from_string(protocol_name);
  if (!protocol) throw std::invalid_argument("unknown protocol " + protocol_name);
  const Scenario s = load_scenario(path);

  std::unique_ptr<std::ofstream> trace;
  if (!trace_path.empty()) trace = std::make_unique<std::ofstream>(open_out(trace_path));
  const auto result = run_single(s, *protocol, seed, trace.get());

  if (out_path.empty()) {
    write_run_rows(std::cout, {result});
    return kOk;
  }
  auto out = open_out(out_path);
  write_run_rows(out, {result});
  auto prov = open_out(provider_csv_path(out_path));
  write_provider_csv(prov, {result});
  return kOk;
}

int cmd_sweep(const std::string& path, const std::string& densities, const std::string& deadlines,
              const std::string& protocols, const std::string& seeds, const std::string& out_path, unsigned threads) {
  std::vector<Protocol> ps;
  for (const auto& name : CLI::detail::split(protocols, ',')) {
    const auto p = protocol_from_string(CLI::detail::trim_copy(name));
    if (!p) throw std::invalid_argument("unknown protocol " + name);
    ps.push_back(*p);
  }
  const Scenario base = load_scenario(path);
  const auto result =
      run_sweep(base, ps, parse_deadlines(deadlines), parse_numbers(densities), parse_seeds(seeds), threads);
  if (out_path.empty()) {
    write_sweep_csv(std::cout, result);
    return kOk;
  }
  auto out = open_out(out_path);
  write_sweep_csv(out, result);
  auto prov = open_out(provider_csv_path(out_path));
  write_provider_csv(prov, result.runs);
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Real-time database service selection simulator for mobile ad-hoc networks"};
  app.require_subcommand(1);

  std::string scenario;
  std::string protocol = "rtdqs";
  std::uint64_t seed = 1;
  std::string trace_path;
  std::string out_path;
  std::string densities = "5,10,20,30,40";
  std::string deadlines = "15,25";
  std::string protocols = "rtdqs,closest";
  std::string seeds = "1..5";
  unsigned threads = 0;

  auto* run = app.add_subcommand("run", "Run one simulation and print its metrics row");
  run->add_option("--scenario", scenario, "Scenario JSON file")->required();
  run->add_option("--protocol", protocol, "rtdqs or closest")->capture_default_str();
  run->add_option("--seed", seed, "Random seed")->capture_default_str();
  run->add_option("--trace", trace_path, "Write the event trace here");
  run->add_option("--out", out_path, "CSV output (stdout when omitted)");

  auto* sweep = app.add_subcommand("sweep", "Run the protocol x deadline x density x seed grid");
  sweep->add_option("--scenario", scenario, "Base scenario JSON file")->required();
  sweep->add_option("--densities", densities, "Provider densities in percent")->capture_default_str();
  sweep->add_option("--deadlines", deadlines, "Deadlines in seconds, optionally suffixed :firm or :soft")
      ->capture_default_str();
  sweep->add_option("--protocols", protocols, "Comma-separated protocols")->capture_default_str();
  sweep->add_option("--seeds", seeds, "Seed range a..b or list")->capture_default_str();
  sweep->add_option("--out", out_path, "CSV output (stdout when omitted)");
  sweep->add_option("--threads", threads, "Worker threads, 0 = hardware concurrency")->capture_default_str();

  auto* check = app.add_subcommand("validate", "Parse and validate a scenario");
  check->add_option("--scenario", scenario, "Scenario JSON file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kValidation;
  }

  try {
    if (*run) return cmd_run(scenario, protocol, seed, trace_path, out_path);
    if (*sweep) return cmd_sweep(scenario, densities, deadlines, protocols, seeds, out_path, threads);
    return cmd_validate(scenario);
  } catch (const ScenarioValidationError& e) {
    for (const auto& v : e.violations()) std::cerr << "invalid: " << v << '\n';
    return kValidation;
  } catch (const ScenarioParseError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kValidation;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kValidation;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kRuntime;
  }
}
