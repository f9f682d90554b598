#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"

namespace rtdqs {

using NodeId = std::uint32_t;
using GroupId = std::string;

enum class NodeClass { SMH, LMH };
enum class TxnClass { Firm, Soft };

const char* to_string(NodeClass c);
const char* to_string(TxnClass c);

struct Position {
  double x = 0.0;
  double y = 0.0;
  bool operator==(const Position&) const = default;
};

/// A window of local (non-network) transaction load on a provider.
/// Arrivals are Poisson at `rate` transactions per second in [start, stop).
struct LoadPulse {
  double start = 0.0;
  double stop = 0.0;
  double rate = 0.0;
  TxnClass txn_class = TxnClass::Soft;
  double deadline = 2.0;
  bool operator==(const LoadPulse&) const = default;
};

struct NodeSpec {
  NodeId id = 0;
  NodeClass node_class = NodeClass::SMH;
  double initial_energy = 50.0;
  double max_speed = 2.0;
  double pause_time = 10.0;
  std::optional<Position> position;  // nullopt means "random"
  std::vector<LoadPulse> background_load;
  bool operator==(const NodeSpec&) const = default;
};

struct TrafficSpec {
  NodeId source = 0;
  GroupId destination_group;
  double rate = 5.0;
  std::uint32_t packet_size = 512;
  TxnClass txn_class = TxnClass::Firm;
  double deadline = 15.0;
  double start_time = 0.0;
  double stop_time = 1000.0;
  bool operator==(const TrafficSpec&) const = default;
};

struct Weights {
  double alpha_route = 1.0 / 3.0;
  double beta_route = 1.0 / 3.0;
  double gamma_route = 1.0 / 3.0;
  // Unset means per-class weighting: firm requests use 1, soft requests use 0.
  std::optional<double> alpha_ss;
  double n_firm = 1.0 / 600.0;
  double n_soft = 10.0;
  bool operator==(const Weights&) const = default;
};

struct QoSSpec {
  double mr_threshold = 10.0;
  double ate_threshold = 20.0;
  double overshoot_threshold = 30.0;
  double settling_time = 60.0;
  double mr_window = 60.0;
  double mr_sample_period = 5.0;
  bool operator==(const QoSSpec&) const = default;
};

struct RadioParams {
  double range = 250.0;
  double bandwidth = 2.0e6;
  double tx_power = 1.4;
  double rx_power = 1.0;
  std::uint32_t queue_capacity = 50;
  bool operator==(const RadioParams&) const = default;
};

/// Protocol timing and provider service knobs.
struct ServiceParams {
  double mean_service_time = 0.5;
  double collection_window = 2.0;
  double reselect_interval = 10.0;
  /// Soft requestors keep waiting for a reply until this many deadlines have passed.
  double soft_patience_factor = 2.0;
  std::uint32_t discovery_ttl = 16;
  bool operator==(const ServiceParams&) const = default;
};

struct Scenario {
  double area_width = 1500.0;
  double area_height = 500.0;
  double sim_duration = 1000.0;
  std::uint64_t seed = 1;
  RadioParams radio;
  QoSSpec qos;
  Weights weights;
  ServiceParams service;
  std::vector<NodeSpec> nodes;
  std::map<GroupId, std::vector<NodeId>> multicast_groups;
  std::vector<TrafficSpec> traffic;
  bool operator==(const Scenario&) const = default;

  const NodeSpec* find_node(NodeId id) const;
  std::size_t provider_count() const;
  /// Percentage of nodes that are LMH providers.
  double density() const;
};

class ScenarioParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ScenarioValidationError : public std::runtime_error {
 public:
  explicit ScenarioValidationError(std::vector<std::string> violations);
  const std::vector<std::string>& violations() const { return m_violations; }

 private:
  std::vector<std::string> m_violations;
};

/// Fills every missing key of a scenario document with its default.
/// Class-dependent node defaults follow the node's "class" key.
nlohmann::json with_defaults(const nlohmann::json& doc);

/// Keys that are not part of the schema, as dotted paths.
std::vector<std::string> unknown_keys(const nlohmann::json& doc);

Scenario scenario_from_json(const nlohmann::json& doc);
nlohmann::json scenario_to_json(const Scenario& s);

Scenario parse_scenario(const std::string& text);
Scenario load_scenario(const std::string& path);

std::vector<std::string> validate(const Scenario& s);

/// The 20-node, 8-provider reference setup with one CBR requestor (node 20).
/// Providers carry staggered background load; n_firm and the soft patience are
/// tuned for this workload and differ from the struct defaults.
Scenario baseline_scenario();

}  // namespace rtdqs
