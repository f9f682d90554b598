#pragma once

#include <cstdint>
#include <random>

#include "rtdqs/scenario.hpp"

namespace rtdqs {

/// Seeded pseudo-random stream. Draws are computed from raw 64-bit output so
/// sequences are identical across standard library implementations.
class RandomStream {
 public:
  RandomStream(std::uint64_t seed, std::uint64_t stream_id);

  /// Uniform on [0, 1).
  double uniform();
  /// Uniform on (0, 1].
  double uniform_open_low() { return 1.0 - uniform(); }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  double exponential(double mean);

 private:
  std::mt19937_64 m_engine;
};

/// Stream identifiers; one stream per concern.
enum class StreamId : std::uint64_t { Mobility = 1, Traffic = 2, Service = 3 };

/// One straight-line movement followed by arrival at `waypoint`.
struct MobilityLeg {
  Position origin;
  double depart = 0.0;  // the node rests at origin until this time
  Position waypoint;
  double speed = 0.0;

  double arrival() const;
};

struct NodeState {
  NodeId id = 0;
  NodeClass node_class = NodeClass::SMH;
  double max_speed = 0.0;
  double pause_time = 0.0;
  MobilityLeg leg;
  double energy = 0.0;  // residual
  double initial_energy = 0.0;
  bool depleted = false;

  static NodeState from_spec(const NodeSpec& spec, Position start);
};

Position position_at(const NodeState& n, double t);

struct WaypointChoice {
  Position waypoint;
  double speed = 0.0;
  double pause = 0.0;
};

/// Random waypoint draw: uniform point in the area, speed uniform in (0, max_speed].
WaypointChoice next_waypoint(const NodeState& n, double area_width, double area_height, RandomStream& rng);

/// Starts the next leg from the current waypoint after the pause.
void begin_leg(NodeState& n, double now, const WaypointChoice& choice);

enum class RadioMode { Tx, Rx };

/// Charges power(mode) * airtime(bytes). Returns the joules actually removed;
/// the balance never goes below zero and a depleted node is not charged.
double consume(NodeState& n, RadioMode mode, std::uint32_t bytes, const RadioParams& r);

}  // namespace rtdqs
