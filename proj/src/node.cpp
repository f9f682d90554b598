#include "rtdqs/node.hpp"

#include <cmath>

#include "rtdqs/event_queue.hpp"

namespace rtdqs {

RandomStream::RandomStream(std::uint64_t seed, std::uint64_t stream_id) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream_id), 0x5eedu};
  m_engine.seed(seq);
}

double RandomStream::uniform() { return static_cast<double>(m_engine() >> 11) * 0x1.0p-53; }

double RandomStream::exponential(double mean) { return -mean * std::log(uniform_open_low()); }

double MobilityLeg::arrival() const {
  if (speed <= 0.0) return depart;
  return depart + distance(origin, waypoint) / speed;
}

NodeState NodeState::from_spec(const NodeSpec& spec, Position start) {
  NodeState n;
  n.id = spec.id;
  n.node_class = spec.node_class;
  n.max_speed = spec.max_speed;
  n.pause_time = spec.pause_time;
  n.leg = MobilityLeg{start, 0.0, start, 0.0};
  n.energy = spec.initial_energy;
  n.initial_energy = spec.initial_energy;
  return n;
}

Position position_at(const NodeState& n, double t) {
  const auto& leg = n.leg;
  if (t <= leg.depart || leg.speed <= 0.0) return leg.origin;
  const double total = distance(leg.origin, leg.waypoint);
  const double travelled = (t - leg.depart) * leg.speed;
  if (travelled >= total) return leg.waypoint;
  const double f = travelled / total;
  return Position{leg.origin.x + f * (leg.waypoint.x - leg.origin.x), leg.origin.y + f * (leg.waypoint.y - leg.origin.y)};
}

WaypointChoice next_waypoint(const NodeState& n, double area_width, double area_height, RandomStream& rng) {
  WaypointChoice c;
  c.waypoint = Position{rng.uniform(0.0, area_width), rng.uniform(0.0, area_height)};
  c.speed = n.max_speed * rng.uniform_open_low();
  c.pause = n.pause_time;
  return c;
}

void begin_leg(NodeState& n, double now, const WaypointChoice& choice) {
  n.leg.origin = position_at(n, now);
  n.leg.depart = now + choice.pause;
  n.leg.waypoint = choice.waypoint;
  n.leg.speed = choice.speed;
}

double consume(NodeState& n, RadioMode mode, std::uint32_t bytes, const RadioParams& r) {
  if (n.depleted || bytes == 0) return 0.0;
  const double power = mode == RadioMode::Tx ? r.tx_power : r.rx_power;
  double amount = power * transmission_time(bytes, r);
  if (amount >= n.energy) {
    amount = n.energy;
    n.energy = 0.0;
    n.depleted = true;
  } else {
    n.energy -= amount;
  }
  return amount;
}

}  // namespace rtdqs
