#pragma once

#include <cstdint>
#include <functional>
#include <queue>
#include <stdexcept>
#include <vector>

#include "rtdqs/scenario.hpp"

namespace rtdqs {

enum class EventKind { PacketArrival, TransmitComplete, TrafficTick, MobilityWaypoint, MrSample, TimerExpiry };

const char* to_string(EventKind k);

class SimulationError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

struct Event {
  double time = 0.0;
  std::uint64_t sequence = 0;
  EventKind kind = EventKind::TimerExpiry;
  std::function<void()> action;
};

/// Virtual clock plus a (time, sequence)-ordered pending event set.
class EventQueue {
 public:
  /// Returns the sequence number assigned to the event.
  /// Throws SimulationError when `time` lies before the clock.
  std::uint64_t schedule(double time, EventKind kind, std::function<void()> action);

  /// Fires every event with time <= t_end, then sets the clock to t_end.
  void run_until(double t_end);

  double now() const { return m_now; }
  std::size_t pending() const { return m_heap.size(); }
  std::uint64_t processed() const { return m_processed; }

 private:
  struct Later {
    bool operator()(const Event& a, const Event& b) const {
      if (a.time != b.time) return a.time > b.time;
      return a.sequence > b.sequence;
    }
  };

  std::priority_queue<Event, std::vector<Event>, Later> m_heap;
  double m_now = 0.0;
  std::uint64_t m_next_sequence = 0;
  std::uint64_t m_processed = 0;
};

/// Unit-disk connectivity with an inclusive boundary.
inline bool in_range(const Position& a, const Position& b, const RadioParams& r) {
  const double dx = a.x - b.x;
  const double dy = a.y - b.y;
  return dx * dx + dy * dy <= r.range * r.range;
}

double distance(const Position& a, const Position& b);

/// Seconds needed to put `bytes` on the air.
inline double transmission_time(std::uint32_t bytes, const RadioParams& r) {
  return static_cast<double>(bytes) * 8.0 / r.bandwidth;
}

}  // namespace rtdqs
