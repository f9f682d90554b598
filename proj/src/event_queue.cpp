#include "rtdqs/event_queue.hpp"

#include <cmath>
#include <string>

namespace rtdqs {

const char* to_string(EventKind k) {
  switch (k) {
    case EventKind::PacketArrival: return "PacketArrival";
    case EventKind::TransmitComplete: return "TransmitComplete";
    case EventKind::TrafficTick: return "TrafficTick";
    case EventKind::MobilityWaypoint: return "MobilityWaypoint";
    case EventKind::MrSample: return "MrSample";
    case EventKind::TimerExpiry: return "TimerExpiry";
  }
  return "?";
}

std::uint64_t EventQueue::schedule(double time, EventKind kind, std::function<void()> action) {
  if (!(time >= m_now))
    throw SimulationError("event scheduled in the past: " + std::to_string(time) + " < " + std::to_string(m_now));
  const std::uint64_t seq = m_next_sequence++;
  m_heap.push(Event{time, seq, kind, std::move(action)});
  return seq;
}

void EventQueue::run_until(double t_end) {
  if (t_end < m_now) throw SimulationError("run_until target lies before the clock");
  while (!m_heap.empty() && m_heap.top().time <= t_end) {
    Event e = m_heap.top();
    m_heap.pop();
    m_now = e.time;
    ++m_processed;
    if (e.action) e.action();
  }
  m_now = t_end;
}

double distance(const Position& a, const Position& b) { return std::hypot(a.x - b.x, a.y - b.y); }

}  // namespace rtdqs
