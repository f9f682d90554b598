#include "rtdqs/simulator.hpp"

#include <algorithm>
#include <cinttypes>
#include <cstdarg>
#include <cstdio>
#include <ostream>

namespace rtdqs {

namespace {

constexpr std::uint32_t kHeaderBytes = 32;
constexpr std::uint32_t kAddressBytes = 4;
constexpr std::uint32_t kStampBytes = 12;
constexpr std::uint32_t kServiceFieldBytes = 16;  // C_QoS and C_Delay
constexpr std::uint64_t kLocalTxnBase = std::uint64_t{1} << 62;

std::string fmt(const char* format, ...) __attribute__((format(printf, 1, 2)));
std::string fmt(const char* format, ...) {
  char buf[256];
  va_list args;
  va_start(args, format);
  std::vsnprintf(buf, sizeof buf, format, args);
  va_end(args);
  return buf;
}

std::vector<NodeId> reversed(std::vector<NodeId> v) {
  std::reverse(v.begin(), v.end());
  return v;
}

}  // namespace

const char* to_string(Protocol p) { return p == Protocol::Rtdqs ? "rtdqs" : "closest"; }

std::optional<Protocol> protocol_from_string(const std::string& s) {
  if (s == "rtdqs") return Protocol::Rtdqs;
  if (s == "closest" || s == "closest_rtd") return Protocol::ClosestRtd;
  return std::nullopt;
}

const char* to_string(PacketKind k) {
  switch (k) {
    case PacketKind::SREQ: return "SREQ";
    case PacketKind::SREP: return "SREP";
    case PacketKind::DATA: return "DATA";
    case PacketKind::RREQ: return "RREQ";
    case PacketKind::RREP: return "RREP";
    case PacketKind::RERR: return "RERR";
  }
  return "?";
}

std::uint32_t control_packet_size(PacketKind kind, std::size_t route_length) {
  const auto len = static_cast<std::uint32_t>(route_length);
  const std::uint32_t intermediates = len >= 2 ? len - 2 : 0;
  switch (kind) {
    case PacketKind::SREQ:
    case PacketKind::RREQ:
    case PacketKind::RERR: return kHeaderBytes + kAddressBytes * len;
    case PacketKind::RREP: return kHeaderBytes + kAddressBytes * len + kStampBytes * intermediates;
    case PacketKind::SREP:
      return kHeaderBytes + kAddressBytes * len + kStampBytes * intermediates + kServiceFieldBytes;
    case PacketKind::DATA: break;
  }
  return kHeaderBytes;
}

Simulator::Simulator(const Scenario& scenario, Protocol protocol, std::ostream* trace)
    : m_scenario(scenario),
      m_protocol(protocol),
      m_trace(trace),
      m_mobility_rng(scenario.seed, static_cast<std::uint64_t>(StreamId::Mobility)),
      m_traffic_rng(scenario.seed, static_cast<std::uint64_t>(StreamId::Traffic)),
      m_service_rng(scenario.seed, static_cast<std::uint64_t>(StreamId::Service)) {
  if (auto v = validate(m_scenario); !v.empty()) throw ScenarioValidationError(std::move(v));

  for (const auto& spec : m_scenario.nodes) {
    Position start = spec.position ? *spec.position
                                   : Position{m_mobility_rng.uniform(0.0, m_scenario.area_width),
                                              m_mobility_rng.uniform(0.0, m_scenario.area_height)};
    NodeRuntime n;
    n.state = NodeState::from_spec(spec, start);
    if (spec.node_class == NodeClass::LMH) n.provider.emplace(spec.id);
    m_index[spec.id] = m_nodes.size();
    m_nodes.push_back(std::move(n));
  }
  for (const auto& [gid, members] : m_scenario.multicast_groups)
    for (NodeId m : members) rt(m).groups.insert(gid);

  for (auto& n : m_nodes) {
    if (n.state.max_speed <= 0.0) continue;
    // First leg starts immediately; the pause applies after each arrival.
    auto choice = next_waypoint(n.state, m_scenario.area_width, m_scenario.area_height, m_mobility_rng);
    choice.pause = 0.0;
    begin_leg(n.state, 0.0, choice);
    schedule_mobility(n);
  }

  for (const auto& spec : m_scenario.nodes) {
    if (spec.node_class != NodeClass::LMH) continue;
    const NodeId id = spec.id;
    for (std::size_t i = 0; i < spec.background_load.size(); ++i) {
      const auto& pulse = spec.background_load[i];
      if (pulse.rate <= 0.0) continue;
      const double first = pulse.start + m_traffic_rng.exponential(1.0 / pulse.rate);
      if (first < pulse.stop)
        m_events.schedule(first, EventKind::TrafficTick, [this, id, i] { local_arrival(id, i); });
    }
    const double period = m_scenario.qos.mr_sample_period;
    m_events.schedule(period, EventKind::MrSample, [this, id] { mr_sample(id); });
  }

  for (std::size_t f = 0; f < m_scenario.traffic.size(); ++f) {
    Flow flow;
    flow.spec = m_scenario.traffic[f];
    m_flows.push_back(std::move(flow));
    const double start = m_scenario.traffic[f].start_time;
    m_events.schedule(start, EventKind::TrafficTick, [this, f] { traffic_tick(f, 0); });
    const double first = start + m_scenario.service.reselect_interval;
    m_events.schedule(first, EventKind::TimerExpiry, [this, f, first] { reselect_tick(f, first); });
  }
}

Simulator::NodeRuntime& Simulator::rt(NodeId id) { return m_nodes.at(m_index.at(id)); }
const Simulator::NodeRuntime& Simulator::rt(NodeId id) const { return m_nodes.at(m_index.at(id)); }

const NodeState& Simulator::node(NodeId id) const { return rt(id).state; }
std::size_t Simulator::queue_length(NodeId id) const { return rt(id).queued(); }
const RtdbsProvider* Simulator::provider(NodeId id) const {
  const auto& n = rt(id);
  return n.provider ? &*n.provider : nullptr;
}

void Simulator::trace(const char* kind, NodeId node, std::uint64_t packet, const std::string& detail) const {
  if (!m_trace) return;
  char head[96];
  std::snprintf(head, sizeof head, "%.9f\t%s\t%u\t%" PRIu64 "\t", now(), kind, node, packet);
  *m_trace << head << detail << '\n';
}

double Simulator::charge(NodeRuntime& n, RadioMode mode, const Packet& p, std::optional<NodeId> next) {
  if (n.state.depleted) {
    ++m_post_depletion_charges;
    return 0.0;
  }
  const double joules = consume(n.state, mode, p.size, m_scenario.radio);
  m_energy_charged += joules;
  if (mode == RadioMode::Tx) {
    const std::string to = next ? std::to_string(*next) : std::string("bcast");
    trace("tx", n.state.id, p.id, fmt("%s %u %.17g %s", to_string(p.kind), p.size, joules, to.c_str()));
  } else {
    trace("rx", n.state.id, p.id, fmt("%s %.17g", to_string(p.kind), joules));
  }
  if (n.state.depleted) on_depleted(n);
  return joules;
}

void Simulator::on_depleted(NodeRuntime& n) {
  trace("deplete", n.state.id, 0, "");
  auto flush = [&](std::deque<Packet>& q) {
    while (!q.empty()) {
      Packet p = std::move(q.front());
      q.pop_front();
      if (!is_flood(p.kind)) drop(n, p, "energy");
    }
  };
  flush(n.control_queue);
  flush(n.data_queue);
  for (auto& [dest, q] : n.awaiting_route) flush(q);
  n.awaiting_route.clear();
  for (auto& fl : m_flows) {
    if (fl.spec.source != n.state.id) continue;
    flush(fl.pending);
  }
}

void Simulator::drop(NodeRuntime& n, const Packet& p, const char* cause) {
  trace("drop", n.state.id, p.id,
        fmt("%s %s txn=%" PRIu64 " reply=%d", cause, to_string(p.kind), p.txn_id, p.reply ? 1 : 0));
  if (is_flood(p.kind)) return;
  const std::string c = cause;
  if (c == "overflow") ++m_counters.dropped_overflow;
  else if (c == "deadline") ++m_counters.dropped_deadline;
  else if (c == "energy") ++m_counters.dropped_energy;
  else ++m_counters.dropped_no_route;

  if (p.kind == PacketKind::DATA && !p.reply && c == "deadline") {
    auto& t = m_txns.at(p.txn_id - 1);
    if (t.fate == RequestFate::Open) t.fate = RequestFate::DroppedDeadline;
  }
  // A route error that dies takes its undeliverable payload with it.
  if (p.kind == PacketKind::RERR && p.carried) drop(n, *p.carried, c == "overflow" || c == "energy" ? cause : "no-route");
}

void Simulator::inject(NodeId from, Packet p) {
  if (p.id == 0) p.id = next_packet_id();
  if (!is_flood(p.kind)) ++m_counters.injected;
  enqueue(rt(from), std::move(p));
}

void Simulator::enqueue(NodeRuntime& n, Packet p) {
  if (n.state.depleted) {
    drop(n, p, "energy");
    return;
  }
  if (n.queued() >= m_scenario.radio.queue_capacity) {
    drop(n, p, "overflow");
    return;
  }
  if (p.kind == PacketKind::DATA) n.data_queue.push_back(std::move(p));
  else n.control_queue.push_back(std::move(p));
  m_max_queue = std::max(m_max_queue, n.queued());
  try_send(n);
}

void Simulator::try_send(NodeRuntime& n) {
  if (n.transmitting || n.state.depleted) return;
  auto& q = !n.control_queue.empty() ? n.control_queue : n.data_queue;
  if (q.empty()) return;
  Packet p = std::move(q.front());
  q.pop_front();
  if (is_flood(p.kind)) send_flood(n, std::move(p));
  else send_unicast(n, std::move(p));
}

void Simulator::send_flood(NodeRuntime& n, Packet p) {
  const Position here = pos(n);
  std::vector<NodeId> receivers;
  for (const auto& other : m_nodes)
    if (other.state.id != n.state.id && !other.state.depleted && in_range(here, pos(other), m_scenario.radio))
      receivers.push_back(other.state.id);

  ++m_overhead;
  charge(n, RadioMode::Tx, p, std::nullopt);
  n.transmitting = true;
  const NodeId sender = n.state.id;
  const double airtime = transmission_time(p.size, m_scenario.radio);
  m_events.schedule(now() + airtime, EventKind::TransmitComplete,
                    [this, sender, receivers = std::move(receivers), p = std::move(p)] {
                      auto& s = rt(sender);
                      s.transmitting = false;
                      for (NodeId r : receivers) {
                        auto& rn = rt(r);
                        if (rn.state.depleted) continue;
                        charge(rn, RadioMode::Rx, p, std::nullopt);
                        if (!rn.state.depleted) handle_flood(rn, p);
                      }
                      try_send(s);
                    });
}

void Simulator::send_unicast(NodeRuntime& n, Packet p) {
  const NodeId next = p.route.at(p.hop_index + 1);
  const auto it = m_index.find(next);
  if (it == m_index.end() || m_nodes[it->second].state.depleted ||
      !in_range(pos(n), pos(m_nodes[it->second]), m_scenario.radio)) {
    link_failure(n, std::move(p), next);
    try_send(n);
    return;
  }
  if (p.kind != PacketKind::DATA) ++m_overhead;
  charge(n, RadioMode::Tx, p, next);
  n.transmitting = true;
  ++m_in_transmission;
  const NodeId sender = n.state.id;
  const double airtime = transmission_time(p.size, m_scenario.radio);
  p.hop_index += 1;
  m_events.schedule(now() + airtime, EventKind::TransmitComplete, [this, sender, next, p = std::move(p)]() mutable {
    --m_in_transmission;
    auto& s = rt(sender);
    s.transmitting = false;
    arrive(next, std::move(p));
    try_send(s);
  });
}

void Simulator::arrive(NodeId at, Packet p) {
  auto& n = rt(at);
  if (n.state.depleted) {
    drop(n, p, "energy");
    return;
  }
  charge(n, RadioMode::Rx, p, std::nullopt);
  if (n.state.depleted) {
    drop(n, p, "energy");
    return;
  }
  if (p.hop_index + 1 == p.route.size()) {
    deliver(n, std::move(p));
  } else {
    forward(n, std::move(p));
  }
}

void Simulator::forward(NodeRuntime& n, Packet p) {
  if (n.state.depleted) {
    drop(n, p, "energy");
    return;
  }
  if (p.kind == PacketKind::SREP || p.kind == PacketKind::RREP || p.kind == PacketKind::DATA) {
    const auto& next = rt(p.route.at(p.hop_index + 1));
    const auto stamp = hop_costs(n.state, n.queued(), distance(pos(n), pos(next)), p.size, m_scenario.radio);
    if (!stamp) {
      drop(n, p, "energy");
      return;
    }
    p.accumulated_delay_cost += stamp->c_delay;
    if (p.kind != PacketKind::DATA) p.stamps.push_back(*stamp);
    if (p.kind != PacketKind::RREP && !deadline_admissible(p.deadline, p.accumulated_delay_cost)) {
      drop(n, p, "deadline");
      return;
    }
  }
  enqueue(n, std::move(p));
}

void Simulator::link_failure(NodeRuntime& n, Packet p, NodeId next) {
  trace("link-fail", n.state.id, p.id, fmt("%s next=%u", to_string(p.kind), next));
  if (p.kind != PacketKind::DATA) {
    drop(n, p, "no-route");
    return;
  }
  if (p.hop_index == 0) {
    repair_at_source(n, std::move(p));
    return;
  }
  Packet err;
  err.id = next_packet_id();
  err.kind = PacketKind::RERR;
  err.source = n.state.id;
  err.destination = p.source;
  err.route = reversed(std::vector<NodeId>(p.route.begin(), p.route.begin() + static_cast<long>(p.hop_index) + 1));
  err.size = control_packet_size(PacketKind::RERR, err.route.size());
  err.born_at = now();
  err.carried = std::make_shared<const Packet>(std::move(p));
  ++m_counters.injected;
  enqueue(n, std::move(err));
}

void Simulator::repair_at_source(NodeRuntime& n, Packet p) {
  if (p.retries >= 1) {
    drop(n, p, "no-route");
    return;
  }
  p.retries = 1;
  p.hop_index = 0;
  p.accumulated_delay_cost = 0.0;
  p.stamps.clear();
  if (!p.reply) {
    const std::size_t f = m_remote.at(p.txn_id).flow;
    auto& fl = m_flows[f];
    if (fl.current && fl.current->hops == p.route) fl.current.reset();
    fl.pending.push_front(std::move(p));
    if (!fl.current && !fl.discovering) start_selection(f);
    else if (fl.current) {
      Packet q = std::move(fl.pending.front());
      fl.pending.pop_front();
      dispatch(f, std::move(q));
    }
    return;
  }
  const NodeId dest = p.destination;
  auto cached = n.route_cache.find(dest);
  if (cached != n.route_cache.end() && cached->second == p.route) n.route_cache.erase(cached);
  send_reply_data(n, std::move(p));
}

void Simulator::send_reply_data(NodeRuntime& provider, Packet p) {
  const NodeId dest = p.destination;
  if (auto it = provider.route_cache.find(dest); it != provider.route_cache.end()) {
    p.route = it->second;
    p.hop_index = 0;
    enqueue(provider, std::move(p));
    return;
  }
  auto& waiting = provider.awaiting_route[dest];
  waiting.push_back(std::move(p));
  if (waiting.size() > 1) return;  // discovery already under way
  const NodeId origin = provider.state.id;
  request_route(origin, dest, [this, origin, dest](std::optional<RouteRecord> route) {
    auto& n = rt(origin);
    auto it = n.awaiting_route.find(dest);
    if (it == n.awaiting_route.end()) return;
    std::deque<Packet> waiting = std::move(it->second);
    n.awaiting_route.erase(it);
    for (auto& q : waiting) {
      if (!route) {
        drop(n, q, "no-route");
        continue;
      }
      n.route_cache[dest] = route->hops;
      q.route = route->hops;
      q.hop_index = 0;
      enqueue(n, std::move(q));
    }
  });
}

void Simulator::request_route(NodeId origin, NodeId target, RouteCallback done) {
  auto& n = rt(origin);
  const std::uint64_t id = ++m_last_request_id;
  m_route_discoveries[id] = RouteDiscovery{origin, target, false, false, {}, std::move(done)};
  if (n.state.depleted) {
    close_route_discovery(id);
    return;
  }
  n.seen.insert({origin, id});
  Packet p;
  p.id = next_packet_id();
  p.kind = PacketKind::RREQ;
  p.source = origin;
  p.destination = target;
  p.route = {origin};
  p.size = control_packet_size(PacketKind::RREQ, 1);
  p.born_at = now();
  p.request_id = id;
  enqueue(n, std::move(p));
  m_events.schedule(now() + m_scenario.service.collection_window, EventKind::TimerExpiry, [this, id] {
    auto it = m_route_discoveries.find(id);
    if (it != m_route_discoveries.end() && !it->second.got_reply) close_route_discovery(id);
  });
}

void Simulator::close_route_discovery(std::uint64_t id) {
  auto it = m_route_discoveries.find(id);
  if (it == m_route_discoveries.end() || it->second.closed) return;
  it->second.closed = true;
  auto d = std::move(it->second);
  m_route_discoveries.erase(it);
  std::optional<RouteRecord> chosen = m_protocol == Protocol::Rtdqs ? select_route(d.candidates, m_scenario.weights)
                                                                    : select_shortest_route(d.candidates);
  trace("route", d.origin, id,
        chosen ? fmt("target=%u hops=%zu cost=%.17g", d.target, chosen->hop_count(), chosen->c_routing)
               : fmt("target=%u none", d.target));
  if (d.done) d.done(std::move(chosen));
}

void Simulator::handle_flood(NodeRuntime& n, const Packet& p) {
  const NodeId self = n.state.id;
  if (p.kind == PacketKind::RREQ && p.destination == self) {
    Packet rep;
    rep.id = next_packet_id();
    rep.kind = PacketKind::RREP;
    rep.source = self;
    rep.destination = p.source;
    auto path = p.route;
    path.push_back(self);
    rep.route = reversed(std::move(path));
    rep.size = control_packet_size(PacketKind::RREP, rep.route.size());
    rep.born_at = now();
    rep.request_id = p.request_id;
    ++m_counters.injected;
    enqueue(n, std::move(rep));
    return;
  }
  if (!n.seen.insert({p.source, p.request_id}).second) return;
  if (std::find(p.route.begin(), p.route.end(), self) != p.route.end()) return;

  if (p.kind == PacketKind::SREQ && n.groups.count(p.group) && n.provider) handle_sreq(n, p);

  if (p.route.size() >= m_scenario.service.discovery_ttl) return;
  Packet copy = p;
  copy.id = next_packet_id();
  copy.route.push_back(self);
  copy.size = control_packet_size(p.kind, copy.route.size());
  enqueue(n, std::move(copy));
}

void Simulator::deliver(NodeRuntime& n, Packet p) {
  ++m_counters.delivered;
  if (m_on_deliver) m_on_deliver(n.state.id, p);
  switch (p.kind) {
    case PacketKind::DATA:
      trace("deliver", n.state.id, p.id,
            fmt("DATA bytes=%u acc=%.17g deadline=%.17g txn=%" PRIu64 " reply=%d", p.size, p.accumulated_delay_cost,
                p.deadline, p.txn_id, p.reply ? 1 : 0));
      if (p.reply) on_reply_data(n, p);
      else on_request_data(n, p);
      break;
    case PacketKind::SREP:
      trace("deliver", n.state.id, p.id,
            fmt("SREP acc=%.17g deadline=%.17g provider=%u", p.accumulated_delay_cost, p.deadline, p.source));
      on_srep(n, p);
      break;
    case PacketKind::RREP: {
      trace("deliver", n.state.id, p.id, fmt("RREP from=%u", p.source));
      auto it = m_route_discoveries.find(p.request_id);
      if (it == m_route_discoveries.end() || it->second.closed) break;
      RouteRecord rr;
      rr.hops = reversed(p.route);
      rr.stamps.assign(p.stamps.rbegin(), p.stamps.rend());
      finalize(rr, m_scenario.weights);
      it->second.candidates.push_back(std::move(rr));
      if (!it->second.got_reply) {
        it->second.got_reply = true;
        const std::uint64_t id = p.request_id;
        m_events.schedule(now() + m_scenario.service.collection_window, EventKind::TimerExpiry,
                          [this, id] { close_route_discovery(id); });
      }
      break;
    }
    case PacketKind::RERR:
      trace("deliver", n.state.id, p.id, "RERR");
      if (p.carried && !n.state.depleted) repair_at_source(n, *p.carried);
      else if (p.carried) drop(n, *p.carried, "energy");
      break;
    case PacketKind::SREQ:
    case PacketKind::RREQ: break;
  }
}

// ---- requestor side ---------------------------------------------------------

void Simulator::traffic_tick(std::size_t f, std::uint64_t k) {
  auto& fl = m_flows[f];
  const NodeId src = fl.spec.source;
  auto& n = rt(src);
  if (n.state.depleted) return;

  TxnOutcome t;
  t.id = m_txns.size() + 1;
  t.requestor = src;
  t.txn_class = fl.spec.txn_class;
  t.issued = now();
  t.deadline = fl.spec.deadline;
  m_txns.push_back(t);
  m_remote[t.id] = RemoteTxn{f, src, fl.spec.packet_size, t.issued, t.deadline};
  trace("txn-issue", src, t.id, fmt("class=%s deadline=%.17g", to_string(t.txn_class), t.deadline));

  const double patience =
      t.txn_class == TxnClass::Firm ? t.deadline : t.deadline * m_scenario.service.soft_patience_factor;
  const std::uint64_t txn = t.id;
  m_events.schedule(now() + patience, EventKind::TimerExpiry, [this, txn] {
    const auto& rec = m_txns.at(txn - 1);
    if (!rec.success) trace("txn-timeout", rec.requestor, txn, "");
  });

  Packet p;
  p.id = next_packet_id();
  p.kind = PacketKind::DATA;
  p.size = fl.spec.packet_size;
  p.source = src;
  p.born_at = now();
  p.deadline = fl.spec.deadline;
  p.txn_id = txn;
  p.txn_class = fl.spec.txn_class;
  ++m_counters.injected;
  if (fl.current) {
    dispatch(f, std::move(p));
  } else {
    fl.pending.push_back(std::move(p));
    if (!fl.discovering) start_selection(f);
  }

  const double next = fl.spec.start_time + static_cast<double>(k + 1) / fl.spec.rate;
  if (next < fl.spec.stop_time && next <= m_scenario.sim_duration)
    m_events.schedule(next, EventKind::TrafficTick, [this, f, k] { traffic_tick(f, k + 1); });
}

void Simulator::reselect_tick(std::size_t f, double at) {
  auto& fl = m_flows[f];
  if (at >= fl.spec.stop_time) return;
  if (!fl.discovering && !rt(fl.spec.source).state.depleted) start_selection(f);
  const double next = at + m_scenario.service.reselect_interval;
  if (next <= m_scenario.sim_duration)
    m_events.schedule(next, EventKind::TimerExpiry, [this, f, next] { reselect_tick(f, next); });
}

void Simulator::dispatch(std::size_t f, Packet p) {
  auto& fl = m_flows[f];
  if (!fl.current) {
    // A repair may have dropped the selection while a batch was being sent.
    fl.pending.push_back(std::move(p));
    if (!fl.discovering) start_selection(f);
    return;
  }
  p.destination = fl.current->provider;
  p.route = fl.current->hops;
  p.hop_index = 0;
  m_txns.at(p.txn_id - 1).provider = fl.current->provider;
  enqueue(rt(fl.spec.source), std::move(p));
}

void Simulator::start_selection(std::size_t f) {
  auto& fl = m_flows[f];
  auto& n = rt(fl.spec.source);
  if (n.state.depleted) return;
  const auto group = m_scenario.multicast_groups.find(fl.spec.destination_group);
  if (group == m_scenario.multicast_groups.end() || group->second.empty()) {
    trace("no-service", n.state.id, 0, "empty group");
    while (!fl.pending.empty()) {
      drop(n, fl.pending.front(), "no-route");
      fl.pending.pop_front();
    }
    return;
  }
  const std::uint64_t round = ++m_last_request_id;
  fl.discovering = true;
  fl.round = round;
  fl.got_reply = false;
  fl.replies.clear();
  m_round_flow[round] = f;
  n.seen.insert({n.state.id, round});

  Packet p;
  p.id = next_packet_id();
  p.kind = PacketKind::SREQ;
  p.source = n.state.id;
  p.group = fl.spec.destination_group;
  p.route = {n.state.id};
  p.size = control_packet_size(PacketKind::SREQ, 1);
  p.born_at = now();
  p.deadline = fl.spec.deadline;
  p.request_id = round;
  p.txn_class = fl.spec.txn_class;
  trace("sreq", n.state.id, round, fmt("group=%s attempt=%d", p.group.c_str(), fl.attempts + 1));
  enqueue(n, std::move(p));
  m_events.schedule(now() + m_scenario.service.collection_window, EventKind::TimerExpiry,
                    [this, f, round] { selection_timeout(f, round); });
}

void Simulator::selection_timeout(std::size_t f, std::uint64_t round) {
  auto& fl = m_flows[f];
  if (!fl.discovering || fl.round != round || fl.got_reply) return;
  auto& n = rt(fl.spec.source);
  fl.discovering = false;
  if (++fl.attempts < 2) {
    start_selection(f);
    return;
  }
  fl.attempts = 0;
  trace("no-service", n.state.id, round, "");
  if (fl.current) {
    while (fl.current && !fl.pending.empty()) {
      Packet p = std::move(fl.pending.front());
      fl.pending.pop_front();
      dispatch(f, std::move(p));
    }
    return;
  }
  while (!fl.pending.empty()) {
    drop(n, fl.pending.front(), "no-route");
    fl.pending.pop_front();
  }
}

void Simulator::on_srep(NodeRuntime& n, const Packet& p) {
  const auto rf = m_round_flow.find(p.request_id);
  if (rf == m_round_flow.end()) return;
  const std::size_t f = rf->second;
  auto& fl = m_flows[f];
  if (!fl.discovering || fl.round != p.request_id || fl.spec.source != n.state.id) return;

  ServiceReply r;
  r.request_id = p.request_id;
  r.provider = p.source;
  r.route.hops = reversed(p.route);
  r.route.stamps.assign(p.stamps.rbegin(), p.stamps.rend());
  finalize(r.route, m_scenario.weights);
  r.hop_count = r.route.hop_count();
  r.c_ss = p.c_ss;
  r.snapshot = p.snapshot;
  collect_reply(fl.replies, std::move(r), m_scenario.weights);

  if (!fl.got_reply) {
    fl.got_reply = true;
    const std::uint64_t round = fl.round;
    m_events.schedule(now() + m_scenario.service.collection_window, EventKind::TimerExpiry,
                      [this, f, round] { close_selection(f, round); });
  }
}

void Simulator::close_selection(std::size_t f, std::uint64_t round) {
  auto& fl = m_flows[f];
  if (!fl.discovering || fl.round != round) return;
  fl.discovering = false;
  fl.attempts = 0;
  const auto chosen = m_protocol == Protocol::Rtdqs ? select_service(fl.replies, m_scenario.weights)
                                                    : closest_rtd_select(fl.replies);
  m_round_flow.erase(round);
  if (!chosen) return;
  fl.current = Selection{chosen->provider, chosen->route.hops};
  trace("select", fl.spec.source, round,
        fmt("provider=%u hops=%zu cqos=%.17g replies=%zu", chosen->provider, chosen->hop_count,
            chosen->c_qos(m_scenario.weights), fl.replies.size()));
  while (fl.current && !fl.pending.empty()) {
    Packet p = std::move(fl.pending.front());
    fl.pending.pop_front();
    dispatch(f, std::move(p));
  }
}

void Simulator::on_reply_data(NodeRuntime& n, const Packet& p) {
  auto& t = m_txns.at(p.txn_id - 1);
  if (t.reply_at) return;
  t.reply_at = now();
  const double patience =
      t.txn_class == TxnClass::Firm ? t.deadline : t.deadline * m_scenario.service.soft_patience_factor;
  if (now() <= t.issued + patience) {
    t.success = true;
    // Goodput: the request and its reply of every successful exchange.
    const double bits = 8.0 * (static_cast<double>(m_remote.at(t.id).size) + p.size);
    m_delivered_bits += bits;
    trace("txn-ok", n.state.id, t.id, fmt("rt=%.17g bits=%.17g", now() - t.issued, bits));
  } else {
    trace("txn-late-reply", n.state.id, t.id, "");
  }
}

// ---- provider side ----------------------------------------------------------

void Simulator::handle_sreq(NodeRuntime& n, const Packet& sreq) {
  if (n.state.depleted) return;
  auto& prov = *n.provider;
  prov.advance_to(now());
  service_provider(n);

  std::vector<NodeId> hops = sreq.route;
  hops.push_back(n.state.id);
  n.route_cache[sreq.source] = reversed(hops);

  Packet rep;
  rep.id = next_packet_id();
  rep.kind = PacketKind::SREP;
  rep.source = n.state.id;
  rep.destination = sreq.source;
  rep.route = reversed(hops);
  rep.size = control_packet_size(PacketKind::SREP, rep.route.size());
  rep.born_at = now();
  rep.deadline = sreq.deadline;
  rep.request_id = sreq.request_id;
  rep.txn_class = sreq.txn_class;
  rep.snapshot = prov.snapshot(n.state.energy, m_scenario.qos, now());
  rep.c_ss = c_ss(sreq.txn_class, hops.size() - 1, rep.snapshot, m_scenario.weights);
  trace("srep", n.state.id, rep.id,
        fmt("req=%" PRIu64 " h=%zu mr=%.17g p=%.17g e=%.17g css=%.17g", sreq.request_id, hops.size() - 1,
            rep.snapshot.mr, rep.snapshot.p, rep.snapshot.energy, rep.c_ss));
  ++m_counters.injected;
  enqueue(n, std::move(rep));
}

void Simulator::on_request_data(NodeRuntime& n, const Packet& p) {
  if (n.state.depleted || !n.provider) {
    trace("txn-lost", n.state.id, p.txn_id, "");
    return;
  }
  n.route_cache[p.source] = reversed(p.route);
  Transaction t;
  t.id = p.txn_id;
  t.txn_class = p.txn_class;
  t.deadline = p.deadline;
  t.born = p.born_at;
  t.required_service = m_service_rng.exponential(m_scenario.service.mean_service_time);
  t.remote = true;
  n.provider->admit(std::move(t), now());
  service_provider(n);
}

void Simulator::local_arrival(NodeId id, std::size_t pulse_index) {
  auto& n = rt(id);
  if (n.state.depleted) return;
  const auto& pulse = m_scenario.find_node(id)->background_load[pulse_index];
  Transaction t;
  t.id = kLocalTxnBase + ++m_last_local_txn;
  t.txn_class = pulse.txn_class;
  t.deadline = pulse.deadline;
  t.born = now();
  t.required_service = m_service_rng.exponential(m_scenario.service.mean_service_time);
  n.provider->admit(std::move(t), now());
  service_provider(n);
  const double next = now() + m_traffic_rng.exponential(1.0 / pulse.rate);
  if (next < pulse.stop && next <= m_scenario.sim_duration)
    m_events.schedule(next, EventKind::TrafficTick, [this, id, pulse_index] { local_arrival(id, pulse_index); });
}

void Simulator::service_provider(NodeRuntime& n) {
  auto& prov = *n.provider;
  for (auto& term : prov.take_terminations()) {
    if (!term.txn.remote) continue;
    auto& rec = m_txns.at(term.txn.id - 1);
    if (rec.fate == RequestFate::Open) rec.fate = term.tardy ? RequestFate::Late : RequestFate::InTime;
    trace("txn-end", n.state.id, term.txn.id,
          fmt("%s %s error=%.17g", term.tardy ? "late" : "intime",
              term.txn.state == TxnState::Committed ? "committed" : "aborted", term.txn.error));
    if (term.txn.state != TxnState::Committed) continue;
    const auto& ctx = m_remote.at(term.txn.id);
    Packet rep;
    rep.id = next_packet_id();
    rep.kind = PacketKind::DATA;
    rep.size = ctx.size;
    rep.source = n.state.id;
    rep.destination = ctx.requestor;
    rep.born_at = ctx.born;
    rep.deadline = ctx.deadline;
    rep.txn_id = term.txn.id;
    rep.reply = true;
    rep.txn_class = term.txn.txn_class;
    ++m_counters.injected;
    send_reply_data(n, std::move(rep));
  }
  schedule_provider(n);
}

void Simulator::schedule_provider(NodeRuntime& n) {
  const auto next = n.provider->next_event_time();
  const std::uint64_t gen = ++n.provider_timer;
  if (!next) return;
  const NodeId id = n.state.id;
  m_events.schedule(std::max(*next, now()), EventKind::TimerExpiry, [this, id, gen] {
    auto& node = rt(id);
    if (node.provider_timer != gen) return;
    node.provider->advance_to(now());
    service_provider(node);
  });
}

void Simulator::mr_sample(NodeId id) {
  auto& n = rt(id);
  auto& prov = *n.provider;
  prov.advance_to(now());
  service_provider(n);
  update_transient(prov.stats(), m_scenario.qos, now());
  const auto& s = prov.stats();
  trace("mr", id, 0, fmt("mr=%.17g p=%.17g backlog=%zu", s.mr_samples.back().second, s.p_current, prov.backlog()));
  const double next = now() + m_scenario.qos.mr_sample_period;
  if (next <= m_scenario.sim_duration) m_events.schedule(next, EventKind::MrSample, [this, id] { mr_sample(id); });
}

void Simulator::schedule_mobility(NodeRuntime& n) {
  const NodeId id = n.state.id;
  m_events.schedule(n.state.leg.arrival(), EventKind::MobilityWaypoint, [this, id] {
    auto& node = rt(id);
    const auto choice = next_waypoint(node.state, m_scenario.area_width, m_scenario.area_height, m_mobility_rng);
    begin_leg(node.state, now(), choice);
    trace("waypoint", id, 0,
          fmt("x=%.3f y=%.3f speed=%.3f", choice.waypoint.x, choice.waypoint.y, choice.speed));
    schedule_mobility(node);
  });
}

// ---- run control ------------------------------------------------------------

void Simulator::run_until(double t_end) { m_events.run_until(t_end); }

RunLog Simulator::run() {
  run_until(m_scenario.sim_duration);
  return snapshot_log();
}

RunLog Simulator::snapshot_log() const {
  RunLog log;
  log.txns = m_txns;
  log.energy_charged = m_energy_charged;
  log.delivered_bits = m_delivered_bits;
  log.overhead_packets = m_overhead;
  log.post_depletion_charges = m_post_depletion_charges;
  log.max_queue_occupancy = m_max_queue;
  log.counters = m_counters;

  std::uint64_t in_flight = m_in_transmission;
  auto count_queue = [&](const std::deque<Packet>& q) {
    for (const auto& p : q) {
      if (is_flood(p.kind)) continue;
      ++in_flight;
      if (p.carried) ++in_flight;
    }
  };
  for (const auto& n : m_nodes) {
    log.energy_decrease += n.state.initial_energy - n.state.energy;
    if (n.state.depleted) ++log.depleted_nodes;
    count_queue(n.control_queue);
    count_queue(n.data_queue);
    for (const auto& [dest, q] : n.awaiting_route) count_queue(q);
    if (n.provider) {
      const auto& s = n.provider->stats();
      ProviderSummary ps;
      ps.id = n.state.id;
      ps.terminated = s.terminated;
      ps.tardy = s.tardy;
      ps.mr = s.terminated ? 100.0 * static_cast<double>(s.tardy) / static_cast<double>(s.terminated) : 0.0;
      ps.ate = s.terminated ? s.te_sum / static_cast<double>(s.terminated) : 0.0;
      ps.max_overshoot = s.max_overshoot;
      ps.episodes = s.episodes;
      ps.violations = s.violations;
      log.providers.push_back(ps);
    }
  }
  for (const auto& fl : m_flows) count_queue(fl.pending);
  log.counters.in_flight = in_flight;
  return log;
}

}  // namespace rtdqs
