#pragma once

#include <cstdint>
#include <deque>
#include <functional>
#include <iosfwd>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "rtdqs/event_queue.hpp"
#include "rtdqs/metrics.hpp"
#include "rtdqs/node.hpp"
#include "rtdqs/provider.hpp"
#include "rtdqs/routing.hpp"
#include "rtdqs/scenario.hpp"
#include "rtdqs/selection.hpp"

namespace rtdqs {

enum class Protocol { Rtdqs, ClosestRtd };

const char* to_string(Protocol p);
std::optional<Protocol> protocol_from_string(const std::string& s);

enum class PacketKind { SREQ, SREP, DATA, RREQ, RREP, RERR };

const char* to_string(PacketKind k);

inline bool is_flood(PacketKind k) { return k == PacketKind::SREQ || k == PacketKind::RREQ; }

struct Packet {
  std::uint64_t id = 0;
  PacketKind kind = PacketKind::DATA;
  std::uint32_t size = 0;
  NodeId source = 0;
  NodeId destination = 0;  // unicast destination, or RREQ target
  GroupId group;           // SREQ target group
  std::vector<NodeId> route;
  std::size_t hop_index = 0;
  double born_at = 0.0;
  double deadline = 0.0;  // relative to born_at
  double accumulated_delay_cost = 0.0;
  std::vector<HopStamp> stamps;

  std::uint64_t request_id = 0;  // discovery round (SREQ, SREP, RREQ, RREP)
  std::uint64_t txn_id = 0;      // DATA
  bool reply = false;            // DATA travelling provider -> requestor
  TxnClass txn_class = TxnClass::Firm;
  double c_ss = 0.0;  // SREP
  ProviderSnapshot snapshot;
  int retries = 0;
  std::shared_ptr<const Packet> carried;  // RERR: the undeliverable DATA packet
};

/// Wire sizes of control packets.
std::uint32_t control_packet_size(PacketKind kind, std::size_t route_length);

/// Discrete-event MANET simulation running one protocol over one scenario.
class Simulator {
 public:
  using RouteCallback = std::function<void(std::optional<RouteRecord>)>;
  using DeliveryHook = std::function<void(NodeId, const Packet&)>;

  /// `trace`, when given, receives one tab-separated line per action.
  Simulator(const Scenario& scenario, Protocol protocol, std::ostream* trace = nullptr);

  void run_until(double t_end);
  /// Runs to the scenario's duration and returns the log.
  RunLog run();
  /// Log as of the current clock.
  RunLog snapshot_log() const;

  double now() const { return m_events.now(); }
  const Scenario& scenario() const { return m_scenario; }
  const NodeState& node(NodeId id) const;
  std::size_t queue_length(NodeId id) const;
  const RtdbsProvider* provider(NodeId id) const;
  const PacketCounters& counters() const { return m_counters; }

  /// Queues a unicast packet at `from` for transmission along `p.route`.
  void inject(NodeId from, Packet p);
  /// Floods a route request from `origin` to `target`; `done` fires once with the chosen route.
  void request_route(NodeId origin, NodeId target, RouteCallback done);
  void set_delivery_hook(DeliveryHook hook) { m_on_deliver = std::move(hook); }

  std::uint64_t next_packet_id() { return ++m_last_packet_id; }

 private:
  struct NodeRuntime {
    NodeState state;
    std::deque<Packet> control_queue;
    std::deque<Packet> data_queue;
    bool transmitting = false;
    std::set<std::pair<NodeId, std::uint64_t>> seen;  // (origin, request id)
    std::optional<RtdbsProvider> provider;
    std::uint64_t provider_timer = 0;
    std::set<GroupId> groups;
    std::map<NodeId, std::vector<NodeId>> route_cache;
    std::map<NodeId, std::deque<Packet>> awaiting_route;

    std::size_t queued() const { return control_queue.size() + data_queue.size(); }
  };

  struct Selection {
    NodeId provider = 0;
    std::vector<NodeId> hops;
  };

  struct Flow {
    TrafficSpec spec;
    std::optional<Selection> current;
    bool discovering = false;
    std::uint64_t round = 0;
    bool got_reply = false;
    int attempts = 0;
    std::vector<ServiceReply> replies;
    std::deque<Packet> pending;
  };

  struct RouteDiscovery {
    NodeId origin = 0;
    NodeId target = 0;
    bool got_reply = false;
    bool closed = false;
    std::vector<RouteRecord> candidates;
    RouteCallback done;
  };

  struct RemoteTxn {
    std::size_t flow = 0;
    NodeId requestor = 0;
    std::uint32_t size = 0;
    double born = 0.0;
    double deadline = 0.0;
  };

  NodeRuntime& rt(NodeId id);
  const NodeRuntime& rt(NodeId id) const;
  Position pos(const NodeRuntime& n) const { return position_at(n.state, now()); }

  void trace(const char* kind, NodeId node, std::uint64_t packet, const std::string& detail) const;
  /// Charges and traces one transmission or reception.
  double charge(NodeRuntime& n, RadioMode mode, const Packet& p, std::optional<NodeId> next);
  void on_depleted(NodeRuntime& n);

  // Link layer.
  void enqueue(NodeRuntime& n, Packet p);
  void try_send(NodeRuntime& n);
  void send_flood(NodeRuntime& n, Packet p);
  void send_unicast(NodeRuntime& n, Packet p);
  void arrive(NodeId at, Packet p);
  void forward(NodeRuntime& n, Packet p);
  void link_failure(NodeRuntime& n, Packet p, NodeId next);
  void drop(NodeRuntime& n, const Packet& p, const char* cause);

  // Routing layer.
  void handle_flood(NodeRuntime& n, const Packet& p);
  void deliver(NodeRuntime& n, Packet p);
  void close_route_discovery(std::uint64_t id);
  void repair_at_source(NodeRuntime& n, Packet p);
  void send_reply_data(NodeRuntime& provider, Packet p);

  // Service selection (requestor side).
  void start_selection(std::size_t flow);
  void close_selection(std::size_t flow, std::uint64_t round);
  void selection_timeout(std::size_t flow, std::uint64_t round);
  void dispatch(std::size_t flow, Packet p);
  void traffic_tick(std::size_t flow, std::uint64_t k);
  void reselect_tick(std::size_t flow, double at);
  void on_srep(NodeRuntime& n, const Packet& p);
  void on_reply_data(NodeRuntime& n, const Packet& p);

  // Provider side.
  void handle_sreq(NodeRuntime& n, const Packet& sreq);
  void on_request_data(NodeRuntime& n, const Packet& p);
  void schedule_provider(NodeRuntime& n);
  void service_provider(NodeRuntime& n);
  void local_arrival(NodeId id, std::size_t pulse);
  void mr_sample(NodeId id);

  void schedule_mobility(NodeRuntime& n);

  Scenario m_scenario;
  Protocol m_protocol;
  std::ostream* m_trace;
  EventQueue m_events;
  RandomStream m_mobility_rng;
  RandomStream m_traffic_rng;
  RandomStream m_service_rng;

  std::vector<NodeRuntime> m_nodes;
  std::map<NodeId, std::size_t> m_index;
  std::vector<Flow> m_flows;
  std::map<std::uint64_t, std::size_t> m_round_flow;  // SREQ request id -> flow
  std::map<std::uint64_t, RouteDiscovery> m_route_discoveries;
  std::map<std::uint64_t, RemoteTxn> m_remote;        // txn id -> requestor context
  std::vector<TxnOutcome> m_txns;                      // index = txn id - 1
  std::uint64_t m_last_packet_id = 0;
  std::uint64_t m_last_request_id = 0;
  std::uint64_t m_last_local_txn = 0;
  std::uint64_t m_in_transmission = 0;

  PacketCounters m_counters;
  double m_energy_charged = 0.0;
  double m_delivered_bits = 0.0;
  std::uint64_t m_overhead = 0;
  std::uint64_t m_post_depletion_charges = 0;
  std::size_t m_max_queue = 0;
  DeliveryHook m_on_deliver;
};

}  // namespace rtdqs
