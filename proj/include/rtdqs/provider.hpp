#pragma once

#include <cstdint>
#include <deque>
#include <optional>
#include <set>
#include <utility>
#include <vector>

#include "rtdqs/scenario.hpp"

namespace rtdqs {

enum class TxnState { Queued, Executing, Committed, Aborted };

struct Transaction {
  std::uint64_t id = 0;
  TxnClass txn_class = TxnClass::Firm;
  double deadline = 0.0;  // relative to `born`
  double born = 0.0;      // submission instant at the requestor
  double arrival = 0.0;   // arrival at the provider
  double required_service = 0.0;
  double served = 0.0;
  TxnState state = TxnState::Queued;
  double error = 0.0;  // percent
  std::optional<NodeId> provider;
  bool remote = false;  // arrived over the network (as opposed to local load)

  double absolute_deadline() const { return born + deadline; }
};

struct Termination {
  Transaction txn;
  double time = 0.0;
  bool tardy = false;
};

struct TerminationRecord {
  double time = 0.0;
  bool tardy = false;
  double error = 0.0;
};

/// Sliding-window health of one provider's real-time database.
struct ProviderStats {
  std::uint64_t terminated = 0;
  std::uint64_t tardy = 0;
  std::uint64_t committed = 0;
  std::uint64_t aborted = 0;
  double te_sum = 0.0;
  std::vector<TerminationRecord> log;  // ordered by time

  std::vector<std::pair<double, double>> mr_samples;  // (time, MR%)
  std::optional<double> overshoot_start;
  double p_current = 0.0;
  bool in_steady_state = true;
  double max_overshoot = 0.0;
  std::uint64_t episodes = 0;
  std::uint64_t violations = 0;
  std::vector<double> episode_durations;  // completed episodes

  void record(const Termination& t);

 private:
  friend void update_transient(ProviderStats&, const QoSSpec&, double);
  bool m_recovering = false;
  bool m_flagged = false;
};

/// 100 * tardy / terminated over terminations in [now - window, now]; 0 with none.
double compute_mr(const ProviderStats& p, double window, double now);

/// Mean transaction error over terminations in [now - window, now]; 0 with none.
double compute_ate(const ProviderStats& p, double window, double now);

/// One MR sample of the transient tracker. An overshoot episode opens at the first
/// sample above mr_threshold and closes after two consecutive samples at or below it;
/// P is measured from the opening sample. Episodes whose P exceeds settling_time
/// count one violation each.
void update_transient(ProviderStats& p, const QoSSpec& q, double now);

struct ProviderSnapshot {
  double mr = 0.0;
  double p = 0.0;
  double energy = 0.0;
  bool operator==(const ProviderSnapshot&) const = default;
};

/// Single-server FIFO real-time database. Firm transactions are aborted at their
/// deadline whether queued or executing; soft ones run to completion.
class RtdbsProvider {
 public:
  explicit RtdbsProvider(NodeId id) : m_id(id) {}

  NodeId id() const { return m_id; }

  /// Advances to `now`, then queues `t`. `t.required_service` must be set.
  void admit(Transaction t, double now);

  /// Processes completions and aborts up to and including `now`.
  void advance_to(double now);

  /// Earliest pending internal event, if any.
  std::optional<double> next_event_time() const;

  /// Terminations produced since the last call.
  std::vector<Termination> take_terminations();

  ProviderSnapshot snapshot(double energy, const QoSSpec& q, double now) const;

  const ProviderStats& stats() const { return m_stats; }
  ProviderStats& stats() { return m_stats; }
  std::size_t backlog() const { return m_queue.size() + (m_current ? 1 : 0); }
  double clock() const { return m_clock; }

 private:
  void start_next(double now);
  void terminate(Transaction t, double now, bool committed);

  NodeId m_id;
  double m_clock = 0.0;
  std::deque<Transaction> m_queue;
  std::set<std::pair<double, std::uint64_t>> m_firm_deadlines;  // queued firm only
  std::optional<Transaction> m_current;
  double m_current_start = 0.0;
  std::vector<Termination> m_outbox;
  ProviderStats m_stats;
};

}  // namespace rtdqs
