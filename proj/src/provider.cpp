#include "rtdqs/provider.hpp"

#include <algorithm>
#include <limits>

namespace rtdqs {

namespace {

constexpr double kNever = std::numeric_limits<double>::infinity();

auto window_begin(const ProviderStats& p, double window, double now) {
  return std::lower_bound(p.log.begin(), p.log.end(), now - window,
                          [](const TerminationRecord& r, double t) { return r.time < t; });
}

}  // namespace

void ProviderStats::record(const Termination& t) {
  ++terminated;
  if (t.tardy) ++tardy;
  if (t.txn.state == TxnState::Committed) ++committed;
  else ++aborted;
  te_sum += t.txn.error;
  log.push_back(TerminationRecord{t.time, t.tardy, t.txn.error});
}

double compute_mr(const ProviderStats& p, double window, double now) {
  std::uint64_t total = 0, late = 0;
  for (auto it = window_begin(p, window, now); it != p.log.end() && it->time <= now; ++it) {
    ++total;
    if (it->tardy) ++late;
  }
  return total == 0 ? 0.0 : 100.0 * static_cast<double>(late) / static_cast<double>(total);
}

double compute_ate(const ProviderStats& p, double window, double now) {
  std::uint64_t total = 0;
  double sum = 0.0;
  for (auto it = window_begin(p, window, now); it != p.log.end() && it->time <= now; ++it) {
    ++total;
    sum += it->error;
  }
  return total == 0 ? 0.0 : sum / static_cast<double>(total);
}

void update_transient(ProviderStats& p, const QoSSpec& q, double now) {
  const double mr = compute_mr(p, q.mr_window, now);
  p.mr_samples.emplace_back(now, mr);
  const bool above = mr > q.mr_threshold;

  if (p.in_steady_state) {
    if (!above) return;
    p.in_steady_state = false;
    p.overshoot_start = now;
    p.p_current = 0.0;
    p.m_recovering = false;
    p.m_flagged = false;
    ++p.episodes;
    p.max_overshoot = std::max(p.max_overshoot, mr);
    return;
  }

  if (above) {
    p.m_recovering = false;
    p.max_overshoot = std::max(p.max_overshoot, mr);
  } else if (p.m_recovering) {
    // Second consecutive sample at or below the threshold: back to steady state.
    p.episode_durations.push_back(p.p_current);
    p.in_steady_state = true;
    p.overshoot_start.reset();
    p.p_current = 0.0;
    p.m_recovering = false;
    return;
  } else {
    p.m_recovering = true;
  }
  p.p_current = now - *p.overshoot_start;
  if (p.p_current > q.settling_time && !p.m_flagged) {
    ++p.violations;
    p.m_flagged = true;
  }
}

void RtdbsProvider::admit(Transaction t, double now) {
  advance_to(now);
  t.arrival = now;
  t.served = 0.0;
  t.provider = m_id;
  t.state = TxnState::Queued;
  if (t.txn_class == TxnClass::Firm && t.absolute_deadline() <= now) {
    terminate(std::move(t), now, false);
    return;
  }
  if (t.txn_class == TxnClass::Firm) m_firm_deadlines.emplace(t.absolute_deadline(), t.id);
  m_queue.push_back(std::move(t));
  if (!m_current) start_next(now);
}

std::optional<double> RtdbsProvider::next_event_time() const {
  double next = kNever;
  if (m_current) {
    next = std::min(next, m_current_start + (m_current->required_service - m_current->served));
    if (m_current->txn_class == TxnClass::Firm) next = std::min(next, m_current->absolute_deadline());
  }
  if (!m_firm_deadlines.empty()) next = std::min(next, m_firm_deadlines.begin()->first);
  if (next == kNever) return std::nullopt;
  return next;
}

void RtdbsProvider::advance_to(double now) {
  for (;;) {
    const double complete_at =
        m_current ? m_current_start + (m_current->required_service - m_current->served) : kNever;
    const double abort_current_at =
        m_current && m_current->txn_class == TxnClass::Firm ? m_current->absolute_deadline() : kNever;
    const double abort_queued_at = m_firm_deadlines.empty() ? kNever : m_firm_deadlines.begin()->first;
    const double next = std::min({complete_at, abort_current_at, abort_queued_at});
    if (next > now) break;

    if (complete_at <= abort_current_at && complete_at <= abort_queued_at) {
      Transaction t = std::move(*m_current);
      m_current.reset();
      t.served = t.required_service;
      terminate(std::move(t), complete_at, true);
      start_next(complete_at);
    } else if (abort_current_at <= abort_queued_at) {
      Transaction t = std::move(*m_current);
      m_current.reset();
      t.served += abort_current_at - m_current_start;
      terminate(std::move(t), abort_current_at, false);
      start_next(abort_current_at);
    } else {
      const auto [deadline, id] = *m_firm_deadlines.begin();
      m_firm_deadlines.erase(m_firm_deadlines.begin());
      auto it = std::find_if(m_queue.begin(), m_queue.end(), [id = id](const Transaction& t) { return t.id == id; });
      Transaction t = std::move(*it);
      m_queue.erase(it);
      terminate(std::move(t), deadline, false);
    }
  }
  m_clock = std::max(m_clock, now);
}

void RtdbsProvider::start_next(double now) {
  if (m_current || m_queue.empty()) return;
  m_current = std::move(m_queue.front());
  m_queue.pop_front();
  if (m_current->txn_class == TxnClass::Firm) m_firm_deadlines.erase({m_current->absolute_deadline(), m_current->id});
  m_current->state = TxnState::Executing;
  m_current_start = now;
}

void RtdbsProvider::terminate(Transaction t, double now, bool committed) {
  Termination out;
  out.time = now;
  if (committed) {
    t.state = TxnState::Committed;
    t.error = 0.0;
    out.tardy = now > t.absolute_deadline();
  } else {
    t.state = TxnState::Aborted;
    const double done = t.required_service > 0.0 ? t.served / t.required_service : 1.0;
    t.error = 100.0 * std::max(0.0, 1.0 - done);
    out.tardy = true;
  }
  out.txn = std::move(t);
  m_stats.record(out);
  m_outbox.push_back(std::move(out));
}

std::vector<Termination> RtdbsProvider::take_terminations() {
  std::vector<Termination> out;
  out.swap(m_outbox);
  return out;
}

ProviderSnapshot RtdbsProvider::snapshot(double energy, const QoSSpec& q, double now) const {
  return ProviderSnapshot{compute_mr(m_stats, q.mr_window, now), m_stats.p_current, energy};
}

}  // namespace rtdqs
