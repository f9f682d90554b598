#include <gtest/gtest.h>

#include <random>

#include "oracles.hpp"
#include "rtdqs/provider.hpp"

using namespace rtdqs;

namespace {

Transaction txn(std::uint64_t id, TxnClass cls, double born, double deadline, double service) {
  Transaction t;
  t.id = id;
  t.txn_class = cls;
  t.born = born;
  t.deadline = deadline;
  t.required_service = service;
  return t;
}

void add(ProviderStats& s, double time, bool tardy, double error = 0.0) {
  Termination t;
  t.time = time;
  t.tardy = tardy;
  t.txn.state = error > 0.0 ? TxnState::Aborted : TxnState::Committed;
  t.txn.error = error;
  s.record(t);
}

// One termination per second over [from, to), all tardy or all in time.
void step_trace(ProviderStats& s, double from, double to, bool high) {
  for (double t = from; t < to; t += 1.0) add(s, t, high);
}

}  // namespace

TEST(MissRatio, Examples) {
  ProviderStats s;
  for (int i = 0; i < 30; ++i) add(s, 10.0 + i, i < 3);
  EXPECT_DOUBLE_EQ(compute_mr(s, 60.0, 50.0), 10.0);

  ProviderStats none_late;
  for (int i = 0; i < 5; ++i) add(none_late, i, false);
  EXPECT_EQ(compute_mr(none_late, 60.0, 10.0), 0.0);
  EXPECT_EQ(compute_mr(ProviderStats{}, 60.0, 10.0), 0.0);
}

TEST(AverageError, Examples) {
  ProviderStats s;
  add(s, 1.0, true, 10.0);
  add(s, 2.0, true, 20.0);
  add(s, 3.0, true, 30.0);
  EXPECT_DOUBLE_EQ(compute_ate(s, 60.0, 5.0), 20.0);

  ProviderStats clean;
  add(clean, 1.0, false);
  EXPECT_EQ(compute_ate(clean, 60.0, 5.0), 0.0);
}

TEST(AverageError, WindowDropsOldTerminations) {
  ProviderStats s;
  add(s, 10.0, true, 90.0);
  add(s, 100.0, true, 10.0);
  add(s, 110.0, true, 30.0);
  EXPECT_DOUBLE_EQ(compute_ate(s, 60.0, 120.0), 20.0);
  EXPECT_DOUBLE_EQ(compute_ate(s, 60.0, 70.0), 90.0);  // boundary at now - window is inside
  EXPECT_DOUBLE_EQ(compute_mr(s, 60.0, 170.0), 100.0);
}

TEST(WindowedStats, MatchFilterOracleOnRandomLogs) {
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> gap(0.0, 3.0), err(0.0, 100.0), at(0.0, 400.0), win(1.0, 120.0);
  for (int trial = 0; trial < 1000; ++trial) {
    ProviderStats s;
    std::vector<oracle::Term> terms;
    double t = 0.0;
    const int n = static_cast<int>(rng() % 200);
    for (int i = 0; i < n; ++i) {
      t += gap(rng);
      const bool tardy = rng() % 3 == 0;
      const double e = tardy && rng() % 2 ? err(rng) : 0.0;
      add(s, t, tardy, e);
      terms.push_back({t, tardy, e});
    }
    const double now = at(rng), w = win(rng);
    ASSERT_TRUE(oracle::rel_equal(compute_mr(s, w, now), oracle::mr(terms, w, now), 1e-12));
    ASSERT_TRUE(oracle::rel_equal(compute_ate(s, w, now), oracle::ate(terms, w, now), 1e-12));
  }
}

TEST(Rtdbs, EmptyQueueStartsImmediately) {
  RtdbsProvider p(3);
  p.admit(txn(1, TxnClass::Firm, 0.0, 5.0, 1.0), 0.0);
  EXPECT_EQ(p.backlog(), 1u);
  EXPECT_DOUBLE_EQ(*p.next_event_time(), 1.0);
  p.advance_to(1.0);
  auto out = p.take_terminations();
  ASSERT_EQ(out.size(), 1u);
  EXPECT_EQ(out[0].txn.state, TxnState::Committed);
  EXPECT_EQ(out[0].txn.error, 0.0);
  EXPECT_FALSE(out[0].tardy);
  EXPECT_EQ(out[0].txn.provider, NodeId{3});
}

TEST(Rtdbs, FirmAbortErrorFromServedShare) {
  RtdbsProvider p(1);
  p.admit(txn(1, TxnClass::Firm, 0.0, 0.6, 1.0), 0.0);
  p.advance_to(5.0);
  auto out = p.take_terminations();
  ASSERT_EQ(out.size(), 1u);
  EXPECT_EQ(out[0].txn.state, TxnState::Aborted);
  EXPECT_NEAR(out[0].txn.error, 40.0, 1e-12);
  EXPECT_TRUE(out[0].tardy);
  EXPECT_DOUBLE_EQ(out[0].time, 0.6);
}

TEST(Rtdbs, QueuedFirmAbortedAtDeadline) {
  RtdbsProvider p(1);
  p.admit(txn(1, TxnClass::Soft, 0.0, 10.0, 4.0), 0.0);
  p.admit(txn(2, TxnClass::Firm, 0.0, 2.0, 1.0), 0.0);
  p.advance_to(10.0);
  auto out = p.take_terminations();
  ASSERT_EQ(out.size(), 2u);
  EXPECT_EQ(out[0].txn.id, 2u);
  EXPECT_DOUBLE_EQ(out[0].time, 2.0);
  EXPECT_DOUBLE_EQ(out[0].txn.error, 100.0);
  EXPECT_EQ(out[1].txn.id, 1u);
}

TEST(Rtdbs, SoftRunsPastDeadline) {
  RtdbsProvider p(1);
  p.admit(txn(1, TxnClass::Soft, 0.0, 1.0, 3.0), 0.0);
  p.advance_to(2.0);
  EXPECT_TRUE(p.take_terminations().empty());
  p.advance_to(3.0);
  auto out = p.take_terminations();
  ASSERT_EQ(out.size(), 1u);
  EXPECT_EQ(out[0].txn.state, TxnState::Committed);
  EXPECT_TRUE(out[0].tardy);
  EXPECT_EQ(out[0].txn.error, 0.0);
  EXPECT_EQ(p.stats().tardy, 1u);
}

TEST(Rtdbs, ExpiredFirmOnArrival) {
  RtdbsProvider p(1);
  p.admit(txn(1, TxnClass::Firm, 0.0, 2.0, 1.0), 3.0);
  auto out = p.take_terminations();
  ASSERT_EQ(out.size(), 1u);
  EXPECT_EQ(out[0].txn.state, TxnState::Aborted);
  EXPECT_EQ(p.backlog(), 0u);
}

TEST(Rtdbs, FifoStartTimesMatchHandSimulation) {
  RtdbsProvider p(1);
  const double s[] = {0.4, 0.7, 0.2, 1.1};
  for (std::uint64_t i = 0; i < 4; ++i) p.admit(txn(i + 1, TxnClass::Soft, 0.0, 100.0, s[i]), 0.0);
  p.advance_to(100.0);
  auto out = p.take_terminations();
  ASSERT_EQ(out.size(), 4u);
  double finish = 0.0;
  for (std::size_t i = 0; i < 4; ++i) {
    finish += s[i];
    EXPECT_NEAR(out[i].time, finish, 1e-12);
    EXPECT_EQ(out[i].txn.id, i + 1);
  }
}

TEST(Rtdbs, RandomLoadKeepsCounterIdentities) {
  std::mt19937_64 rng(77);
  std::exponential_distribution<double> inter(3.0), service(2.5);
  std::uniform_real_distribution<double> dl(0.2, 4.0);
  RtdbsProvider p(1);
  double t = 0.0;
  for (std::uint64_t i = 1; i <= 5000; ++i) {
    t += inter(rng);
    p.admit(txn(i, rng() % 2 ? TxnClass::Firm : TxnClass::Soft, t, dl(rng), service(rng)), t);
  }
  p.advance_to(1e9);
  const auto& st = p.stats();
  EXPECT_EQ(st.terminated, 5000u);
  EXPECT_EQ(st.terminated, st.committed + st.aborted);
  EXPECT_LE(st.tardy, st.terminated);
  EXPECT_GE(st.tardy, st.aborted);
  for (std::size_t i = 1; i < st.log.size(); ++i) ASSERT_LE(st.log[i - 1].time, st.log[i].time);
  for (const auto& r : st.log) ASSERT_TRUE(r.error >= 0.0 && r.error <= 100.0);
}

TEST(Transient, QuietProviderNeverOvershoots) {
  QoSSpec q;
  ProviderStats s;
  step_trace(s, 0.0, 300.0, false);
  for (double t = 5.0; t <= 300.0; t += 5.0) update_transient(s, q, t);
  EXPECT_EQ(s.p_current, 0.0);
  EXPECT_EQ(s.episodes, 0u);
  EXPECT_TRUE(s.in_steady_state);
}

TEST(Transient, PeriodMeasuredFromFirstHighSample) {
  QoSSpec q;
  q.mr_window = 5.0;
  ProviderStats s;
  step_trace(s, 0.0, 96.0, false);
  step_trace(s, 96.0, 200.0, true);
  for (double t = 5.0; t <= 130.0; t += 5.0) update_transient(s, q, t);
  EXPECT_FALSE(s.in_steady_state);
  EXPECT_DOUBLE_EQ(*s.overshoot_start, 100.0);
  EXPECT_DOUBLE_EQ(s.p_current, 30.0);
  EXPECT_EQ(s.violations, 0u);
}

TEST(Transient, SeventySecondEpisodeIsViolation) {
  QoSSpec q;
  q.mr_window = 5.0;
  ProviderStats s;
  step_trace(s, 0.0, 96.0, false);
  step_trace(s, 96.0, 166.0, true);
  step_trace(s, 166.0, 300.0, false);
  for (double t = 5.0; t <= 300.0; t += 5.0) update_transient(s, q, t);
  EXPECT_TRUE(s.in_steady_state);
  EXPECT_EQ(s.episodes, 1u);
  EXPECT_EQ(s.violations, 1u);
  ASSERT_EQ(s.episode_durations.size(), 1u);
  EXPECT_NEAR(s.episode_durations[0], 70.0, q.mr_sample_period);
  EXPECT_DOUBLE_EQ(s.max_overshoot, 100.0);
}

TEST(Transient, FortySecondEpisodeIsNot) {
  QoSSpec q;
  q.mr_window = 5.0;
  ProviderStats s;
  step_trace(s, 0.0, 96.0, false);
  step_trace(s, 96.0, 136.0, true);
  step_trace(s, 136.0, 300.0, false);
  for (double t = 5.0; t <= 300.0; t += 5.0) update_transient(s, q, t);
  EXPECT_EQ(s.episodes, 1u);
  EXPECT_EQ(s.violations, 0u);
}

TEST(Transient, SingleLowSampleDoesNotCloseEpisode) {
  QoSSpec q;
  q.mr_window = 5.0;
  ProviderStats s;
  step_trace(s, 96.0, 115.0, true);
  step_trace(s, 115.0, 122.0, false);
  step_trace(s, 122.0, 150.0, true);
  for (double t = 100.0; t <= 145.0; t += 5.0) update_transient(s, q, t);
  EXPECT_EQ(s.episodes, 1u);
  EXPECT_DOUBLE_EQ(s.p_current, 45.0);
}

TEST(Snapshot, FreshAndOvershooting) {
  QoSSpec q;
  RtdbsProvider p(2);
  EXPECT_EQ(p.snapshot(100.0, q, 0.0), (ProviderSnapshot{0.0, 0.0, 100.0}));
  q.mr_window = 5.0;
  step_trace(p.stats(), 0.0, 20.0, true);
  for (double t = 5.0; t <= 20.0; t += 5.0) update_transient(p.stats(), q, t);
  const auto snap = p.snapshot(80.0, q, 20.0);
  EXPECT_GT(snap.p, 0.0);
  EXPECT_DOUBLE_EQ(snap.mr, 100.0);
  EXPECT_EQ(snap.energy, 80.0);
}
