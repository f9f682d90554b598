#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "oracles.hpp"
#include "rtdqs/selection.hpp"

using namespace rtdqs;

namespace {

ServiceReply reply(NodeId provider, std::size_t hops, double route, double css) {
  ServiceReply r;
  r.provider = provider;
  r.hop_count = hops;
  r.c_ss = css;
  r.route.hops.push_back(100);
  for (std::size_t i = 1; i < hops; ++i) r.route.hops.push_back(static_cast<NodeId>(200 + i));
  r.route.hops.push_back(provider);
  if (hops >= 2) r.route.stamps.push_back(HopStamp{201, route, 0, 0});
  return r;
}

Weights energy_only() {
  Weights w;
  w.alpha_route = 1.0;
  w.beta_route = 0.0;
  w.gamma_route = 0.0;
  return w;
}

}  // namespace

TEST(FirmCost, Examples) {
  EXPECT_DOUBLE_EQ(c_firm(3, 10.0, 1.0), 30.0);
  EXPECT_EQ(c_firm(7, 0.0, 1.0 / 600.0), 0.0);
  EXPECT_NEAR(c_firm(5, 60.0, 1.0 / 300.0), 1.0, 1e-15);
}

TEST(SoftCost, Examples) {
  EXPECT_DOUBLE_EQ(c_soft(20.0, 50.0, 1.0), 0.4);
  EXPECT_EQ(c_soft(0.0, 50.0, 10.0), 0.0);
  EXPECT_DOUBLE_EQ(c_soft(10.0, 100.0, 10.0), 1.0);
  EXPECT_TRUE(std::isinf(c_soft(10.0, 0.0, 10.0)));
}

TEST(ServiceCost, ClassDefaultsAndBlend) {
  const ProviderSnapshot snap{20.0, 10.0, 50.0};
  Weights w;
  w.n_firm = 1.0;
  w.n_soft = 1.0;
  EXPECT_DOUBLE_EQ(c_ss(TxnClass::Firm, 3, snap, w), 30.0);
  EXPECT_DOUBLE_EQ(c_ss(TxnClass::Soft, 3, snap, w), 0.4);
  w.alpha_ss = 0.5;
  EXPECT_NEAR(c_ss(TxnClass::Firm, 3, snap, w), 15.2, 1e-12);
  EXPECT_NEAR(c_ss(TxnClass::Soft, 3, snap, w), 15.2, 1e-12);
}

TEST(ServiceCost, MatchesOracleOnRandomInputs) {
  std::mt19937_64 rng(12);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 5000; ++trial) {
    const bool firm = rng() % 2;
    const std::size_t hops = 1 + rng() % 12;
    const ProviderSnapshot snap{100.0 * u(rng), 120.0 * u(rng), trial % 50 == 0 ? 0.0 : 100.0 * u(rng)};
    Weights w;
    w.n_firm = u(rng);
    w.n_soft = 20.0 * u(rng);
    if (trial % 3 == 0) w.alpha_ss = u(rng);
    const double got = c_ss(firm ? TxnClass::Firm : TxnClass::Soft, hops, snap, w);
    const double want = oracle::c_ss(firm, w.alpha_ss, static_cast<double>(hops), snap.p, snap.mr, snap.energy,
                                     w.n_firm, w.n_soft);
    ASSERT_TRUE(oracle::rel_equal(got, want, 1e-12)) << trial << ' ' << got << ' ' << want;
    ASSERT_TRUE(oracle::rel_equal(c_firm(hops, snap.p, w.n_firm), oracle::c_firm(static_cast<double>(hops), snap.p, w.n_firm), 1e-12));
    ASSERT_TRUE(oracle::rel_equal(c_soft(snap.mr, snap.energy, w.n_soft), oracle::c_soft(snap.mr, snap.energy, w.n_soft), 1e-12));
  }
}

TEST(SelectService, LowestTotalCost) {
  const auto w = energy_only();
  const auto a = reply(3, 2, 5.0, 0.0);
  const auto b = reply(4, 2, 4.0, 0.2);
  EXPECT_EQ(select_service({a, b}, w)->provider, 4u);
  EXPECT_DOUBLE_EQ(b.c_qos(w), 4.2);
}

TEST(SelectService, EqualCostPrefersFewerHopsThenId) {
  const auto w = energy_only();
  EXPECT_EQ(select_service({reply(3, 3, 1.0, 0.5), reply(8, 2, 1.0, 0.5)}, w)->provider, 8u);
  EXPECT_EQ(select_service({reply(9, 2, 1.0, 0.5), reply(5, 2, 1.0, 0.5)}, w)->provider, 5u);
  EXPECT_FALSE(select_service({}, w));
}

TEST(SelectService, InfiniteCostNeverBeatsFinite) {
  const auto w = energy_only();
  const double inf = std::numeric_limits<double>::infinity();
  EXPECT_EQ(select_service({reply(1, 1, 0.0, inf), reply(2, 6, 3.0, 9.0)}, w)->provider, 2u);
}

TEST(ClosestRtd, Examples) {
  EXPECT_EQ(closest_rtd_select({reply(7, 4, 0.0, 0.0), reply(8, 2, 9.0, 9.0)})->provider, 8u);
  EXPECT_EQ(closest_rtd_select({reply(9, 3, 0.0, 0.0), reply(5, 3, 9.0, 9.0)})->provider, 5u);
  EXPECT_FALSE(closest_rtd_select({}));
}

TEST(Selection, BothRulesMatchExhaustiveArgmin) {
  std::mt19937_64 rng(2024);
  const auto w = energy_only();
  for (int trial = 0; trial < 2000; ++trial) {
    std::vector<ServiceReply> replies;
    std::vector<oracle::Candidate> cands;
    const std::size_t n = 1 + rng() % 8;
    std::vector<NodeId> ids{1, 2, 3, 4, 5, 6, 7, 8};
    std::shuffle(ids.begin(), ids.end(), rng);
    for (std::size_t i = 0; i < n; ++i) {
      const std::size_t hops = 1 + rng() % 4;
      const double route = hops >= 2 ? 0.5 * static_cast<double>(rng() % 3) : 0.0;
      const double css = 0.5 * static_cast<double>(rng() % 3);
      replies.push_back(reply(ids[i], hops, route, css));
      cands.push_back({route + css, hops, ids[i]});
    }
    ASSERT_EQ(select_service(replies, w)->provider, cands[oracle::argmin_qos(cands)].id) << trial;
    ASSERT_EQ(closest_rtd_select(replies)->provider, cands[oracle::argmin_hops(cands)].id) << trial;
  }
}

TEST(Selection, UniformScalingKeepsWinner) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0.0, 3.0), scale(0.1, 50.0);
  const auto w = energy_only();
  for (int trial = 0; trial < 500; ++trial) {
    std::vector<ServiceReply> replies, scaled;
    const double c = scale(rng);
    for (NodeId id = 1; id <= 6; ++id) {
      const std::size_t hops = 2 + rng() % 3;
      const double route = u(rng), css = u(rng);
      replies.push_back(reply(id, hops, route, css));
      scaled.push_back(reply(id, hops, route * c, css * c));
    }
    ASSERT_EQ(select_service(replies, w)->provider, select_service(scaled, w)->provider);
  }
}

TEST(Selection, FirmRankingIgnoresSoftInputs) {
  std::mt19937_64 rng(6);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const Weights w;
  for (int trial = 0; trial < 500; ++trial) {
    std::vector<ServiceReply> a, b;
    for (NodeId id = 1; id <= 5; ++id) {
      const std::size_t hops = 1 + rng() % 5;
      const double p = 60.0 * u(rng);
      auto ra = reply(id, hops, u(rng), 0.0);
      auto rb = ra;
      ra.c_ss = c_ss(TxnClass::Firm, hops, ProviderSnapshot{100 * u(rng), p, 1 + 99 * u(rng)}, w);
      rb.c_ss = c_ss(TxnClass::Firm, hops, ProviderSnapshot{100 * u(rng), p, 1 + 99 * u(rng)}, w);
      a.push_back(ra);
      b.push_back(rb);
    }
    ASSERT_EQ(select_service(a, w)->provider, select_service(b, w)->provider);
  }
}

TEST(Selection, SoftRankingIgnoresFirmInputs) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const Weights w;
  for (int trial = 0; trial < 500; ++trial) {
    std::vector<ServiceReply> a, b;
    for (NodeId id = 1; id <= 5; ++id) {
      const double mr = 100 * u(rng), e = 1 + 99 * u(rng);
      auto ra = reply(id, 2, u(rng), 0.0);
      auto rb = ra;
      ra.c_ss = c_ss(TxnClass::Soft, 1 + rng() % 9, ProviderSnapshot{mr, 60 * u(rng), e}, w);
      rb.c_ss = c_ss(TxnClass::Soft, 1 + rng() % 9, ProviderSnapshot{mr, 60 * u(rng), e}, w);
      a.push_back(ra);
      b.push_back(rb);
    }
    ASSERT_EQ(select_service(a, w)->provider, select_service(b, w)->provider);
  }
}

TEST(CollectReply, KeepsCheaperCopyPerProvider) {
  const auto w = energy_only();
  std::vector<ServiceReply> replies;
  collect_reply(replies, reply(4, 3, 2.0, 0.1), w);
  collect_reply(replies, reply(6, 2, 1.0, 0.1), w);
  collect_reply(replies, reply(4, 2, 0.5, 0.1), w);
  collect_reply(replies, reply(4, 4, 3.0, 0.1), w);
  ASSERT_EQ(replies.size(), 2u);
  EXPECT_EQ(replies[0].provider, 4u);
  EXPECT_DOUBLE_EQ(replies[0].c_qos(w), 0.6);
}
