// SPDX-License-Identifier: Apache-2.0
#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include <nlohmann/json.hpp>

#include "bellcert/simulator.hpp"

using namespace bellcert;

namespace {

// |pass - expected| within k standard errors
void expect_rate(const GameRecord& r, double expected, double k = 5) {
  const double se = std::sqrt(expected * (1 - expected) / static_cast<double>(r.trials));
  EXPECT_NEAR(r.pass_rate, expected, k * se + 1e-12) << "passes " << r.passes << "/" << r.trials;
}

}  // namespace

TEST(BellGame, HonestPassesAlways) {
  for (const char* name : {"XY", "XYZ", "Isotropic", "Equator"}) {
    const auto r = play_bell(make_named(name), AdversaryModel::honest(), 2000, 5);
    EXPECT_EQ(r.passes, r.trials) << name;
    EXPECT_EQ(r.std_err, 0);
  }
}

TEST(BellGame, DeterministicAndThreadInvariant) {
  const auto mu = make_named("XYZ");
  const auto a = play_bell(mu, AdversaryModel::optimal_product(), 5000, 42);
  const auto b = play_bell(mu, AdversaryModel::optimal_product(), 5000, 42);
  const auto c = play_bell(mu, AdversaryModel::optimal_product(), 5000, 42, {.threads = 4});
  EXPECT_EQ(a, b);
  EXPECT_EQ(a, c);
  const auto d = play_bell(mu, AdversaryModel::optimal_product(), 5000, 43);
  EXPECT_NE(a.passes, d.passes);
  EXPECT_EQ(a.strategy_digest, d.strategy_digest);
  EXPECT_NE(a.strategy_digest, play_bell(make_named("XY"), AdversaryModel::honest(), 10, 42).strategy_digest);
}

TEST(BellGame, ProductAdversaryReachesThreshold) {
  expect_rate(play_bell(make_named("XY"), AdversaryModel::optimal_product(), 40000, 7), (2 + std::sqrt(2.0)) / 4);
  expect_rate(play_bell(make_named("XYZ"), AdversaryModel::optimal_product(), 40000, 8),
              0.5 + 0.5 / std::sqrt(3.0));
  expect_rate(play_bell(make_named("Isotropic"), AdversaryModel::optimal_product(), 40000, 9), 0.75);
}

TEST(BellGame, MixtureFollowsLinearCurve) {
  expect_rate(play_bell(make_named("Isotropic"), AdversaryModel::mixture(0.5), 40000, 10), 0.875);
  expect_rate(play_bell(make_named("XY"), AdversaryModel::mixture(1), 2000, 11), 1);
  EXPECT_THROW(AdversaryModel::mixture(1.5), std::invalid_argument);
}

TEST(BellGame, FixedStates) {
  // |00> against XYZ: 2/3
  expect_rate(play_bell(make_named("XYZ"), AdversaryModel::fixed(DensityOperator(basis_state(4, 0))), 40000, 12),
              2.0 / 3);
  // maximally mixed: 1/2
  expect_rate(play_bell(make_named("XY"), AdversaryModel::fixed(DensityOperator(0.25 * ComplexMatrix::identity(4))),
                        40000, 13),
              0.5);
  // qutrit Alice outside the qubit support always fails
  std::vector<cplx> a(6);
  a[2 * 2 + 0] = 1;
  const auto r = play_bell(make_named("XYZ"), AdversaryModel::fixed(DensityOperator(PureState(a)), 3), 1000, 14);
  EXPECT_EQ(r.passes, 0u);
  EXPECT_THROW(play_bell(make_named("XY"), AdversaryModel::fixed(DensityOperator(basis_state(6, 0)), 4), 10, 1),
               std::invalid_argument);
}

TEST(BellGame, TranscriptLines) {
  std::ostringstream out;
  const auto r = play_bell(make_named("XY"), AdversaryModel::optimal_product(), 20, 3, {.threads = 4, .transcript = &out});
  std::istringstream in(out.str());
  std::string line;
  std::uint64_t passes = 0, count = 0;
  while (std::getline(in, line)) {
    const auto j = nlohmann::json::parse(line);
    EXPECT_EQ(j.at("trial").get<std::uint64_t>(), count);
    EXPECT_TRUE(j.contains("test"));
    EXPECT_TRUE(j.contains("adversary_response"));
    passes += j.at("pass").get<bool>();
    ++count;
  }
  EXPECT_EQ(count, 20u);
  EXPECT_EQ(passes, r.passes);
  EXPECT_EQ(r, play_bell(make_named("XY"), AdversaryModel::optimal_product(), 20, 3));
}

TEST(Verdict, Examples) {
  const auto rec = GameRecord::from_counts(10000, 9000, 1, "x");
  EXPECT_NEAR(rec.std_err, 0.003, 1e-12);
  const auto v = verdict(rec, 0.85, 3);
  EXPECT_TRUE(v.entanglement_certified);
  EXPECT_GT(v.confidence, 0.999);
  const auto w = verdict(rec, 0.895, 3);
  EXPECT_FALSE(w.entanglement_certified);
  EXPECT_NEAR(w.confidence, 0.5 * std::erfc(-(0.005 / 0.003) / std::sqrt(2.0)), 1e-12);
  const auto iso = verdict(GameRecord::from_counts(100, 100, 1, "x"), make_named("Isotropic"), 3);
  EXPECT_TRUE(iso.entanglement_certified);
  EXPECT_EQ(iso.confidence, 1);
  EXPECT_EQ(iso.threshold, 0.75);
}

TEST(Verdict, ProductNeverCertified) {
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const auto r = play_bell(make_named("XY"), AdversaryModel::optimal_product(), 20000, seed);
    EXPECT_FALSE(verdict(r, make_named("XY"), 3).entanglement_certified) << seed;
  }
}

TEST(Sweep, Examples) {
  const auto rows = sweep_concurrence(make_named("Isotropic"), {0, 0.5, 1}, 20000, 20);
  ASSERT_EQ(rows.size(), 3u);
  EXPECT_NEAR(rows[0].analytic, 0.75, 1e-12);
  EXPECT_NEAR(rows[1].analytic, 0.875, 1e-12);
  EXPECT_EQ(rows[2].simulated, 1);
  for (const auto& r : rows) EXPECT_NEAR(r.simulated, r.analytic, 5 * r.std_err + 1e-3);
}

TEST(GhzGame, HonestPassesAlways) {
  const auto layout = PartyLayout::with_dishonest(3, {2});
  for (const auto& s : {GhzStrategy::continuous(0.3), GhzStrategy::discrete(0.2, 4)}) {
    const auto r = play_ghz(s, layout, AdversaryModel::honest(), 2000, 1);
    EXPECT_EQ(r.passes, r.trials);
  }
}

TEST(GhzGame, DeterministicAndThreadInvariant) {
  const auto layout = PartyLayout::with_dishonest(3, {1, 2});
  const auto s = GhzStrategy::continuous(0.25);
  const auto a = play_ghz(s, layout, AdversaryModel::optimal_product(), 3000, 9);
  const auto b = play_ghz(s, layout, AdversaryModel::optimal_product(), 3000, 9, {.threads = 3});
  EXPECT_EQ(a, b);
}

TEST(GhzGame, DiscreteProductMatchesBell) {
  const auto layout = PartyLayout::with_dishonest(3, {2});
  const auto r = play_ghz(GhzStrategy::discrete(0, 4), layout, AdversaryModel::optimal_product(), 40000, 15);
  expect_rate(r, (2 + std::sqrt(2.0)) / 4);
}

TEST(GhzGame, ContinuousProductAtOptimalPz) {
  const auto layout = PartyLayout::with_dishonest(4, {3});
  const auto s = GhzStrategy::continuous(optimal_pz_equator_plus_z());
  const auto r = play_ghz(s, layout, AdversaryModel::optimal_product(), 40000, 16);
  expect_rate(r, 0.5 + 1 / std::sqrt(4 + kPi * kPi));
}

TEST(GhzGame, FixedStates) {
  const auto layout = PartyLayout::with_dishonest(3, {2});
  const auto s = GhzStrategy::continuous(0.3);
  const auto ghz = play_ghz(s, layout, AdversaryModel::fixed(DensityOperator(ghz_state(3))), 1000, 2);
  EXPECT_EQ(ghz.passes, ghz.trials);
  EXPECT_THROW(play_ghz(s, layout, AdversaryModel::fixed(DensityOperator(ghz_state(4))), 10, 2),
               std::invalid_argument);
  // |000> passes every Z test and half of the phase tests
  const auto zero = play_ghz(s, layout, AdversaryModel::fixed(DensityOperator(basis_state(8, 0))), 40000, 3);
  expect_rate(zero, 0.3 + 0.7 * 0.5);
}

TEST(GhzGame, MixtureNeedsTwoDishonest) {
  const auto s = GhzStrategy::continuous(0.3);
  EXPECT_THROW(play_ghz(s, PartyLayout::with_dishonest(3, {2}), AdversaryModel::mixture(0.5), 10, 1),
               std::invalid_argument);
  const auto r = play_ghz(s, PartyLayout::with_dishonest(3, {1, 2}), AdversaryModel::mixture(1), 2000, 1);
  EXPECT_EQ(r.passes, r.trials);
}

TEST(GhzGame, TranscriptLines) {
  std::ostringstream out;
  const auto r = play_ghz(GhzStrategy::continuous(0.5), PartyLayout::with_dishonest(3, {2}),
                          AdversaryModel::optimal_product(), 10, 4, {.transcript = &out});
  std::istringstream in(out.str());
  std::string line;
  int count = 0;
  while (std::getline(in, line)) {
    const auto j = nlohmann::json::parse(line);
    EXPECT_EQ(j.at("honest_outcomes").size(), 2u);
    ++count;
  }
  EXPECT_EQ(count, 10);
  EXPECT_EQ(r.trials, 10u);
}
