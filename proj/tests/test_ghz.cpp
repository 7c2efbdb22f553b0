// SPDX-License-Identifier: Apache-2.0
#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>

#include "bellcert/ghz.hpp"
#include "bellcert/random.hpp"

using namespace bellcert;

namespace {

double ks_uniform(std::vector<double> xs, double lo, double hi) {
  std::sort(xs.begin(), xs.end());
  const double n = static_cast<double>(xs.size());
  double d = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double f = (xs[i] - lo) / (hi - lo);
    d = std::max({d, f - i / n, (i + 1) / n - f});
  }
  return d;
}

std::vector<BlochVector> equatorial(std::initializer_list<double> phis) {
  std::vector<BlochVector> v;
  for (double p : phis) v.push_back(BlochVector::equatorial(p));
  return v;
}

}  // namespace

TEST(Layout, Validation) {
  const auto l = PartyLayout::with_dishonest(4, {3, 1});
  EXPECT_EQ(l.honest, (std::vector<int>{0, 2}));
  EXPECT_EQ(l.dishonest, (std::vector<int>{1, 3}));
  EXPECT_THROW(PartyLayout::with_dishonest(3, {0, 1, 2}), std::invalid_argument);
  EXPECT_THROW(PartyLayout::with_dishonest(3, {}), std::invalid_argument);
  EXPECT_THROW(PartyLayout::with_dishonest(3, {1, 1}), std::invalid_argument);
  EXPECT_THROW(PartyLayout::with_dishonest(3, {5}), std::invalid_argument);
  EXPECT_THROW(PartyLayout::with_dishonest(1, {0}), std::invalid_argument);
}

TEST(Compatibility, Examples) {
  const std::vector<BlochVector> zzz(3, BlochVector(0, 0, 1));
  EXPECT_TRUE(is_compatible(zzz));
  EXPECT_TRUE(compatibility_oracle(zzz));
  EXPECT_TRUE(is_compatible(equatorial({0, 0, 0})));
  EXPECT_TRUE(is_compatible(equatorial({kPi / 2, kPi / 2, kPi})));
  EXPECT_FALSE(is_compatible(equatorial({kPi / 2, 0, 0})));
  EXPECT_FALSE(compatibility_oracle(equatorial({kPi / 2, 0, 0})));
  // one flipped direction is the same measurement
  EXPECT_TRUE(is_compatible(equatorial({kPi, 0, 0})));
  std::vector<BlochVector> mixed = {BlochVector(0, 0, 1), BlochVector(1, 0, 0), BlochVector(1, 0, 0)};
  EXPECT_FALSE(is_compatible(mixed));
  EXPECT_FALSE(compatibility_oracle(mixed));
  EXPECT_THROW(is_compatible(std::vector<BlochVector>(1)), std::invalid_argument);
}

TEST(Compatibility, AgreesWithOracleOnConstructedSets) {
  CounterStream rng(31, 0);
  for (int i = 0; i < 60; ++i) {
    const int n = 2 + static_cast<int>(rng.below(3));
    std::vector<double> ph(n);
    double s = 0;
    for (int j = 0; j + 1 < n; ++j) s += (ph[j] = kTwoPi * rng.uniform());
    // sum is a multiple of pi half of the time
    ph[n - 1] = (i % 2 ? kPi : 0) - s + (i % 3 == 0 ? 0.4 : 0);
    std::vector<BlochVector> v;
    for (double p : ph) v.push_back(BlochVector::equatorial(p));
    EXPECT_EQ(is_compatible(v), compatibility_oracle(v)) << i;
    EXPECT_EQ(is_compatible(v), i % 3 != 0) << i;
  }
}

TEST(Tests, Evaluate) {
  const auto z = GhzTest::z_test();
  EXPECT_TRUE(evaluate_test(z, std::vector<int>{1, 1, 1}));
  EXPECT_TRUE(evaluate_test(z, std::vector<int>{-1, -1, -1}));
  EXPECT_FALSE(evaluate_test(z, std::vector<int>{1, -1, 1}));
  const auto ph = GhzTest::phase_test({kPi / 2, kPi / 2, kPi});
  EXPECT_TRUE(evaluate_test(ph, std::vector<int>{-1, -1, 1}));
  EXPECT_FALSE(evaluate_test(ph, std::vector<int>{-1, 1, 1}));
  EXPECT_THROW(evaluate_test(ph, std::vector<int>{1, 1}), std::invalid_argument);
  EXPECT_THROW(evaluate_test(ph, std::vector<int>{1, 0, 1}), std::invalid_argument);
  EXPECT_THROW(GhzTest::phase_test({0.1, 0.2, 0.3}), std::invalid_argument);
  EXPECT_THROW(GhzTest::phase_test({0.0}), std::invalid_argument);
}

TEST(Tests, GenerateAllZ) {
  CounterStream rng(32, 0);
  for (int i = 0; i < 100; ++i) EXPECT_EQ(generate_test(GhzStrategy::continuous(1), 4, rng).kind, GhzTestKind::Z);
}

TEST(Tests, GeneratedPhasesSumToZero) {
  CounterStream rng(33, 0);
  for (int i = 0; i < 500; ++i) {
    const auto t = generate_test(GhzStrategy::continuous(0), 3, rng);
    ASSERT_EQ(t.kind, GhzTestKind::Phase);
    double s = 0;
    for (double p : t.phases) {
      EXPECT_GE(p, 0);
      EXPECT_LT(p, kTwoPi);
      s += p;
    }
    EXPECT_LT(distance_to_multiple(s, kTwoPi), 1e-9);
    std::vector<BlochVector> v;
    for (std::size_t j = 0; j < t.phases.size(); ++j) v.push_back(t.direction(j));
    EXPECT_TRUE(is_compatible(v));
  }
}

TEST(Tests, HonestPhaseIsUniform) {
  const int n = 4, trials = 20000;
  const auto layout = PartyLayout::with_dishonest(n, {3});
  for (int seed : {1, 2}) {
    CounterStream rng(34, static_cast<std::uint64_t>(seed));
    std::vector<double> phi_h;
    int z = 0;
    for (int i = 0; i < trials; ++i) {
      const auto t = generate_test(GhzStrategy::continuous(0.3), n, rng);
      if (t.kind == GhzTestKind::Z) {
        ++z;
        continue;
      }
      double s = 0;
      for (int h : layout.honest) s += t.phases[h];
      phi_h.push_back(wrap_phase(s));
    }
    EXPECT_NEAR(z / double(trials), 0.3, 0.015);
    // 1% critical value of the KS statistic
    EXPECT_LT(ks_uniform(phi_h, 0, kTwoPi) * std::sqrt(double(phi_h.size())), 1.63);
  }
}

TEST(Tests, DiscreteLawStaysOnGrid) {
  CounterStream rng(35, 0);
  std::array<int, 4> counts{};
  const int trials = 8000;
  for (int i = 0; i < trials; ++i) {
    const auto t = generate_test(GhzStrategy::discrete(0, 4), 3, rng);
    for (double p : t.phases) EXPECT_LT(distance_to_multiple(p, kPi / 2), 1e-12);
    const double h = wrap_phase(t.phases[0] + t.phases[1]);
    ++counts[static_cast<int>(std::lround(h / (kPi / 2))) % 4];
  }
  for (int c : counts) EXPECT_NEAR(c / double(trials), 0.25, 0.02);
}

TEST(Strategy, EffectiveStrategy) {
  EXPECT_EQ(effective_strategy(GhzStrategy::continuous(0.2)).family(), Family::EquatorPlusZ);
  EXPECT_EQ(effective_strategy(GhzStrategy::continuous(0.2)).pz(), 0.2);
  const auto d = effective_strategy(GhzStrategy::discrete(0.4, 5));
  EXPECT_EQ(d.family(), Family::PolygonPlusZ);
  EXPECT_EQ(d.params().m, 5);
  EXPECT_THROW(GhzStrategy::continuous(1.5), std::invalid_argument);
  EXPECT_THROW(GhzStrategy::discrete(0.5, 2), std::invalid_argument);
}

TEST(PhaseObservables, BlockIdentity) {
  CounterStream rng(36, 0);
  for (int h = 1; h <= 4; ++h) {
    std::vector<double> phis(h);
    double sum = 0;
    for (auto& p : phis) sum += (p = kTwoPi * rng.uniform());
    ComplexMatrix prod = x_phase(phis[0]);
    for (int j = 1; j < h; ++j) prod = kron(prod, x_phase(phis[j]));
    const std::size_t d = std::size_t{1} << h;
    ComplexMatrix pv(d, d);
    pv(0, 0) = pv(d - 1, d - 1) = 1;
    EXPECT_LT((pv * prod * pv).max_abs_diff(x_block(h, sum)), 1e-12) << h;
  }
}

TEST(PhaseObservables, GhzExpectation) {
  // <GHZ| X(phi_1)...X(phi_n) |GHZ> = cos(sum phi)
  const int n = 3;
  const DensityOperator rho(ghz_state(n));
  const std::vector<double> phis = {0.3, 1.1, -0.2};
  ComplexMatrix prod = x_phase(phis[0]);
  for (int j = 1; j < n; ++j) prod = kron(prod, x_phase(phis[j]));
  EXPECT_NEAR((prod * rho.matrix()).trace().real(), std::cos(1.2), 1e-12);
}
