// SPDX-License-Identifier: Apache-2.0
#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <set>

#include "bellcert/random.hpp"

using namespace bellcert;
using C = Philox4x32::Counter;

// Known-answer vectors for Philox4x32-10.
TEST(Philox, KnownAnswers) {
  EXPECT_EQ(Philox4x32::block({0, 0, 0, 0}, {0, 0}), (C{0x6627e8d5, 0xe169c58d, 0xbc57ac4c, 0x9b00dbd8}));
  EXPECT_EQ(Philox4x32::block({~0u, ~0u, ~0u, ~0u}, {~0u, ~0u}),
            (C{0x408f276d, 0x41c83b0e, 0xa20bc7c6, 0x6d5451fd}));
  EXPECT_EQ(Philox4x32::block({0x243f6a88, 0x85a308d3, 0x13198a2e, 0x03707344}, {0xa4093822, 0x299f31d0}),
            (C{0xd16cfe09, 0x94fdcceb, 0x5001e420, 0x24126ea1}));
}

TEST(Philox, ConstexprEvaluation) {
  constexpr auto c = Philox4x32::block({0, 0, 0, 0}, {0, 0});
  static_assert(c[0] == 0x6627e8d5u);
}

TEST(CounterStream, ReproducibleAndIndependent) {
  CounterStream a(42, 7), b(42, 7), c(42, 8), d(43, 7);
  std::vector<std::uint64_t> va, vb, vc, vd;
  for (int i = 0; i < 64; ++i) {
    va.push_back(a());
    vb.push_back(b());
    vc.push_back(c());
    vd.push_back(d());
  }
  EXPECT_EQ(va, vb);
  EXPECT_NE(va, vc);
  EXPECT_NE(va, vd);
}

TEST(CounterStream, UniformMoments) {
  CounterStream s(1, 0);
  const int n = 200000;
  double m1 = 0, m2 = 0;
  for (int i = 0; i < n; ++i) {
    const double u = s.uniform();
    ASSERT_GE(u, 0);
    ASSERT_LT(u, 1);
    m1 += u;
    m2 += u * u;
  }
  m1 /= n;
  m2 /= n;
  EXPECT_NEAR(m1, 0.5, 5 * std::sqrt(1.0 / 12 / n));
  EXPECT_NEAR(m2, 1.0 / 3, 0.003);
}

TEST(CounterStream, NormalMoments) {
  CounterStream s(2, 0);
  const int n = 200000;
  double m1 = 0, m2 = 0;
  for (int i = 0; i < n; ++i) {
    const double x = s.normal();
    m1 += x;
    m2 += x * x;
  }
  EXPECT_NEAR(m1 / n, 0, 0.012);
  EXPECT_NEAR(m2 / n, 1, 0.015);
}

TEST(CounterStream, BelowCoversRange) {
  CounterStream s(3, 0);
  std::vector<int> counts(7, 0);
  const int n = 70000;
  for (int i = 0; i < n; ++i) {
    const auto k = s.below(7);
    ASSERT_LT(k, 7u);
    ++counts[k];
  }
  for (int c : counts) EXPECT_NEAR(c, n / 7.0, 5 * std::sqrt(n / 7.0));
}

TEST(CounterStream, WorksWithStdDistributions) {
  CounterStream s(4, 0);
  std::uniform_int_distribution<int> d(1, 6);
  std::set<int> seen;
  for (int i = 0; i < 1000; ++i) seen.insert(d(s));
  EXPECT_EQ(seen.size(), 6u);
}
