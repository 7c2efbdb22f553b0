// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <cmath>
#include <set>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "bellcert/errors.hpp"
#include "bellcert/qcore.hpp"
#include "bellcert/strategy.hpp"

namespace bellcert {

inline constexpr double kTwoPi = 2 * kPi;

// wrap into [0, 2pi)
inline double wrap_phase(double phi) {
  double r = std::fmod(phi, kTwoPi);
  if (r < 0) r += kTwoPi;
  if (r >= kTwoPi) r = 0;
  return r;
}

// distance of x from the nearest multiple of period
inline double distance_to_multiple(double x, double period) {
  const double r = std::fmod(std::abs(x), period);
  return std::min(r, period - r);
}

// ---------------------------------------------------------------------------
// Parties
// ---------------------------------------------------------------------------
// Party indices are 0-based here; the CLI speaks 1-based.
struct PartyLayout {
  int n = 0;
  std::vector<int> honest;
  std::vector<int> dishonest;

  static PartyLayout with_dishonest(int n, std::vector<int> dishonest) {
    if (n < 2) throw std::invalid_argument("GHZ layout needs at least two parties");
    std::sort(dishonest.begin(), dishonest.end());
    if (std::adjacent_find(dishonest.begin(), dishonest.end()) != dishonest.end())
      throw std::invalid_argument("duplicate dishonest party");
    PartyLayout l;
    l.n = n;
    l.dishonest = std::move(dishonest);
    for (int j = 0; j < n; ++j)
      if (!std::binary_search(l.dishonest.begin(), l.dishonest.end(), j)) l.honest.push_back(j);
    l.validate();
    return l;
  }

  void validate() const {
    if (n < 2) throw std::invalid_argument("GHZ layout needs at least two parties");
    if (honest.empty() || dishonest.empty())
      throw std::invalid_argument("layout needs at least one honest and one dishonest party");
    std::vector<int> all(honest);
    all.insert(all.end(), dishonest.begin(), dishonest.end());
    std::sort(all.begin(), all.end());
    for (int j = 0; j < n; ++j)
      if (j >= static_cast<int>(all.size()) || all[j] != j)
        throw std::invalid_argument("honest and dishonest sets must partition the parties");
    if (static_cast<int>(all.size()) != n)
      throw std::invalid_argument("honest and dishonest sets must partition the parties");
  }
};

// ---------------------------------------------------------------------------
// Tests
// ---------------------------------------------------------------------------
enum class GhzTestKind { Z, Phase };

struct GhzTest {
  GhzTestKind kind = GhzTestKind::Z;
  std::vector<double> phases;  // Phase tests only, each in [0, 2pi)

  static GhzTest z_test() { return {}; }
  static GhzTest phase_test(std::vector<double> phases) {
    if (phases.size() < 2) throw std::invalid_argument("phase test needs at least two phases");
    double sum = 0;
    for (auto& p : phases) {
      sum += p;
      p = wrap_phase(p);
    }
    if (distance_to_multiple(sum, kTwoPi) > 1e-9 * static_cast<double>(phases.size()))
      throw std::invalid_argument("phase test phases must sum to 0 mod 2pi");
    GhzTest t;
    t.kind = GhzTestKind::Phase;
    t.phases = std::move(phases);
    return t;
  }

  // local measurement direction of party j
  BlochVector direction(std::size_t j) const {
    if (kind == GhzTestKind::Z) return BlochVector(0, 0, 1);
    return BlochVector::equatorial(phases.at(j));
  }
};

// Z tests pass iff all outcomes agree; phase tests iff the outcome product is +1.
inline bool evaluate_test(const GhzTest& test, std::span<const int> outcomes) {
  for (int o : outcomes)
    if (o != 1 && o != -1) throw std::invalid_argument("outcomes must be +1 or -1");
  if (test.kind == GhzTestKind::Z) {
    if (outcomes.empty()) throw std::invalid_argument("no outcomes");
    return std::all_of(outcomes.begin(), outcomes.end(), [&](int o) { return o == outcomes[0]; });
  }
  if (outcomes.size() != test.phases.size())
    throw std::invalid_argument("outcome count does not match party count");
  int prod = 1;
  for (int o : outcomes) prod *= o;
  return prod == 1;
}

enum class PhaseLaw { ContinuousUniform, DiscreteUniform };

struct GhzStrategy {
  double pz = 0;
  PhaseLaw law = PhaseLaw::ContinuousUniform;
  int m = 0;  // DiscreteUniform only

  static GhzStrategy continuous(double pz) {
    GhzStrategy s{pz, PhaseLaw::ContinuousUniform, 0};
    s.validate();
    return s;
  }
  static GhzStrategy discrete(double pz, int m) {
    GhzStrategy s{pz, PhaseLaw::DiscreteUniform, m};
    s.validate();
    return s;
  }
  void validate() const {
    if (!(pz >= 0 && pz <= 1)) throw std::invalid_argument("pZ must lie in [0,1]");
    if (law == PhaseLaw::DiscreteUniform && m < 3)
      throw std::invalid_argument("discrete phase law needs M >= 3");
  }
};

template <class Rng>
double draw_phase(const GhzStrategy& s, Rng& rng) {
  if (s.law == PhaseLaw::ContinuousUniform) return kTwoPi * rng.uniform();
  return kTwoPi * static_cast<double>(rng.below(static_cast<std::uint64_t>(s.m))) / s.m;
}

// The closing phase goes to a uniformly random party.
template <class Rng>
GhzTest generate_test(const GhzStrategy& s, int n, Rng& rng) {
  s.validate();
  if (n < 2) throw std::invalid_argument("GHZ test needs at least two parties");
  const double u = rng.uniform();
  const auto closer = static_cast<int>(rng.below(static_cast<std::uint64_t>(n)));
  std::vector<double> phases(static_cast<std::size_t>(n));
  double sum = 0;
  for (int j = 0; j < n; ++j) {
    const double p = draw_phase(s, rng);
    if (j == closer) continue;
    phases[j] = p;
    sum += p;
  }
  if (u < s.pz) return GhzTest::z_test();
  phases[closer] = wrap_phase(-sum);
  return GhzTest::phase_test(std::move(phases));
}

// Bell-equivalent distribution seen through the honest block.
inline Strategy effective_strategy(const GhzStrategy& s) {
  s.validate();
  if (s.law == PhaseLaw::ContinuousUniform) return make_named(Family::EquatorPlusZ, {.pz = s.pz});
  return make_named(Family::PolygonPlusZ, {.m = s.m, .pz = s.pz});
}

// ---------------------------------------------------------------------------
// Compatibility of local measurements with the GHZ state
// ---------------------------------------------------------------------------
inline bool is_compatible(std::span<const BlochVector> v, double tol = 1e-9) {
  if (v.size() < 2) throw std::invalid_argument("compatibility needs at least two parties");
  const bool all_z = std::all_of(v.begin(), v.end(), [&](const BlochVector& r) {
    return std::abs(std::abs(r.z()) - 1) <= tol;
  });
  if (all_z) return true;
  double sum = 0;
  for (const auto& r0 : v) {
    if (std::abs(r0.z()) > tol) return false;
    // r and -r are the same measurement up to labels
    BlochVector r = r0;
    if (r.x() < -tol || (std::abs(r.x()) <= tol && r.y() < 0)) r = -r;
    sum += std::atan2(r.y(), r.x());
  }
  return distance_to_multiple(sum, kPi) <= tol * static_cast<double>(v.size());
}

inline PureState ghz_state(int n) {
  if (n < 1 || n > 20) throw std::invalid_argument("GHZ size out of range");
  std::vector<cplx> a(std::size_t{1} << n);
  a.front() = a.back() = 1 / std::sqrt(2.0);
  return PureState(std::move(a));
}

// Brute force: condition every party on all outcome patterns of the others.
inline bool compatibility_oracle(std::span<const BlochVector> v, double tol = 1e-9) {
  const int n = static_cast<int>(v.size());
  if (n < 2) throw std::invalid_argument("compatibility needs at least two parties");
  if (n > 5) throw Unsupported("compatibility oracle limited to n <= 5");
  const PureState ghz_psi = ghz_state(n);
  const auto ghz = ghz_psi.amplitudes();
  const std::size_t dim = std::size_t{1} << n;

  std::vector<std::array<std::array<cplx, 2>, 2>> eig(n);  // eig[k][s] = eigenvector for outcome s
  for (int k = 0; k < n; ++k) {
    const PureState ps = qubit_state(v[k].vec()), ms = qubit_state((-v[k]).vec());
    const auto p = ps.amplitudes(), m = ms.amplitudes();
    eig[k][0] = {p[0], p[1]};
    eig[k][1] = {m[0], m[1]};
  }

  for (int j = 0; j < n; ++j) {
    bool seen_plus = false, seen_minus = false;
    for (std::size_t pattern = 0; pattern < (std::size_t{1} << (n - 1)); ++pattern) {
      // conditional (unnormalized) state of party j
      std::array<cplx, 2> psi{0, 0};
      for (std::size_t idx = 0; idx < dim; ++idx) {
        if (ghz[idx] == cplx{}) continue;
        cplx amp = ghz[idx];
        int bitpos = 0;
        for (int k = 0; k < n; ++k) {
          if (k == j) continue;
          const int s = static_cast<int>((pattern >> bitpos) & 1);
          ++bitpos;
          const int bit = static_cast<int>((idx >> (n - 1 - k)) & 1);
          amp *= std::conj(eig[k][s][bit]);
        }
        psi[(idx >> (n - 1 - j)) & 1] += amp;
      }
      const double n2 = std::norm(psi[0]) + std::norm(psi[1]);
      if (n2 < 1e-12) continue;
      const Vec3 bloch{2 * (std::conj(psi[0]) * psi[1]).real() / n2,
                       2 * (std::conj(psi[0]) * psi[1]).imag() / n2,
                       (std::norm(psi[0]) - std::norm(psi[1])) / n2};
      const double e = dot(bloch, v[j].vec());
      if (e >= 1 - tol) seen_plus = true;
      else if (e <= -1 + tol) seen_minus = true;
      else return false;
    }
    if (!seen_plus || !seen_minus) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------
// Phase observables
// ---------------------------------------------------------------------------
// X(phi) = e^{-i phi}|0><1| + e^{i phi}|1><0|
inline ComplexMatrix x_phase(double phi) {
  return ComplexMatrix{{0, std::polar(1.0, -phi)}, {std::polar(1.0, phi), 0}};
}

// X_H(phi) on V_H = span{|0...0>, |1...1>} of h qubits, zero elsewhere
inline ComplexMatrix x_block(int h, double phi) {
  const std::size_t d = std::size_t{1} << h;
  ComplexMatrix m(d, d);
  m(0, d - 1) = std::polar(1.0, -phi);
  m(d - 1, 0) = std::polar(1.0, phi);
  return m;
}

}  // namespace bellcert
