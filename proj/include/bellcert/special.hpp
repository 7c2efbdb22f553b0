// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cmath>
#include <stdexcept>
#include <vector>

#include "bellcert/qcore.hpp"

namespace bellcert {

// Complete elliptic integral of the second kind,
// E(k) = int_0^{pi/2} sqrt(1 - k^2 sin^2 t) dt, via the AGM.
inline double elliptic_e(double k) {
  if (!(k >= 0 && k <= 1)) throw std::invalid_argument("elliptic_e: k must lie in [0,1]");
  if (k == 1) return 1;
  double a = 1, b = std::sqrt(1 - k * k), c = k;
  double sum = 0.5 * c * c;  // 2^{n-1} c_n^2 at n = 0
  double pow2 = 0.5;
  for (int n = 0; n < 64 && std::abs(c) > 1e-17; ++n) {
    const double an = 0.5 * (a + b);
    const double bn = std::sqrt(a * b);
    c = 0.5 * (a - b);
    a = an;
    b = bn;
    pow2 *= 2;
    sum += pow2 * c * c;
  }
  const double K = kPi / (2 * a);
  return K * (1 - sum);
}

struct GaussLegendre {
  std::vector<double> x;  // nodes on [-1, 1]
  std::vector<double> w;
};

inline GaussLegendre gauss_legendre(int n) {
  if (n < 1) throw std::invalid_argument("gauss_legendre: n >= 1");
  GaussLegendre g{std::vector<double>(n), std::vector<double>(n)};
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double z = std::cos(kPi * (i + 0.75) / (n + 0.5));
    double dp = 0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1, p1 = 0;
      for (int j = 0; j < n; ++j) {
        const double p2 = p1;
        p1 = p0;
        p0 = ((2 * j + 1) * z * p1 - j * p2) / (j + 1);
      }
      dp = n * (z * p0 - p1) / (z * z - 1);
      const double dz = p0 / dp;
      z -= dz;
      if (std::abs(dz) < 1e-16) break;
    }
    g.x[i] = -z;
    g.x[n - 1 - i] = z;
    g.w[i] = g.w[n - 1 - i] = 2 / ((1 - z * z) * dp * dp);
  }
  return g;
}

inline const GaussLegendre& gl16() {
  static const GaussLegendre g = gauss_legendre(16);
  return g;
}

template <class F>
double integrate_gl(F&& f, double a, double b, const GaussLegendre& g = gl16()) {
  const double h = 0.5 * (b - a), m = 0.5 * (a + b);
  double s = 0;
  for (std::size_t i = 0; i < g.x.size(); ++i) s += g.w[i] * f(m + h * g.x[i]);
  return s * h;
}

// Composite Gauss-Legendre on [a, b] with panels shrinking geometrically
// toward b. Handles integrands like sqrt(c^2 + (b-x)^2) for tiny c.
template <class F>
double integrate_graded(F&& f, double a, double b) {
  double s = 0, hi = b, width = b - a;
  double lo = a;
  // panel edges at b - width * 8^-k
  for (int k = 0; k < 18; ++k) {
    const double edge = b - width * std::pow(8.0, -(k + 1));
    s += integrate_gl(f, lo, edge);
    lo = edge;
  }
  s += integrate_gl(f, lo, hi);
  return s;
}

}  // namespace bellcert
