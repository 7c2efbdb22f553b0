// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <cstdint>
#include <string_view>
#include <vector>

#include "bellcert/errors.hpp"
#include "bellcert/qcore.hpp"
#include "bellcert/special.hpp"
#include "bellcert/strategy.hpp"

namespace bellcert {

// ---------------------------------------------------------------------------
// Helstrom discrimination of Bob's conditional states
// ---------------------------------------------------------------------------
struct HelstromResult {
  // (q + ||rho_+ - rho_-||_1) / 2, where q = tr(rho_+ + rho_-). For a qubit
  // Alice q = 1; for larger Alice the rounds outside the qubit support count
  // as failures, so the value is q * gamma(rho').
  double guess_prob = 0;
  ComplexMatrix optimal_effect;  // E_+ on Bob; Bob answers +1 on E_+
  ComplexMatrix rho_plus;        // unnormalized
  ComplexMatrix rho_minus;
  double q = 1;
};

// rho_pm = tr_A[(P_pm (+) 0) x I) rho] with P_pm = (I +- r.sigma)/2 on span{|0>,|1>}_A
inline std::pair<ComplexMatrix, ComplexMatrix> conditional_states(const ComplexMatrix& rho,
                                                                  std::size_t dim_a,
                                                                  const Vec3& r) {
  if (!rho.square() || dim_a < 2 || rho.rows() % dim_a != 0)
    throw std::invalid_argument("conditional states: bad bipartition");
  const std::size_t db = rho.rows() / dim_a;
  const ComplexMatrix rs = pauli_dot(r);
  ComplexMatrix plus(db, db), minus(db, db);
  for (std::size_t a = 0; a < 2; ++a)
    for (std::size_t ap = 0; ap < 2; ++ap) {
      const cplx id = (a == ap) ? 0.5 : 0.0;
      const cplx pp = id + 0.5 * rs(a, ap), pm = id - 0.5 * rs(a, ap);
      if (pp == cplx{} && pm == cplx{}) continue;
      for (std::size_t j = 0; j < db; ++j)
        for (std::size_t k = 0; k < db; ++k) {
          const cplx e = rho(ap * db + j, a * db + k);
          plus(j, k) += pp * e;
          minus(j, k) += pm * e;
        }
    }
  return {plus, minus};
}

inline HelstromResult helstrom(const ComplexMatrix& rho, std::size_t dim_a, const BlochVector& r) {
  auto [plus, minus] = conditional_states(rho, dim_a, r.vec());
  const std::size_t db = plus.rows();
  const ComplexMatrix delta = hermitian_part(plus - minus);
  const auto eig = detail::jacobi_eigen(delta);
  ComplexMatrix effect(db, db);
  double tn = 0;
  const double tie = 1e-13 * std::max(1.0, delta.max_abs());
  for (std::size_t k = 0; k < db; ++k) {
    tn += std::abs(eig.values[k]);
    if (eig.values[k] < -tie) continue;  // zero modes go to the + effect
    for (std::size_t i = 0; i < db; ++i)
      for (std::size_t j = 0; j < db; ++j)
        effect(i, j) += eig.vectors(i, k) * std::conj(eig.vectors(j, k));
  }
  HelstromResult out;
  out.q = plus.trace().real() + minus.trace().real();
  out.guess_prob = 0.5 * (out.q + tn);
  out.optimal_effect = std::move(effect);
  out.rho_plus = std::move(plus);
  out.rho_minus = std::move(minus);
  return out;
}

inline HelstromResult helstrom(const DensityOperator& rho, std::size_t dim_a, const BlochVector& r) {
  return helstrom(rho.matrix(), dim_a, r);
}

inline HelstromResult helstrom(const DensityOperator& rho, const BlochVector& r) {
  return helstrom(rho.matrix(), 2, r);
}

struct Quadrature {
  int equator_nodes = 256;  // periodic trapezoid
  int polar_nodes = 128;    // Gauss-Legendre in cos(theta)
  int azimuth_nodes = 64;   // trapezoid in phi for the isotropic law
};

inline double gamma_of_state(const DensityOperator& rho, std::size_t dim_a, const Strategy& mu,
                             const Quadrature& quad = {}) {
  const ComplexMatrix& m = rho.matrix();
  auto equator = [&]() {
    double s = 0;
    for (int k = 0; k < quad.equator_nodes; ++k)
      s += helstrom(m, dim_a, BlochVector::equatorial(2 * kPi * k / quad.equator_nodes)).guess_prob;
    return s / quad.equator_nodes;
  };
  switch (mu.support()) {
    case Support::Discrete: {
      double s = 0;
      for (const auto& a : mu.atoms()) s += a.w * helstrom(m, dim_a, a.r).guess_prob;
      return s;
    }
    case Support::Equator:
      return equator();
    case Support::EquatorPlusZ: {
      const double pz = mu.pz();
      double s = 0;
      if (pz > 0) s += pz * helstrom(m, dim_a, BlochVector(0, 0, 1)).guess_prob;
      if (pz < 1) s += (1 - pz) * equator();
      return s;
    }
    case Support::Isotropic: {
      const auto gl = gauss_legendre(quad.polar_nodes);
      double s = 0;
      for (std::size_t i = 0; i < gl.x.size(); ++i) {
        const double z = gl.x[i], st = std::sqrt(std::max(0.0, 1 - z * z));
        double ring = 0;
        for (int k = 0; k < quad.azimuth_nodes; ++k) {
          const double phi = 2 * kPi * k / quad.azimuth_nodes;
          ring += helstrom(m, dim_a, BlochVector::from({st * std::cos(phi), st * std::sin(phi), z}))
                      .guess_prob;
        }
        s += gl.w[i] * ring / quad.azimuth_nodes;
      }
      return s / 2;
    }
  }
  throw std::logic_error("unreachable");
}

inline double gamma_of_state(const DensityOperator& rho, const Strategy& mu, const Quadrature& quad = {}) {
  return gamma_of_state(rho, 2, mu, quad);
}

// ---------------------------------------------------------------------------
// Reports
// ---------------------------------------------------------------------------
enum class Method { ClosedForm, Conjectured, Enumeration, Oracle };
enum class Degeneracy { None, GreatCircle, Cone, Sphere };

inline std::string_view method_name(Method m) {
  switch (m) {
    case Method::ClosedForm: return "closed-form";
    case Method::Conjectured: return "conjecture";
    case Method::Enumeration: return "enumeration";
    case Method::Oracle: return "oracle";
  }
  return "?";
}

inline std::string_view degeneracy_name(Degeneracy d) {
  switch (d) {
    case Degeneracy::None: return "none";
    case Degeneracy::GreatCircle: return "great-circle";
    case Degeneracy::Cone: return "cone";
    case Degeneracy::Sphere: return "sphere";
  }
  return "?";
}

// value holds g(C, mu); the guessing probability is (1 + g)/2.
struct GuessReport {
  double value = 0;
  std::vector<BlochVector> intelligent_directions;
  Method method = Method::ClosedForm;
  // when not None, intelligent_directions holds representatives of a continuum
  Degeneracy degeneracy = Degeneracy::None;

  double gamma() const { return 0.5 * (1 + value); }
};

namespace detail {

inline Vec3 canonical_axis(Vec3 v) {
  for (double c : v) {
    if (std::abs(c) < 1e-12) continue;
    if (c < 0) v = -v;
    break;
  }
  return v;
}

inline double axis_angle(const Vec3& a, const Vec3& b) {
  const double c = std::abs(dot(a, b));
  return std::atan2(norm(cross(a, b)), c);
}

// Both signs of each axis, deduplicated, in a fixed order.
inline std::vector<BlochVector> signed_directions(const std::vector<Vec3>& axes, double merge = 1e-9) {
  std::vector<Vec3> uniq;
  for (const auto& a : axes) {
    const Vec3 c = canonical_axis(normalized(a));
    bool seen = false;
    for (const auto& u : uniq)
      if (axis_angle(u, c) < merge) seen = true;
    if (!seen) uniq.push_back(c);
  }
  std::sort(uniq.begin(), uniq.end(), [](const Vec3& a, const Vec3& b) {
    for (int i = 0; i < 3; ++i)
      if (std::abs(a[i] - b[i]) > 1e-12) return a[i] > b[i];
    return false;
  });
  std::vector<BlochVector> out;
  for (const auto& u : uniq) {
    out.push_back(BlochVector::from(u));
    out.push_back(BlochVector::from(-u));
  }
  return out;
}

inline double g_isotropic(double C) {
  if (C >= 1) return 1;
  if (C <= 0) return 0.5;
  const double s2 = (1 - C) * (1 + C);
  if (C > 1 - 1e-6) {
    // series of int_0^1 sqrt(C^2 + s^2 x^2) dx in s^2
    return C + s2 / (6 * C) - s2 * s2 / (40 * C * C * C) + s2 * s2 * s2 / (112 * std::pow(C, 5));
  }
  const double s = std::sqrt(s2);
  return 0.5 + C * C * std::asinh(s / C) / (2 * s);
}

inline double g_equator(double C) {
  if (C >= 1) return 1;
  return 2 / kPi * elliptic_e(std::sqrt((1 - C) * (1 + C)));
}

inline double g_star_polygon(int m) {
  return (m % 2 == 0) ? 2 / (m * std::sin(kPi / m)) : 1 / (m * std::sin(kPi / (2 * m)));
}

inline double g_polygon_formula(int m, double C) {
  double s = 0;
  const double c2 = C * C;
  for (int j = 0; j < m; ++j) {
    const double ang = (m % 4 == 0) ? (2 * j - 1) * kPi / m : 2 * j * kPi / m;
    const double c = std::cos(ang);
    s += std::sqrt(c2 + (1 - c2) * c * c);
  }
  return s / m;
}

// azimuths of the polygon's intelligent directions at C = 0
inline std::vector<Vec3> polygon_axes(int m) {
  std::vector<Vec3> axes;
  for (int j = 0; j < m; ++j) {
    const double ang = (m % 4 == 0) ? (2 * j - 1) * kPi / m : 2 * j * kPi / m;
    axes.push_back({std::cos(ang), std::sin(ang), 0});
  }
  return axes;
}

// Tilted directions for an equatorial family plus poles at C = 0.
inline std::vector<Vec3> tilted_axes(const std::vector<Vec3>& equatorial, double p, double g_eq) {
  const double alpha = std::atan2((1 - p) * g_eq, p);
  std::vector<Vec3> axes;
  for (const auto& u : equatorial) {
    axes.push_back({std::sin(alpha) * u[0], std::sin(alpha) * u[1], std::cos(alpha)});
    axes.push_back({std::sin(alpha) * u[0], std::sin(alpha) * u[1], -std::cos(alpha)});
  }
  return axes;
}

inline std::vector<Vec3> atom_vectors(const Strategy& mu) {
  std::vector<Vec3> v;
  for (const auto& a : mu.atoms()) v.push_back(a.r.vec());
  return v;
}

}  // namespace detail

inline double optimal_pz_equator_plus_z() { return 4 / (4 + kPi * kPi); }

inline double optimal_pz_polygon_plus_z(int m) {
  if (m < 3) throw std::invalid_argument("polygon needs M >= 3");
  return (m % 2 == 0) ? 1 / (1 + 0.25 * m * m * std::pow(std::sin(kPi / m), 2))
                      : 1 / (1 + m * m * std::pow(std::sin(kPi / (2 * m)), 2));
}

// Closed-form g(C, mu) for the named protocols. Throws Unsupported when no
// closed form exists; the caller then uses g_oracle.
inline GuessReport g_closed(const Strategy& mu, double C) {
  using namespace detail;
  if (!(C >= 0 && C <= 1)) throw std::invalid_argument("concurrence must lie in [0,1]");
  GuessReport r;
  if (mu.family() == Family::Discrete)
    throw Unsupported("no closed form for an arbitrary discrete strategy");
  if (C == 1) {
    r.value = 1;
    r.degeneracy = Degeneracy::Sphere;
    r.intelligent_directions = {BlochVector(0, 0, 1)};
    return r;
  }
  const double c2 = C * C;
  const auto& p = mu.params();
  switch (mu.family()) {
    case Family::XY:
      r.value = std::sqrt((1 + c2) / 2);
      r.intelligent_directions = signed_directions({{1, 1, 0}, {1, -1, 0}});
      return r;
    case Family::XYZ:
    case Family::Octahedron:
      r.value = std::sqrt((1 + 2 * c2) / 3);
      r.intelligent_directions = signed_directions({{1, 1, 1}, {1, 1, -1}, {1, -1, 1}, {-1, 1, 1}});
      return r;
    case Family::Tetrahedron:
    case Family::Cube:
      r.value = std::sqrt((1 + 2 * c2) / 3);
      r.intelligent_directions = signed_directions({{1, 0, 0}, {0, 1, 0}, {0, 0, 1}});
      return r;
    case Family::Isotropic:
      r.value = g_isotropic(C);
      r.degeneracy = Degeneracy::Sphere;
      r.intelligent_directions = {BlochVector(0, 0, 1)};
      return r;
    case Family::Equator:
      r.value = g_equator(C);
      r.degeneracy = Degeneracy::GreatCircle;
      r.intelligent_directions = {BlochVector(1, 0, 0)};
      return r;
    case Family::Polygon: {
      const int m = *p.m;
      r.intelligent_directions = signed_directions(polygon_axes(m));
      if (C == 0) {
        r.value = g_star_polygon(m);
      } else if (m == 3) {
        r.value = (1 + std::sqrt(1 + 3 * c2)) / 3;
      } else {
        r.value = g_polygon_formula(m, C);
        if (m != 4) r.method = Method::Conjectured;
      }
      return r;
    }
    case Family::PolygonPlusZ: {
      const int m = *p.m;
      const double pz = *p.pz;
      if (pz == 0) return g_closed(make_named(Family::Polygon, {.m = m}), C);
      if (pz == 1) {
        r.value = 1;
        r.intelligent_directions = signed_directions({{0, 0, 1}});
        return r;
      }
      if (C > 0) throw Unsupported("PolygonPlusZ has no closed form for C > 0");
      const double gm = g_star_polygon(m);
      r.value = std::sqrt(pz * pz + (1 - pz) * (1 - pz) * gm * gm);
      r.intelligent_directions = signed_directions(tilted_axes(polygon_axes(m), pz, gm));
      return r;
    }
    case Family::EquatorPlusZ:
    case Family::EquatorPlusZII: {
      const double pz = mu.pz();
      if (pz == 0) return g_closed(make_named(Family::Equator), C);
      if (pz == 1) {
        r.value = 1;
        r.intelligent_directions = signed_directions({{0, 0, 1}});
        return r;
      }
      if (C > 0) throw Unsupported("EquatorPlusZ has no closed form for C > 0");
      r.value = std::sqrt(pz * pz + 4 * (1 - pz) * (1 - pz) / (kPi * kPi));
      r.degeneracy = Degeneracy::Cone;
      r.intelligent_directions = signed_directions(tilted_axes({{1, 0, 0}}, pz, 2 / kPi));
      return r;
    }
    case Family::Icosahedron:
      r.value = C == 0 ? (1 + std::sqrt(5.0)) / 6 : (1 + std::sqrt(5 * (1 + 4 * c2))) / 6;
      if (C > 0) r.method = Method::Conjectured;
      r.intelligent_directions = signed_directions(atom_vectors(mu));
      return r;
    case Family::Dodecahedron:
      r.value = C == 0 ? (3 + std::sqrt(5.0)) / 10
                       : (1 + std::sqrt(5 + 4 * c2) + 2 * std::sqrt(1 + 8 * c2)) / 10;
      if (C > 0) r.method = Method::Conjectured;
      r.intelligent_directions = signed_directions(atom_vectors(mu));
      return r;
    case Family::TwoSetting: {
      const double alpha = *p.alpha, p1 = *p.p1;
      const Vec3 r1{1, 0, 0}, r2{std::cos(alpha), std::sin(alpha), 0};
      if (std::abs(p1 - 0.5) < 1e-15) {
        r.value = std::sqrt((1 + c2 + (1 - c2) * std::cos(alpha)) / 2);
        std::vector<Vec3> axes{r1 + r2};
        if (std::abs(std::cos(alpha)) < 1e-12) axes.push_back(r1 - r2);
        r.intelligent_directions = signed_directions(axes);
        return r;
      }
      if (C > 0) throw Unsupported("TwoSetting with unequal weights has no closed form for C > 0");
      const Vec3 a = p1 * r1 + (1 - p1) * r2, b = p1 * r1 - (1 - p1) * r2;
      r.value = std::max(norm(a), norm(b));
      std::vector<Vec3> axes;
      if (norm(a) >= r.value - 1e-15) axes.push_back(a);
      if (norm(b) >= r.value - 1e-15) axes.push_back(b);
      r.intelligent_directions = signed_directions(axes);
      return r;
    }
    case Family::Discrete:
      break;
  }
  throw Unsupported("no closed form");
}

// ---------------------------------------------------------------------------
// Numeric oracle
// ---------------------------------------------------------------------------

// F(v) = int dmu(r) sqrt(C^2 |v|^2 + (1-C^2)(r.v)^2), convex and 1-homogeneous;
// on the unit sphere this is the objective of the guessing maximization.
class SphereObjective {
 public:
  SphereObjective(const Strategy& mu, double C) : mu_(mu), c2_(C * C) {
    if (!(C >= 0 && C <= 1)) throw std::invalid_argument("concurrence must lie in [0,1]");
    if (mu.support() == Support::Isotropic) {
      // int_0^1 sqrt(C^2 + (1-C^2) x^2) dx, graded toward x = 0
      iso_value_ = integrate_graded([&](double y) { return std::sqrt(c2_ + (1 - c2_) * (1 - y) * (1 - y)); },
                                    0.0, 1.0);
    }
  }

  double value(const Vec3& v) const {
    switch (mu_.support()) {
      case Support::Discrete: {
        double s = 0;
        for (const auto& a : mu_.atoms()) {
          const double d = dot(a.r.vec(), v);
          s += a.w * std::sqrt(c2_ + (1 - c2_) * d * d);
        }
        return s;
      }
      case Support::Isotropic:
        return iso_value_;
      case Support::Equator:
        return ring_value(std::hypot(v[0], v[1]));
      case Support::EquatorPlusZ: {
        const double pz = mu_.pz();
        double s = 0;
        if (pz > 0) s += pz * std::sqrt(c2_ + (1 - c2_) * v[2] * v[2]);
        if (pz < 1) s += (1 - pz) * ring_value(std::hypot(v[0], v[1]));
        return s;
      }
    }
    return 0;
  }

  // gradient of the homogeneous extension at a unit vector
  Vec3 gradient(const Vec3& v) const {
    auto term = [&](const Vec3& r, double w) -> Vec3 {
      const double d = dot(r, v);
      const double den = std::sqrt(c2_ + (1 - c2_) * d * d);
      if (den == 0) return {0, 0, 0};
      return (w / den) * (c2_ * v + ((1 - c2_) * d) * r);
    };
    switch (mu_.support()) {
      case Support::Discrete: {
        Vec3 g{0, 0, 0};
        for (const auto& a : mu_.atoms()) g = g + term(a.r.vec(), a.w);
        return g;
      }
      case Support::Isotropic:
        return iso_value_ * v;
      case Support::Equator:
        return ring_gradient(v);
      case Support::EquatorPlusZ: {
        const double pz = mu_.pz();
        Vec3 g{0, 0, 0};
        if (pz > 0) g = g + term({0, 0, 1}, pz);
        if (pz < 1) g = g + (1 - pz) * ring_gradient(v);
        return g;
      }
    }
    return {0, 0, 0};
  }

 private:
  // uniform equator average as a function of s = |v_xy|
  double ring_value(double s) const {
    if (c2_ == 0) return 2 / kPi * s;
    return 2 / kPi *
           integrate_graded([&](double t) {
             const double c = std::cos(t);
             return std::sqrt(c2_ + (1 - c2_) * s * s * c * c);
           }, 0.0, kPi / 2);
  }

  Vec3 ring_gradient(const Vec3& v) const {
    const double s = std::hypot(v[0], v[1]);
    double a = 0, b = 0;
    if (c2_ == 0) {
      a = 2 / kPi;  // d/ds of (2/pi) s
    } else {
      a = 2 / kPi * integrate_graded([&](double t) {
            const double c = std::cos(t);
            return s * c * c / std::sqrt(c2_ + (1 - c2_) * s * s * c * c);
          }, 0.0, kPi / 2);
      b = 2 / kPi * integrate_graded([&](double t) {
            const double c = std::cos(t);
            return 1 / std::sqrt(c2_ + (1 - c2_) * s * s * c * c);
          }, 0.0, kPi / 2);
    }
    Vec3 g = (c2_ * b) * v;
    if (s > 0) g = g + ((1 - c2_) * a / s) * Vec3{v[0], v[1], 0};
    return g;
  }

  const Strategy& mu_;
  double c2_;
  double iso_value_ = 0;
};

struct OracleOptions {
  int lattice_points = 20000;
  int top_k = 8;          // seeds refined for the value
  int max_seeds = 64;     // seeds refined for direction enumeration
  int iterations = 50;    // outer refinement iterations
  double cluster_angle = 1e-3;
};

namespace detail {

inline Vec3 fibonacci_point(int i, int n) {
  const double golden_angle = kPi * (3 - std::sqrt(5.0));
  const double z = 1 - (2.0 * i + 1) / n;
  const double r = std::sqrt(std::max(0.0, 1 - z * z));
  const double phi = golden_angle * i;
  return {r * std::cos(phi), r * std::sin(phi), z};
}

// orthonormal tangent basis at unit v
inline std::pair<Vec3, Vec3> tangent_basis(const Vec3& v) {
  const Vec3 helper = std::abs(v[0]) < 0.9 ? Vec3{1, 0, 0} : Vec3{0, 1, 0};
  const Vec3 e1 = normalized(cross(v, helper));
  return {e1, cross(v, e1)};
}

inline Vec3 rotate_toward(const Vec3& v, const Vec3& t, double angle) {
  return normalized(std::cos(angle) * v + std::sin(angle) * t);
}

struct Refined {
  Vec3 v;
  double f;
};

template <class Obj>
Refined refine(const Obj& obj, Vec3 v, int iterations) {
  double f = obj.value(v);
  double step = 0.03;
  constexpr double kInvPhi = 0.6180339887498949;
  for (int it = 0; it < iterations && step > 1e-11; ++it) {
    bool improved = false;
    // monotone fixed-point ascent v <- grad F(v) / |grad F(v)|
    for (int k = 0; k < 200; ++k) {
      const Vec3 g = obj.gradient(v);
      const double gn = norm(g);
      if (!(gn > 0)) break;
      const Vec3 w = (1 / gn) * g;
      const double fw = obj.value(w);
      if (!(fw > f)) break;
      const double gain = fw - f;
      v = w;
      f = fw;
      improved = true;
      if (gain < 1e-16) break;
    }
    // golden-section line searches along tangent directions
    auto [e1, e2] = tangent_basis(v);
    const std::array<Vec3, 4> dirs{e1, e2, normalized(e1 + e2), normalized(e1 - e2)};
    for (const auto& t : dirs) {
      double lo = -step, hi = step;
      double x1 = hi - kInvPhi * (hi - lo), x2 = lo + kInvPhi * (hi - lo);
      double f1 = obj.value(rotate_toward(v, t, x1)), f2 = obj.value(rotate_toward(v, t, x2));
      for (int k = 0; k < 40; ++k) {
        if (f1 < f2) {
          lo = x1;
          x1 = x2;
          f1 = f2;
          x2 = lo + kInvPhi * (hi - lo);
          f2 = obj.value(rotate_toward(v, t, x2));
        } else {
          hi = x2;
          x2 = x1;
          f2 = f1;
          x1 = hi - kInvPhi * (hi - lo);
          f1 = obj.value(rotate_toward(v, t, x1));
        }
      }
      const double xb = f1 > f2 ? x1 : x2;
      const Vec3 w = rotate_toward(v, t, xb);
      const double fw = obj.value(w);
      if (fw > f) {
        v = w;
        f = fw;
        improved = true;
      }
    }
    step *= improved ? 0.7 : 0.25;
  }
  return {v, f};
}

}  // namespace detail

inline GuessReport g_oracle(const Strategy& mu, double C, double tol = 1e-8,
                            const OracleOptions& opt = {}) {
  using namespace detail;
  const SphereObjective obj(mu, C);
  const int n = opt.lattice_points;

  std::vector<double> vals(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) vals[i] = obj.value(fibonacci_point(i, n));
  std::vector<int> order(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return vals[a] > vals[b]; });

  // Seeds: best lattice points, pairwise separated as axes.
  const double spacing = std::sqrt(4 * kPi / n);
  const double sep = 2 * spacing, margin = 2 * spacing;
  const double top = vals[order[0]];
  std::vector<Vec3> seeds;
  for (int idx : order) {
    if (static_cast<int>(seeds.size()) >= opt.max_seeds) break;
    if (static_cast<int>(seeds.size()) >= opt.top_k && vals[idx] < top - margin) break;
    const Vec3 p = fibonacci_point(idx, n);
    bool far = true;
    for (const auto& s : seeds)
      if (axis_angle(s, p) < sep) {
        far = false;
        break;
      }
    if (far) seeds.push_back(p);
  }

  std::vector<Refined> refined;
  for (const auto& s : seeds) refined.push_back(refine(obj, s, opt.iterations));
  double best = -1;
  Vec3 best_v{0, 0, 1};
  for (const auto& r : refined)
    if (r.f > best) {
      best = r.f;
      best_v = r.v;
    }

  // Stationarity probe around the winner.
  {
    auto [e1, e2] = tangent_basis(best_v);
    for (int k = 0; k < 16; ++k) {
      const double a = 2 * kPi * k / 16;
      const Vec3 t = normalized(std::cos(a) * e1 + std::sin(a) * e2);
      const double f = obj.value(rotate_toward(best_v, t, 1e-4));
      if (f > best + std::max(tol, 1e-12))
        throw NumericFailure("oracle refinement did not converge", best);
    }
  }

  GuessReport rep;
  rep.value = best;
  rep.method = Method::Oracle;

  // Continuum test: does the maximal set extend along some tangent direction?
  // True continua are flat to rounding, so the threshold is far below tol.
  constexpr double kFlat = 1e-11;
  auto [e1, e2] = tangent_basis(best_v);
  int flat = 0;
  Vec3 flat_dir{0, 0, 0};
  constexpr int kProbes = 12;
  for (int k = 0; k < kProbes; ++k) {
    const double a = kPi * k / kProbes;
    const Vec3 t = normalized(std::cos(a) * e1 + std::sin(a) * e2);
    const double fp = obj.value(rotate_toward(best_v, t, 0.05));
    const double fm = obj.value(rotate_toward(best_v, t, -0.05));
    if (fp >= best - kFlat && fm >= best - kFlat) {
      ++flat;
      flat_dir = t;
    }
  }
  if (flat == kProbes) {
    rep.degeneracy = Degeneracy::Sphere;
    rep.intelligent_directions = {BlochVector::from(best_v)};
    return rep;
  }
  if (flat > 0) {
    // great circle through best_v along flat_dir?
    const Vec3 quarter = rotate_toward(best_v, flat_dir, kPi / 2);
    rep.degeneracy = obj.value(quarter) >= best - kFlat ? Degeneracy::GreatCircle : Degeneracy::Cone;
    rep.intelligent_directions = {BlochVector::from(best_v)};
    return rep;
  }
  // Circles that are not geodesics: spin best_v about the principal axes of Xi.
  const auto axes_xi = symmetric_eigen3(verification_matrix(mu).xi).second;
  for (const auto& u : axes_xi) {
    const double c = dot(u, best_v);
    if (std::abs(c) > 1 - 1e-6) continue;
    bool on_circle = true;
    for (double a : {0.3, 1.1, 2.5}) {
      // Rodrigues rotation about u
      const Vec3 w = std::cos(a) * best_v + std::sin(a) * cross(u, best_v) + ((1 - std::cos(a)) * c) * u;
      if (obj.value(w) < best - kFlat) on_circle = false;
    }
    if (on_circle) {
      rep.degeneracy = std::abs(c) < 1e-6 ? Degeneracy::GreatCircle : Degeneracy::Cone;
      rep.intelligent_directions = {BlochVector::from(best_v)};
      return rep;
    }
  }

  std::vector<Vec3> axes;
  for (const auto& r : refined) {
    if (r.f < best - tol) continue;
    bool merged = false;
    for (const auto& a : axes)
      if (axis_angle(a, r.v) < opt.cluster_angle) merged = true;
    if (!merged) axes.push_back(r.v);
  }
  rep.intelligent_directions = signed_directions(axes, opt.cluster_angle);
  return rep;
}

// ---------------------------------------------------------------------------
// Exact C = 0 value for discrete strategies via center-symmetric enumeration
// ---------------------------------------------------------------------------
inline GuessReport g_star_center_symmetric(const Strategy& mu) {
  if (!mu.is_discrete()) throw std::invalid_argument("enumeration needs a discrete strategy");
  const Strategy sym = symmetrize(mu);
  // one representative per antipodal pair
  std::vector<Vec3> u;
  std::vector<bool> used(sym.atoms().size(), false);
  for (std::size_t i = 0; i < sym.atoms().size(); ++i) {
    if (used[i]) continue;
    used[i] = true;
    const auto& a = sym.atoms()[i];
    for (std::size_t j = i + 1; j < sym.atoms().size(); ++j)
      if (!used[j] && (-a.r).angle_to(sym.atoms()[j].r) <= 1e-9) {
        used[j] = true;
        break;
      }
    u.push_back(a.w * a.r.vec());
  }
  const std::size_t m = u.size();
  if (m > 24) throw Unsupported("too many antipodal pairs for exhaustive enumeration");

  Vec3 s{0, 0, 0};
  for (const auto& x : u) s = s + x;
  std::vector<int> sign(m, 1);
  double best2 = dot(s, s);
  std::vector<Vec3> argmax{s};
  const std::uint64_t states = std::uint64_t{1} << (m - 1);
  for (std::uint64_t i = 1; i < states; ++i) {
    const int bit = std::countr_zero(i) + 1;  // flip pairs 1..m-1, pair 0 fixed
    s = s - (2.0 * sign[bit]) * u[bit];
    sign[bit] = -sign[bit];
    const double n2 = dot(s, s);
    if (n2 > best2 * (1 + 1e-12)) {
      best2 = n2;
      argmax.assign(1, s);
    } else if (n2 >= best2 * (1 - 1e-12)) {
      argmax.push_back(s);
    }
  }
  GuessReport rep;
  rep.value = 2 * std::sqrt(best2);
  rep.method = Method::Enumeration;
  rep.intelligent_directions = detail::signed_directions(argmax);
  return rep;
}

// ---------------------------------------------------------------------------
// Best-available routes
// ---------------------------------------------------------------------------

// g(C, mu): proven closed form when one exists, otherwise the oracle.
inline GuessReport g_report(const Strategy& mu, double C) {
  try {
    auto r = g_closed(mu, C);
    if (r.method == Method::ClosedForm) return r;
  } catch (const Unsupported&) {
  }
  if (C == 0 && mu.is_discrete()) {
    try {
      return g_star_center_symmetric(mu);
    } catch (const Unsupported&) {
    }
  }
  return g_oracle(mu, C);
}

inline double g_value(const Strategy& mu, double C) { return g_report(mu, C).value; }
inline double gamma2(const Strategy& mu, double C) { return 0.5 * (1 + g_value(mu, C)); }
inline double g_star(const Strategy& mu) { return g_value(mu, 0); }
inline double gamma_star(const Strategy& mu) { return 0.5 * (1 + g_star(mu)); }

inline double gamma_hat(const Strategy& mu, double C) {
  if (!(C >= 0 && C <= 1)) throw std::invalid_argument("concurrence must lie in [0,1]");
  return (1 - C) * gamma_star(mu) + C;
}

inline double gamma_fidelity(const Strategy& mu, double F) {
  if (!(F >= 0 && F <= 1)) throw std::invalid_argument("fidelity must lie in [0,1]");
  if (F < 0.5) return 2 * gamma_star(mu) * F;
  return gamma2(mu, 2 * F - 1);
}

inline double gme_threshold(const Strategy& mu) { return gamma_star(mu); }

struct XiBounds {
  double lower;
  double upper;
};

inline XiBounds xi_bounds(const Strategy& mu, double C) {
  if (!(C >= 0 && C <= 1)) throw std::invalid_argument("concurrence must lie in [0,1]");
  const double xn = verification_matrix(mu).norm();
  return {xn + (1 - xn) * C, std::sqrt(C * C + (1 - C * C) * xn)};
}

struct ReductionCheck {
  double q;         // weight of Alice's qubit support
  double guessing;  // q * gamma(rho', mu)
  double concurrence;
  double bound;     // gamma_2(C(rho), mu)
  bool holds;
};

inline ReductionCheck higher_dim_reduction_details(const PureState& psi, std::size_t dim_a,
                                                   std::size_t dim_b, const Strategy& mu) {
  if (dim_a < 3) throw std::invalid_argument("reduction check needs d_A >= 3");
  if (dim_a * dim_b != psi.dim()) throw std::invalid_argument("bipartition does not match state");
  const DensityOperator rho(psi);
  const std::array<std::size_t, 2> dims{dim_a, dim_b};
  const std::array<std::size_t, 1> keep{0};
  const ComplexMatrix ra = partial_trace(rho.matrix(), dims, keep);
  ReductionCheck out{};
  out.q = (ra(0, 0) + ra(1, 1)).real();
  out.guessing = gamma_of_state(rho, dim_a, mu);
  out.concurrence = pure_concurrence(psi, dim_a, dim_b);
  out.bound = gamma2(mu, out.concurrence);
  out.holds = out.guessing <= out.bound + 1e-9;
  return out;
}

inline bool higher_dim_reduction_check(const PureState& psi, std::size_t dim_a, std::size_t dim_b,
                                       const Strategy& mu) {
  return higher_dim_reduction_details(psi, dim_a, dim_b, mu).holds;
}

}  // namespace bellcert
