// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <cmath>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "bellcert/qcore.hpp"

namespace bellcert {

class BlochVector {
 public:
  BlochVector() : v_{0, 0, 1} {}
  BlochVector(double x, double y, double z) : v_{x, y, z} {
    if (std::abs(dot(v_, v_) - 1) > 1e-12)
      throw std::invalid_argument("Bloch vector must have unit length");
  }
  explicit BlochVector(const Vec3& v) : BlochVector(v[0], v[1], v[2]) {}

  static BlochVector from(const Vec3& v) {
    const Vec3 u = bellcert::normalized(v);
    return BlochVector(u[0], u[1], u[2]);
  }
  static BlochVector from_angles(double theta, double phi) {
    return BlochVector(std::sin(theta) * std::cos(phi), std::sin(theta) * std::sin(phi),
                       std::cos(theta));
  }
  // equatorial X(phi) measurement direction
  static BlochVector equatorial(double phi) {
    return BlochVector(std::cos(phi), std::sin(phi), 0);
  }

  double x() const noexcept { return v_[0]; }
  double y() const noexcept { return v_[1]; }
  double z() const noexcept { return v_[2]; }
  const Vec3& vec() const noexcept { return v_; }
  BlochVector operator-() const { return BlochVector(-v_[0], -v_[1], -v_[2]); }

  double angle_to(const BlochVector& o) const {
    // atan2 form stays accurate for tiny angles
    return std::atan2(norm(cross(v_, o.v_)), dot(v_, o.v_));
  }

 private:
  Vec3 v_;
};

inline double dot(const BlochVector& a, const Vec3& v) { return dot(a.vec(), v); }

struct Atom {
  BlochVector r;
  double w = 0;
};

enum class Support { Discrete, Isotropic, Equator, EquatorPlusZ };

enum class Family {
  Discrete,
  XY,
  XYZ,
  Isotropic,
  Equator,
  Polygon,
  EquatorPlusZ,
  PolygonPlusZ,
  Tetrahedron,
  Octahedron,
  Cube,
  Icosahedron,
  Dodecahedron,
  EquatorPlusZII,
  TwoSetting,
};

struct StrategyParams {
  std::optional<int> m;
  std::optional<double> pz;
  std::optional<double> alpha;
  std::optional<double> p1;

  bool operator==(const StrategyParams&) const = default;
};

inline std::string_view family_name(Family f) {
  switch (f) {
    case Family::Discrete: return "Discrete";
    case Family::XY: return "XY";
    case Family::XYZ: return "XYZ";
    case Family::Isotropic: return "Isotropic";
    case Family::Equator: return "Equator";
    case Family::Polygon: return "Polygon";
    case Family::EquatorPlusZ: return "EquatorPlusZ";
    case Family::PolygonPlusZ: return "PolygonPlusZ";
    case Family::Tetrahedron: return "Tetrahedron";
    case Family::Octahedron: return "Octahedron";
    case Family::Cube: return "Cube";
    case Family::Icosahedron: return "Icosahedron";
    case Family::Dodecahedron: return "Dodecahedron";
    case Family::EquatorPlusZII: return "EquatorPlusZII";
    case Family::TwoSetting: return "TwoSetting";
  }
  return "?";
}

inline Family parse_family(std::string_view name) {
  auto lower = [](std::string_view s) {
    std::string o(s);
    for (auto& c : o) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    o.erase(std::remove_if(o.begin(), o.end(), [](char c) { return c == '_' || c == '-' || c == '+' || c == ' '; }),
            o.end());
    return o;
  };
  const std::string key = lower(name);
  for (int f = 0; f <= static_cast<int>(Family::TwoSetting); ++f) {
    const auto fam = static_cast<Family>(f);
    if (lower(family_name(fam)) == key) return fam;
  }
  if (key == "equatorplusz2" || key == "equatorzii") return Family::EquatorPlusZII;
  if (key == "equatorz") return Family::EquatorPlusZ;
  if (key == "polygonz") return Family::PolygonPlusZ;
  throw std::invalid_argument("unknown protocol name: " + std::string(name));
}

class Strategy {
 public:
  // Arbitrary weighted set. Zero-weight atoms are dropped.
  static Strategy discrete(std::vector<Atom> atoms) {
    Strategy s;
    s.family_ = Family::Discrete;
    s.support_ = Support::Discrete;
    s.set_atoms(std::move(atoms));
    return s;
  }

  Family family() const noexcept { return family_; }
  Support support() const noexcept { return support_; }
  const StrategyParams& params() const noexcept { return params_; }
  bool is_discrete() const noexcept { return support_ == Support::Discrete; }
  std::span<const Atom> atoms() const noexcept { return atoms_; }
  // weight of the +z pole for EquatorPlusZ support, else 0
  double pz() const noexcept { return params_.pz.value_or(0.0); }

  std::string name() const {
    std::string n(family_name(family_));
    auto num = [](double v) {
      char buf[32];
      std::snprintf(buf, sizeof buf, "%.6g", v);
      return std::string(buf);
    };
    std::vector<std::string> args;
    if (params_.m) args.push_back("M=" + std::to_string(*params_.m));
    if (params_.pz && family_ != Family::EquatorPlusZII) args.push_back("pZ=" + num(*params_.pz));
    if (params_.alpha) args.push_back("alpha=" + num(*params_.alpha));
    if (params_.p1) args.push_back("p1=" + num(*params_.p1));
    if (!args.empty()) {
      n += "(";
      for (std::size_t i = 0; i < args.size(); ++i) n += (i ? "," : "") + args[i];
      n += ")";
    }
    return n;
  }

  bool operator==(const Strategy& o) const {
    if (family_ != o.family_ || support_ != o.support_ || params_ != o.params_) return false;
    if (atoms_.size() != o.atoms_.size()) return false;
    for (std::size_t i = 0; i < atoms_.size(); ++i) {
      if (norm(atoms_[i].r.vec() - o.atoms_[i].r.vec()) > 1e-12) return false;
      if (std::abs(atoms_[i].w - o.atoms_[i].w) > 1e-12) return false;
    }
    return true;
  }

  // Used by make_named only.
  static Strategy make(Family f, Support s, StrategyParams p, std::vector<Atom> atoms) {
    Strategy st;
    st.family_ = f;
    st.support_ = s;
    st.params_ = p;
    if (s == Support::Discrete) st.set_atoms(std::move(atoms));
    return st;
  }

 private:
  void set_atoms(std::vector<Atom> atoms) {
    double total = 0;
    for (const auto& a : atoms) {
      if (!(a.w >= 0) || !std::isfinite(a.w))
        throw std::invalid_argument("atom weights must be nonnegative");
      total += a.w;
    }
    if (std::abs(total - 1) > 1e-12) throw std::invalid_argument("atom weights must sum to 1");
    atoms_.clear();
    for (auto& a : atoms)
      if (a.w > 0) atoms_.push_back(a);
    if (atoms_.empty()) throw std::invalid_argument("strategy needs at least one atom");
    cdf_.resize(atoms_.size());
    double acc = 0;
    for (std::size_t i = 0; i < atoms_.size(); ++i) cdf_[i] = (acc += atoms_[i].w);
  }

  Family family_ = Family::Discrete;
  Support support_ = Support::Discrete;
  StrategyParams params_;
  std::vector<Atom> atoms_;
  std::vector<double> cdf_;

  template <class Rng>
  friend std::size_t sample_atom(const Strategy&, Rng&);
};

namespace detail {

inline std::vector<Atom> uniform_atoms(const std::vector<Vec3>& pts) {
  std::vector<Atom> a;
  const double w = 1.0 / static_cast<double>(pts.size());
  for (const auto& p : pts) a.push_back({BlochVector::from(p), w});
  return a;
}

inline std::vector<Vec3> polygon_points(int m) {
  std::vector<Vec3> pts;
  for (int j = 0; j < m; ++j) {
    const double t = 2 * kPi * j / m;
    pts.push_back({std::cos(t), std::sin(t), 0});
  }
  return pts;
}

inline constexpr double kGolden = 1.6180339887498948482;

inline std::vector<Vec3> icosahedron_points() {
  const double t = kGolden;
  std::vector<Vec3> pts;
  for (double s1 : {1.0, -1.0})
    for (double s2 : {1.0, -1.0}) {
      pts.push_back({0, s1, s2 * t});
      pts.push_back({s1 * t, 0, s2});
      pts.push_back({s1, s2 * t, 0});
    }
  return pts;
}

inline std::vector<Vec3> dodecahedron_points() {
  const double t = kGolden, u = 1 / kGolden;
  std::vector<Vec3> pts;
  for (double s1 : {1.0, -1.0})
    for (double s2 : {1.0, -1.0}) {
      pts.push_back({0, s1 * t, s2 * u});
      pts.push_back({s1 * u, 0, s2 * t});
      pts.push_back({s1 * t, s2 * u, 0});
      for (double s3 : {1.0, -1.0}) pts.push_back({s1, s2, s3});
    }
  return pts;
}

inline int require_m(const StrategyParams& p) {
  if (!p.m) throw std::invalid_argument("protocol needs parameter M");
  if (*p.m < 3) throw std::invalid_argument("polygon needs M >= 3");
  return *p.m;
}

inline double require_prob(const std::optional<double>& v, const char* what) {
  if (!v) throw std::invalid_argument(std::string("protocol needs parameter ") + what);
  if (!(*v >= 0 && *v <= 1)) throw std::invalid_argument(std::string(what) + " must lie in [0,1]");
  return *v;
}

}  // namespace detail

inline Strategy make_named(Family f, StrategyParams p = {}) {
  using detail::uniform_atoms;
  auto only = [&](bool m, bool pz, bool alpha, bool p1) {
    if ((p.m && !m) || (p.pz && !pz) || (p.alpha && !alpha) || (p.p1 && !p1))
      throw std::invalid_argument(std::string("unexpected parameter for ") +
                                  std::string(family_name(f)));
  };
  switch (f) {
    case Family::Discrete:
      throw std::invalid_argument("Discrete strategies are built from atoms");
    case Family::XY:
      only(false, false, false, false);
      return Strategy::make(f, Support::Discrete, p, uniform_atoms({{1, 0, 0}, {0, 1, 0}}));
    case Family::XYZ:
      only(false, false, false, false);
      return Strategy::make(f, Support::Discrete, p,
                            uniform_atoms({{1, 0, 0}, {0, 1, 0}, {0, 0, 1}}));
    case Family::Isotropic:
      only(false, false, false, false);
      return Strategy::make(f, Support::Isotropic, p, {});
    case Family::Equator:
      only(false, false, false, false);
      return Strategy::make(f, Support::Equator, p, {});
    case Family::EquatorPlusZ:
      only(false, true, false, false);
      detail::require_prob(p.pz, "pZ");
      return Strategy::make(f, Support::EquatorPlusZ, p, {});
    case Family::EquatorPlusZII:
      only(false, false, false, false);
      p.pz = 1.0 / 3.0;
      return Strategy::make(f, Support::EquatorPlusZ, p, {});
    case Family::Polygon: {
      only(true, false, false, false);
      const int m = detail::require_m(p);
      return Strategy::make(f, Support::Discrete, p, uniform_atoms(detail::polygon_points(m)));
    }
    case Family::PolygonPlusZ: {
      only(true, true, false, false);
      const int m = detail::require_m(p);
      const double pz = detail::require_prob(p.pz, "pZ");
      std::vector<Atom> atoms;
      for (const auto& v : detail::polygon_points(m))
        atoms.push_back({BlochVector::from(v), (1 - pz) / m});
      atoms.push_back({BlochVector(0, 0, 1), pz});
      return Strategy::make(f, Support::Discrete, p, std::move(atoms));
    }
    case Family::Tetrahedron:
      only(false, false, false, false);
      return Strategy::make(f, Support::Discrete, p,
                            uniform_atoms({{1, 1, 1}, {1, -1, -1}, {-1, 1, -1}, {-1, -1, 1}}));
    case Family::Octahedron:
      only(false, false, false, false);
      return Strategy::make(f, Support::Discrete, p,
                            uniform_atoms({{1, 0, 0}, {-1, 0, 0}, {0, 1, 0}, {0, -1, 0}, {0, 0, 1}, {0, 0, -1}}));
    case Family::Cube: {
      only(false, false, false, false);
      std::vector<Vec3> pts;
      for (double x : {1.0, -1.0})
        for (double y : {1.0, -1.0})
          for (double z : {1.0, -1.0}) pts.push_back({x, y, z});
      return Strategy::make(f, Support::Discrete, p, uniform_atoms(pts));
    }
    case Family::Icosahedron:
      only(false, false, false, false);
      return Strategy::make(f, Support::Discrete, p, uniform_atoms(detail::icosahedron_points()));
    case Family::Dodecahedron:
      only(false, false, false, false);
      return Strategy::make(f, Support::Discrete, p, uniform_atoms(detail::dodecahedron_points()));
    case Family::TwoSetting: {
      only(false, false, true, true);
      if (!p.alpha) throw std::invalid_argument("TwoSetting needs parameter alpha");
      const double alpha = *p.alpha;
      if (!(alpha > 0 && alpha <= kPi / 2 + 1e-15))
        throw std::invalid_argument("TwoSetting alpha must lie in (0, pi/2]");
      if (!p.p1) p.p1 = 0.5;
      const double p1 = detail::require_prob(p.p1, "p1");
      return Strategy::make(f, Support::Discrete, p,
                            {{BlochVector(1, 0, 0), p1},
                             {BlochVector(std::cos(alpha), std::sin(alpha), 0), 1 - p1}});
    }
  }
  throw std::invalid_argument("unknown protocol");
}

inline Strategy make_named(std::string_view name, StrategyParams p = {}) {
  return make_named(parse_family(name), p);
}

// ---------------------------------------------------------------------------
// Verification matrix
// ---------------------------------------------------------------------------
struct VerificationMatrix {
  Mat3 xi{};

  double trace() const { return xi[0][0] + xi[1][1] + xi[2][2]; }
  // largest eigenvalue (operator norm of a PSD matrix)
  double norm() const { return symmetric_eigen3(xi).first[2]; }
  Vec3 top_eigenvector() const { return symmetric_eigen3(xi).second[2]; }
};

inline VerificationMatrix verification_matrix(const Strategy& mu) {
  VerificationMatrix v;
  switch (mu.support()) {
    case Support::Discrete:
      for (const auto& a : mu.atoms())
        for (int i = 0; i < 3; ++i)
          for (int j = 0; j < 3; ++j) v.xi[i][j] += a.w * a.r.vec()[i] * a.r.vec()[j];
      break;
    case Support::Isotropic:
      for (int i = 0; i < 3; ++i) v.xi[i][i] = 1.0 / 3.0;
      break;
    case Support::Equator:
      v.xi[0][0] = v.xi[1][1] = 0.5;
      break;
    case Support::EquatorPlusZ:
      v.xi[0][0] = v.xi[1][1] = (1 - mu.pz()) / 2;
      v.xi[2][2] = mu.pz();
      break;
  }
  return v;
}

// ---------------------------------------------------------------------------
// Sampling
// ---------------------------------------------------------------------------
template <class Rng>
std::size_t sample_atom(const Strategy& mu, Rng& rng) {
  if (!mu.is_discrete()) throw std::invalid_argument("sample_atom needs a discrete strategy");
  const double u = rng.uniform();
  auto it = std::upper_bound(mu.cdf_.begin(), mu.cdf_.end(), u);
  if (it == mu.cdf_.end()) --it;
  return static_cast<std::size_t>(it - mu.cdf_.begin());
}

template <class Rng>
BlochVector sample_direction(const Strategy& mu, Rng& rng) {
  switch (mu.support()) {
    case Support::Discrete:
      return mu.atoms()[sample_atom(mu, rng)].r;
    case Support::Isotropic: {
      const double z = 2 * rng.uniform() - 1;
      const double phi = 2 * kPi * rng.uniform();
      const double s = std::sqrt(std::max(0.0, 1 - z * z));
      return BlochVector::from({s * std::cos(phi), s * std::sin(phi), z});
    }
    case Support::Equator:
      return BlochVector::equatorial(2 * kPi * rng.uniform());
    case Support::EquatorPlusZ: {
      const double u = rng.uniform();
      const double phi = 2 * kPi * rng.uniform();
      if (u < mu.pz()) return BlochVector(0, 0, 1);
      return BlochVector::equatorial(phi);
    }
  }
  throw std::logic_error("unreachable");
}

// ---------------------------------------------------------------------------
// Center-symmetric doubling
// ---------------------------------------------------------------------------
inline std::vector<Atom> merge_duplicate_atoms(const std::vector<Atom>& in, double angle_tol = 1e-9) {
  std::vector<Atom> out;
  for (const auto& a : in) {
    bool merged = false;
    for (auto& o : out)
      if (o.r.angle_to(a.r) <= angle_tol) {
        o.w += a.w;
        merged = true;
        break;
      }
    if (!merged) out.push_back(a);
  }
  return out;
}

inline Strategy symmetrize(const Strategy& mu) {
  if (!mu.is_discrete()) throw std::invalid_argument("symmetrize needs a discrete strategy");
  std::vector<Atom> doubled;
  for (const auto& a : mu.atoms()) {
    doubled.push_back({a.r, a.w / 2});
    doubled.push_back({-a.r, a.w / 2});
  }
  auto merged = merge_duplicate_atoms(doubled);
  // renormalize away rounding in the merged weights
  double total = 0;
  for (const auto& a : merged) total += a.w;
  for (auto& a : merged) a.w /= total;
  return Strategy::discrete(std::move(merged));
}

inline bool is_center_symmetric(const Strategy& mu, double tol = 1e-9) {
  if (!mu.is_discrete()) return false;
  for (const auto& a : mu.atoms()) {
    bool found = false;
    for (const auto& b : mu.atoms())
      if ((-a.r).angle_to(b.r) <= tol && std::abs(a.w - b.w) <= 1e-12) {
        found = true;
        break;
      }
    if (!found) return false;
  }
  return true;
}

}  // namespace bellcert
