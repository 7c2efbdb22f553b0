// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "bellcert/qcore.hpp"

namespace bellcert {

enum class Scenario { SDI, StandardQSV, DIMermin, DIQuadratic };

inline const char* scenario_name(Scenario s) {
  switch (s) {
    case Scenario::SDI: return "sdi";
    case Scenario::StandardQSV: return "standard";
    case Scenario::DIMermin: return "di_mermin";
    case Scenario::DIQuadratic: return "di_quadratic";
  }
  return "?";
}

struct PlanResult {
  std::uint64_t n = 0;
  Scenario scenario = Scenario::SDI;
  std::string formula_tag;
  double parameter = 0;  // gamma*, nu, Mermin spectral gap, or c
  double epsilon = 0;
  double delta = 0;
  double asymptotic_coefficient = 0;  // N ~ coefficient * ln(1/delta) / epsilon^k
  bool order_of_magnitude = false;
};

// spectral gap of the DI test built on the Mermin inequality
inline constexpr double kMerminGap = (2 - 1.41421356237309504880) / 2;

namespace detail {

inline void check_eps_delta(double eps, double delta) {
  if (!(eps > 0 && eps < 1)) throw std::invalid_argument("epsilon must lie in (0,1)");
  if (!(delta > 0 && delta < 1)) throw std::invalid_argument("delta must lie in (0,1)");
}

// ceil(ln delta / ln(1 - x)) for a per-test rejection probability x
inline std::uint64_t log_ratio_count(double x, double delta) {
  if (!(x > 0)) throw std::invalid_argument("per-test detection probability must be positive");
  if (x >= 1) throw std::invalid_argument("per-test detection probability must be below 1");
  const double n = std::ceil(std::log(delta) / std::log1p(-x));
  return std::max<std::uint64_t>(1, static_cast<std::uint64_t>(n));
}

inline PlanResult linear_plan(Scenario s, const char* tag, double param, double rate, double eps,
                              double delta) {
  PlanResult r;
  r.scenario = s;
  r.formula_tag = tag;
  r.parameter = param;
  r.epsilon = eps;
  r.delta = delta;
  r.n = log_ratio_count(rate * eps, delta);
  r.asymptotic_coefficient = 1 / rate;
  return r;
}

}  // namespace detail

inline PlanResult samples_sdi(double gamma_star, double eps, double delta) {
  detail::check_eps_delta(eps, delta);
  if (!(gamma_star >= 0.5 && gamma_star < 1)) throw std::invalid_argument("gamma* must lie in [1/2,1)");
  return detail::linear_plan(Scenario::SDI, "sdi", gamma_star, 2 * (1 - gamma_star), eps, delta);
}

inline PlanResult samples_standard(double nu, double eps, double delta) {
  detail::check_eps_delta(eps, delta);
  if (!(nu > 0 && nu <= 1)) throw std::invalid_argument("nu must lie in (0,1]");
  return detail::linear_plan(Scenario::StandardQSV, "standard", nu, nu, eps, delta);
}

inline PlanResult samples_di_mermin(double eps, double delta) {
  detail::check_eps_delta(eps, delta);
  return detail::linear_plan(Scenario::DIMermin, "di_mermin", kMerminGap, kMerminGap, eps, delta);
}

// Only the scaling is known here; c is supplied by the caller.
inline PlanResult samples_di_quadratic(double c, double eps, double delta) {
  detail::check_eps_delta(eps, delta);
  if (!(c > 0) || !std::isfinite(c)) throw std::invalid_argument("c must be positive and finite");
  PlanResult r;
  r.scenario = Scenario::DIQuadratic;
  r.formula_tag = "di_quadratic(order-of-magnitude)";
  r.parameter = c;
  r.epsilon = eps;
  r.delta = delta;
  const double n = std::ceil(-std::log(delta) / (c * c * eps * eps));
  r.n = std::max<std::uint64_t>(1, static_cast<std::uint64_t>(n));
  r.asymptotic_coefficient = 1 / (c * c);
  r.order_of_magnitude = true;
  return r;
}

inline double asymptotic_samples(const PlanResult& p) {
  const double power = p.scenario == Scenario::DIQuadratic ? 2 : 1;
  return p.asymptotic_coefficient * -std::log(p.delta) / std::pow(p.epsilon, power);
}

// trace-distance robustness of the XY protocol at steering correlation 2 - eps
inline double robustness_trace_distance(double eps_steering) {
  if (!(eps_steering >= 0)) throw std::invalid_argument("steering deficit must be nonnegative");
  return std::sqrt(eps_steering) / std::sqrt(2 * (2 - std::sqrt(2.0)));
}

inline double gamma_star_bell_isotropic() { return 0.75; }
inline double gamma_star_ghz_optimal() { return 0.5 + 1 / std::sqrt(4 + kPi * kPi); }
inline constexpr double kStandardNu = 2.0 / 3.0;

struct ComparisonRow {
  double epsilon;
  std::uint64_t n_standard;
  std::uint64_t n_sdi_bell;
  std::uint64_t n_sdi_ghz;
  std::uint64_t n_di_mermin;
};

inline std::vector<ComparisonRow> comparison_table(const std::vector<double>& eps_grid, double delta) {
  std::vector<ComparisonRow> rows;
  for (double e : eps_grid)
    rows.push_back({e, samples_standard(kStandardNu, e, delta).n,
                    samples_sdi(gamma_star_bell_isotropic(), e, delta).n,
                    samples_sdi(gamma_star_ghz_optimal(), e, delta).n, samples_di_mermin(e, delta).n});
  return rows;
}

inline constexpr const char* kComparisonHeader = "epsilon,N_standard,N_sdi_bell,N_sdi_ghz,N_di_mermin";

}  // namespace bellcert
