// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <optional>
#include <ostream>
#include <string>
#include <thread>
#include <vector>

#include "json.hpp"
#include "bellcert/ghz.hpp"
#include "bellcert/guessing.hpp"
#include "bellcert/qcore.hpp"
#include "bellcert/random.hpp"
#include "bellcert/strategy.hpp"
#include "bellcert/strategy_json.hpp"

namespace bellcert {

// ---------------------------------------------------------------------------
// Adversaries
// ---------------------------------------------------------------------------
struct AdversaryModel {
  enum class Kind { HonestTarget, FixedState, OptimalProductAtThreshold, MixtureAtConcurrence };

  Kind kind = Kind::HonestTarget;
  std::optional<DensityOperator> state;  // FixedState only
  std::size_t dim_a = 2;                 // FixedState in the Bell game: Alice's dimension
  double concurrence = 0;                // MixtureAtConcurrence only

  static AdversaryModel honest() { return {}; }
  static AdversaryModel fixed(DensityOperator rho, std::size_t dim_a = 2) {
    AdversaryModel m;
    m.kind = Kind::FixedState;
    m.state = std::move(rho);
    m.dim_a = dim_a;
    return m;
  }
  static AdversaryModel optimal_product() {
    AdversaryModel m;
    m.kind = Kind::OptimalProductAtThreshold;
    return m;
  }
  static AdversaryModel mixture(double C) {
    if (!(C >= 0 && C <= 1)) throw std::invalid_argument("concurrence must lie in [0,1]");
    AdversaryModel m;
    m.kind = Kind::MixtureAtConcurrence;
    m.concurrence = C;
    return m;
  }
};

inline const char* adversary_name(AdversaryModel::Kind k) {
  switch (k) {
    case AdversaryModel::Kind::HonestTarget: return "honest";
    case AdversaryModel::Kind::FixedState: return "fixed";
    case AdversaryModel::Kind::OptimalProductAtThreshold: return "product";
    case AdversaryModel::Kind::MixtureAtConcurrence: return "mixture";
  }
  return "?";
}

// A C = 0 intelligent direction of mu (the first reported one).
inline Vec3 threshold_direction(const Strategy& mu) {
  const auto rep = g_report(mu, 0);
  return rep.intelligent_directions.front().vec();
}

struct PreparedState {
  DensityOperator rho;
  std::size_t dim_a;
};

// Bob's preparation in the Bell game. Alice holds the first factor.
inline PreparedState prepare_bell_state(const AdversaryModel& adv, const Strategy& mu) {
  using K = AdversaryModel::Kind;
  switch (adv.kind) {
    case K::HonestTarget:
      return {DensityOperator(bell_state()), 2};
    case K::FixedState:
      if (!adv.state) throw std::invalid_argument("FixedState adversary without a state");
      if (adv.dim_a < 2 || adv.state->dim() % adv.dim_a != 0)
        throw std::invalid_argument("FixedState dimension does not split as d_A x d_B");
      return {*adv.state, adv.dim_a};
    case K::OptimalProductAtThreshold: {
      const PureState v = qubit_state(threshold_direction(mu));
      return {DensityOperator(product_state(v, basis_state(2, 0))), 2};
    }
    case K::MixtureAtConcurrence: {
      // (1-C)|v><v| x |0><0| + C |Phi'><Phi'|, Phi' = (|0,1> + |1,2>)/sqrt2; Bob supports orthogonal
      const double C = adv.concurrence;
      const PureState v = qubit_state(threshold_direction(mu));
      ComplexMatrix rho = (1 - C) * product_state(v, basis_state(3, 0)).projector();
      const double s = 1 / std::sqrt(2.0);
      std::vector<cplx> phi(6);
      phi[0 * 3 + 1] = s;
      phi[1 * 3 + 2] = s;
      rho += C * PureState(std::move(phi)).projector();
      return {DensityOperator(rho), 2};
    }
  }
  throw std::logic_error("unreachable");
}

// ---------------------------------------------------------------------------
// Records
// ---------------------------------------------------------------------------
struct GameRecord {
  std::uint64_t trials = 0;
  std::uint64_t passes = 0;
  double pass_rate = 0;
  double std_err = 0;
  std::uint64_t seed = 0;
  std::string strategy_digest;

  static GameRecord from_counts(std::uint64_t trials, std::uint64_t passes, std::uint64_t seed,
                                std::string digest) {
    GameRecord r;
    r.trials = trials;
    r.passes = passes;
    r.pass_rate = static_cast<double>(passes) / static_cast<double>(trials);
    r.std_err = std::sqrt(r.pass_rate * (1 - r.pass_rate) / static_cast<double>(trials));
    r.seed = seed;
    r.strategy_digest = std::move(digest);
    return r;
  }
  bool operator==(const GameRecord&) const = default;
};

inline std::string fnv1a_hex(const std::string& s) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

inline std::string strategy_digest(const Strategy& mu) { return fnv1a_hex(to_json(mu).dump()); }

struct VerdictReport {
  double pass_rate = 0;
  double threshold = 0;
  bool entanglement_certified = false;
  double confidence = 0;  // Phi((pass_rate - threshold) / std_err)
};

inline VerdictReport verdict(const GameRecord& rec, double threshold, double k_sigma) {
  VerdictReport v;
  v.pass_rate = rec.pass_rate;
  v.threshold = threshold;
  v.entanglement_certified = rec.pass_rate - k_sigma * rec.std_err > threshold;
  if (rec.std_err > 0)
    v.confidence = 0.5 * std::erfc(-(rec.pass_rate - threshold) / (rec.std_err * std::sqrt(2.0)));
  else
    v.confidence = rec.pass_rate > threshold ? 1.0 : 0.0;
  return v;
}

inline VerdictReport verdict(const GameRecord& rec, const Strategy& mu, double k_sigma) {
  return verdict(rec, gamma_star(mu), k_sigma);
}

struct SimOptions {
  unsigned threads = 1;
  std::ostream* transcript = nullptr;  // JSON lines; forces a single worker
};

namespace detail {

inline double clamp_prob(double p) {
  if (p < 1e-12) return 0;
  if (p > 1 - 1e-12) return 1;
  return p;
}

inline double expectation(const ComplexMatrix& effect, const ComplexMatrix& rho) {
  double s = 0;
  for (std::size_t i = 0; i < rho.rows(); ++i)
    for (std::size_t j = 0; j < rho.cols(); ++j) s += (effect(i, j) * rho(j, i)).real();
  return s;
}

// Run trial(t) -> bool over [0, trials) with optional workers; sum of passes.
template <class Trial>
std::uint64_t run_trials(std::uint64_t trials, const SimOptions& opt, Trial&& trial) {
  unsigned workers = opt.transcript ? 1u : std::max(1u, opt.threads);
  workers = static_cast<unsigned>(std::min<std::uint64_t>(workers, trials));
  if (workers <= 1) {
    std::uint64_t passes = 0;
    for (std::uint64_t t = 0; t < trials; ++t) passes += trial(t) ? 1 : 0;
    return passes;
  }
  std::vector<std::uint64_t> counts(workers, 0);
  std::vector<std::thread> pool;
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      const std::uint64_t lo = trials * w / workers, hi = trials * (w + 1) / workers;
      std::uint64_t c = 0;
      for (std::uint64_t t = lo; t < hi; ++t) c += trial(t) ? 1 : 0;
      counts[w] = c;
    });
  }
  for (auto& th : pool) th.join();
  std::uint64_t passes = 0;
  for (auto c : counts) passes += c;
  return passes;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Bell game
// ---------------------------------------------------------------------------
inline GameRecord play_bell(const Strategy& mu, const AdversaryModel& adv, std::uint64_t trials,
                            std::uint64_t seed, const SimOptions& opt = {}) {
  if (trials < 1) throw std::invalid_argument("need at least one trial");
  const PreparedState prep = prepare_bell_state(adv, mu);
  const ComplexMatrix& rho = prep.rho.matrix();
  const std::size_t dim_a = prep.dim_a;

  // per-atom cache for discrete strategies
  std::vector<HelstromResult> cache;
  if (mu.is_discrete())
    for (const auto& a : mu.atoms()) cache.push_back(helstrom(rho, dim_a, a.r));

  auto trial = [&](std::uint64_t t) {
    CounterStream rng(seed, t);
    BlochVector r;
    HelstromResult local;
    const HelstromResult* h;
    if (mu.is_discrete()) {
      const std::size_t k = sample_atom(mu, rng);
      r = mu.atoms()[k].r;
      h = &cache[k];
    } else {
      r = sample_direction(mu, rng);
      local = helstrom(rho, dim_a, r);
      h = &local;
    }
    const double p_plus = std::max(0.0, h->rho_plus.trace().real());
    const double p_minus = std::max(0.0, h->rho_minus.trace().real());
    const double ua = rng.uniform(), ub = rng.uniform();
    int alice = 0;  // 0 means outside Alice's qubit support
    if (ua < p_plus) alice = 1;
    else if (ua < p_plus + p_minus) alice = -1;
    int bob = 1;
    if (alice != 0) {
      const ComplexMatrix& cond = alice == 1 ? h->rho_plus : h->rho_minus;
      const double pc = alice == 1 ? p_plus : p_minus;
      const double p_guess_plus = detail::clamp_prob(detail::expectation(h->optimal_effect, cond) / pc);
      bob = ub < p_guess_plus ? 1 : -1;
    }
    const bool pass = alice != 0 && alice == bob;
    if (opt.transcript) {
      nlohmann::json line = {{"trial", t},
                             {"test", {{"r", {r.x(), r.y(), r.z()}}}},
                             {"honest_outcomes", {alice}},
                             {"adversary_response", {bob}},
                             {"pass", pass}};
      *opt.transcript << line.dump() << '\n';
    }
    return pass;
  };
  const std::uint64_t passes = detail::run_trials(trials, opt, trial);
  return GameRecord::from_counts(trials, passes, seed, strategy_digest(mu));
}

// ---------------------------------------------------------------------------
// GHZ game
// ---------------------------------------------------------------------------
namespace detail {

// new qubit i holds old qubit order[i]
inline ComplexMatrix reorder_qubits(const ComplexMatrix& m, int n, const std::vector<int>& order) {
  const std::size_t d = std::size_t{1} << n;
  std::vector<std::size_t> map(d);
  for (std::size_t idx = 0; idx < d; ++idx) {
    std::size_t out = 0;
    for (int i = 0; i < n; ++i) {
      const std::size_t bit = (idx >> (n - 1 - order[i])) & 1;
      out |= bit << (n - 1 - i);
    }
    map[idx] = out;
  }
  ComplexMatrix r(d, d);
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j) r(map[i], map[j]) = m(i, j);
  return r;
}

// tr_1[(A x I) rho] for rho on d1 x d2
inline ComplexMatrix apply_trace_first(const ComplexMatrix& rho, std::size_t d1, const ComplexMatrix& a) {
  const std::size_t d2 = rho.rows() / d1;
  ComplexMatrix out(d2, d2);
  for (std::size_t x = 0; x < d1; ++x)
    for (std::size_t xp = 0; xp < d1; ++xp) {
      const cplx c = a(x, xp);
      if (c == cplx{}) continue;
      for (std::size_t j = 0; j < d2; ++j)
        for (std::size_t k = 0; k < d2; ++k) out(j, k) += c * rho(xp * d2 + j, x * d2 + k);
    }
  return out;
}

inline ComplexMatrix nonnegative_projector(const ComplexMatrix& h) {
  const auto eig = jacobi_eigen(hermitian_part(h));
  const std::size_t d = h.rows();
  const double tie = 1e-13 * std::max(1.0, h.max_abs());
  ComplexMatrix p(d, d);
  for (std::size_t k = 0; k < d; ++k) {
    if (eig.values[k] < -tie) continue;
    for (std::size_t i = 0; i < d; ++i)
      for (std::size_t j = 0; j < d; ++j) p(i, j) += eig.vectors(i, k) * std::conj(eig.vectors(j, k));
  }
  return p;
}

inline nlohmann::json test_json(const GhzTest& t) {
  if (t.kind == GhzTestKind::Z) return {{"kind", "Z"}};
  return {{"kind", "phase"}, {"phases", t.phases}};
}

}  // namespace detail

// Embed a state on (logical qubit) x (dishonest register) into n qubits, with
// |0_L> -> |0...0>_H and |1_L> -> |1...1>_H.
inline DensityOperator embed_logical(const DensityOperator& bell_side, const PartyLayout& layout) {
  layout.validate();
  const int h = static_cast<int>(layout.honest.size()), dn = static_cast<int>(layout.dishonest.size());
  const std::size_t dd = std::size_t{1} << dn, dh = std::size_t{1} << h;
  if (bell_side.dim() != 2 * dd)
    throw std::invalid_argument("embedded state must act on C^2 x C^(2^|D|)");
  const std::size_t d = dh * dd;
  ComplexMatrix ordered(d, d);  // H qubits first, then D
  const std::size_t lift[2] = {0, dh - 1};
  const ComplexMatrix& m = bell_side.matrix();
  for (std::size_t a = 0; a < 2; ++a)
    for (std::size_t b = 0; b < 2; ++b)
      for (std::size_t j = 0; j < dd; ++j)
        for (std::size_t k = 0; k < dd; ++k) ordered(lift[a] * dd + j, lift[b] * dd + k) = m(a * dd + j, b * dd + k);
  // back to party order
  std::vector<int> hd(layout.honest);
  hd.insert(hd.end(), layout.dishonest.begin(), layout.dishonest.end());
  std::vector<int> inverse(static_cast<std::size_t>(layout.n));
  for (int i = 0; i < layout.n; ++i) inverse[hd[i]] = i;
  return DensityOperator(detail::reorder_qubits(ordered, layout.n, inverse));
}

inline DensityOperator prepare_ghz_state(const AdversaryModel& adv, const GhzStrategy& s,
                                         const PartyLayout& layout) {
  using K = AdversaryModel::Kind;
  const std::size_t dim = std::size_t{1} << layout.n;
  switch (adv.kind) {
    case K::HonestTarget:
      return DensityOperator(ghz_state(layout.n));
    case K::FixedState:
      if (!adv.state) throw std::invalid_argument("FixedState adversary without a state");
      if (adv.state->dim() != dim) throw std::invalid_argument("state dimension does not match 2^n");
      return *adv.state;
    case K::OptimalProductAtThreshold:
    case K::MixtureAtConcurrence: {
      const int dn = static_cast<int>(layout.dishonest.size());
      if (adv.kind == K::MixtureAtConcurrence && dn < 2)
        throw std::invalid_argument("mixture adversary needs at least two dishonest qubits");
      const Strategy eff = effective_strategy(s);
      const PureState v = qubit_state(threshold_direction(eff));
      const std::size_t dd = std::size_t{1} << dn;
      ComplexMatrix rho = product_state(v, basis_state(dd, 0)).projector();
      if (adv.kind == K::MixtureAtConcurrence) {
        const double C = adv.concurrence;
        rho *= (1 - C);
        const double r2 = 1 / std::sqrt(2.0);
        std::vector<cplx> phi(2 * dd);
        phi[0 * dd + 1] = r2;
        phi[1 * dd + 2] = r2;
        rho += C * PureState(std::move(phi)).projector();
      }
      return embed_logical(DensityOperator(rho), layout);
    }
  }
  throw std::logic_error("unreachable");
}

inline GameRecord play_ghz(const GhzStrategy& s, const PartyLayout& layout, const AdversaryModel& adv,
                           std::uint64_t trials, std::uint64_t seed, const SimOptions& opt = {}) {
  if (trials < 1) throw std::invalid_argument("need at least one trial");
  layout.validate();
  s.validate();
  if (layout.n > 10) throw std::invalid_argument("dense GHZ simulation limited to n <= 10");
  const int n = layout.n;
  const int h = static_cast<int>(layout.honest.size());
  const std::size_t dh = std::size_t{1} << h;

  const DensityOperator state = prepare_ghz_state(adv, s, layout);
  std::vector<int> hd(layout.honest);
  hd.insert(hd.end(), layout.dishonest.begin(), layout.dishonest.end());
  const ComplexMatrix rho = detail::reorder_qubits(state.matrix(), n, hd);  // H first

  // Z-test discrimination is fixed; phase tests depend on phi_H only.
  ComplexMatrix zdiff(dh, dh);
  zdiff(0, 0) = 1;
  zdiff(dh - 1, dh - 1) = -1;
  const ComplexMatrix z_effect = detail::nonnegative_projector(detail::apply_trace_first(rho, dh, zdiff));

  auto trial = [&](std::uint64_t t) {
    CounterStream rng(seed, t);
    const GhzTest test = generate_test(s, n, rng);
    const double u_honest = rng.uniform(), u_guess = rng.uniform();

    // honest local projectors
    std::vector<std::array<ComplexMatrix, 2>> proj(static_cast<std::size_t>(h));
    double phi_h = 0;
    for (int i = 0; i < h; ++i) {
      const Vec3 r = test.direction(static_cast<std::size_t>(layout.honest[i])).vec();
      const ComplexMatrix rs = pauli_dot(r);
      proj[i][0] = 0.5 * (ComplexMatrix::identity(2) + rs);
      proj[i][1] = 0.5 * (ComplexMatrix::identity(2) - rs);
      if (test.kind == GhzTestKind::Phase) phi_h += test.phases[layout.honest[i]];
    }

    // sample the honest outcome string
    std::size_t pattern = dh - 1;
    ComplexMatrix cond;
    double acc = 0, p_cond = 0;
    for (std::size_t s_h = 0; s_h < dh; ++s_h) {
      ComplexMatrix pi = proj[0][(s_h >> (h - 1)) & 1];
      for (int i = 1; i < h; ++i) pi = kron(pi, proj[i][(s_h >> (h - 1 - i)) & 1]);
      ComplexMatrix c = detail::apply_trace_first(rho, dh, pi);
      const double p = std::max(0.0, c.trace().real());
      acc += p;
      if (u_honest < acc || s_h == dh - 1) {
        pattern = s_h;
        cond = std::move(c);
        p_cond = p;
        break;
      }
    }
    std::vector<int> honest_out(static_cast<std::size_t>(h));
    for (int i = 0; i < h; ++i) honest_out[i] = ((pattern >> (h - 1 - i)) & 1) ? -1 : 1;

    // dishonest guess of the label lambda
    const ComplexMatrix effect =
        test.kind == GhzTestKind::Z
            ? z_effect
            : detail::nonnegative_projector(detail::apply_trace_first(rho, dh, x_block(h, phi_h)));
    double p_plus = 1;
    if (p_cond > 0) p_plus = detail::clamp_prob(detail::expectation(effect, cond) / p_cond);
    const int guess = u_guess < p_plus ? 1 : -1;

    std::vector<int> outcomes(static_cast<std::size_t>(n), 1);
    for (int i = 0; i < h; ++i) outcomes[layout.honest[i]] = honest_out[i];
    if (test.kind == GhzTestKind::Z) {
      for (int j : layout.dishonest) outcomes[j] = guess;
    } else {
      outcomes[layout.dishonest.front()] = guess;
    }
    const bool pass = evaluate_test(test, outcomes);
    if (opt.transcript) {
      std::vector<int> resp;
      for (int j : layout.dishonest) resp.push_back(outcomes[j]);
      nlohmann::json line = {{"trial", t},
                             {"test", detail::test_json(test)},
                             {"honest_outcomes", honest_out},
                             {"adversary_response", resp},
                             {"pass", pass}};
      *opt.transcript << line.dump() << '\n';
    }
    return pass;
  };
  const std::uint64_t passes = detail::run_trials(trials, opt, trial);
  std::string key = to_json(effective_strategy(s)).dump() + "|n=" + std::to_string(n) + "|D=";
  for (int j : layout.dishonest) key += std::to_string(j) + ",";
  return GameRecord::from_counts(trials, passes, seed, fnv1a_hex(key));
}

// ---------------------------------------------------------------------------
// Concurrence sweep
// ---------------------------------------------------------------------------
struct SweepRow {
  double C;
  double simulated;
  double std_err;
  double analytic;  // gamma_hat(C, mu)
};

inline std::vector<SweepRow> sweep_concurrence(const Strategy& mu, const std::vector<double>& grid,
                                               std::uint64_t trials, std::uint64_t seed,
                                               const SimOptions& opt = {}) {
  std::vector<SweepRow> rows;
  const double gs = gamma_star(mu);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double C = grid[i];
    const auto rec = play_bell(mu, AdversaryModel::mixture(C), trials, seed + i, opt);
    rows.push_back({C, rec.pass_rate, rec.std_err, (1 - C) * gs + C});
  }
  return rows;
}

}  // namespace bellcert
