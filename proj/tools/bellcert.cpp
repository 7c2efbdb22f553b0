// SPDX-License-Identifier: Apache-2.0
// bellcert: thresholds, curves, simulations and sample plans from the command line.

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "bellcert/bellcert.hpp"

using namespace bellcert;
using nlohmann::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitNumeric = 1;
constexpr int kExitUsage = 2;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

std::string fmt_vec(const Vec3& v) {
  return "(" + fmt(v[0]) + " " + fmt(v[1]) + " " + fmt(v[2]) + ")";
}

// ---------------------------------------------------------------------------
// Common options
// ---------------------------------------------------------------------------
struct Common {
  std::string out;
  std::string format = "pretty";
  std::optional<std::uint64_t> seed;
  std::uint64_t trials = 100000;
  unsigned threads = 1;

  std::uint64_t resolved_seed() const {
    if (seed) return *seed;
    if (const char* env = std::getenv("BELLCERT_SEED")) {
      try {
        std::size_t pos = 0;
        const auto v = std::stoull(env, &pos);
        if (pos == std::string(env).size()) return v;
      } catch (const std::exception&) {
      }
      throw UsageError("BELLCERT_SEED is not an unsigned integer");
    }
    return 1;
  }
};

void add_common(CLI::App* app, Common& c, bool with_sim) {
  app->add_option("--out", c.out, "Write output to PATH instead of stdout");
  app->add_option("--format", c.format, "Output format")
      ->check(CLI::IsMember({"csv", "json", "pretty"}));
  if (with_sim) {
    app->add_option("--seed", c.seed, "Simulation seed (falls back to BELLCERT_SEED, then 1)");
    app->add_option("--trials", c.trials, "Number of trials")->check(CLI::PositiveNumber);
    app->add_option("--threads", c.threads, "Maximum worker threads")->check(CLI::PositiveNumber);
  }
}

class Output {
 public:
  explicit Output(const std::string& path) {
    if (!path.empty()) {
      file_ = std::make_unique<std::ofstream>(path);
      if (!*file_) throw IoError("cannot open output file: " + path);
      path_ = path;
    }
  }
  std::ostream& os() { return file_ ? *file_ : std::cout; }
  void finish() {
    os().flush();
    if (file_ && !*file_) throw IoError("write failed: " + path_);
  }

 private:
  std::unique_ptr<std::ofstream> file_;
  std::string path_;
};

struct ProtocolOpts {
  std::string name = "Isotropic";
  std::optional<int> m;
  std::string pz;
  std::optional<double> alpha;
  std::optional<double> p1;
  std::string json_path;
};

void add_protocol(CLI::App* app, ProtocolOpts& p) {
  app->add_option("--protocol", p.name, "Protocol name (XY, XYZ, Isotropic, Equator, Polygon, ...)");
  app->add_option("--M", p.m, "Polygon order");
  app->add_option("--pz", p.pz, "Weight of the Z test, or 'opt'");
  app->add_option("--alpha", p.alpha, "TwoSetting angle in radians");
  app->add_option("--p1", p.p1, "TwoSetting weight of the first setting");
  app->add_option("--protocol-json", p.json_path, "Strategy JSON file (overrides --protocol)");
}

double parse_pz(const std::string& s, Family f, const std::optional<int>& m) {
  if (s == "opt") {
    if (f == Family::EquatorPlusZ) return optimal_pz_equator_plus_z();
    if (f == Family::PolygonPlusZ && m) return optimal_pz_polygon_plus_z(*m);
    throw UsageError("--pz opt needs EquatorPlusZ or PolygonPlusZ with --M");
  }
  try {
    std::size_t pos = 0;
    const double v = std::stod(s, &pos);
    if (pos == s.size()) return v;
  } catch (const std::exception&) {
  }
  throw UsageError("--pz expects a number or 'opt'");
}

Strategy build_protocol(const ProtocolOpts& p) {
  if (!p.json_path.empty()) {
    std::ifstream in(p.json_path);
    if (!in) throw IoError("cannot read protocol file: " + p.json_path);
    json j;
    try {
      in >> j;
    } catch (const json::exception& e) {
      throw UsageError("malformed JSON in " + p.json_path + ": " + e.what());
    }
    return strategy_from_json(j);
  }
  const Family f = parse_family(p.name);
  StrategyParams prm;
  prm.m = p.m;
  if (!p.pz.empty()) prm.pz = parse_pz(p.pz, f, p.m);
  prm.alpha = p.alpha;
  prm.p1 = p.p1;
  return make_named(f, prm);
}

std::vector<double> parse_grid(const std::string& spec, double lo, double hi, const char* what) {
  std::vector<double> g;
  std::stringstream ss(spec);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    try {
      std::size_t pos = 0;
      const double v = std::stod(tok, &pos);
      if (pos != tok.size()) throw std::invalid_argument("trailing characters");
      g.push_back(v);
    } catch (const std::exception&) {
      throw UsageError(std::string("bad ") + what + " grid entry: '" + tok + "'");
    }
  }
  if (g.empty()) throw UsageError(std::string("empty ") + what + " grid");
  for (std::size_t i = 0; i < g.size(); ++i) {
    if (!(g[i] >= lo && g[i] <= hi))
      throw UsageError(std::string(what) + " grid entry out of range: " + fmt(g[i]));
    if (i > 0 && !(g[i] > g[i - 1]))
      throw UsageError(std::string(what) + " grid must be strictly increasing");
  }
  return g;
}

std::vector<double> uniform_grid(int points, double lo, double hi) {
  if (points < 2) throw UsageError("--points must be at least 2");
  std::vector<double> g;
  for (int i = 0; i < points; ++i) g.push_back(lo + (hi - lo) * i / (points - 1));
  return g;
}

// ---------------------------------------------------------------------------
// protocols
// ---------------------------------------------------------------------------
std::string direction_text(const GuessReport& r) {
  if (r.degeneracy == Degeneracy::Sphere) return "any direction";
  std::string s;
  // one representative per +- pair
  std::vector<Vec3> shown;
  for (const auto& d : r.intelligent_directions) {
    const Vec3 v = detail::canonical_axis(d.vec());
    bool dup = false;
    for (const auto& w : shown) dup = dup || norm(v - w) < 1e-9;
    if (dup) continue;
    shown.push_back(v);
    s += (s.empty() ? "" : " ") + fmt_vec(v);
  }
  if (r.degeneracy != Degeneracy::None) s += " [" + std::string(degeneracy_name(r.degeneracy)) + "]";
  return s;
}

int cmd_protocols(const Common& c) {
  std::vector<Strategy> cat = {
      make_named("XY"),
      make_named("XYZ"),
      make_named("Tetrahedron"),
      make_named("Octahedron"),
      make_named("Cube"),
      make_named("Icosahedron"),
      make_named("Dodecahedron"),
      make_named("Isotropic"),
      make_named("Equator"),
      make_named(Family::Polygon, {.m = 3}),
      make_named(Family::Polygon, {.m = 5}),
      make_named(Family::EquatorPlusZ, {.pz = optimal_pz_equator_plus_z()}),
      make_named(Family::EquatorPlusZII),
      make_named(Family::PolygonPlusZ, {.m = 3, .pz = optimal_pz_polygon_plus_z(3)}),
  };
  Output out(c.out);
  auto& os = out.os();
  json rows = json::array();
  if (c.format == "csv") os << "protocol,gamma_star,method,gamma_hat,intelligent_direction\n";
  for (const auto& mu : cat) {
    const auto r = g_report(mu, 0);
    const std::string tag = "(1-C)*" + fmt(r.gamma()) + "+C";
    const std::string dir = direction_text(r);
    if (c.format == "csv") {
      os << '"' << mu.name() << "\"," << fmt(r.gamma()) << ',' << method_name(r.method) << ",\"" << tag
         << "\",\"" << dir << "\"\n";
    } else if (c.format == "json") {
      json dirs = json::array();
      for (const auto& d : r.intelligent_directions) dirs.push_back({d.x(), d.y(), d.z()});
      rows.push_back({{"protocol", mu.name()},
                      {"strategy", to_json(mu)},
                      {"gamma_star", r.gamma()},
                      {"method", method_name(r.method)},
                      {"degeneracy", degeneracy_name(r.degeneracy)},
                      {"gamma_hat", tag},
                      {"intelligent_directions", dirs}});
    } else {
      char line[160];
      std::snprintf(line, sizeof line, "%-28s gamma*=%-14s %-12s ", mu.name().c_str(), fmt(r.gamma()).c_str(),
                    std::string(method_name(r.method)).c_str());
      os << line << dir << '\n';
    }
  }
  if (c.format == "json") os << rows.dump(2) << '\n';
  out.finish();
  return kExitOk;
}

// ---------------------------------------------------------------------------
// curve
// ---------------------------------------------------------------------------
struct CurveOpts {
  std::string kind = "gamma_c";
  std::string grid;
  int points = 11;
  bool no_oracle = false;
};

int cmd_curve(const Common& c, const ProtocolOpts& p, const CurveOpts& o) {
  const Strategy mu = build_protocol(p);
  const auto grid = o.grid.empty() ? uniform_grid(o.points, 0, 1) : parse_grid(o.grid, 0, 1, "curve");

  // gamma_2 at concurrence x, either closed or oracle
  auto g2 = [&](double x, bool oracle) -> std::optional<double> {
    if (oracle) return 0.5 * (1 + g_oracle(mu, x).value);
    try {
      return 0.5 * (1 + g_closed(mu, x).value);
    } catch (const Unsupported&) {
      return std::nullopt;
    }
  };
  auto eval = [&](double x, bool oracle) -> std::optional<double> {
    if (o.kind == "gamma_c") return g2(x, oracle);
    const auto gs = g2(0, oracle);
    if (!gs) return std::nullopt;
    if (o.kind == "gamma_hat_c") return (1 - x) * *gs + x;
    if (x < 0.5) return 2 * *gs * x;
    return g2(2 * x - 1, oracle);
  };

  const char* xname = o.kind == "gamma_f" ? "F" : "C";
  std::string closed_tag = "closed";
  try {
    if (g_closed(mu, 0.5).method == Method::Conjectured) closed_tag = "conjecture";
  } catch (const Unsupported&) {
  }

  Output out(c.out);
  auto& os = out.os();
  json rows = json::array();
  if (c.format != "json") os << xname << ',' << closed_tag << (o.no_oracle ? "" : ",oracle") << '\n';
  for (double x : grid) {
    const auto cl = eval(x, false);
    std::optional<double> orc;
    if (!o.no_oracle) orc = eval(x, true);
    if (c.format == "json") {
      json row = {{xname, x}};
      row[closed_tag] = cl ? json(*cl) : json(nullptr);
      if (!o.no_oracle) row["oracle"] = *orc;
      rows.push_back(row);
    } else {
      os << fmt(x) << ',' << (cl ? fmt(*cl) : "") << (o.no_oracle ? "" : "," + fmt(*orc)) << '\n';
    }
  }
  if (c.format == "json")
    os << json{{"kind", o.kind}, {"strategy", to_json(mu)}, {"rows", rows}}.dump(2) << '\n';
  out.finish();
  return kExitOk;
}

// ---------------------------------------------------------------------------
// simulate
// ---------------------------------------------------------------------------
struct SimOpts {
  std::string target;
  std::string adversary = "honest";
  double concurrence = 0;
  std::string state_path;
  int n = 3;
  std::vector<int> dishonest;
  std::string law = "continuous";
  double k_sigma = 3;
  std::string transcript;
};

AdversaryModel build_adversary(const SimOpts& s) {
  if (s.adversary == "honest") return AdversaryModel::honest();
  if (s.adversary == "product") return AdversaryModel::optimal_product();
  if (s.adversary == "mixture") return AdversaryModel::mixture(s.concurrence);
  if (s.adversary == "fixed") {
    if (s.state_path.empty()) throw UsageError("--adversary fixed needs --state");
    std::ifstream in(s.state_path);
    if (!in) throw IoError("cannot read state file: " + s.state_path);
    json j;
    try {
      in >> j;
    } catch (const json::exception& e) {
      throw UsageError("malformed JSON in " + s.state_path + ": " + e.what());
    }
    // {"dim_a": 2, "real": [[...]], "imag": [[...]]}
    const auto& re = j.at("real");
    const std::size_t d = re.size();
    ComplexMatrix m(d, d);
    for (std::size_t i = 0; i < d; ++i)
      for (std::size_t k = 0; k < d; ++k) {
        const double im = j.contains("imag") ? j["imag"].at(i).at(k).get<double>() : 0.0;
        m(i, k) = cplx(re.at(i).at(k).get<double>(), im);
      }
    return AdversaryModel::fixed(DensityOperator(m), j.value("dim_a", std::size_t{2}));
  }
  throw UsageError("unknown adversary: " + s.adversary);
}

int cmd_simulate(const Common& c, const ProtocolOpts& p, const SimOpts& s) {
  const AdversaryModel adv = build_adversary(s);
  std::unique_ptr<std::ofstream> transcript;
  SimOptions opt;
  opt.threads = c.threads;
  if (!s.transcript.empty()) {
    transcript = std::make_unique<std::ofstream>(s.transcript);
    if (!*transcript) throw IoError("cannot open transcript file: " + s.transcript);
    opt.transcript = transcript.get();
  }
  const std::uint64_t seed = c.resolved_seed();

  GameRecord rec;
  double threshold = 0;
  json strategy;
  std::string label;
  if (s.target == "bell") {
    const Strategy mu = build_protocol(p);
    rec = play_bell(mu, adv, c.trials, seed, opt);
    threshold = gamma_star(mu);
    strategy = to_json(mu);
    label = mu.name();
  } else {
    std::vector<int> d;
    for (int j : s.dishonest) {
      if (j < 1 || j > s.n) throw UsageError("--dishonest entries must lie in 1..n");
      d.push_back(j - 1);
    }
    if (d.empty()) d.push_back(s.n - 1);
    const PartyLayout layout = PartyLayout::with_dishonest(s.n, d);
    const Family eff = s.law == "continuous" ? Family::EquatorPlusZ : Family::PolygonPlusZ;
    const double pz = p.pz.empty() ? optimal_pz_equator_plus_z() : parse_pz(p.pz, eff, p.m);
    GhzStrategy gs;
    if (s.law == "continuous") {
      gs = GhzStrategy::continuous(pz);
    } else {
      if (!p.m) throw UsageError("--law discrete needs --M");
      gs = GhzStrategy::discrete(pz, *p.m);
    }
    rec = play_ghz(gs, layout, adv, c.trials, seed, opt);
    const Strategy mu = effective_strategy(gs);
    threshold = gamma_star(mu);
    strategy = to_json(mu);
    label = "GHZ n=" + std::to_string(s.n) + " via " + mu.name();
  }
  if (transcript) transcript->flush();
  const VerdictReport v = verdict(rec, threshold, s.k_sigma);

  Output out(c.out);
  auto& os = out.os();
  if (c.format == "json") {
    json j = {{"target", s.target},
              {"adversary", s.adversary},
              {"strategy", strategy},
              {"record",
               {{"trials", rec.trials},
                {"passes", rec.passes},
                {"pass_rate", rec.pass_rate},
                {"std_err", rec.std_err},
                {"seed", rec.seed},
                {"strategy_digest", rec.strategy_digest}}},
              {"verdict",
               {{"threshold", v.threshold},
                {"k_sigma", s.k_sigma},
                {"entanglement_certified", v.entanglement_certified},
                {"confidence", v.confidence}}}};
    os << j.dump(2) << '\n';
  } else if (c.format == "csv") {
    os << "target,adversary,trials,passes,pass_rate,std_err,threshold,certified,confidence,seed\n";
    os << s.target << ',' << s.adversary << ',' << rec.trials << ',' << rec.passes << ',' << fmt(rec.pass_rate)
       << ',' << fmt(rec.std_err) << ',' << fmt(v.threshold) << ',' << (v.entanglement_certified ? 1 : 0)
       << ',' << fmt(v.confidence) << ',' << rec.seed << '\n';
  } else {
    os << "protocol    " << label << '\n'
       << "adversary   " << s.adversary << '\n'
       << "trials      " << rec.trials << "  (seed " << rec.seed << ")\n"
       << "pass rate   " << fmt(rec.pass_rate) << " +- " << fmt(rec.std_err) << '\n'
       << "threshold   " << fmt(v.threshold) << '\n'
       << "certified   " << (v.entanglement_certified ? "yes" : "no") << " at " << fmt(s.k_sigma)
       << " sigma, confidence " << fmt(v.confidence) << '\n';
  }
  out.finish();
  return kExitOk;
}

// ---------------------------------------------------------------------------
// samples
// ---------------------------------------------------------------------------
struct SampleOpts {
  std::string scenario;
  std::optional<double> gamma_star;
  std::optional<double> nu;
  std::optional<double> c;
  double eps = 0.01;
  double delta = 0.01;
  std::string eps_grid;
};

int cmd_samples(const Common& c, const SampleOpts& s) {
  Output out(c.out);
  auto& os = out.os();
  if (s.scenario == "comparison") {
    std::vector<double> grid;
    if (s.eps_grid.empty()) {
      for (int i = 0; i <= 20; ++i) grid.push_back(std::pow(10.0, -3 + 2.0 * i / 20));
    } else {
      grid = parse_grid(s.eps_grid, 0, 1, "epsilon");
    }
    const auto rows = comparison_table(grid, s.delta);
    if (c.format == "json") {
      json a = json::array();
      for (const auto& r : rows)
        a.push_back({{"epsilon", r.epsilon},
                     {"N_standard", r.n_standard},
                     {"N_sdi_bell", r.n_sdi_bell},
                     {"N_sdi_ghz", r.n_sdi_ghz},
                     {"N_di_mermin", r.n_di_mermin}});
      os << json{{"delta", s.delta}, {"rows", a}}.dump(2) << '\n';
    } else {
      os << kComparisonHeader << '\n';
      for (const auto& r : rows)
        os << fmt(r.epsilon) << ',' << r.n_standard << ',' << r.n_sdi_bell << ',' << r.n_sdi_ghz << ','
           << r.n_di_mermin << '\n';
    }
    out.finish();
    return kExitOk;
  }

  PlanResult r;
  if (s.scenario == "sdi") {
    if (!s.gamma_star) throw UsageError("sdi needs --gamma-star");
    r = samples_sdi(*s.gamma_star, s.eps, s.delta);
  } else if (s.scenario == "standard") {
    r = samples_standard(s.nu.value_or(kStandardNu), s.eps, s.delta);
  } else if (s.scenario == "mermin") {
    r = samples_di_mermin(s.eps, s.delta);
  } else if (s.scenario == "quadratic") {
    if (!s.c) throw UsageError("quadratic needs --c");
    r = samples_di_quadratic(*s.c, s.eps, s.delta);
  } else {
    throw UsageError("unknown scenario: " + s.scenario);
  }
  const std::string eps_pow = r.order_of_magnitude ? "eps^2" : "eps";
  if (c.format == "json") {
    os << json{{"scenario", scenario_name(r.scenario)},
               {"formula", r.formula_tag},
               {"parameter", r.parameter},
               {"epsilon", r.epsilon},
               {"delta", r.delta},
               {"N", r.n},
               {"asymptotic_coefficient", r.asymptotic_coefficient},
               {"asymptotic_N", asymptotic_samples(r)},
               {"order_of_magnitude", r.order_of_magnitude}}
              .dump(2)
       << '\n';
  } else if (c.format == "csv") {
    os << "scenario,parameter,epsilon,delta,N,asymptotic_coefficient\n"
       << scenario_name(r.scenario) << ',' << fmt(r.parameter) << ',' << fmt(r.epsilon) << ','
       << fmt(r.delta) << ',' << r.n << ',' << fmt(r.asymptotic_coefficient) << '\n';
  } else {
    os << "N = " << r.n << "  [" << r.formula_tag << "]\n"
       << "asymptotic  N ~ " << fmt(r.asymptotic_coefficient) << " ln(1/delta)/" << eps_pow << " = "
       << fmt(asymptotic_samples(r)) << '\n';
    if (r.order_of_magnitude) os << "note: order-of-magnitude estimate; c is caller supplied\n";
  }
  out.finish();
  return kExitOk;
}

// ---------------------------------------------------------------------------
// oracle-check
// ---------------------------------------------------------------------------
struct CheckOpts {
  std::string grid;
  int points = 6;
  double tol = 1e-5;
};

int cmd_oracle_check(const Common& c, const ProtocolOpts& p, const CheckOpts& o) {
  const Strategy mu = build_protocol(p);
  const auto grid = o.grid.empty() ? uniform_grid(o.points, 0, 1) : parse_grid(o.grid, 0, 1, "C");
  Output out(c.out);
  auto& os = out.os();
  double worst = 0;
  bool any_closed = false;
  json rows = json::array();
  if (c.format == "csv") os << "C,closed,oracle,abs_diff,method,pass\n";
  for (double C : grid) {
    const GuessReport orc = g_oracle(mu, C);
    std::optional<GuessReport> cl;
    try {
      cl = g_closed(mu, C);
    } catch (const Unsupported&) {
    }
    const double diff = cl ? std::abs(cl->value - orc.value) : 0;
    const bool pass = !cl || diff <= o.tol;
    if (cl) {
      any_closed = true;
      worst = std::max(worst, diff);
    }
    const std::string tag = cl ? (cl->method == Method::Conjectured ? "conjecture" : "closed-form") : "none";
    if (c.format == "json") {
      rows.push_back({{"C", C},
                      {"closed", cl ? json(cl->value) : json(nullptr)},
                      {"oracle", orc.value},
                      {"abs_diff", diff},
                      {"method", tag},
                      {"pass", pass}});
    } else if (c.format == "csv") {
      os << fmt(C) << ',' << (cl ? fmt(cl->value) : "") << ',' << fmt(orc.value) << ',' << fmt(diff) << ','
         << tag << ',' << (pass ? "PASS" : "FAIL") << '\n';
    } else {
      char line[200];
      std::snprintf(line, sizeof line, "C=%-6s closed=%-16s oracle=%-16s diff=%-10.3g %-11s %s\n",
                    fmt(C).c_str(), cl ? fmt(cl->value).c_str() : "-", fmt(orc.value).c_str(), diff,
                    tag.c_str(), pass ? "PASS" : "FAIL");
      os << line;
    }
  }
  const bool ok = worst <= o.tol;
  if (c.format == "json") {
    os << json{{"strategy", to_json(mu)}, {"tol", o.tol}, {"max_abs_diff", worst}, {"rows", rows}}.dump(2)
       << '\n';
  } else if (c.format == "pretty") {
    os << (any_closed ? "max |closed - oracle| = " + fmt(worst) : std::string("no closed form to compare"))
       << (ok ? "  PASS" : "  FAIL") << '\n';
  }
  out.finish();
  return ok ? kExitOk : kExitNumeric;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Semi-device-independent verification of Bell and GHZ states"};
  app.require_subcommand(1);

  Common common;
  ProtocolOpts proto;

  auto* protocols = app.add_subcommand("protocols", "List named protocols with thresholds");
  add_common(protocols, common, false);

  CurveOpts curve;
  auto* curve_cmd = app.add_subcommand("curve", "Guessing probability curves");
  add_common(curve_cmd, common, false);
  add_protocol(curve_cmd, proto);
  curve_cmd->add_option("kind", curve.kind, "gamma_c | gamma_hat_c | gamma_f")
      ->required()
      ->check(CLI::IsMember({"gamma_c", "gamma_hat_c", "gamma_f"}));
  curve_cmd->add_option("--grid", curve.grid, "Comma-separated strictly increasing points in [0,1]");
  curve_cmd->add_option("--points", curve.points, "Uniform grid size when --grid is absent");
  curve_cmd->add_flag("--no-oracle", curve.no_oracle, "Skip the numerical oracle column");

  SimOpts sim;
  auto* sim_cmd = app.add_subcommand("simulate", "Monte Carlo verification game");
  add_common(sim_cmd, common, true);
  add_protocol(sim_cmd, proto);
  sim_cmd->add_option("target", sim.target, "bell | ghz")->required()->check(CLI::IsMember({"bell", "ghz"}));
  sim_cmd->add_option("--adversary", sim.adversary, "honest | product | mixture | fixed")
      ->check(CLI::IsMember({"honest", "product", "mixture", "fixed"}));
  sim_cmd->add_option("--concurrence", sim.concurrence, "Concurrence of the mixture adversary")
      ->check(CLI::Range(0.0, 1.0));
  sim_cmd->add_option("--state", sim.state_path, "Density matrix JSON for the fixed adversary");
  sim_cmd->add_option("--n", sim.n, "GHZ party count")->check(CLI::Range(2, 10));
  sim_cmd->add_option("--dishonest", sim.dishonest, "Dishonest parties, 1-based (default: last)")
      ->delimiter(',');
  sim_cmd->add_option("--law", sim.law, "GHZ phase law")->check(CLI::IsMember({"continuous", "discrete"}));
  sim_cmd->add_option("--k-sigma", sim.k_sigma, "Certification margin in standard errors");
  sim_cmd->add_option("--transcript", sim.transcript, "Write per-trial JSON lines to PATH");

  SampleOpts samp;
  auto* samp_cmd = app.add_subcommand("samples", "Number of tests for a target infidelity");
  add_common(samp_cmd, common, false);
  samp_cmd->add_option("scenario", samp.scenario, "sdi | standard | mermin | quadratic | comparison")
      ->required()
      ->check(CLI::IsMember({"sdi", "standard", "mermin", "quadratic", "comparison"}));
  samp_cmd->add_option("--gamma-star", samp.gamma_star, "Guessing threshold (sdi)");
  samp_cmd->add_option("--nu", samp.nu, "Spectral gap (standard, default 2/3)");
  samp_cmd->add_option("--c", samp.c, "Constant of the quadratic DI bound");
  samp_cmd->add_option("--eps", samp.eps, "Infidelity target");
  samp_cmd->add_option("--delta", samp.delta, "Significance level");
  samp_cmd->add_option("--eps-grid", samp.eps_grid, "comparison: comma-separated epsilon values");

  CheckOpts check;
  auto* check_cmd = app.add_subcommand("oracle-check", "Compare closed forms with the numerical oracle");
  add_common(check_cmd, common, false);
  add_protocol(check_cmd, proto);
  check_cmd->add_option("--grid", check.grid, "Comma-separated C values");
  check_cmd->add_option("--points", check.points, "Uniform C grid size when --grid is absent");
  check_cmd->add_option("--tol", check.tol, "Maximum allowed |closed - oracle|");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*protocols) return cmd_protocols(common);
    if (*curve_cmd) return cmd_curve(common, proto, curve);
    if (*sim_cmd) return cmd_simulate(common, proto, sim);
    if (*samp_cmd) return cmd_samples(common, samp);
    if (*check_cmd) return cmd_oracle_check(common, proto, check);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const Unsupported& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const NumericFailure& e) {
    std::cerr << "numeric failure: " << e.what() << '\n';
    return kExitNumeric;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitNumeric;
  }
  return kExitUsage;
}
