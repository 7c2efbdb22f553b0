// SPDX-License-Identifier: Apache-2.0
#pragma once

// JSON schema: {"kind": ..., "params": {...}, "atoms": [{"r": [x,y,z], "w": w}]}
// Named families are rebuilt from kind + params; atoms are informative there.

#include <string>

#include "json.hpp"
#include "bellcert/strategy.hpp"

namespace bellcert {

inline nlohmann::json to_json(const Strategy& mu) {
  nlohmann::json j;
  j["kind"] = std::string(family_name(mu.family()));
  nlohmann::json p = nlohmann::json::object();
  const auto& prm = mu.params();
  if (prm.m) p["M"] = *prm.m;
  if (prm.pz && mu.family() != Family::EquatorPlusZII) p["pZ"] = *prm.pz;
  if (prm.alpha) p["alpha"] = *prm.alpha;
  if (prm.p1) p["p1"] = *prm.p1;
  j["params"] = p;
  nlohmann::json atoms = nlohmann::json::array();
  for (const auto& a : mu.atoms())
    atoms.push_back({{"r", {a.r.x(), a.r.y(), a.r.z()}}, {"w", a.w}});
  j["atoms"] = atoms;
  return j;
}

inline Strategy strategy_from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("kind") || !j["kind"].is_string())
    throw std::invalid_argument("strategy JSON needs a string 'kind'");
  const std::string kind = j["kind"].get<std::string>();
  if (parse_family(kind) == Family::Discrete) {
    if (!j.contains("atoms") || !j["atoms"].is_array())
      throw std::invalid_argument("discrete strategy JSON needs 'atoms'");
    std::vector<Atom> atoms;
    for (const auto& a : j["atoms"]) {
      const auto& r = a.at("r");
      if (!r.is_array() || r.size() != 3) throw std::invalid_argument("atom 'r' must have 3 entries");
      // tolerate short decimal input: renormalize
      atoms.push_back({BlochVector::from({r[0].get<double>(), r[1].get<double>(), r[2].get<double>()}),
                       a.at("w").get<double>()});
    }
    return Strategy::discrete(std::move(atoms));
  }
  StrategyParams p;
  if (j.contains("params")) {
    const auto& q = j["params"];
    if (!q.is_object()) throw std::invalid_argument("'params' must be an object");
    for (auto it = q.begin(); it != q.end(); ++it) {
      if (it.key() == "M") p.m = it.value().get<int>();
      else if (it.key() == "pZ") p.pz = it.value().get<double>();
      else if (it.key() == "alpha") p.alpha = it.value().get<double>();
      else if (it.key() == "p1") p.p1 = it.value().get<double>();
      else throw std::invalid_argument("unknown strategy parameter: " + it.key());
    }
  }
  return make_named(kind, p);
}

}  // namespace bellcert
