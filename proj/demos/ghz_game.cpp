// SPDX-License-Identifier: Apache-2.0
// Three-party GHZ game: honest source versus the best product preparation of
// the dishonest party, at the pZ minimizing the threshold.
#include <cstdio>

#include "bellcert/simulator.hpp"

int main() {
  using namespace bellcert;
  const auto s = GhzStrategy::continuous(optimal_pz_equator_plus_z());
  const auto layout = PartyLayout::with_dishonest(3, {2});
  const double threshold = gme_threshold(effective_strategy(s));
  for (const auto& adv : {AdversaryModel::honest(), AdversaryModel::optimal_product()}) {
    const auto rec = play_ghz(s, layout, adv, 20000, 7);
    const auto v = verdict(rec, threshold, 3);
    std::printf("%-8s pass rate %.4f +- %.4f  threshold %.4f  %s\n", adversary_name(adv.kind), rec.pass_rate,
                rec.std_err, threshold, v.entanglement_certified ? "GME certified" : "not certified");
  }
}
