// Side-by-side of the trust-weighted update and the memoryless equal-weight
// baseline on the same network with one noisy adversary: the baseline keeps
// absorbing the noise, the trust rule walls it off. Needs a moderate discount;
// with nu near 1 old membership credit keeps the adversary trusted, with nu
// near 0 the cooperative links fragment too.

#include <iostream>
#include <vector>

#include "hdd/hdd.hpp"

int main() {
  hdd::SimConfig cfg = hdd::scenario_config("fig1b", 3);
  cfg.nu = 0.3;
  cfg.graph.n_noncoop = 1;

  // trust-weighted run
  hdd::TrajectoryLog log = hdd::run(cfg);

  // equal-weight baseline on the same topology, same initial states, same
  // adversary stream
  const hdd::Graph& g = log.graph;
  const int n = g.n_agents();
  std::vector<hdd::NeighborView> views;
  for (int i = 0; i < n; ++i) views.push_back(hdd::neighbor_view(g, i));
  std::vector<double> cur(log.states.begin(), log.states.begin() + n);
  const int adv = g.non_cooperative_agents().front();
  hdd::Rng adv_rng(hdd::derive_seed(cfg.seed, hdd::StreamPurpose::adversary,
                                    static_cast<std::uint64_t>(adv)));
  std::vector<double> next(cur);
  for (long t = 0; t < cfg.steps; ++t) {
    for (int i : g.cooperative_agents()) next[i] = hdd::baseline_step(cur, views[i]);
    next[adv] = adv_rng.next_in(0.0, 1.0);
    cur = next;
  }

  std::vector<double> coop_trust, coop_base;
  for (int i : g.cooperative_agents()) {
    coop_trust.push_back(log.state(cfg.steps, i));
    coop_base.push_back(cur[i]);
  }
  const hdd::WeightMatrix& w = log.final_weights();
  std::cout << "cooperative spread after " << cfg.steps << " steps (nu = "
            << hdd::format_double(cfg.nu) << ")\n"
            << "  trust-weighted: " << hdd::format_double(hdd::spread(coop_trust))
            << '\n'
            << "  equal weights:  " << hdd::format_double(hdd::spread(coop_base))
            << '\n'
            << "final weight on the adversary from agent 0: "
            << hdd::format_double(w.weight(0, adv))
            << " (an equal-weight node gives it "
            << hdd::format_double(1.0 / static_cast<double>(views[0].inclusive.size()))
            << ")\n";
  return 0;
}
