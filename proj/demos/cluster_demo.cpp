// Runs the fig1b setup at a forgetful and a long-memory discount and prints
// the resulting cooperative cluster structure.

#include <iostream>

#include "hdd/hdd.hpp"

int main() {
  for (double nu : {0.05, 0.95}) {
    hdd::SimConfig cfg = hdd::scenario_config("fig1b", 7);
    cfg.nu = nu;
    hdd::TrajectoryLog log = hdd::run(cfg);

    std::cout << "nu = " << hdd::format_double(nu) << ": "
              << log.summary.clusters.count() << " cooperative cluster(s)\n";
    for (int c = 0; c < log.summary.clusters.count(); ++c) {
      std::cout << "  cluster " << c << " at "
                << hdd::format_double(log.summary.clusters.representatives[c])
                << ": agents";
      for (int id : log.summary.clusters.clusters[c]) std::cout << ' ' << id;
      std::cout << '\n';
    }
    const auto& tc = log.summary.trusting_cluster;
    std::cout << "  largest trusting cluster has " << tc.members.size()
              << " agents, consensus " << (tc.consensus_ok ? "ok" : "failed")
              << "\n\n";
  }
  return 0;
}
