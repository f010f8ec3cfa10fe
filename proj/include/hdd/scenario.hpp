#pragma once
// Canned experiment setups. The four fig1 scenarios share the 13-agent
// two-population topology and vary the window length and the bound draw
// interval; the scenario runner repeats each one for the three reference
// discounts. The appendix sweep walks nu over a fine grid with the last
// adversary swapped for a stealth rule and logs the final weight columns of
// the designated agents.

#include <cstdint>
#include <filesystem>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "hdd/io.hpp"
#include "hdd/sim.hpp"

namespace hdd {

inline const std::vector<std::string>& scenario_names() {
  static const std::vector<std::string> names = {"fig1a", "fig1b", "fig1c", "fig1d"};
  return names;
}

// discounts each scenario is run at
inline const std::vector<double>& scenario_nus() {
  static const std::vector<double> nus = {0.05, 0.5, 0.95};
  return nus;
}

// appendix grid: 0.05, 0.10, ..., 0.95
inline const std::vector<double>& appendix_nus() {
  static const std::vector<double> nus = [] {
    std::vector<double> v;
    for (int i = 1; i <= 19; ++i) v.push_back(static_cast<double>(i * 5) / 100.0);
    return v;
  }();
  return nus;
}

inline SimConfig scenario_config(const std::string& name, std::uint64_t seed) {
  SimConfig cfg;
  cfg.graph = {10, 3, 0.4, false, true, 100};
  cfg.steps = 200;
  cfg.confidence.eps_lo = 0.01;
  cfg.prefill = PrefillStrategy::uniform(0.0, 1.0);
  cfg.default_adversary = BehaviorModel::random(0.0, 1.0);
  cfg.seed = seed;
  if (name == "fig1a") {
    cfg.horizon = 15;
    cfg.confidence.eps_hi = 0.5;
  } else if (name == "fig1b") {
    cfg.horizon = 15;
    cfg.confidence.eps_hi = 1.0;
  } else if (name == "fig1c") {
    cfg.horizon = 15;
    cfg.confidence.eps_hi = 1.5;
  } else if (name == "fig1d") {
    cfg.horizon = 5;
    cfg.confidence.eps_hi = 1.0;
  } else {
    throw std::invalid_argument(
        "scenario: unknown name '" + name + "' (expected fig1a, fig1b, fig1c or fig1d)");
  }
  return cfg;
}

// appendix variant: two random adversaries stay, the last one turns stealth
// and tracks the visible cooperative average without ever betraying
inline SimConfig appendix_config(const std::string& name, std::uint64_t seed) {
  SimConfig cfg = scenario_config(name, seed);
  const int last = cfg.graph.n_coop + cfg.graph.n_noncoop - 1;
  cfg.behavior_overrides[last] = BehaviorModel::stealth(1.0, std::nullopt);
  return cfg;
}

// weight columns the appendix tables log: one cooperative witness plus every
// non-cooperative agent
inline std::vector<int> appendix_weight_columns(const SimConfig& cfg) {
  std::vector<int> cols{1};
  for (int a = cfg.graph.n_coop; a < cfg.graph.n_coop + cfg.graph.n_noncoop; ++a)
    cols.push_back(a);
  return cols;
}

// Run one scenario at every reference discount; one trajectory and one
// weights CSV per discount plus a manifest that echoes the resolved configs.
inline RunManifest run_scenario(const std::string& name, std::uint64_t seed,
                                const std::filesystem::path& out_dir) {
  RunManifest manifest;
  manifest.command = "scenario " + name;
  manifest.out_dir = out_dir.string();
  std::filesystem::create_directories(out_dir);
  ArtifactTracker tracker;

  for (double nu : scenario_nus()) {
    SimConfig cfg = scenario_config(name, seed);
    cfg.nu = nu;
    TrajectoryLog log = run(cfg);
    const std::string tag = "_nu" + format_double(nu);

    const auto traj_path = out_dir / ("trajectory" + tag + ".csv");
    tracker.add(traj_path);
    { auto os = open_out(traj_path); write_trajectory_csv(os, log); }
    manifest.artifacts.push_back(traj_path.filename().string());

    const auto w_path = out_dir / ("weights" + tag + ".csv");
    tracker.add(w_path);
    { auto os = open_out(w_path); write_weights_csv(os, log); }
    manifest.artifacts.push_back(w_path.filename().string());

    manifest.configs.push_back(config_to_json(cfg));
  }

  const auto manifest_path = out_dir / "manifest.json";
  tracker.add(manifest_path);
  manifest.artifacts.push_back(manifest_path.filename().string());
  write_manifest(manifest_path, manifest);
  tracker.commit();
  return manifest;
}

// Fine nu sweep of the appendix setup. Per scenario: a final-state table, the
// designated final-weight columns and one metadata JSON.
inline RunManifest run_appendix_sweep(std::span<const std::string> names,
                                      std::span<const std::uint64_t> seeds,
                                      const std::filesystem::path& out_dir,
                                      int n_threads = 0) {
  if (names.empty()) throw std::invalid_argument("appendix: no scenarios given");
  if (seeds.empty()) throw std::invalid_argument("appendix: no seeds given");
  RunManifest manifest;
  manifest.command = "appendix";
  manifest.out_dir = out_dir.string();
  std::filesystem::create_directories(out_dir);
  ArtifactTracker tracker;

  for (const auto& name : names) {
    SimConfig base = appendix_config(name, seeds[0]);
    SweepAxes axes;
    axes.nus = appendix_nus();
    const std::vector<int> cols = appendix_weight_columns(base);
    SweepTable table = sweep(base, axes, seeds, cols, n_threads);

    const auto states_path = out_dir / (name + "_final_states.csv");
    tracker.add(states_path);
    { auto os = open_out(states_path); write_sweep_csv(os, table); }
    manifest.artifacts.push_back(states_path.filename().string());

    const auto weights_path = out_dir / (name + "_final_weights.csv");
    tracker.add(weights_path);
    { auto os = open_out(weights_path); write_sweep_weights_csv(os, table); }
    manifest.artifacts.push_back(weights_path.filename().string());

    nlohmann::json meta = {{"version", kVersion},
                           {"scenario", name},
                           {"nu_grid", axes.nus},
                           {"seeds", std::vector<std::uint64_t>(seeds.begin(), seeds.end())},
                           {"weight_columns", cols},
                           {"base_config", config_to_json(base)}};
    const auto meta_path = out_dir / (name + "_metadata.json");
    tracker.add(meta_path);
    { auto os = open_out(meta_path); os << meta.dump(2) << '\n'; }
    manifest.artifacts.push_back(meta_path.filename().string());
    manifest.configs.push_back(config_to_json(base));
  }

  const auto manifest_path = out_dir / "manifest.json";
  tracker.add(manifest_path);
  manifest.artifacts.push_back(manifest_path.filename().string());
  write_manifest(manifest_path, manifest);
  tracker.commit();
  return manifest;
}

}  // namespace hdd
