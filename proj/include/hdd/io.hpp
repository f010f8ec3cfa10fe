#pragma once
// Artifact writers. CSVs are plain comma-separated text with a header row;
// doubles go through to_chars so output is locale independent and re-parses
// to the exact same bits. Metadata lands in a JSON sidecar that echoes the
// resolved config, the derived per-purpose seeds and the library version.

#include <charconv>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <system_error>
#include <vector>

#include <json.hpp>

#include "hdd/sim.hpp"
#include "hdd/version.hpp"

namespace hdd {

// shortest round-trip decimal form
inline std::string format_double(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  if (ec != std::errc()) throw std::runtime_error("io: to_chars failed");
  return std::string(buf, ptr);
}

inline std::ofstream open_out(const std::filesystem::path& path) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream os(path);
  if (!os) throw std::runtime_error("io: cannot open " + path.string());
  return os;
}

// t,agent,state for every recorded step and agent
inline void write_trajectory_csv(std::ostream& os, const TrajectoryLog& log) {
  os << "t,agent,state\n";
  const int n = log.graph.n_agents();
  for (long t = 0; t <= log.config.steps; ++t) {
    auto row = log.states_at(t);
    for (int i = 0; i < n; ++i)
      os << t << ',' << i << ',' << format_double(row[static_cast<std::size_t>(i)])
         << '\n';
  }
}

// t,i,j,w for every snapshot; agents without a row simply do not appear
inline void write_weights_csv(std::ostream& os, const TrajectoryLog& log) {
  os << "t,i,j,w\n";
  for (const WeightMatrix& w : log.weight_snapshots)
    for (int i : w.agents_with_rows())
      for (const auto& [j, wij] : w.row(i))
        os << w.step() << ',' << i << ',' << j << ',' << format_double(wij) << '\n';
}

// T,nu,eps_max,seed,agent,final_state,cluster_id
inline void write_sweep_csv(std::ostream& os, const SweepTable& table) {
  os << "T,nu,eps_max,seed,agent,final_state,cluster_id\n";
  for (const SweepRun& r : table.runs)
    for (std::size_t a = 0; a < r.agents.size(); ++a)
      os << r.horizon << ',' << format_double(r.nu) << ','
         << format_double(r.eps_max) << ',' << r.seed << ',' << r.agents[a] << ','
         << format_double(r.final_states[a]) << ',' << r.cluster_ids[a] << '\n';
}

// T,nu,eps_max,seed,i,j,w for the designated weight columns
inline void write_sweep_weights_csv(std::ostream& os, const SweepTable& table) {
  os << "T,nu,eps_max,seed,i,j,w\n";
  for (const SweepRun& r : table.runs)
    for (const auto& [i, j, w] : r.weight_columns)
      os << r.horizon << ',' << format_double(r.nu) << ','
         << format_double(r.eps_max) << ',' << r.seed << ',' << i << ',' << j << ','
         << format_double(w) << '\n';
}

inline nlohmann::json config_to_json(const SimConfig& cfg) {
  nlohmann::json j;
  j["graph"] = {{"n_coop", cfg.graph.n_coop},
                {"n_noncoop", cfg.graph.n_noncoop},
                {"edge_prob", cfg.graph.edge_prob},
                {"adversary_edges", cfg.graph.adversary_edges},
                {"require_connected", cfg.graph.require_connected},
                {"connect_retries", cfg.graph.connect_retries}};
  const char* prefill = cfg.prefill.kind == PrefillStrategy::Kind::hold ? "hold" : "uniform";
  j["history"] = {{"horizon", cfg.horizon},
                  {"prefill", prefill},
                  {"prefill_lo", cfg.prefill.lo},
                  {"prefill_hi", cfg.prefill.hi}};
  const char* kind = "sorted-uniform";
  if (cfg.confidence.kind == ConfidenceSchedule::Kind::exponential_decay)
    kind = "exponential-decay";
  else if (cfg.confidence.kind == ConfidenceSchedule::Kind::geometric_decay)
    kind = "geometric-decay";
  j["trust"] = {{"confidence", kind},
                {"eps_lo", cfg.confidence.eps_lo},
                {"eps_hi", cfg.confidence.eps_hi},
                {"amplitude", cfg.confidence.amplitude},
                {"rate", cfg.confidence.rate},
                {"nu", cfg.nu},
                {"compute_covariance", cfg.compute_covariance}};
  auto behavior_str = [](const BehaviorModel& m) {
    switch (m.kind) {
      case BehaviorModel::Kind::random_adversary:
        return "random(" + format_double(m.noise_lo) + "," + format_double(m.noise_hi) + ")";
      case BehaviorModel::Kind::stubborn_adversary:
        return "stubborn(" + format_double(m.stubborn_value) + ")";
      case BehaviorModel::Kind::stealth_adversary:
        return "stealth(" + format_double(m.stealth_gain) + "," +
               (m.betray_time ? std::to_string(*m.betray_time) : std::string("never")) +
               "," + format_double(m.noise_lo) + "," + format_double(m.noise_hi) + ")";
      case BehaviorModel::Kind::cooperative:
        return std::string("cooperative");
    }
    return std::string("unknown");
  };
  nlohmann::json overrides = nlohmann::json::object();
  for (const auto& [id, m] : cfg.behavior_overrides)
    overrides["agent_" + std::to_string(id)] = behavior_str(m);
  j["behavior"] = {{"default_adversary", behavior_str(cfg.default_adversary)},
                   {"overrides", overrides}};
  j["run"] = {{"steps", cfg.steps},
              {"seed", cfg.seed},
              {"initial_lo", cfg.initial_lo},
              {"initial_hi", cfg.initial_hi},
              {"weight_stride", cfg.weight_stride},
              {"trust_stride", cfg.trust_stride},
              {"cluster_tol", cfg.cluster_tol},
              {"weight_threshold", cfg.weight_threshold},
              {"state_tol", cfg.state_tol}};
  const int n = cfg.graph.n_coop + cfg.graph.n_noncoop;
  nlohmann::json derived;
  for (auto [name, purpose] :
       {std::pair{"initial_state", StreamPurpose::initial_state},
        std::pair{"prefill", StreamPurpose::prefill},
        std::pair{"confidence_bounds", StreamPurpose::confidence_bounds},
        std::pair{"adversary", StreamPurpose::adversary}}) {
    std::vector<std::uint64_t> per_agent;
    for (int i = 0; i < n; ++i)
      per_agent.push_back(derive_seed(cfg.seed, purpose, static_cast<std::uint64_t>(i)));
    derived[name] = per_agent;
  }
  derived["topology"] = derive_seed(cfg.seed, StreamPurpose::topology, 0);
  j["derived_seeds"] = derived;
  return j;
}

struct RunManifest {
  std::string command;
  std::string out_dir;
  std::vector<std::string> artifacts;  // file names relative to out_dir
  int exit_status = 0;
  nlohmann::json configs = nlohmann::json::array();  // resolved config echoes
};

inline nlohmann::json manifest_to_json(const RunManifest& m) {
  return {{"version", kVersion},     {"command", m.command},
          {"out_dir", m.out_dir},    {"artifacts", m.artifacts},
          {"exit_status", m.exit_status}, {"configs", m.configs}};
}

inline void write_manifest(const std::filesystem::path& path, const RunManifest& m) {
  auto os = open_out(path);
  os << manifest_to_json(m).dump(2) << '\n';
}

// Collects the files a command writes so a failure can sweep up the partial
// output instead of leaving it behind. commit() keeps everything.
class ArtifactTracker {
 public:
  ~ArtifactTracker() {
    if (committed_) return;
    std::error_code ec;
    for (const auto& p : paths_) std::filesystem::remove(p, ec);
  }

  void add(const std::filesystem::path& p) { paths_.push_back(p); }
  void commit() { committed_ = true; }

 private:
  std::vector<std::filesystem::path> paths_;
  bool committed_ = false;
};

}  // namespace hdd
