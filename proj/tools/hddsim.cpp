// hddsim: deterministic driver for the trust-weighted consensus simulator.
// Subcommands cover single runs, the canned fig1 scenarios, parameter sweeps,
// the appendix nu sweep and a topology export. Identical invocations produce
// byte-identical artifacts.

#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "hdd/hdd.hpp"

namespace fs = std::filesystem;

namespace {

fs::path resolve_out(const std::string& out) {
  if (!out.empty()) return fs::path(out);
  if (const char* env = std::getenv("HDDSIM_OUT")) return fs::path(env);
  throw std::runtime_error("no output directory: pass --out or set HDDSIM_OUT");
}

void print_summary(const hdd::TrajectoryLog& log) {
  const auto& s = log.summary;
  std::cout << "final cooperative spread " << hdd::format_double(s.final_spread)
            << ", " << s.clusters.count() << " cluster(s)\n";
  std::cout << "largest trusting cluster: " << s.trusting_cluster.members.size()
            << " agents, consensus "
            << (s.trusting_cluster.consensus_ok ? "ok" : "failed") << '\n';
}

int cmd_run(const std::string& config_path, const std::vector<std::string>& sets,
            const std::string& out) {
  const fs::path out_dir = resolve_out(out);
  hdd::SimConfig cfg = hdd::parse_config_file(config_path, sets);
  hdd::TrajectoryLog log = hdd::run(cfg);

  fs::create_directories(out_dir);
  hdd::ArtifactTracker tracker;
  hdd::RunManifest manifest;
  manifest.command = "run";
  manifest.out_dir = out_dir.string();
  manifest.configs.push_back(hdd::config_to_json(cfg));

  const auto traj = out_dir / "trajectory.csv";
  tracker.add(traj);
  { auto os = hdd::open_out(traj); hdd::write_trajectory_csv(os, log); }
  manifest.artifacts.push_back("trajectory.csv");

  const auto weights = out_dir / "weights.csv";
  tracker.add(weights);
  { auto os = hdd::open_out(weights); hdd::write_weights_csv(os, log); }
  manifest.artifacts.push_back("weights.csv");

  const auto mpath = out_dir / "manifest.json";
  tracker.add(mpath);
  manifest.artifacts.push_back("manifest.json");
  hdd::write_manifest(mpath, manifest);
  tracker.commit();

  print_summary(log);
  std::cout << "wrote " << out_dir.string() << '\n';
  return 0;
}

int cmd_scenario(const std::string& name, std::uint64_t seed, const std::string& out) {
  const auto manifest = hdd::run_scenario(name, seed, resolve_out(out));
  std::cout << "scenario " << name << " seed " << seed << ": "
            << manifest.artifacts.size() << " artifacts in " << manifest.out_dir
            << '\n';
  return 0;
}

hdd::SweepAxes parse_grid(const std::vector<std::string>& specs) {
  hdd::SweepAxes axes;
  for (const auto& spec : specs) {
    const auto eq = spec.find('=');
    if (eq == std::string::npos)
      throw std::runtime_error("--grid expects key=v1,v2,..., got '" + spec + "'");
    const std::string key = spec.substr(0, eq);
    std::stringstream ss(spec.substr(eq + 1));
    std::string piece;
    std::vector<std::string> values;
    while (std::getline(ss, piece, ',')) values.push_back(piece);
    if (values.empty())
      throw std::runtime_error("--grid " + key + " has no values");
    if (key == "T" || key == "horizon") {
      for (const auto& v : values)
        axes.horizons.push_back(hdd::detail::parse_number<int>(key, v));
    } else if (key == "nu") {
      for (const auto& v : values)
        axes.nus.push_back(hdd::detail::parse_number<double>(key, v));
    } else if (key == "eps_max" || key == "eps_hi") {
      for (const auto& v : values)
        axes.eps_maxes.push_back(hdd::detail::parse_number<double>(key, v));
    } else {
      throw std::runtime_error("--grid key '" + key +
                               "' unknown (use T, nu or eps_max)");
    }
  }
  return axes;
}

int cmd_sweep(const std::string& config_path, const std::vector<std::string>& sets,
              const std::vector<std::string>& grid,
              const std::vector<std::uint64_t>& seeds, std::vector<int> columns,
              int threads, const std::string& out) {
  const fs::path out_dir = resolve_out(out);
  hdd::SimConfig base = hdd::parse_config_file(config_path, sets);
  const hdd::SweepAxes axes = parse_grid(grid);
  if (columns.empty()) columns = hdd::appendix_weight_columns(base);
  hdd::SweepTable table = hdd::sweep(base, axes, seeds, columns, threads);

  fs::create_directories(out_dir);
  hdd::ArtifactTracker tracker;
  hdd::RunManifest manifest;
  manifest.command = "sweep";
  manifest.out_dir = out_dir.string();
  manifest.configs.push_back(hdd::config_to_json(base));

  const auto spath = out_dir / "sweep.csv";
  tracker.add(spath);
  { auto os = hdd::open_out(spath); hdd::write_sweep_csv(os, table); }
  manifest.artifacts.push_back("sweep.csv");

  const auto wpath = out_dir / "sweep_weights.csv";
  tracker.add(wpath);
  { auto os = hdd::open_out(wpath); hdd::write_sweep_weights_csv(os, table); }
  manifest.artifacts.push_back("sweep_weights.csv");

  const auto mpath = out_dir / "manifest.json";
  tracker.add(mpath);
  manifest.artifacts.push_back("manifest.json");
  hdd::write_manifest(mpath, manifest);
  tracker.commit();

  std::cout << "sweep: " << table.runs.size() << " runs, wrote " << out_dir.string()
            << '\n';
  return 0;
}

int cmd_appendix(const std::vector<std::string>& names,
                 const std::vector<std::uint64_t>& seeds, int threads,
                 const std::string& out) {
  const auto manifest = hdd::run_appendix_sweep(
      names.empty() ? hdd::scenario_names() : names, seeds, resolve_out(out), threads);
  std::cout << "appendix: " << manifest.artifacts.size() << " artifacts in "
            << manifest.out_dir << '\n';
  return 0;
}

int cmd_graph_export(const std::string& config_path,
                     const std::vector<std::string>& sets, const std::string& out) {
  hdd::SimConfig cfg = hdd::parse_config_file(config_path, sets);
  hdd::Graph g = hdd::build_run_topology(cfg);
  auto os = hdd::open_out(fs::path(out));
  hdd::write_edge_list(os, g);
  std::cout << "graph: " << g.n_agents() << " agents ("
            << g.cooperative_agents().size() << " cooperative), "
            << g.edges().size() << " edges -> " << out << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"hddsim: history-driven trust-weighted consensus simulator"};
  app.require_subcommand(1);
  app.footer(hdd::config_help_text());

  std::string config_path, out, name;
  std::vector<std::string> sets, grid, names;
  std::vector<std::uint64_t> seeds;
  std::vector<int> columns;
  std::uint64_t seed = 1;
  int threads = 0;

  auto* run_cmd = app.add_subcommand("run", "single run from a config file");
  run_cmd->add_option("--config", config_path, "config file")->required();
  run_cmd->add_option("--set", sets, "override, key=value or section.key=value");
  run_cmd->add_option("--out", out, "output directory (or $HDDSIM_OUT)");
  run_cmd->footer(hdd::config_help_text());

  auto* scen_cmd = app.add_subcommand("scenario", "canned fig1 setup at three discounts");
  scen_cmd->add_option("--name", name, "fig1a, fig1b, fig1c or fig1d")
      ->required()
      ->check(CLI::IsMember(hdd::scenario_names()));
  scen_cmd->add_option("--seed", seed, "base seed");
  scen_cmd->add_option("--out", out, "output directory (or $HDDSIM_OUT)");

  auto* sweep_cmd = app.add_subcommand("sweep", "grid of runs over T, nu, eps_max");
  sweep_cmd->add_option("--config", config_path, "base config file")->required();
  sweep_cmd->add_option("--set", sets, "override, key=value or section.key=value");
  sweep_cmd->add_option("--grid", grid, "axis, e.g. nu=0.05,0.5,0.95 (repeatable)");
  sweep_cmd->add_option("--seeds", seeds, "comma-separated seed list")
      ->required()
      ->delimiter(',');
  sweep_cmd->add_option("--weight-columns", columns,
                        "agents whose final weight columns are logged")
      ->delimiter(',');
  sweep_cmd->add_option("--threads", threads, "worker threads (0: serial)");
  sweep_cmd->add_option("--out", out, "output directory (or $HDDSIM_OUT)");
  sweep_cmd->footer(hdd::config_help_text());

  auto* app_cmd = app.add_subcommand("appendix", "fine nu sweep with a stealth adversary");
  app_cmd->add_option("--scenario", names, "scenario subset (default: all four)")
      ->check(CLI::IsMember(hdd::scenario_names()));
  app_cmd->add_option("--seeds", seeds, "comma-separated seed list")
      ->required()
      ->delimiter(',');
  app_cmd->add_option("--threads", threads, "worker threads (0: serial)");
  app_cmd->add_option("--out", out, "output directory (or $HDDSIM_OUT)");

  auto* gex_cmd = app.add_subcommand("graph-export", "write the run topology as an edge list");
  gex_cmd->add_option("--config", config_path, "config file")->required();
  gex_cmd->add_option("--set", sets, "override, key=value or section.key=value");
  gex_cmd->add_option("--out", out, "output file")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (run_cmd->parsed()) return cmd_run(config_path, sets, out);
    if (scen_cmd->parsed()) return cmd_scenario(name, seed, out);
    if (sweep_cmd->parsed())
      return cmd_sweep(config_path, sets, grid, seeds, columns, threads, out);
    if (app_cmd->parsed()) return cmd_appendix(names, seeds, threads, out);
    if (gex_cmd->parsed()) return cmd_graph_export(config_path, sets, out);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
