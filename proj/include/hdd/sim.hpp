#pragma once
// Deterministic simulation driver. One run builds the topology, prefills the
// cooperative windows, then advances synchronous rounds: every next state is
// computed from the committed states of step t, and only then do windows
// roll forward. Identical config and seed give bit-identical logs.
//
// Also hosts the post-run analysis: gap-based cluster detection, the
// trust-based consensus check, and the parameter sweep.

#include <algorithm>
#include <cstdint>
#include <functional>
#include <future>
#include <map>
#include <span>
#include <stdexcept>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "hdd/agents.hpp"
#include "hdd/graph.hpp"
#include "hdd/history.hpp"
#include "hdd/protocol.hpp"
#include "hdd/rng.hpp"
#include "hdd/trust.hpp"

namespace hdd {

struct GraphConfig {
  int n_coop = 10;
  int n_noncoop = 3;
  double edge_prob = 0.4;
  bool adversary_edges = false;
  bool require_connected = true;
  int connect_retries = 100;
};

struct ConfidenceConfig {
  ConfidenceSchedule::Kind kind = ConfidenceSchedule::Kind::sorted_uniform;
  double eps_lo = 0.01;  // sorted-uniform draw interval
  double eps_hi = 1.0;
  double amplitude = 1.0;  // decay kinds: amplitude * exp(-rate k), amplitude * rate^k
  double rate = 0.05;
};

struct SimConfig {
  GraphConfig graph;
  int horizon = 15;
  long steps = 200;
  double nu = 0.5;
  ConfidenceConfig confidence;
  PrefillStrategy prefill = PrefillStrategy::uniform(0.0, 1.0);
  BehaviorModel default_adversary = BehaviorModel::random(0.0, 1.0);
  std::map<int, BehaviorModel> behavior_overrides;  // non-cooperative ids only
  double initial_lo = 0.0;
  double initial_hi = 1.0;
  std::uint64_t seed = 1;
  long weight_stride = 0;  // 0: final snapshot only
  long trust_stride = 0;
  bool compute_covariance = true;
  double cluster_tol = 1e-2;
  double weight_threshold = 1e-3;
  double state_tol = 1e-2;

  void validate() const {
    if (graph.n_coop < 1)
      throw std::invalid_argument("graph.n_coop: must be >= 1");
    if (graph.n_noncoop < 0)
      throw std::invalid_argument("graph.n_noncoop: must be >= 0");
    if (!(graph.edge_prob >= 0.0 && graph.edge_prob <= 1.0))
      throw std::invalid_argument("graph.edge_prob: must be in [0,1]");
    if (graph.connect_retries < 1)
      throw std::invalid_argument("graph.connect_retries: must be >= 1");
    if (horizon < 2)
      throw std::invalid_argument(
          "history.horizon: must be >= 2 (covariance normalizes by horizon-1)");
    if (steps < 1) throw std::invalid_argument("run.steps: must be >= 1");
    if (!(nu > 0.0 && nu < 1.0))
      throw std::invalid_argument("trust.nu: must be in (0,1), got " +
                                  std::to_string(nu));
    switch (confidence.kind) {
      case ConfidenceSchedule::Kind::sorted_uniform:
        if (!(confidence.eps_lo > 0.0))
          throw std::invalid_argument("trust.eps_lo: must be positive");
        if (!(confidence.eps_hi > confidence.eps_lo))
          throw std::invalid_argument("trust.eps_hi: must exceed trust.eps_lo");
        break;
      case ConfidenceSchedule::Kind::exponential_decay:
        if (!(confidence.amplitude >= 0.0))
          throw std::invalid_argument("trust.amplitude: must be >= 0");
        if (!(confidence.rate > 0.0))
          throw std::invalid_argument("trust.rate: must be positive");
        break;
      case ConfidenceSchedule::Kind::geometric_decay:
        if (!(confidence.amplitude >= 0.0))
          throw std::invalid_argument("trust.amplitude: must be >= 0");
        if (!(confidence.rate > 0.0 && confidence.rate < 1.0))
          throw std::invalid_argument("trust.rate: geometric ratio must be in (0,1)");
        break;
    }
    if (prefill.kind == PrefillStrategy::Kind::uniform && !(prefill.lo < prefill.hi))
      throw std::invalid_argument("history.prefill: uniform needs lo < hi");
    if (!(initial_lo <= initial_hi))
      throw std::invalid_argument("run.initial_lo: must not exceed run.initial_hi");
    if (weight_stride < 0)
      throw std::invalid_argument("run.weight_stride: must be >= 0");
    if (trust_stride < 0)
      throw std::invalid_argument("run.trust_stride: must be >= 0");
    if (!(cluster_tol >= 0.0))
      throw std::invalid_argument("run.cluster_tol: must be >= 0");
    if (!(weight_threshold >= 0.0))
      throw std::invalid_argument("run.weight_threshold: must be >= 0");
    if (!(state_tol > 0.0))
      throw std::invalid_argument("run.state_tol: must be positive");
    if (graph.n_noncoop > 0 &&
        default_adversary.kind == BehaviorModel::Kind::cooperative)
      throw std::invalid_argument(
          "behavior.default_adversary: must be a non-cooperative rule");
    const int n = graph.n_coop + graph.n_noncoop;
    for (const auto& [id, model] : behavior_overrides) {
      if (id < graph.n_coop || id >= n)
        throw std::invalid_argument("behavior.agent_" + std::to_string(id) +
                                    ": only non-cooperative agents take overrides");
      if (model.kind == BehaviorModel::Kind::cooperative)
        throw std::invalid_argument("behavior.agent_" + std::to_string(id) +
                                    ": cooperative is not an override");
    }
  }
};

inline ConfidenceSchedule make_confidence(const SimConfig& cfg, int agent) {
  switch (cfg.confidence.kind) {
    case ConfidenceSchedule::Kind::sorted_uniform:
      return ConfidenceSchedule::sorted_uniform(
          cfg.horizon, cfg.confidence.eps_lo, cfg.confidence.eps_hi,
          derive_seed(cfg.seed, StreamPurpose::confidence_bounds,
                      static_cast<std::uint64_t>(agent)));
    case ConfidenceSchedule::Kind::exponential_decay:
      return ConfidenceSchedule::exponential_decay(cfg.confidence.amplitude,
                                                   cfg.confidence.rate);
    case ConfidenceSchedule::Kind::geometric_decay:
      return ConfidenceSchedule::geometric_decay(cfg.confidence.amplitude,
                                                 cfg.confidence.rate);
  }
  throw std::logic_error("confidence: unknown kind");
}

// Gap clustering on a line: sort the values, split where the gap between
// neighbors exceeds tol. Clusters come out in ascending value order.
struct ClusterReport {
  std::vector<std::vector<int>> clusters;  // agent ids per cluster
  std::vector<double> representatives;     // cluster means
  double max_intra_spread = 0.0;

  int count() const { return static_cast<int>(clusters.size()); }
};

inline ClusterReport detect_clusters(std::span<const int> agents,
                                     std::span<const double> values, double tol) {
  if (agents.size() != values.size())
    throw std::invalid_argument("clusters: agents and values misaligned");
  if (!(tol >= 0.0))
    throw std::invalid_argument("clusters: tolerance must be >= 0");
  ClusterReport rep;
  if (agents.empty()) return rep;

  std::vector<std::size_t> order(agents.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return std::tie(values[a], agents[a]) < std::tie(values[b], agents[b]);
  });

  std::vector<std::size_t> current{order[0]};
  auto flush = [&] {
    std::vector<int> ids;
    double sum = 0.0;
    for (std::size_t idx : current) {
      ids.push_back(agents[idx]);
      sum += values[idx];
    }
    const double spread = values[current.back()] - values[current.front()];
    rep.max_intra_spread = std::max(rep.max_intra_spread, spread);
    rep.representatives.push_back(sum / static_cast<double>(current.size()));
    std::sort(ids.begin(), ids.end());
    rep.clusters.push_back(std::move(ids));
    current.clear();
  };
  for (std::size_t p = 1; p < order.size(); ++p) {
    if (values[order[p]] - values[current.back()] > tol) flush();
    current.push_back(order[p]);
  }
  flush();
  return rep;
}

struct TrustSnapshot {
  long step = 0;
  std::vector<int> agents;                 // cooperative ids
  std::vector<std::vector<double>> means;  // aligned, canonical neighbor order
  std::vector<Matrix> covariances;         // empty matrices when disabled
};

struct ConsensusVerdict {
  int agent = 0;
  std::vector<int> trusted;  // neighbors kept above the weight threshold
  bool consensus = false;    // final states of all trusted within state_tol
};

struct TrustingClusterReport {
  std::vector<int> members;  // largest mutually-trusting cooperative component
  bool consensus_ok = false;
};

struct RunSummary {
  double final_spread = 0.0;  // cooperative max - min at the last step
  ClusterReport clusters;     // final cooperative states at cluster_tol
  std::vector<ConsensusVerdict> verdicts;
  TrustingClusterReport trusting_cluster;
};

struct TrajectoryLog {
  SimConfig config;
  Graph graph;
  std::vector<double> states;  // (steps+1) x n, row-major by step
  std::vector<WeightMatrix> weight_snapshots;  // ascending step, final last
  std::vector<TrustSnapshot> trust_snapshots;
  RunSummary summary;

  std::span<const double> states_at(long t) const {
    const std::size_t n = static_cast<std::size_t>(graph.n_agents());
    if (t < 0 || static_cast<std::size_t>(t + 1) * n > states.size())
      throw std::out_of_range("log: step " + std::to_string(t) + " not recorded");
    return {states.data() + static_cast<std::size_t>(t) * n, n};
  }

  double state(long t, int agent) const {
    auto row = states_at(t);
    if (agent < 0 || static_cast<std::size_t>(agent) >= row.size())
      throw std::out_of_range("log: agent " + std::to_string(agent) + " out of range");
    return row[static_cast<std::size_t>(agent)];
  }

  const WeightMatrix& final_weights() const {
    if (weight_snapshots.empty() || weight_snapshots.back().step() != config.steps)
      throw std::runtime_error("log: final weight snapshot missing");
    return weight_snapshots.back();
  }
};

// Which neighbors agent i still weighs above the threshold at the end, and
// whether their final states agree with its own within state_tol.
inline std::vector<ConsensusVerdict> trust_based_consensus_check(
    const TrajectoryLog& log, double weight_threshold, double state_tol) {
  const WeightMatrix& w = log.final_weights();
  auto finals = log.states_at(log.config.steps);
  std::vector<ConsensusVerdict> out;
  for (int i : log.graph.cooperative_agents()) {
    ConsensusVerdict v;
    v.agent = i;
    v.consensus = true;
    for (int j : log.graph.neighbors(i)) {
      if (w.weight(i, j) > weight_threshold) {
        v.trusted.push_back(j);
        if (std::abs(finals[static_cast<std::size_t>(i)] -
                     finals[static_cast<std::size_t>(j)]) >= state_tol)
          v.consensus = false;
      }
    }
    out.push_back(std::move(v));
  }
  return out;
}

// Largest connected component of cooperative agents under the "i keeps
// weight on j" relation, and whether every trust link inside it closes to
// state agreement. Adversarial neighbors do not take part; they are judged
// by the per-agent verdicts instead.
inline TrustingClusterReport largest_trusting_cluster(const TrajectoryLog& log,
                                                      double weight_threshold,
                                                      double state_tol) {
  const WeightMatrix& w = log.final_weights();
  const auto& coop = log.graph.cooperative_agents();
  TrustingClusterReport rep;
  if (coop.empty()) return rep;

  std::map<int, int> root;
  for (int i : coop) root[i] = i;
  std::function<int(int)> find = [&](int x) {
    while (root[x] != x) x = root[x] = root[root[x]];
    return x;
  };
  for (int i : coop)
    for (int j : log.graph.neighbors(i))
      if (log.graph.is_cooperative(j) && w.weight(i, j) > weight_threshold)
        root[find(i)] = find(j);

  std::map<int, std::vector<int>> comps;
  for (int i : coop) comps[find(i)].push_back(i);
  for (auto& [r, members] : comps)
    if (members.size() > rep.members.size()) rep.members = members;

  auto finals = log.states_at(log.config.steps);
  rep.consensus_ok = true;
  for (int i : rep.members)
    for (int j : log.graph.neighbors(i))
      if (log.graph.is_cooperative(j) && w.weight(i, j) > weight_threshold &&
          std::abs(finals[static_cast<std::size_t>(i)] -
                   finals[static_cast<std::size_t>(j)]) >= state_tol)
        rep.consensus_ok = false;
  return rep;
}

inline double spread(std::span<const double> values) {
  if (values.empty()) return 0.0;
  auto [lo, hi] = std::minmax_element(values.begin(), values.end());
  return *hi - *lo;
}

// the topology a run with this config uses, redrawn until connected when
// the config demands it
inline Graph build_run_topology(const SimConfig& cfg) {
  for (int attempt = 0; attempt < cfg.graph.connect_retries; ++attempt) {
    Graph g = build_topology({cfg.graph.n_coop, cfg.graph.n_noncoop,
                              cfg.graph.edge_prob, cfg.graph.adversary_edges},
                             cfg.seed, static_cast<std::uint64_t>(attempt));
    if (!cfg.graph.require_connected || is_connected(g)) return g;
  }
  throw std::runtime_error("sim: no connected topology after " +
                           std::to_string(cfg.graph.connect_retries) +
                           " attempts (seed " + std::to_string(cfg.seed) + ")");
}

inline TrajectoryLog run(const SimConfig& cfg) {
  cfg.validate();

  Graph graph = build_run_topology(cfg);

  const int n = graph.n_agents();
  const auto& coop = graph.cooperative_agents();
  const auto& noncoop = graph.non_cooperative_agents();

  std::vector<BehaviorModel> behavior(static_cast<std::size_t>(n),
                                      BehaviorModel::cooperative());
  for (int a : noncoop) behavior[static_cast<std::size_t>(a)] = cfg.default_adversary;
  for (const auto& [id, model] : cfg.behavior_overrides)
    behavior[static_cast<std::size_t>(id)] = model;

  std::vector<NeighborView> views;
  views.reserve(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) views.push_back(neighbor_view(graph, i));

  std::vector<double> cur(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i)
    cur[static_cast<std::size_t>(i)] =
        make_stream(cfg.seed, StreamPurpose::initial_state,
                    static_cast<std::uint64_t>(i))
            .next_in(cfg.initial_lo, cfg.initial_hi);

  std::vector<ConfidenceSchedule> conf;
  std::vector<HistoryWindow> windows;
  conf.reserve(coop.size());
  windows.reserve(coop.size());
  for (int i : coop) {
    conf.push_back(make_confidence(cfg, i));
    windows.push_back(prefill(views[static_cast<std::size_t>(i)], cfg.horizon,
                              cfg.prefill, cur, cfg.seed));
  }
  const DiscountSchedule disc = DiscountSchedule::constant(cfg.nu);

  std::vector<Rng> adv_rng;
  std::vector<std::vector<int>> visible_coop(noncoop.size());
  adv_rng.reserve(noncoop.size());
  for (std::size_t ai = 0; ai < noncoop.size(); ++ai) {
    const int a = noncoop[ai];
    adv_rng.emplace_back(derive_seed(cfg.seed, StreamPurpose::adversary,
                                     static_cast<std::uint64_t>(a)));
    for (int j : graph.neighbors(a))
      if (graph.is_cooperative(j)) visible_coop[ai].push_back(j);
  }

  TrajectoryLog log{cfg, graph, {}, {}, {}, {}};
  log.states.reserve(static_cast<std::size_t>(cfg.steps + 1) *
                     static_cast<std::size_t>(n));
  log.states.insert(log.states.end(), cur.begin(), cur.end());

  auto due = [](long t, long stride) { return stride > 0 && t % stride == 0; };

  // evaluate the cooperative pipeline on the committed states of step t;
  // fills rows (and optionally a trust snapshot), returns the next states
  std::vector<double> next(static_cast<std::size_t>(n));
  std::vector<WeightRowInput> rows;
  auto eval_round = [&](long t, bool want_trust, bool want_next) {
    rows.clear();
    TrustSnapshot snap;
    snap.step = t;
    for (std::size_t ci = 0; ci < coop.size(); ++ci) {
      const int i = coop[ci];
      auto res = cooperative_step(windows[ci], conf[ci], disc, cur,
                                  views[static_cast<std::size_t>(i)], t,
                                  cfg.compute_covariance);
      if (want_next) next[static_cast<std::size_t>(i)] = res.next_state;
      rows.push_back({i, views[static_cast<std::size_t>(i)].inclusive,
                      std::move(res.weights)});
      if (want_trust) {
        snap.agents.push_back(i);
        snap.means.push_back(std::move(res.estimate.mean));
        snap.covariances.push_back(std::move(res.estimate.covariance));
      }
    }
    if (want_trust) log.trust_snapshots.push_back(std::move(snap));
  };

  std::vector<double> visible;
  std::vector<double> nbr_states;
  for (long t = 0; t < cfg.steps; ++t) {
    eval_round(t, due(t, cfg.trust_stride), true);
    if (due(t, cfg.weight_stride))
      log.weight_snapshots.push_back(assemble_weight_matrix(n, t, rows));

    for (std::size_t ai = 0; ai < noncoop.size(); ++ai) {
      const int a = noncoop[ai];
      visible.clear();
      for (int j : visible_coop[ai]) visible.push_back(cur[static_cast<std::size_t>(j)]);
      next[static_cast<std::size_t>(a)] =
          adversary_step(behavior[static_cast<std::size_t>(a)],
                         cur[static_cast<std::size_t>(a)], visible, t, adv_rng[ai]);
    }

    // commit: publish step t+1, then roll every window forward
    for (std::size_t ci = 0; ci < coop.size(); ++ci) {
      const int i = coop[ci];
      nbr_states.clear();
      for (int j : views[static_cast<std::size_t>(i)].neighbors)
        nbr_states.push_back(next[static_cast<std::size_t>(j)]);
      windows[ci].push(t + 1, next[static_cast<std::size_t>(i)], nbr_states);
    }
    cur = next;
    log.states.insert(log.states.end(), cur.begin(), cur.end());
  }

  // final snapshot: the estimates in force after the last exchange
  eval_round(cfg.steps, true, false);
  log.weight_snapshots.push_back(assemble_weight_matrix(n, cfg.steps, rows));

  std::vector<double> coop_finals;
  coop_finals.reserve(coop.size());
  for (int i : coop) coop_finals.push_back(cur[static_cast<std::size_t>(i)]);
  log.summary.final_spread = spread(coop_finals);
  log.summary.clusters = detect_clusters(coop, coop_finals, cfg.cluster_tol);
  log.summary.verdicts =
      trust_based_consensus_check(log, cfg.weight_threshold, cfg.state_tol);
  log.summary.trusting_cluster =
      largest_trusting_cluster(log, cfg.weight_threshold, cfg.state_tol);
  return log;
}

// ---- parameter sweep ----

struct SweepAxes {
  std::vector<int> horizons;      // empty: keep the base value
  std::vector<double> nus;
  std::vector<double> eps_maxes;  // sorted-uniform upper bounds
};

// one run of the sweep, final cooperative states plus designated weight columns
struct SweepRun {
  int horizon = 0;
  double nu = 0.0;
  double eps_max = 0.0;
  std::uint64_t seed = 0;
  std::vector<int> agents;  // cooperative ids
  std::vector<double> final_states;
  std::vector<int> cluster_ids;  // cluster index per agent, ascending by value
  int cluster_count = 0;
  std::vector<std::tuple<int, int, double>> weight_columns;  // (i, j, w_ij)
};

struct SweepTable {
  std::vector<SweepRun> runs;  // canonical (horizon, nu, eps_max, seed) order
};

inline SweepTable sweep(const SimConfig& base, const SweepAxes& axes,
                        std::span<const std::uint64_t> seeds,
                        std::span<const int> weight_columns, int n_threads = 0) {
  base.validate();
  if (seeds.empty()) throw std::invalid_argument("sweep: seed list is empty");
  if (!axes.eps_maxes.empty() &&
      base.confidence.kind != ConfidenceSchedule::Kind::sorted_uniform)
    throw std::invalid_argument(
        "sweep: eps_max axis applies only to sorted-uniform confidence");
  const int n = base.graph.n_coop + base.graph.n_noncoop;
  for (int j : weight_columns)
    if (j < 0 || j >= n)
      throw std::invalid_argument("sweep: weight column " + std::to_string(j) +
                                  " out of range");

  const std::vector<int> horizons =
      axes.horizons.empty() ? std::vector<int>{base.horizon} : axes.horizons;
  const std::vector<double> nus =
      axes.nus.empty() ? std::vector<double>{base.nu} : axes.nus;
  const std::vector<double> eps_maxes = axes.eps_maxes.empty()
                                            ? std::vector<double>{base.confidence.eps_hi}
                                            : axes.eps_maxes;

  struct Job {
    int horizon;
    double nu;
    double eps_max;
    std::uint64_t seed;
  };
  std::vector<Job> jobs;
  for (int T : horizons)
    for (double nu : nus)
      for (double eps : eps_maxes)
        for (std::uint64_t s : seeds) jobs.push_back({T, nu, eps, s});

  auto work = [&](const Job& job) {
    SimConfig cfg = base;
    cfg.horizon = job.horizon;
    cfg.nu = job.nu;
    cfg.confidence.eps_hi = job.eps_max;
    cfg.seed = job.seed;
    cfg.validate();
    TrajectoryLog log = run(cfg);

    SweepRun out;
    out.horizon = job.horizon;
    out.nu = job.nu;
    out.eps_max = job.eps_max;
    out.seed = job.seed;
    out.agents = log.graph.cooperative_agents();
    auto finals = log.states_at(cfg.steps);
    for (int i : out.agents) out.final_states.push_back(finals[static_cast<std::size_t>(i)]);
    const ClusterReport& rep = log.summary.clusters;
    out.cluster_count = rep.count();
    out.cluster_ids.assign(out.agents.size(), -1);
    for (int c = 0; c < rep.count(); ++c)
      for (int id : rep.clusters[static_cast<std::size_t>(c)]) {
        auto it = std::lower_bound(out.agents.begin(), out.agents.end(), id);
        out.cluster_ids[static_cast<std::size_t>(it - out.agents.begin())] = c;
      }
    const WeightMatrix& w = log.final_weights();
    for (int j : weight_columns)
      for (int i : out.agents)
        out.weight_columns.emplace_back(i, j, w.weight(i, j));
    return out;
  };

  SweepTable table;
  table.runs.resize(jobs.size());
  if (n_threads > 1 && jobs.size() > 1) {
    const std::size_t workers =
        std::min<std::size_t>(static_cast<std::size_t>(n_threads), jobs.size());
    std::vector<std::future<void>> futures;
    futures.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w)
      futures.push_back(std::async(std::launch::async, [&, w] {
        for (std::size_t idx = w; idx < jobs.size(); idx += workers)
          table.runs[idx] = work(jobs[idx]);
      }));
    for (auto& f : futures) f.get();
  } else {
    for (std::size_t idx = 0; idx < jobs.size(); ++idx)
      table.runs[idx] = work(jobs[idx]);
  }

  std::sort(table.runs.begin(), table.runs.end(), [](const SweepRun& a, const SweepRun& b) {
    return std::tie(a.horizon, a.nu, a.eps_max, a.seed) <
           std::tie(b.horizon, b.nu, b.eps_max, b.seed);
  });
  return table;
}

}  // namespace hdd
