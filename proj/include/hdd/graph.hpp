#pragma once
// Undirected communication topology. Covers the two-population layout from
// the experiments (random cooperative core, non-cooperative nodes wired to
// every cooperative node) plus the neighbor queries the rest of the library
// needs. Neighbor lists are kept in ascending id order so that per-neighbor
// vectors in the trust pipeline index consistently across modules.

#include <algorithm>
#include <cstdint>
#include <ostream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "hdd/rng.hpp"

namespace hdd {

class Graph {
 public:
  // edges are undirected pairs; duplicates are merged, self loops rejected.
  // cooperative lists the ids in the cooperative population, the rest are
  // non-cooperative.
  Graph(int n_agents, std::vector<std::pair<int, int>> edges,
        std::vector<int> cooperative)
      : n_(n_agents), coop_flag_(static_cast<std::size_t>(std::max(n_agents, 0)), false) {
    if (n_ <= 0) throw std::invalid_argument("graph: n_agents must be positive");
    for (int id : cooperative) {
      if (id < 0 || id >= n_)
        throw std::invalid_argument("graph: cooperative id " + std::to_string(id) +
                                    " out of range");
      if (coop_flag_[static_cast<std::size_t>(id)])
        throw std::invalid_argument("graph: duplicate cooperative id " +
                                    std::to_string(id));
      coop_flag_[static_cast<std::size_t>(id)] = true;
    }
    for (int i = 0; i < n_; ++i)
      (coop_flag_[static_cast<std::size_t>(i)] ? coop_ids_ : noncoop_ids_).push_back(i);

    for (auto& [a, b] : edges) {
      if (a == b)
        throw std::invalid_argument("graph: self loop at agent " + std::to_string(a));
      if (a < 0 || a >= n_ || b < 0 || b >= n_)
        throw std::invalid_argument("graph: edge endpoint out of range");
      if (a > b) std::swap(a, b);
    }
    std::sort(edges.begin(), edges.end());
    edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
    edges_ = std::move(edges);

    adj_.resize(static_cast<std::size_t>(n_));
    for (const auto& [a, b] : edges_) {
      adj_[static_cast<std::size_t>(a)].push_back(b);
      adj_[static_cast<std::size_t>(b)].push_back(a);
    }
    for (auto& nbrs : adj_) std::sort(nbrs.begin(), nbrs.end());
  }

  int n_agents() const { return n_; }

  bool is_cooperative(int i) const {
    check_agent(i);
    return coop_flag_[static_cast<std::size_t>(i)];
  }

  const std::vector<int>& cooperative_agents() const { return coop_ids_; }
  const std::vector<int>& non_cooperative_agents() const { return noncoop_ids_; }

  const std::vector<int>& neighbors(int i) const {
    check_agent(i);
    return adj_[static_cast<std::size_t>(i)];
  }

  int degree(int i) const {
    return static_cast<int>(neighbors(i).size());
  }

  bool has_edge(int i, int j) const {
    check_agent(i);
    check_agent(j);
    const auto& nbrs = adj_[static_cast<std::size_t>(i)];
    return std::binary_search(nbrs.begin(), nbrs.end(), j);
  }

  // normalized (i < j), ascending
  const std::vector<std::pair<int, int>>& edges() const { return edges_; }

 private:
  void check_agent(int i) const {
    if (i < 0 || i >= n_)
      throw std::out_of_range("graph: agent " + std::to_string(i) + " out of range");
  }

  int n_;
  std::vector<bool> coop_flag_;
  std::vector<int> coop_ids_;
  std::vector<int> noncoop_ids_;
  std::vector<std::vector<int>> adj_;
  std::vector<std::pair<int, int>> edges_;
};

// One agent's local view. inclusive lists neighbors in ascending order and
// the agent itself last; trust vectors and weight rows follow this order, the
// self entry sitting at the end next to the appended constant.
struct NeighborView {
  int agent = 0;
  std::vector<int> neighbors;  // ascending ids
  std::vector<int> inclusive;  // neighbors, then self
  int degree = 0;
};

inline NeighborView neighbor_view(const Graph& g, int i) {
  NeighborView v;
  v.agent = i;
  v.neighbors = g.neighbors(i);
  v.inclusive = v.neighbors;
  v.inclusive.push_back(i);
  v.degree = static_cast<int>(v.neighbors.size());
  return v;
}

struct TopologyParams {
  int n_coop = 10;
  int n_noncoop = 3;
  double edge_prob = 0.4;
  // when true, non-cooperative pairs also get independent edge_prob edges;
  // by default they are only connected to the cooperative population.
  bool adversary_edges = false;
};

// Cooperative agents take ids 0..n_coop-1, non-cooperative the rest. Each
// cooperative pair gets an independent edge with probability edge_prob; each
// non-cooperative agent is connected to every cooperative one. attempt feeds
// the substream id so a caller can redraw until some predicate holds.
inline Graph build_topology(const TopologyParams& p, std::uint64_t seed,
                            std::uint64_t attempt = 0) {
  if (p.n_coop < 1) throw std::invalid_argument("topology: n_coop must be >= 1");
  if (p.n_noncoop < 0)
    throw std::invalid_argument("topology: n_noncoop must be >= 0");
  if (!(p.edge_prob >= 0.0 && p.edge_prob <= 1.0))
    throw std::invalid_argument("topology: edge_prob must be in [0,1]");

  const int n = p.n_coop + p.n_noncoop;
  Rng rng = make_stream(seed, StreamPurpose::topology, attempt);
  std::vector<std::pair<int, int>> edges;
  for (int i = 0; i < p.n_coop; ++i)
    for (int j = i + 1; j < p.n_coop; ++j)
      if (rng.next_unit() < p.edge_prob) edges.emplace_back(i, j);
  for (int a = p.n_coop; a < n; ++a)
    for (int j = 0; j < p.n_coop; ++j) edges.emplace_back(j, a);
  if (p.adversary_edges)
    for (int a = p.n_coop; a < n; ++a)
      for (int b = a + 1; b < n; ++b)
        if (rng.next_unit() < p.edge_prob) edges.emplace_back(a, b);

  std::vector<int> coop(static_cast<std::size_t>(p.n_coop));
  for (int i = 0; i < p.n_coop; ++i) coop[static_cast<std::size_t>(i)] = i;
  return Graph(n, std::move(edges), std::move(coop));
}

inline bool is_connected(const Graph& g) {
  const int n = g.n_agents();
  std::vector<bool> seen(static_cast<std::size_t>(n), false);
  std::vector<int> stack{0};
  seen[0] = true;
  int count = 1;
  while (!stack.empty()) {
    int v = stack.back();
    stack.pop_back();
    for (int w : g.neighbors(v)) {
      if (!seen[static_cast<std::size_t>(w)]) {
        seen[static_cast<std::size_t>(w)] = true;
        ++count;
        stack.push_back(w);
      }
    }
  }
  return count == n;
}

// "i j" per line, normalized ascending pairs
inline void write_edge_list(std::ostream& os, const Graph& g) {
  for (const auto& [a, b] : g.edges()) os << a << ' ' << b << '\n';
}

}  // namespace hdd
