#pragma once
// Consensus update rules. The trust-weighted rule normalizes the augmented
// trust vector into a stochastic weight row and averages the inclusive
// neighborhood; the memoryless baseline averages it uniformly. Weight rows of
// a step are collected into a sparse per-step matrix for logging and checks.

#include <algorithm>
#include <cmath>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "hdd/graph.hpp"

namespace hdd {

// row-sum conformance: tests pin the tight tolerance, assembly enforces the
// loose one as a hard error
inline constexpr double kRowSumCheckTol = 1e-12;
inline constexpr double kRowSumErrorTol = 1e-9;

// Normalize z = [mu_hat; 1] by its l1 norm. The final entry is the agent's
// own, so the row always has positive self weight.
inline std::vector<double> hdd_weights(std::span<const double> z) {
  if (z.empty()) throw std::invalid_argument("weights: empty trust vector");
  if (z.back() != 1.0)
    throw std::invalid_argument("weights: augmented entry must be 1");
  double sum = 0.0;
  for (double v : z) {
    if (!(v >= 0.0 && v <= 1.0))
      throw std::invalid_argument("weights: entry " + std::to_string(v) +
                                  " outside [0,1]");
    sum += v;
  }
  std::vector<double> row(z.begin(), z.end());
  for (double& v : row) v /= sum;
  return row;
}

// One trust-weighted step: row and view.inclusive are aligned, states is the
// global state vector indexed by agent id.
inline double hdd_step(std::span<const double> states, std::span<const double> row,
                       const NeighborView& view) {
  if (row.size() != view.inclusive.size())
    throw std::invalid_argument("step: weight row does not match neighborhood");
  double next = 0.0;
  for (std::size_t l = 0; l < row.size(); ++l) {
    const int j = view.inclusive[l];
    if (j < 0 || static_cast<std::size_t>(j) >= states.size())
      throw std::out_of_range("step: agent " + std::to_string(j) +
                              " outside state vector");
    next += row[l] * states[static_cast<std::size_t>(j)];
  }
  return next;
}

// memoryless baseline: uniform average over the inclusive neighborhood
inline double baseline_step(std::span<const double> states, const NeighborView& view) {
  double sum = 0.0;
  for (int j : view.inclusive) {
    if (j < 0 || static_cast<std::size_t>(j) >= states.size())
      throw std::out_of_range("step: agent " + std::to_string(j) +
                              " outside state vector");
    sum += states[static_cast<std::size_t>(j)];
  }
  return sum / static_cast<double>(view.inclusive.size());
}

// weight row of one agent, targets aligned with weights
struct WeightRowInput {
  int agent = 0;
  std::vector<int> targets;
  std::vector<double> weights;
};

// Sparse weight matrix of one step. Only agents running the protocol have
// rows; the others are deliberately absent rather than filled in.
class WeightMatrix {
 public:
  WeightMatrix() = default;
  WeightMatrix(int n_agents, long step) : n_(n_agents), step_(step) {
    if (n_agents <= 0)
      throw std::invalid_argument("weight matrix: n_agents must be positive");
    rows_.resize(static_cast<std::size_t>(n_agents));
  }

  int n_agents() const { return n_; }
  long step() const { return step_; }

  bool has_row(int i) const {
    check(i);
    return rows_[static_cast<std::size_t>(i)].has_value();
  }

  // entries sorted by target id
  const std::vector<std::pair<int, double>>& row(int i) const {
    check(i);
    const auto& r = rows_[static_cast<std::size_t>(i)];
    if (!r)
      throw std::out_of_range("weight matrix: agent " + std::to_string(i) +
                              " has no row (not running the protocol)");
    return *r;
  }

  // zero for pairs outside the neighborhood; throws when i has no row
  double weight(int i, int j) const {
    check(j);
    const auto& r = row(i);
    auto it = std::lower_bound(r.begin(), r.end(), j,
                               [](const auto& e, int v) { return e.first < v; });
    return (it != r.end() && it->first == j) ? it->second : 0.0;
  }

  std::vector<int> agents_with_rows() const {
    std::vector<int> out;
    for (int i = 0; i < n_; ++i)
      if (rows_[static_cast<std::size_t>(i)]) out.push_back(i);
    return out;
  }

  void set_row(int i, std::vector<std::pair<int, double>> entries) {
    check(i);
    rows_[static_cast<std::size_t>(i)] = std::move(entries);
  }

 private:
  void check(int i) const {
    if (i < 0 || i >= n_)
      throw std::out_of_range("weight matrix: agent " + std::to_string(i) +
                              " out of range");
  }

  int n_ = 0;
  long step_ = 0;
  std::vector<std::optional<std::vector<std::pair<int, double>>>> rows_;
};

// Validate and collect the rows of one step. Row sums further than
// kRowSumErrorTol from one are treated as corruption, not rounding.
inline WeightMatrix assemble_weight_matrix(int n_agents, long step,
                                           std::span<const WeightRowInput> rows) {
  WeightMatrix m(n_agents, step);
  for (const auto& in : rows) {
    if (in.targets.size() != in.weights.size())
      throw std::invalid_argument("weight matrix: row of agent " +
                                  std::to_string(in.agent) + " misaligned");
    if (in.targets.empty())
      throw std::invalid_argument("weight matrix: empty row for agent " +
                                  std::to_string(in.agent));
    double sum = 0.0;
    bool self_seen = false;
    std::vector<std::pair<int, double>> entries;
    entries.reserve(in.targets.size());
    for (std::size_t l = 0; l < in.targets.size(); ++l) {
      const int j = in.targets[l];
      const double w = in.weights[l];
      if (j < 0 || j >= n_agents)
        throw std::out_of_range("weight matrix: target " + std::to_string(j) +
                                " out of range");
      if (!(w >= 0.0 && w <= 1.0))
        throw std::invalid_argument("weight matrix: weight " + std::to_string(w) +
                                    " outside [0,1] in row " + std::to_string(in.agent));
      if (j == in.agent) {
        self_seen = true;
        if (!(w > 0.0))
          throw std::invalid_argument("weight matrix: self weight of agent " +
                                      std::to_string(in.agent) + " must be positive");
      }
      entries.emplace_back(j, w);
      sum += w;
    }
    if (!self_seen)
      throw std::invalid_argument("weight matrix: row of agent " +
                                  std::to_string(in.agent) + " lacks a self entry");
    if (std::abs(sum - 1.0) > kRowSumErrorTol)
      throw std::runtime_error("weight matrix: row sum of agent " +
                               std::to_string(in.agent) + " is " +
                               std::to_string(sum));
    std::sort(entries.begin(), entries.end());
    for (std::size_t l = 1; l < entries.size(); ++l)
      if (entries[l].first == entries[l - 1].first)
        throw std::invalid_argument("weight matrix: duplicate target in row " +
                                    std::to_string(in.agent));
    m.set_row(in.agent, std::move(entries));
  }
  return m;
}

}  // namespace hdd
