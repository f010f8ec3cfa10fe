#pragma once
// Rolling T-step history of the values an agent has observed: its own states
// and those shared by its neighbors. The window always spans exactly T
// consecutive steps; at t = 0 the missing past is prefilled so the estimator
// never runs on a partial window.

#include <algorithm>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "hdd/graph.hpp"
#include "hdd/rng.hpp"

namespace hdd {

struct PrefillStrategy {
  enum class Kind { uniform, hold };

  Kind kind = Kind::uniform;
  double lo = 0.0;
  double hi = 1.0;

  static PrefillStrategy uniform(double lo, double hi) {
    if (!(lo < hi))
      throw std::invalid_argument("prefill: uniform needs lo < hi, got [" +
                                  std::to_string(lo) + "," + std::to_string(hi) + "]");
    return {Kind::uniform, lo, hi};
  }

  static PrefillStrategy hold() { return {Kind::hold, 0.0, 0.0}; }
};

class HistoryWindow {
 public:
  // own and per-neighbor series run oldest to newest and must have exactly
  // horizon entries; newest_time is the time of the last entry.
  HistoryWindow(NeighborView view, int horizon, long newest_time,
                std::vector<double> own, std::vector<std::vector<double>> nbr)
      : view_(std::move(view)),
        horizon_(horizon),
        newest_(newest_time),
        own_(std::move(own)),
        nbr_(std::move(nbr)) {
    if (horizon_ < 2)
      throw std::invalid_argument("history: horizon must be >= 2, got " +
                                  std::to_string(horizon_));
    if (own_.size() != static_cast<std::size_t>(horizon_))
      throw std::invalid_argument("history: own series must have horizon entries");
    if (nbr_.size() != view_.neighbors.size())
      throw std::invalid_argument("history: one series per neighbor required");
    for (const auto& series : nbr_)
      if (series.size() != static_cast<std::size_t>(horizon_))
        throw std::invalid_argument("history: neighbor series must have horizon entries");
  }

  int horizon() const { return horizon_; }
  long newest_time() const { return newest_; }
  long oldest_time() const { return newest_ - (horizon_ - 1); }
  const NeighborView& view() const { return view_; }

  // oldest to newest
  const std::vector<double>& own_values() const { return own_; }

  const std::vector<double>& neighbor_values(int j) const {
    return nbr_[static_cast<std::size_t>(neighbor_row(j))];
  }

  double own_at(long k) const { return own_[static_cast<std::size_t>(index_of(k))]; }

  // j may be the agent itself or any neighbor
  double value_at(int j, long k) const {
    const int pos = index_of(k);
    if (j == view_.agent) return own_[static_cast<std::size_t>(pos)];
    return nbr_[static_cast<std::size_t>(neighbor_row(j))][static_cast<std::size_t>(pos)];
  }

  // Advance the window one step: drop the oldest entry, append the values of
  // step t_next. neighbor_states is aligned with view().neighbors.
  void push(long t_next, double own, std::span<const double> neighbor_states) {
    if (t_next != newest_ + 1)
      throw std::invalid_argument("history: push expects step " +
                                  std::to_string(newest_ + 1) + ", got " +
                                  std::to_string(t_next));
    if (neighbor_states.size() != view_.neighbors.size())
      throw std::invalid_argument("history: push needs one value per neighbor");
    shift_append(own_, own);
    for (std::size_t r = 0; r < nbr_.size(); ++r)
      shift_append(nbr_[r], neighbor_states[r]);
    newest_ = t_next;
  }

 private:
  static void shift_append(std::vector<double>& series, double value) {
    std::copy(series.begin() + 1, series.end(), series.begin());
    series.back() = value;
  }

  int index_of(long k) const {
    if (k < oldest_time() || k > newest_)
      throw std::out_of_range("history: step " + std::to_string(k) +
                              " outside window [" + std::to_string(oldest_time()) +
                              "," + std::to_string(newest_) + "]");
    return static_cast<int>(k - oldest_time());
  }

  int neighbor_row(int j) const {
    const auto& ids = view_.neighbors;
    auto it = std::lower_bound(ids.begin(), ids.end(), j);
    if (it == ids.end() || *it != j)
      throw std::out_of_range("history: agent " + std::to_string(j) +
                              " is not in the observed set of agent " +
                              std::to_string(view_.agent));
    return static_cast<int>(it - ids.begin());
  }

  NeighborView view_;
  int horizon_;
  long newest_;
  std::vector<double> own_;
  std::vector<std::vector<double>> nbr_;
};

// Build the full window in force at t = 0: the entry at step 0 is the actual
// initial state, the horizon-1 earlier entries are synthesized. The synthetic
// past of agent j is drawn from the substream keyed by j itself, so every
// observer of j sees the same prehistory. hold replicates the initial state
// instead.
inline HistoryWindow prefill(const NeighborView& view, int horizon,
                             const PrefillStrategy& strategy,
                             std::span<const double> initial_states,
                             std::uint64_t base_seed) {
  if (horizon < 2)
    throw std::invalid_argument("prefill: horizon must be >= 2, got " +
                                std::to_string(horizon));
  if (strategy.kind == PrefillStrategy::Kind::uniform && !(strategy.lo < strategy.hi))
    throw std::invalid_argument("prefill: uniform needs lo < hi");

  auto series_for = [&](int agent) {
    if (agent < 0 || static_cast<std::size_t>(agent) >= initial_states.size())
      throw std::invalid_argument("prefill: no initial state for agent " +
                                  std::to_string(agent));
    std::vector<double> s(static_cast<std::size_t>(horizon),
                          initial_states[static_cast<std::size_t>(agent)]);
    if (strategy.kind == PrefillStrategy::Kind::uniform) {
      Rng rng = make_stream(base_seed, StreamPurpose::prefill,
                            static_cast<std::uint64_t>(agent));
      for (int p = 0; p < horizon - 1; ++p)
        s[static_cast<std::size_t>(p)] = rng.next_in(strategy.lo, strategy.hi);
    }
    return s;
  };

  std::vector<double> own = series_for(view.agent);
  std::vector<std::vector<double>> nbr;
  nbr.reserve(view.neighbors.size());
  for (int j : view.neighbors) nbr.push_back(series_for(j));
  return HistoryWindow(view, horizon, 0, std::move(own), std::move(nbr));
}

}  // namespace hdd
