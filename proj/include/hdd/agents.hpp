#pragma once
// Per-agent behavior. Cooperative agents run the full trust pipeline each
// step; non-cooperative agents follow one of three configurable rules that
// ignore the protocol: uniform noise, a stubborn constant, or a stealth rule
// that tracks the visible cooperative average until an optional betrayal
// step and then turns into noise.

#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "hdd/protocol.hpp"
#include "hdd/rng.hpp"
#include "hdd/trust.hpp"

namespace hdd {

struct BehaviorModel {
  enum class Kind { cooperative, random_adversary, stubborn_adversary, stealth_adversary };

  Kind kind = Kind::cooperative;
  double noise_lo = 0.0;   // random rule, and stealth after betrayal
  double noise_hi = 1.0;
  double stubborn_value = 0.0;
  double stealth_gain = 1.0;        // step fraction toward the visible average
  std::optional<long> betray_time;  // empty: never betrays

  static BehaviorModel cooperative() { return {}; }

  static BehaviorModel random(double lo, double hi) {
    if (!(lo < hi))
      throw std::invalid_argument("behavior: random needs lo < hi");
    BehaviorModel m;
    m.kind = Kind::random_adversary;
    m.noise_lo = lo;
    m.noise_hi = hi;
    return m;
  }

  static BehaviorModel stubborn(double value) {
    BehaviorModel m;
    m.kind = Kind::stubborn_adversary;
    m.stubborn_value = value;
    return m;
  }

  static BehaviorModel stealth(double gain, std::optional<long> betray_time,
                               double post_lo = 0.0, double post_hi = 1.0) {
    if (!(gain > 0.0 && gain <= 1.0))
      throw std::invalid_argument("behavior: stealth gain must be in (0,1]");
    if (!(post_lo < post_hi))
      throw std::invalid_argument("behavior: stealth noise needs lo < hi");
    BehaviorModel m;
    m.kind = Kind::stealth_adversary;
    m.stealth_gain = gain;
    m.betray_time = betray_time;
    m.noise_lo = post_lo;
    m.noise_hi = post_hi;
    return m;
  }
};

// One non-cooperative step. visible_coop holds the current states of the
// agent's cooperative neighbors; the stealth rule holds position when it
// sees none.
inline double adversary_step(const BehaviorModel& m, double own,
                             std::span<const double> visible_coop, long t,
                             Rng& rng) {
  switch (m.kind) {
    case BehaviorModel::Kind::random_adversary:
      return rng.next_in(m.noise_lo, m.noise_hi);
    case BehaviorModel::Kind::stubborn_adversary:
      return m.stubborn_value;
    case BehaviorModel::Kind::stealth_adversary: {
      if (m.betray_time && t >= *m.betray_time)
        return rng.next_in(m.noise_lo, m.noise_hi);
      if (visible_coop.empty()) return own;
      double mean = 0.0;
      for (double v : visible_coop) mean += v;
      mean /= static_cast<double>(visible_coop.size());
      return own + m.stealth_gain * (mean - own);
    }
    case BehaviorModel::Kind::cooperative:
      break;
  }
  throw std::invalid_argument("behavior: cooperative agents do not take adversary steps");
}

struct CooperativeStepResult {
  double next_state = 0.0;
  std::vector<double> weights;  // aligned with view.inclusive
  TrustEstimate estimate;
  MembershipRecord record;
};

// The full per-step pipeline of one cooperative agent: membership over the
// window, discounted importance, estimated trust, weight row, state update.
inline CooperativeStepResult cooperative_step(const HistoryWindow& w,
                                              const ConfidenceSchedule& conf,
                                              const DiscountSchedule& disc,
                                              std::span<const double> states,
                                              const NeighborView& view, long t,
                                              bool with_covariance = true) {
  if (view.agent != w.view().agent)
    throw std::invalid_argument("step: window belongs to a different agent");
  CooperativeStepResult out;
  out.record = membership(w, conf, t);
  const double nu = disc.value(view.agent, t);
  const int T = w.horizon();

  std::vector<std::vector<double>> importances;
  importances.reserve(view.neighbors.size());
  for (int j : view.neighbors)
    importances.push_back(
        discounted_importance(frequency_counter(out.record, j), nu, t, T));
  out.estimate.mean = estimate_mean(importances, T);
  if (with_covariance && view.degree > 0)
    out.estimate.covariance =
        estimate_covariance(variability_matrix(w, t), out.estimate.mean, T);

  out.weights = hdd_weights(augmented_trust(out.estimate.mean));
  out.next_state = hdd_step(states, out.weights, view);
  return out;
}

}  // namespace hdd
