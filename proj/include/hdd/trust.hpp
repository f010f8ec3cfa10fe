#pragma once
// Set-membership trust estimation over a rolling history window. An observer
// replays its window, marks which neighbors fell inside the per-step
// confidence ball around its own past value, weighs those hits with a
// geometric discount, and averages to an estimated trust per neighbor. The
// augmented vector [mu_hat; 1] is what the consensus weights normalize.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "hdd/history.hpp"

namespace hdd {

// small dense row-major matrix, just enough for the estimator
struct Matrix {
  int rows = 0;
  int cols = 0;
  std::vector<double> data;

  Matrix() = default;
  Matrix(int r, int c)
      : rows(r), cols(c),
        data(static_cast<std::size_t>(r) * static_cast<std::size_t>(c), 0.0) {
    if (r < 0 || c < 0) throw std::invalid_argument("matrix: negative dimension");
  }

  double& operator()(int r, int c) {
    return data[static_cast<std::size_t>(r) * static_cast<std::size_t>(cols) +
                static_cast<std::size_t>(c)];
  }
  double operator()(int r, int c) const {
    return data[static_cast<std::size_t>(r) * static_cast<std::size_t>(cols) +
                static_cast<std::size_t>(c)];
  }
};

using DistanceFn = double (*)(double, double);

inline double state_distance(double a, double b) { return std::abs(a - b); }

// Per-step confidence bounds, strictly decreasing toward the newest step of
// the window. sorted-uniform draws horizon bounds once and reuses them by
// window position; the two decay kinds are functions of absolute time.
class ConfidenceSchedule {
 public:
  enum class Kind { sorted_uniform, exponential_decay, geometric_decay };

  static ConfidenceSchedule sorted_uniform(int horizon, double lo, double hi,
                                           std::uint64_t seed) {
    if (horizon < 2)
      throw std::invalid_argument("confidence: horizon must be >= 2");
    if (!(lo > 0.0))
      throw std::invalid_argument("confidence: eps_lo must be positive");
    if (!(hi > lo))
      throw std::invalid_argument("confidence: eps_hi must exceed eps_lo");
    Rng rng(seed);
    std::vector<double> bounds(static_cast<std::size_t>(horizon));
    for (auto& b : bounds) b = rng.next_in(lo, hi);
    return from_bounds(std::move(bounds));
  }

  // bounds in any order; sorted descending, ties nudged apart so the ordering
  // is strict. Exposed for tests and for replaying stored schedules.
  static ConfidenceSchedule from_bounds(std::vector<double> bounds) {
    if (bounds.size() < 2)
      throw std::invalid_argument("confidence: need at least two bounds");
    std::sort(bounds.begin(), bounds.end(), std::greater<>());
    for (std::size_t p = bounds.size() - 1; p-- > 0;) {
      if (bounds[p] <= bounds[p + 1])
        bounds[p] = std::nextafter(bounds[p + 1],
                                   std::numeric_limits<double>::infinity());
    }
    for (double b : bounds)
      if (!(b > 0.0))
        throw std::invalid_argument("confidence: bounds must be positive");
    ConfidenceSchedule s;
    s.kind_ = Kind::sorted_uniform;
    s.bounds_ = std::move(bounds);
    return s;
  }

  // amplitude * exp(-rate * k)
  static ConfidenceSchedule exponential_decay(double amplitude, double rate) {
    if (!(amplitude >= 0.0))
      throw std::invalid_argument("confidence: amplitude must be >= 0");
    if (!(rate > 0.0))
      throw std::invalid_argument("confidence: rate must be positive");
    ConfidenceSchedule s;
    s.kind_ = Kind::exponential_decay;
    s.amplitude_ = amplitude;
    s.rate_ = rate;
    return s;
  }

  // amplitude * ratio^k
  static ConfidenceSchedule geometric_decay(double amplitude, double ratio) {
    if (!(amplitude >= 0.0))
      throw std::invalid_argument("confidence: amplitude must be >= 0");
    if (!(ratio > 0.0 && ratio < 1.0))
      throw std::invalid_argument("confidence: ratio must be in (0,1)");
    ConfidenceSchedule s;
    s.kind_ = Kind::geometric_decay;
    s.amplitude_ = amplitude;
    s.rate_ = ratio;
    return s;
  }

  Kind kind() const { return kind_; }

  // pos indexes the window oldest to newest, k is the absolute step
  double bound(int pos, long k) const {
    switch (kind_) {
      case Kind::sorted_uniform:
        if (pos < 0 || static_cast<std::size_t>(pos) >= bounds_.size())
          throw std::out_of_range("confidence: window position " +
                                  std::to_string(pos) + " out of range");
        return bounds_[static_cast<std::size_t>(pos)];
      case Kind::exponential_decay:
        return amplitude_ * std::exp(-rate_ * static_cast<double>(k));
      case Kind::geometric_decay:
        return amplitude_ * std::pow(rate_, static_cast<double>(k));
    }
    throw std::logic_error("confidence: unknown kind");
  }

  // sorted-uniform only, descending
  const std::vector<double>& bounds() const {
    if (kind_ != Kind::sorted_uniform)
      throw std::logic_error("confidence: stored bounds exist only for sorted-uniform");
    return bounds_;
  }

 private:
  ConfidenceSchedule() = default;

  Kind kind_ = Kind::sorted_uniform;
  std::vector<double> bounds_;
  double amplitude_ = 0.0;
  double rate_ = 0.0;
};

// Per-agent, per-step discount factor nu in (0,1). constant covers the usual
// case; of() admits time-varying choices.
class DiscountSchedule {
 public:
  static DiscountSchedule constant(double nu) {
    check(nu);
    DiscountSchedule d;
    d.nu_ = nu;
    return d;
  }

  static DiscountSchedule of(std::function<double(int, long)> fn) {
    DiscountSchedule d;
    d.fn_ = std::move(fn);
    return d;
  }

  double value(int agent, long t) const {
    const double nu = fn_ ? fn_(agent, t) : nu_;
    check(nu);
    return nu;
  }

 private:
  static void check(double nu) {
    if (!(nu > 0.0 && nu < 1.0))
      throw std::invalid_argument("discount: nu must be in (0,1), got " +
                                  std::to_string(nu));
  }

  double nu_ = 0.5;
  std::function<double(int, long)> fn_;
};

// Which neighbors sat inside the observer's confidence ball at each window
// step. members runs oldest to newest, ids ascending within a step.
struct MembershipRecord {
  int observer = 0;
  long newest_time = 0;
  int horizon = 0;
  std::vector<int> neighbor_ids;          // canonical ascending order
  std::vector<std::vector<int>> members;  // one set per window position

  long time_at(int pos) const { return newest_time - (horizon - 1) + pos; }

  bool contains(int j, long k) const {
    const long oldest = newest_time - (horizon - 1);
    if (k < oldest || k > newest_time)
      throw std::out_of_range("membership: step " + std::to_string(k) +
                              " outside window");
    const auto& ids = members[static_cast<std::size_t>(k - oldest)];
    return std::binary_search(ids.begin(), ids.end(), j);
  }
};

// Closed-ball membership: neighbor j is in at step k when
// dist(x_j(k), x_i(k)) <= eps_{i,k}. t must be the window's newest step.
inline MembershipRecord membership(const HistoryWindow& w,
                                   const ConfidenceSchedule& sched, long t,
                                   DistanceFn dist = state_distance) {
  if (t != w.newest_time())
    throw std::invalid_argument("membership: t=" + std::to_string(t) +
                                " does not match window at " +
                                std::to_string(w.newest_time()));
  const int T = w.horizon();
  MembershipRecord rec;
  rec.observer = w.view().agent;
  rec.newest_time = t;
  rec.horizon = T;
  rec.neighbor_ids = w.view().neighbors;
  rec.members.resize(static_cast<std::size_t>(T));
  for (int pos = 0; pos < T; ++pos) {
    const long k = w.oldest_time() + pos;
    const double eps = sched.bound(pos, k);
    if (!(eps > 0.0))
      throw std::invalid_argument("membership: confidence bound at step " +
                                  std::to_string(k) + " is not positive");
    const double own = w.own_at(k);
    auto& ids = rec.members[static_cast<std::size_t>(pos)];
    for (int j : rec.neighbor_ids)
      if (dist(w.value_at(j, k), own) <= eps) ids.push_back(j);
  }
  return rec;
}

// Steps of the window at which neighbor j was a member, ascending.
inline std::vector<long> frequency_counter(const MembershipRecord& rec, int j) {
  if (!std::binary_search(rec.neighbor_ids.begin(), rec.neighbor_ids.end(), j))
    throw std::invalid_argument("frequency: agent " + std::to_string(j) +
                                " is not a neighbor of observer " +
                                std::to_string(rec.observer));
  std::vector<long> times;
  for (int pos = 0; pos < rec.horizon; ++pos) {
    const auto& ids = rec.members[static_cast<std::size_t>(pos)];
    if (std::binary_search(ids.begin(), ids.end(), j)) times.push_back(rec.time_at(pos));
  }
  return times;
}

// Discounted importance over the window, oldest to newest: nu^(t-k) at the
// member steps, zero elsewhere.
inline std::vector<double> discounted_importance(const std::vector<long>& counter,
                                                 double nu, long t, int horizon) {
  if (!(nu > 0.0 && nu < 1.0))
    throw std::invalid_argument("importance: nu must be in (0,1)");
  if (horizon < 2) throw std::invalid_argument("importance: horizon must be >= 2");
  const long oldest = t - (horizon - 1);
  std::vector<double> imp(static_cast<std::size_t>(horizon), 0.0);
  for (long k : counter) {
    if (k < oldest || k > t)
      throw std::invalid_argument("importance: counter step " + std::to_string(k) +
                                  " outside window");
    imp[static_cast<std::size_t>(k - oldest)] =
        std::pow(nu, static_cast<double>(t - k));
  }
  return imp;
}

// Estimated trust per neighbor: the window average of its importances.
inline std::vector<double> estimate_mean(
    const std::vector<std::vector<double>>& importances, int horizon) {
  if (horizon < 2) throw std::invalid_argument("mean: horizon must be >= 2");
  std::vector<double> mean;
  mean.reserve(importances.size());
  for (const auto& imp : importances) {
    if (imp.size() != static_cast<std::size_t>(horizon))
      throw std::invalid_argument("mean: importance series must have horizon entries");
    double sum = 0.0;
    for (double v : imp) sum += v;
    mean.push_back(sum / static_cast<double>(horizon));
  }
  return mean;
}

// Variability of neighbor j at step k, mapped to [0,1): d/(1+d) with
// d = dist(x_j(k), x_i(k)). One row per neighbor, one column per window step.
inline Matrix variability_matrix(const HistoryWindow& w, long t,
                                 DistanceFn dist = state_distance) {
  if (t != w.newest_time())
    throw std::invalid_argument("variability: t does not match window");
  const int d = w.view().degree;
  const int T = w.horizon();
  Matrix m(d, T);
  for (int r = 0; r < d; ++r) {
    const int j = w.view().neighbors[static_cast<std::size_t>(r)];
    for (int pos = 0; pos < T; ++pos) {
      const long k = w.oldest_time() + pos;
      const double dd = dist(w.value_at(j, k), w.own_at(k));
      m(r, pos) = dd / (1.0 + dd);
    }
  }
  return m;
}

// Sample covariance of the variability columns around the estimated mean,
// normalized by horizon-1. Logged for diagnostics; the weights do not use it.
inline Matrix estimate_covariance(const Matrix& variability,
                                  const std::vector<double>& mean, int horizon) {
  if (horizon < 2)
    throw std::invalid_argument("covariance: horizon must be >= 2");
  if (variability.cols != horizon)
    throw std::invalid_argument("covariance: variability needs horizon columns");
  if (mean.size() != static_cast<std::size_t>(variability.rows))
    throw std::invalid_argument("covariance: mean length must match neighbor count");
  const int d = variability.rows;
  Matrix cov(d, d);
  std::vector<double> dev(static_cast<std::size_t>(d));
  for (int pos = 0; pos < horizon; ++pos) {
    for (int r = 0; r < d; ++r)
      dev[static_cast<std::size_t>(r)] = variability(r, pos) - mean[static_cast<std::size_t>(r)];
    for (int r = 0; r < d; ++r)
      for (int c = 0; c < d; ++c)
        cov(r, c) += dev[static_cast<std::size_t>(r)] * dev[static_cast<std::size_t>(c)];
  }
  const double norm = 1.0 / static_cast<double>(horizon - 1);
  for (double& v : cov.data) v *= norm;
  return cov;
}

// [mu_hat; 1], the vector the weight row normalizes
inline std::vector<double> augmented_trust(const std::vector<double>& mean) {
  for (double m : mean)
    if (!(m >= 0.0 && m <= 1.0))
      throw std::invalid_argument("trust: mean entry " + std::to_string(m) +
                                  " outside [0,1]");
  std::vector<double> z = mean;
  z.push_back(1.0);
  return z;
}

struct TrustEstimate {
  std::vector<double> mean;  // trust per neighbor, canonical order
  Matrix covariance;         // d x d; empty when not computed

  // estimated probability of cooperation, and its complement
  const std::vector<double>& trust_config() const { return mean; }
  std::vector<double> noncoop_config() const {
    std::vector<double> q = mean;
    for (double& v : q) v = 1.0 - v;
    return q;
  }
};

}  // namespace hdd
