#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include "generators.hpp"
#include "hdd/protocol.hpp"
#include "oracles.hpp"

using hdd::hdd_weights;
using hdd::WeightRowInput;

namespace {

hdd::NeighborView make_view(int agent, std::vector<int> neighbors) {
  hdd::NeighborView v;
  v.agent = agent;
  v.neighbors = std::move(neighbors);
  v.inclusive = v.neighbors;
  v.inclusive.push_back(agent);
  v.degree = static_cast<int>(v.neighbors.size());
  return v;
}

}  // namespace

TEST_CASE("weight rows are the l1-normalized augmented trust") {
  CHECK(hdd_weights(std::vector<double>{0.0, 0.0, 1.0}) ==
        std::vector<double>{0.0, 0.0, 1.0});
  const auto row = hdd_weights(std::vector<double>{0.5, 0.25, 1.0});
  CHECK(row[0] == 2.0 / 7.0);
  CHECK(row[1] == 1.0 / 7.0);
  CHECK(row[2] == 4.0 / 7.0);
  // isolated agent: the trivial row
  CHECK(hdd_weights(std::vector<double>{1.0}) == std::vector<double>{1.0});
}

TEST_CASE("weight rows reject malformed trust vectors") {
  CHECK_THROWS_AS(hdd_weights(std::vector<double>{}), std::invalid_argument);
  CHECK_THROWS_AS(hdd_weights(std::vector<double>{0.5, 0.9}), std::invalid_argument);
  CHECK_THROWS_AS(hdd_weights(std::vector<double>{1.2, 1.0}), std::invalid_argument);
  CHECK_THROWS_AS(hdd_weights(std::vector<double>{-0.1, 1.0}), std::invalid_argument);
}

TEST_CASE("weight rows are stochastic for random trust vectors") {
  hdd::Rng rng(99);
  for (int it = 0; it < 200; ++it) {
    const int d = 1 + static_cast<int>(rng.next_unit() * 8);
    std::vector<double> z;
    for (int r = 0; r < d; ++r) z.push_back(rng.next_unit());
    z.push_back(1.0);
    const auto row = hdd_weights(z);
    double sum = 0.0;
    for (double w : row) {
      CHECK(w >= 0.0);
      CHECK(w <= 1.0);
      sum += w;
    }
    CHECK(sum == Catch::Approx(1.0).margin(1e-12));
    CHECK(row.back() > 0.0);
  }
}

TEST_CASE("the weighted step averages the inclusive neighborhood") {
  const auto view = make_view(0, {2, 4});
  const std::vector<double> states{0.0, 9.0, 2.0, 9.0, 4.0};
  const auto row = hdd_weights(std::vector<double>{0.5, 0.25, 1.0});
  const double next = hdd_step(states, row, view);
  CHECK(next == Catch::Approx(8.0 / 7.0).margin(1e-12));

  // self-only weights hold the state exactly
  const std::vector<double> hold{0.0, 0.0, 1.0};
  CHECK(hdd_step(states, hold, view) == 0.0);

  CHECK_THROWS_AS(hdd_step(states, std::vector<double>{0.5, 0.5}, view),
                  std::invalid_argument);
}

TEST_CASE("the weighted step stays inside the convex hull of what it sees") {
  hdd::Rng rng(314);
  for (int it = 0; it < 100; ++it) {
    const int d = 1 + static_cast<int>(rng.next_unit() * 6);
    auto view = make_view(0, {});
    std::vector<double> states{rng.next_in(-3.0, 3.0)};
    for (int j = 1; j <= d; ++j) {
      view.neighbors.push_back(j);
      states.push_back(rng.next_in(-3.0, 3.0));
    }
    view.inclusive = view.neighbors;
    view.inclusive.push_back(0);
    view.degree = d;
    std::vector<double> z;
    for (int r = 0; r < d; ++r) z.push_back(rng.next_unit());
    z.push_back(1.0);
    const double next = hdd_step(states, hdd_weights(z), view);
    const auto [lo, hi] = std::minmax_element(states.begin(), states.end());
    CHECK(next >= *lo - 1e-12);
    CHECK(next <= *hi + 1e-12);
  }
  // all inputs equal: the step is a fixed point
  const auto view = make_view(0, {1, 2});
  const std::vector<double> flat{0.42, 0.42, 0.42};
  const auto row = hdd_weights(std::vector<double>{0.3, 0.7, 1.0});
  CHECK(hdd_step(flat, row, view) == Catch::Approx(0.42).margin(1e-15));
}

TEST_CASE("the baseline step is the plain average") {
  const auto view = make_view(0, {1, 3});
  const std::vector<double> states{2.0, 1.0, 9.0, 3.0};
  CHECK(hdd::baseline_step(states, view) == 2.0);
  const auto lonely = make_view(2, {});
  CHECK(hdd::baseline_step(states, lonely) == 9.0);
}

TEST_CASE("weight matrix assembly validates rows and keeps adversaries absent") {
  const std::vector<WeightRowInput> rows{{0, {1, 0}, {0.25, 0.75}},
                                         {1, {0, 1}, {0.5, 0.5}}};
  const auto m = hdd::assemble_weight_matrix(3, 7, rows);
  CHECK(m.step() == 7);
  CHECK(m.has_row(0));
  CHECK(m.has_row(1));
  CHECK_FALSE(m.has_row(2));
  CHECK(m.weight(0, 1) == 0.25);
  CHECK(m.weight(0, 0) == 0.75);
  CHECK(m.weight(0, 2) == 0.0);  // outside the neighborhood
  CHECK(m.agents_with_rows() == std::vector<int>{0, 1});
  CHECK_THROWS_AS(m.row(2), std::out_of_range);
  CHECK_THROWS_AS(m.weight(2, 0), std::out_of_range);
  CHECK_THROWS_AS(m.weight(0, 5), std::out_of_range);
}

TEST_CASE("weight matrix assembly rejects corrupted rows") {
  using hdd::assemble_weight_matrix;
  // sum far from one is corruption, not rounding
  CHECK_THROWS_AS(
      assemble_weight_matrix(2, 0, std::vector<WeightRowInput>{{0, {1, 0}, {0.6, 0.5}}}),
      std::runtime_error);
  // negative and oversized entries
  CHECK_THROWS_AS(
      assemble_weight_matrix(2, 0, std::vector<WeightRowInput>{{0, {1, 0}, {-0.1, 1.1}}}),
      std::invalid_argument);
  // no self entry
  CHECK_THROWS_AS(
      assemble_weight_matrix(3, 0, std::vector<WeightRowInput>{{0, {1, 2}, {0.5, 0.5}}}),
      std::invalid_argument);
  // zero self weight
  CHECK_THROWS_AS(
      assemble_weight_matrix(2, 0, std::vector<WeightRowInput>{{0, {1, 0}, {1.0, 0.0}}}),
      std::invalid_argument);
  // duplicate target
  CHECK_THROWS_AS(
      assemble_weight_matrix(2, 0,
                             std::vector<WeightRowInput>{{0, {0, 0}, {0.5, 0.5}}}),
      std::invalid_argument);
  // misaligned row
  CHECK_THROWS_AS(
      assemble_weight_matrix(2, 0, std::vector<WeightRowInput>{{0, {0}, {0.5, 0.5}}}),
      std::invalid_argument);
  // a sum within 1e-9 still passes
  const auto ok = assemble_weight_matrix(
      2, 0, std::vector<WeightRowInput>{{0, {1, 0}, {0.5, 0.5 + 5e-10}}});
  CHECK(ok.has_row(0));
}

TEST_CASE("weights vanish exactly for never-members and the self weight is bounded") {
  hdd::Rng rng(777);
  for (int it = 0; it < 100; ++it) {
    auto made = gen::make_instance(rng);
    const int T = made.window.horizon();
    const long t = made.inst.newest;
    const double cap =
        (1.0 - std::pow(made.inst.nu, T)) / (static_cast<double>(T) * (1.0 - made.inst.nu));

    const auto rec = hdd::membership(made.window, made.sched, t);
    std::vector<std::vector<double>> imps;
    std::vector<bool> never;
    for (int j : made.view.neighbors) {
      const auto counter = hdd::frequency_counter(rec, j);
      never.push_back(counter.empty());
      imps.push_back(hdd::discounted_importance(counter, made.inst.nu, t, T));
    }
    const auto mean = hdd::estimate_mean(imps, T);
    const auto row = hdd_weights(hdd::augmented_trust(mean));

    for (std::size_t r = 0; r < never.size(); ++r)
      CHECK((row[r] == 0.0) == never[r]);
    const double d = static_cast<double>(made.view.degree);
    CHECK(row.back() >= 1.0 / (1.0 + d * cap) - 1e-12);
  }
}
