#include <catch2/catch_amalgamated.hpp>

#include <map>
#include <vector>

#include "hdd/graph.hpp"
#include "hdd/history.hpp"

using hdd::HistoryWindow;
using hdd::NeighborView;
using hdd::PrefillStrategy;

namespace {

NeighborView make_view(int agent, std::vector<int> neighbors) {
  NeighborView v;
  v.agent = agent;
  v.neighbors = std::move(neighbors);
  v.inclusive = v.neighbors;
  v.inclusive.push_back(agent);
  v.degree = static_cast<int>(v.neighbors.size());
  return v;
}

}  // namespace

TEST_CASE("hold prefill replicates the initial states across the window") {
  const auto view = make_view(0, {1, 2});
  const std::vector<double> init{0.3, 0.7, 0.9};
  const auto w = hdd::prefill(view, 4, PrefillStrategy::hold(), init, 99);
  REQUIRE(w.newest_time() == 0);
  REQUIRE(w.oldest_time() == -3);
  for (long k = -3; k <= 0; ++k) {
    CHECK(w.own_at(k) == 0.3);
    CHECK(w.value_at(1, k) == 0.7);
    CHECK(w.value_at(2, k) == 0.9);
  }
}

TEST_CASE("uniform prefill keeps the initial state at step zero and draws the past") {
  const auto view = make_view(0, {1});
  const std::vector<double> init{0.25, 0.5};
  const auto w = hdd::prefill(view, 5, PrefillStrategy::uniform(0.0, 1.0), init, 7);
  CHECK(w.own_at(0) == 0.25);
  CHECK(w.value_at(1, 0) == 0.5);
  for (long k = -4; k < 0; ++k) {
    CHECK(w.own_at(k) >= 0.0);
    CHECK(w.own_at(k) < 1.0);
  }
  const auto again = hdd::prefill(view, 5, PrefillStrategy::uniform(0.0, 1.0), init, 7);
  for (long k = -4; k <= 0; ++k) CHECK(again.own_at(k) == w.own_at(k));
  const auto other = hdd::prefill(view, 5, PrefillStrategy::uniform(0.0, 1.0), init, 8);
  bool any_diff = false;
  for (long k = -4; k < 0; ++k) any_diff |= other.own_at(k) != w.own_at(k);
  CHECK(any_diff);
}

TEST_CASE("every observer sees the same synthesized past of an agent") {
  const std::vector<double> init{0.1, 0.2, 0.3, 0.4};
  const auto w1 = hdd::prefill(make_view(0, {2, 3}), 6,
                               PrefillStrategy::uniform(0.0, 1.0), init, 13);
  const auto w2 = hdd::prefill(make_view(1, {2}), 6,
                               PrefillStrategy::uniform(0.0, 1.0), init, 13);
  for (long k = -5; k <= 0; ++k) CHECK(w1.value_at(2, k) == w2.value_at(2, k));
}

TEST_CASE("invalid prefill parameters are rejected") {
  CHECK_THROWS_AS(PrefillStrategy::uniform(1.0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(PrefillStrategy::uniform(2.0, 1.0), std::invalid_argument);
  const std::vector<double> init{0.1};
  CHECK_THROWS_AS(hdd::prefill(make_view(0, {}), 1, PrefillStrategy::hold(), init, 1),
                  std::invalid_argument);
  // neighbor 5 has no initial state
  CHECK_THROWS_AS(hdd::prefill(make_view(0, {5}), 3, PrefillStrategy::hold(), init, 1),
                  std::invalid_argument);
}

TEST_CASE("push keeps a FIFO window of exactly the horizon") {
  const auto view = make_view(0, {1});
  HistoryWindow w(view, 3, 10, {1.0, 2.0, 3.0}, {{0.1, 0.2, 0.3}});
  REQUIRE(w.own_values() == std::vector<double>{1.0, 2.0, 3.0});
  w.push(11, 4.0, std::vector<double>{0.4});
  CHECK(w.own_values() == std::vector<double>{2.0, 3.0, 4.0});
  CHECK(w.neighbor_values(1) == std::vector<double>{0.2, 0.3, 0.4});
  CHECK(w.newest_time() == 11);
  CHECK(w.oldest_time() == 9);
  CHECK(w.own_at(9) == 2.0);
}

TEST_CASE("push rejects gaps, replays and missing neighbor values") {
  const auto view = make_view(0, {1});
  HistoryWindow w(view, 3, 10, {1.0, 2.0, 3.0}, {{0.1, 0.2, 0.3}});
  CHECK_THROWS_AS(w.push(12, 4.0, std::vector<double>{0.4}), std::invalid_argument);
  CHECK_THROWS_AS(w.push(10, 4.0, std::vector<double>{0.4}), std::invalid_argument);
  CHECK_THROWS_AS(w.push(11, 4.0, std::vector<double>{}), std::invalid_argument);
  CHECK_THROWS_AS(w.push(11, 4.0, std::vector<double>{0.4, 0.5}), std::invalid_argument);
}

TEST_CASE("value_at answers exactly the window and the observed agents") {
  const auto view = make_view(5, {2, 7});
  HistoryWindow w(view, 3, 10, {1.0, 2.0, 3.0}, {{4.0, 5.0, 6.0}, {7.0, 8.0, 9.0}});
  CHECK(w.value_at(5, 9) == 2.0);
  CHECK(w.value_at(2, 8) == 4.0);
  CHECK(w.value_at(7, 10) == 9.0);
  CHECK_THROWS_AS(w.value_at(5, 7), std::out_of_range);
  CHECK_THROWS_AS(w.value_at(5, 11), std::out_of_range);
  CHECK_THROWS_AS(w.value_at(3, 9), std::out_of_range);
}

TEST_CASE("window construction is validated") {
  const auto view = make_view(0, {1});
  CHECK_THROWS_AS(HistoryWindow(view, 1, 0, {1.0}, {{1.0}}), std::invalid_argument);
  CHECK_THROWS_AS(HistoryWindow(view, 3, 0, {1.0, 2.0}, {{1.0, 2.0, 3.0}}),
                  std::invalid_argument);
  CHECK_THROWS_AS(HistoryWindow(view, 3, 0, {1.0, 2.0, 3.0}, {}),
                  std::invalid_argument);
  CHECK_THROWS_AS(HistoryWindow(view, 3, 0, {1.0, 2.0, 3.0}, {{1.0, 2.0}}),
                  std::invalid_argument);
}

TEST_CASE("a replayed ledger matches the window after many pushes") {
  const auto view = make_view(0, {1, 4});
  const std::vector<double> init{0.5, 0.6, 0.0, 0.0, 0.7};
  auto w = hdd::prefill(view, 4, PrefillStrategy::uniform(0.0, 1.0), init, 3);

  // ledger[agent][time] = value, seeded from the prefilled window
  std::map<int, std::map<long, double>> ledger;
  for (long k = w.oldest_time(); k <= w.newest_time(); ++k)
    for (int id : view.inclusive) ledger[id][k] = w.value_at(id, k);

  hdd::Rng rng(77);
  for (long t = 1; t <= 9; ++t) {
    const double own = rng.next_unit();
    const std::vector<double> nbr{rng.next_unit(), rng.next_unit()};
    w.push(t, own, nbr);
    ledger[0][t] = own;
    ledger[1][t] = nbr[0];
    ledger[4][t] = nbr[1];
    REQUIRE(w.horizon() == 4);
    for (long k = w.oldest_time(); k <= w.newest_time(); ++k)
      for (int id : view.inclusive) CHECK(w.value_at(id, k) == ledger[id][k]);
  }
}
