#include <catch2/catch_amalgamated.hpp>

#include <string>
#include <vector>

#include "hdd/config.hpp"
#include "hdd/io.hpp"

using hdd::parse_config_text;

namespace {

const std::string kSample = R"(# sample
[graph]
n_coop = 6
n_noncoop = 2
edge_prob = 0.7

[history]
horizon = 8
prefill = uniform(0.1, 0.9)

[trust]
nu = 0.5
eps_hi = 1.2

[behavior]
default_adversary = random(0, 1)
agent_7 = stubborn(0.3)

[run]
steps = 50
seed = 9
)";

}  // namespace

TEST_CASE("a config file round-trips into the expected settings") {
  const auto cfg = parse_config_text(kSample);
  CHECK(cfg.graph.n_coop == 6);
  CHECK(cfg.graph.n_noncoop == 2);
  CHECK(cfg.graph.edge_prob == 0.7);
  CHECK(cfg.horizon == 8);
  CHECK(cfg.prefill.kind == hdd::PrefillStrategy::Kind::uniform);
  CHECK(cfg.prefill.lo == 0.1);
  CHECK(cfg.nu == 0.5);
  CHECK(cfg.confidence.eps_hi == 1.2);
  CHECK(cfg.steps == 50);
  CHECK(cfg.seed == 9);
  REQUIRE(cfg.behavior_overrides.count(7) == 1);
  CHECK(cfg.behavior_overrides.at(7).kind ==
        hdd::BehaviorModel::Kind::stubborn_adversary);
  CHECK(cfg.behavior_overrides.at(7).stubborn_value == 0.3);

  const auto echo = hdd::config_to_json(cfg);
  CHECK(echo["graph"]["n_coop"] == 6);
  CHECK(echo["trust"]["nu"] == 0.5);
  CHECK(echo["behavior"]["overrides"]["agent_7"] == "stubborn(0.3)");
  CHECK(echo["derived_seeds"]["initial_state"].size() == 8);
}

TEST_CASE("overrides win over file values") {
  const std::vector<std::string> sets{"nu=0.95", "run.steps=10"};
  const auto cfg = parse_config_text(kSample, sets);
  CHECK(cfg.nu == 0.95);
  CHECK(cfg.steps == 10);
  CHECK(cfg.graph.n_coop == 6);  // untouched keys survive
}

TEST_CASE("override section prefixes must match the key's home") {
  CHECK_THROWS_AS(parse_config_text(kSample, std::vector<std::string>{"graph.nu=0.5"}),
                  hdd::ConfigParseError);
  CHECK_THROWS_AS(parse_config_text(kSample, std::vector<std::string>{"nu"}),
                  hdd::ConfigParseError);
  CHECK_THROWS_AS(parse_config_text(kSample, std::vector<std::string>{"bogus=1"}),
                  hdd::ConfigParseError);
}

TEST_CASE("a missing file and a broken file raise different errors") {
  CHECK_THROWS_AS(hdd::parse_config_file("/nonexistent/path.ini"),
                  hdd::ConfigFileError);
  CHECK_THROWS_AS(parse_config_text("[graph]\nwhat is this"), hdd::ConfigParseError);
}

TEST_CASE("parse errors carry the line and the offending item") {
  using Catch::Matchers::ContainsSubstring;
  CHECK_THROWS_WITH(parse_config_text("[graph]\nn_coop = ten"),
                    ContainsSubstring("n_coop") && ContainsSubstring(":2:"));
  CHECK_THROWS_WITH(parse_config_text("[nowhere]\n"), ContainsSubstring("nowhere"));
  CHECK_THROWS_WITH(parse_config_text("steps = 5\n"),
                    ContainsSubstring("before any section"));
  CHECK_THROWS_WITH(parse_config_text("[run]\nstepz = 5\n"),
                    ContainsSubstring("stepz"));
  CHECK_THROWS_WITH(parse_config_text("[graph]\nhorizon = 5\n"),
                    ContainsSubstring("history"));
}

TEST_CASE("validation failures name the field") {
  using Catch::Matchers::ContainsSubstring;
  CHECK_THROWS_WITH(parse_config_text("[history]\nhorizon = 1\n"),
                    ContainsSubstring("horizon"));
  CHECK_THROWS_WITH(parse_config_text("[trust]\nnu = 2\n"), ContainsSubstring("nu"));
  // an override for a cooperative agent is caught at validation
  CHECK_THROWS_WITH(parse_config_text("[behavior]\nagent_2 = stubborn(1)\n"),
                    ContainsSubstring("agent_2"));
}

TEST_CASE("behavior strings cover all three adversary rules") {
  auto cfg = parse_config_text("[behavior]\ndefault_adversary = stubborn(0.25)\n");
  CHECK(cfg.default_adversary.kind == hdd::BehaviorModel::Kind::stubborn_adversary);

  cfg = parse_config_text("[behavior]\ndefault_adversary = random(0.2,0.8)\n");
  CHECK(cfg.default_adversary.noise_lo == 0.2);
  CHECK(cfg.default_adversary.noise_hi == 0.8);

  cfg = parse_config_text("[behavior]\ndefault_adversary = stealth(0.9,150)\n");
  CHECK(cfg.default_adversary.kind == hdd::BehaviorModel::Kind::stealth_adversary);
  CHECK(cfg.default_adversary.stealth_gain == 0.9);
  REQUIRE(cfg.default_adversary.betray_time.has_value());
  CHECK(*cfg.default_adversary.betray_time == 150);

  cfg = parse_config_text("[behavior]\ndefault_adversary = stealth(1, never)\n");
  CHECK_FALSE(cfg.default_adversary.betray_time.has_value());

  cfg = parse_config_text("[behavior]\ndefault_adversary = stealth(1,-1,0.4,0.6)\n");
  CHECK_FALSE(cfg.default_adversary.betray_time.has_value());
  CHECK(cfg.default_adversary.noise_lo == 0.4);

  CHECK_THROWS_AS(parse_config_text("[behavior]\ndefault_adversary = sneaky(1)\n"),
                  hdd::ConfigParseError);
  CHECK_THROWS_AS(parse_config_text("[behavior]\ndefault_adversary = stealth(2)\n"),
                  hdd::ConfigParseError);
  CHECK_THROWS_AS(parse_config_text("[behavior]\ndefault_adversary = stubborn()\n"),
                  hdd::ConfigParseError);
}

TEST_CASE("confidence schedule names map to kinds") {
  auto cfg = parse_config_text("[trust]\nconfidence = exponential-decay\nrate = 0.2\n");
  CHECK(cfg.confidence.kind == hdd::ConfidenceSchedule::Kind::exponential_decay);
  cfg = parse_config_text("[trust]\nconfidence = geometric-decay\nrate = 0.9\n");
  CHECK(cfg.confidence.kind == hdd::ConfidenceSchedule::Kind::geometric_decay);
  CHECK_THROWS_AS(parse_config_text("[trust]\nconfidence = linear\n"),
                  hdd::ConfigParseError);
}

TEST_CASE("prefill strings cover both strategies") {
  auto cfg = parse_config_text("[history]\nprefill = hold\n");
  CHECK(cfg.prefill.kind == hdd::PrefillStrategy::Kind::hold);
  cfg = parse_config_text("[history]\nprefill = uniform\n");
  CHECK(cfg.prefill.kind == hdd::PrefillStrategy::Kind::uniform);
  CHECK_THROWS_AS(parse_config_text("[history]\nprefill = gaussian(0,1)\n"),
                  hdd::ConfigParseError);
  CHECK_THROWS_AS(parse_config_text("[history]\nprefill = uniform(1,0)\n"),
                  hdd::ConfigParseError);
}

TEST_CASE("the help text documents every schema key and the parser accepts it") {
  const std::string help = hdd::config_help_text();
  for (const auto& k : hdd::config_schema()) {
    INFO("key " << k.key);
    CHECK(help.find(k.key) != std::string::npos);
    CHECK(help.find("[" + std::string(k.section) + "]") != std::string::npos);
  }

  // synthesize a config that touches every schema key once
  const std::string all = R"([graph]
n_coop = 5
n_noncoop = 2
edge_prob = 0.5
adversary_edges = false
require_connected = true
connect_retries = 50
[history]
horizon = 6
prefill = hold
[trust]
confidence = sorted-uniform
eps_lo = 0.02
eps_hi = 0.9
amplitude = 1.5
rate = 0.1
nu = 0.3
compute_covariance = false
[behavior]
default_adversary = random(0,1)
agent_5 = stealth(1, never)
[run]
steps = 12
seed = 77
initial_lo = 0.1
initial_hi = 0.8
weight_stride = 4
trust_stride = 6
cluster_tol = 0.02
weight_threshold = 0.002
state_tol = 0.02
)";
  const auto cfg = parse_config_text(all);
  CHECK(cfg.compute_covariance == false);
  CHECK(cfg.graph.connect_retries == 50);
  CHECK(cfg.initial_lo == 0.1);
  CHECK(cfg.weight_stride == 4);
  CHECK(cfg.trust_stride == 6);
  CHECK(cfg.cluster_tol == 0.02);
  CHECK(cfg.weight_threshold == 0.002);
  CHECK(cfg.state_tol == 0.02);
  CHECK(cfg.graph.adversary_edges == false);
  CHECK(cfg.graph.require_connected == true);
  CHECK(cfg.confidence.amplitude == 1.5);
  CHECK(cfg.confidence.rate == 0.1);
  CHECK(cfg.confidence.eps_lo == 0.02);
}

TEST_CASE("doubles survive the round trip through csv formatting") {
  hdd::Rng rng(55);
  for (int it = 0; it < 200; ++it) {
    const double v = rng.next_in(-5.0, 5.0);
    const std::string s = hdd::format_double(v);
    CHECK(std::stod(s) == v);
  }
  CHECK(hdd::format_double(0.05) == "0.05");
  CHECK(hdd::format_double(1.0) == "1");
}
