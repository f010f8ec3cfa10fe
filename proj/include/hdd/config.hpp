#pragma once
// INI-style configuration with a single schema table driving the parser, the
// override mechanism and the generated help text, so the three cannot drift
// apart. Keys are globally unique; overrides may name them bare or as
// section.key.

#include <charconv>
#include <filesystem>
#include <fstream>
#include <optional>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "hdd/sim.hpp"

namespace hdd {

// file could not be read at all
struct ConfigFileError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// file was read but does not parse
struct ConfigParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ConfigKeyInfo {
  const char* section;
  const char* key;
  const char* description;
};

inline const std::vector<ConfigKeyInfo>& config_schema() {
  static const std::vector<ConfigKeyInfo> schema = {
      {"graph", "n_coop", "cooperative agents, ids 0..n_coop-1 (default 10)"},
      {"graph", "n_noncoop", "non-cooperative agents appended after them (default 3)"},
      {"graph", "edge_prob",
       "edge probability inside the cooperative core (default 0.4)"},
      {"graph", "adversary_edges",
       "also draw edges between non-cooperative pairs (default false)"},
      {"graph", "require_connected",
       "redraw the topology until connected (default true)"},
      {"graph", "connect_retries",
       "draws before giving up on connectivity (default 100)"},
      {"history", "horizon", "window length T, at least 2 (default 15)"},
      {"history", "prefill",
       "pre-run window fill: uniform(a,b) or hold (default uniform(0,1))"},
      {"trust", "confidence",
       "bound schedule: sorted-uniform, exponential-decay or geometric-decay "
       "(default sorted-uniform)"},
      {"trust", "eps_lo", "sorted-uniform: smallest drawable bound (default 0.01)"},
      {"trust", "eps_hi", "sorted-uniform: largest drawable bound (default 1)"},
      {"trust", "amplitude", "decay schedules: bound at step 0 (default 1)"},
      {"trust", "rate",
       "exponential-decay rate, or geometric-decay ratio in (0,1) (default 0.05)"},
      {"trust", "nu", "importance discount in (0,1) (default 0.5)"},
      {"trust", "compute_covariance",
       "log trust covariances; the weights never use them (default true)"},
      {"behavior", "default_adversary",
       "rule for non-cooperative agents: random(lo,hi), stubborn(c) or "
       "stealth(gain,betray[,lo,hi]) with betray a step or never "
       "(default random(0,1))"},
      {"behavior", "agent_<id>",
       "override one non-cooperative agent, same syntax as default_adversary"},
      {"run", "steps", "synchronous rounds to simulate (default 200)"},
      {"run", "seed", "base seed; every stream derives from it (default 1)"},
      {"run", "initial_lo", "initial states drawn from [initial_lo, initial_hi] "
                            "(default 0)"},
      {"run", "initial_hi", "upper end of the initial draw (default 1)"},
      {"run", "weight_stride",
       "log weight rows every k steps, 0 for final only (default 0)"},
      {"run", "trust_stride",
       "log trust estimates every k steps, 0 for final only (default 0)"},
      {"run", "cluster_tol", "gap tolerance for final-state clusters (default 0.01)"},
      {"run", "weight_threshold",
       "weights above this count as kept trust (default 0.001)"},
      {"run", "state_tol",
       "state agreement tolerance of the consensus check (default 0.01)"},
  };
  return schema;
}

namespace detail {

inline std::string trim(std::string_view s) {
  const char* ws = " \t\r\n";
  const auto b = s.find_first_not_of(ws);
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(ws);
  return std::string(s.substr(b, e - b + 1));
}

template <typename T>
inline T parse_number(const std::string& key, const std::string& value) {
  T out{};
  const char* first = value.data();
  const char* last = value.data() + value.size();
  auto [ptr, ec] = std::from_chars(first, last, out);
  if (ec != std::errc() || ptr != last)
    throw ConfigParseError("key " + key + ": cannot parse '" + value + "' as a number");
  return out;
}

inline bool parse_bool(const std::string& key, const std::string& value) {
  if (value == "true" || value == "1") return true;
  if (value == "false" || value == "0") return false;
  throw ConfigParseError("key " + key + ": expected true or false, got '" + value + "'");
}

// name(arg, arg, ...) or a bare name
inline std::pair<std::string, std::vector<std::string>> parse_call(
    const std::string& key, const std::string& value) {
  const auto open = value.find('(');
  if (open == std::string::npos) return {trim(value), {}};
  if (value.back() != ')')
    throw ConfigParseError("key " + key + ": unbalanced parentheses in '" + value + "'");
  std::string name = trim(value.substr(0, open));
  std::vector<std::string> args;
  std::string inner = value.substr(open + 1, value.size() - open - 2);
  std::stringstream ss(inner);
  std::string piece;
  while (std::getline(ss, piece, ',')) args.push_back(trim(piece));
  if (!inner.empty() && inner.back() == ',') args.push_back("");
  return {std::move(name), std::move(args)};
}

inline PrefillStrategy parse_prefill(const std::string& key, const std::string& value) {
  auto [name, args] = parse_call(key, value);
  try {
    if (name == "hold") {
      if (!args.empty())
        throw ConfigParseError("key " + key + ": hold takes no arguments");
      return PrefillStrategy::hold();
    }
    if (name == "uniform") {
      if (args.empty()) return PrefillStrategy::uniform(0.0, 1.0);
      if (args.size() != 2)
        throw ConfigParseError("key " + key + ": uniform takes two arguments");
      return PrefillStrategy::uniform(parse_number<double>(key, args[0]),
                                      parse_number<double>(key, args[1]));
    }
  } catch (const std::invalid_argument& e) {
    throw ConfigParseError("key " + key + ": " + e.what());
  }
  throw ConfigParseError("key " + key + ": unknown prefill '" + name + "'");
}

inline BehaviorModel parse_behavior(const std::string& key, const std::string& value) {
  auto [name, args] = parse_call(key, value);
  try {
    if (name == "random") {
      if (args.empty()) return BehaviorModel::random(0.0, 1.0);
      if (args.size() != 2)
        throw ConfigParseError("key " + key + ": random takes two arguments");
      return BehaviorModel::random(parse_number<double>(key, args[0]),
                                   parse_number<double>(key, args[1]));
    }
    if (name == "stubborn") {
      if (args.size() != 1)
        throw ConfigParseError("key " + key + ": stubborn takes one argument");
      return BehaviorModel::stubborn(parse_number<double>(key, args[0]));
    }
    if (name == "stealth") {
      if (args.empty() || args.size() == 3 || args.size() > 4)
        throw ConfigParseError("key " + key +
                               ": stealth takes gain, optional betray step and "
                               "optional noise interval");
      const double gain = parse_number<double>(key, args[0]);
      std::optional<long> betray;
      if (args.size() >= 2 && args[1] != "never") {
        const long b = parse_number<long>(key, args[1]);
        if (b >= 0) betray = b;
      }
      if (args.size() == 4)
        return BehaviorModel::stealth(gain, betray, parse_number<double>(key, args[2]),
                                      parse_number<double>(key, args[3]));
      return BehaviorModel::stealth(gain, betray);
    }
  } catch (const std::invalid_argument& e) {
    throw ConfigParseError("key " + key + ": " + e.what());
  }
  throw ConfigParseError("key " + key + ": unknown behavior '" + name + "'");
}

inline ConfidenceSchedule::Kind parse_confidence_kind(const std::string& key,
                                                      const std::string& value) {
  if (value == "sorted-uniform") return ConfidenceSchedule::Kind::sorted_uniform;
  if (value == "exponential-decay") return ConfidenceSchedule::Kind::exponential_decay;
  if (value == "geometric-decay") return ConfidenceSchedule::Kind::geometric_decay;
  throw ConfigParseError("key " + key + ": unknown confidence schedule '" + value + "'");
}

}  // namespace detail

// Apply one key. section may be empty (bare override); when given it must
// match the key's home section.
inline void apply_config_key(SimConfig& cfg, const std::string& section,
                             const std::string& key, const std::string& value) {
  auto in_section = [&](const char* want) {
    if (!section.empty() && section != want)
      throw ConfigParseError("key " + key + " belongs to section [" +
                             std::string(want) + "], not [" + section + "]");
  };
  using detail::parse_bool;
  using detail::parse_number;

  if (key.rfind("agent_", 0) == 0) {
    in_section("behavior");
    const int id = parse_number<int>(key, key.substr(6));
    cfg.behavior_overrides[id] = detail::parse_behavior(key, value);
    return;
  }
  if (key == "n_coop") { in_section("graph"); cfg.graph.n_coop = parse_number<int>(key, value); return; }
  if (key == "n_noncoop") { in_section("graph"); cfg.graph.n_noncoop = parse_number<int>(key, value); return; }
  if (key == "edge_prob") { in_section("graph"); cfg.graph.edge_prob = parse_number<double>(key, value); return; }
  if (key == "adversary_edges") { in_section("graph"); cfg.graph.adversary_edges = parse_bool(key, value); return; }
  if (key == "require_connected") { in_section("graph"); cfg.graph.require_connected = parse_bool(key, value); return; }
  if (key == "connect_retries") { in_section("graph"); cfg.graph.connect_retries = parse_number<int>(key, value); return; }
  if (key == "horizon") { in_section("history"); cfg.horizon = parse_number<int>(key, value); return; }
  if (key == "prefill") { in_section("history"); cfg.prefill = detail::parse_prefill(key, value); return; }
  if (key == "confidence") { in_section("trust"); cfg.confidence.kind = detail::parse_confidence_kind(key, value); return; }
  if (key == "eps_lo") { in_section("trust"); cfg.confidence.eps_lo = parse_number<double>(key, value); return; }
  if (key == "eps_hi") { in_section("trust"); cfg.confidence.eps_hi = parse_number<double>(key, value); return; }
  if (key == "amplitude") { in_section("trust"); cfg.confidence.amplitude = parse_number<double>(key, value); return; }
  if (key == "rate") { in_section("trust"); cfg.confidence.rate = parse_number<double>(key, value); return; }
  if (key == "nu") { in_section("trust"); cfg.nu = parse_number<double>(key, value); return; }
  if (key == "compute_covariance") { in_section("trust"); cfg.compute_covariance = parse_bool(key, value); return; }
  if (key == "default_adversary") { in_section("behavior"); cfg.default_adversary = detail::parse_behavior(key, value); return; }
  if (key == "steps") { in_section("run"); cfg.steps = parse_number<long>(key, value); return; }
  if (key == "seed") { in_section("run"); cfg.seed = parse_number<std::uint64_t>(key, value); return; }
  if (key == "initial_lo") { in_section("run"); cfg.initial_lo = parse_number<double>(key, value); return; }
  if (key == "initial_hi") { in_section("run"); cfg.initial_hi = parse_number<double>(key, value); return; }
  if (key == "weight_stride") { in_section("run"); cfg.weight_stride = parse_number<long>(key, value); return; }
  if (key == "trust_stride") { in_section("run"); cfg.trust_stride = parse_number<long>(key, value); return; }
  if (key == "cluster_tol") { in_section("run"); cfg.cluster_tol = parse_number<double>(key, value); return; }
  if (key == "weight_threshold") { in_section("run"); cfg.weight_threshold = parse_number<double>(key, value); return; }
  if (key == "state_tol") { in_section("run"); cfg.state_tol = parse_number<double>(key, value); return; }
  throw ConfigParseError("unknown key '" + key + "'");
}

// "key=value" or "section.key=value"
inline void apply_override(SimConfig& cfg, const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos)
    throw ConfigParseError("override '" + assignment + "' is not key=value");
  std::string key = detail::trim(assignment.substr(0, eq));
  std::string value = detail::trim(assignment.substr(eq + 1));
  std::string section;
  const auto dot = key.find('.');
  if (dot != std::string::npos) {
    section = key.substr(0, dot);
    key = key.substr(dot + 1);
  }
  if (key.empty()) throw ConfigParseError("override '" + assignment + "' has no key");
  apply_config_key(cfg, section, key, value);
}

inline SimConfig parse_config_text(const std::string& text,
                                   std::span<const std::string> overrides = {},
                                   const std::string& source = "<config>") {
  SimConfig cfg;
  std::string section;
  std::istringstream in(text);
  std::string raw;
  long line_no = 0;
  auto fail = [&](const std::string& msg) {
    throw ConfigParseError(source + ":" + std::to_string(line_no) + ": " + msg);
  };
  while (std::getline(in, raw)) {
    ++line_no;
    std::string line = detail::trim(raw);
    if (line.empty() || line[0] == '#' || line[0] == ';') continue;
    if (line.front() == '[') {
      if (line.back() != ']') fail("unterminated section header");
      section = detail::trim(line.substr(1, line.size() - 2));
      bool known = false;
      for (const auto& k : config_schema())
        if (section == k.section) known = true;
      if (!known) fail("unknown section [" + section + "]");
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) fail("expected key = value");
    const std::string key = detail::trim(line.substr(0, eq));
    const std::string value = detail::trim(line.substr(eq + 1));
    if (section.empty()) fail("key '" + key + "' appears before any section");
    try {
      apply_config_key(cfg, section, key, value);
    } catch (const ConfigParseError& e) {
      fail(e.what());
    }
  }
  for (const auto& o : overrides) apply_override(cfg, o);
  cfg.validate();
  return cfg;
}

inline SimConfig parse_config_file(const std::string& path,
                                   std::span<const std::string> overrides = {}) {
  std::ifstream in(path);
  if (!in) throw ConfigFileError("config file not found: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config_text(ss.str(), overrides, path);
}

inline std::string config_help_text() {
  std::string out = "configuration keys (INI sections; --set accepts key=value "
                    "or section.key=value):\n";
  std::string section;
  for (const auto& k : config_schema()) {
    if (section != k.section) {
      section = k.section;
      out += "\n[" + section + "]\n";
    }
    std::string key = k.key;
    out += "  " + key + std::string(key.size() < 20 ? 20 - key.size() : 1, ' ') +
           k.description + "\n";
  }
  return out;
}

}  // namespace hdd
