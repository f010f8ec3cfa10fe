#pragma once
// Deterministic randomness plumbing. Every draw in a run comes from a
// substream keyed by (base seed, purpose, entity id), so adding or removing
// one consumer never perturbs the draws seen by another.

#include <cstdint>
#include <random>

namespace hdd {

enum class StreamPurpose : std::uint64_t {
  initial_state = 1,
  prefill = 2,
  confidence_bounds = 3,
  adversary = 4,
  topology = 5,
};

namespace detail {

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

}  // namespace detail

inline std::uint64_t derive_seed(std::uint64_t base, StreamPurpose purpose,
                                 std::uint64_t id = 0) {
  std::uint64_t h = detail::splitmix64(base);
  h = detail::splitmix64(h ^ static_cast<std::uint64_t>(purpose));
  return detail::splitmix64(h ^ id);
}

// mt19937_64 with a hand-mapped uniform double. std::uniform_real_distribution
// is implementation defined, which would break byte-identical logs across
// standard libraries.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  // [0, 1)
  double next_unit() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  // [lo, hi)
  double next_in(double lo, double hi) { return lo + (hi - lo) * next_unit(); }

  std::uint64_t next_u64() { return engine_(); }

 private:
  std::mt19937_64 engine_;
};

inline Rng make_stream(std::uint64_t base, StreamPurpose purpose,
                       std::uint64_t id = 0) {
  return Rng(derive_seed(base, purpose, id));
}

}  // namespace hdd
