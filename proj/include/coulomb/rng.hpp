#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>

namespace coulomb {

// Counter-based random numbers: every variate is a pure function of a
// 64-bit key and a tuple of counters, so streams can be consumed out of
// order, shared between coupled runs, and replayed exactly.

namespace detail {

// splitmix64 finalizer (Steele/Vigna); bijective on 64 bits.
inline std::uint64_t mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

inline std::uint64_t combine(std::uint64_t h, std::uint64_t v) {
  return mix64(h ^ (v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2)));
}

}  // namespace detail

// Uniform in (0, 1); never returns 0 or 1 exactly.
inline double counter_uniform(std::uint64_t key, std::uint64_t c0, std::uint64_t c1,
                              std::uint64_t c2, std::uint64_t c3) {
  std::uint64_t h = detail::mix64(key);
  h = detail::combine(h, c0);
  h = detail::combine(h, c1);
  h = detail::combine(h, c2);
  h = detail::combine(h, c3);
  return (static_cast<double>(h >> 11) + 0.5) * 0x1.0p-53;
}

// Standard gaussian via Box-Muller on two independent uniforms derived
// from the same counter tuple (sub-counters 0 and 1 on the last slot).
inline double counter_gaussian(std::uint64_t key, std::uint64_t c0, std::uint64_t c1,
                               std::uint64_t c2, std::uint64_t c3) {
  double u1 = counter_uniform(key, c0, c1, c2, 2 * c3);
  double u2 = counter_uniform(key, c0, c1, c2, 2 * c3 + 1);
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

// Sequential stream view used by the sampler: a (seed, stream) pair plus a
// running counter. Copyable value type; advancing is explicit.
class CounterRng {
 public:
  CounterRng(std::uint64_t seed, std::uint64_t stream = 0)
      : key_(detail::combine(detail::mix64(seed), stream)) {}

  double uniform() { return counter_uniform(key_, pos_++, 0, 0, 0); }
  double gaussian() { return counter_gaussian(key_, pos_++, 0, 0, 1); }

  std::uint64_t position() const { return pos_; }
  std::uint64_t key() const { return key_; }

 private:
  std::uint64_t key_;
  std::uint64_t pos_ = 0;
};

}  // namespace coulomb
