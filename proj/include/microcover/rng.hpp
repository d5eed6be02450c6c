#pragma once

#include <cstdint>
#include <random>

#include "microcover/interval.hpp"
#include "microcover/rational.hpp"

namespace microcover {

// Counter-based sub-seed: trial i of a run seeded with `seed` always sees
// the same stream, whatever else the run does.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream);

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }
  // Uniform on {0, ..., n - 1}; n > 0.
  std::uint64_t below(std::uint64_t n);
  // k / 2^bits with k uniform on {0, ..., 2^bits - 1}; bits <= 63.
  Rational unit(unsigned bits = 32);
  // True with probability p (p a rational in [0, 1]), to 2^-32 resolution.
  bool chance(const Rational& p);
  // Uniform position for an interval of length len inside `region`,
  // left-aligned when it does not fit.
  Rational position(const Interval& region, const Rational& len);

 private:
  std::mt19937_64 engine_;
};

}  // namespace microcover
