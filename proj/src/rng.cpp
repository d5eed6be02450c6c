#include "microcover/rng.hpp"

#include "microcover/errors.hpp"

namespace microcover {

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
  // splitmix64 applied to a mix of seed and stream.
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

std::uint64_t Rng::below(std::uint64_t n) {
  if (n == 0) throw PreconditionError("Rng::below needs n > 0");
  const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
  std::uint64_t x;
  do {
    x = engine_();
  } while (x >= limit);
  return x % n;
}

Rational Rng::unit(unsigned bits) {
  if (bits == 0 || bits > 63) throw PreconditionError("Rng::unit needs 1 <= bits <= 63");
  const std::uint64_t k = engine_() >> (64 - bits);
  return Rational(BigInt(std::to_string(k)), BigInt(std::to_string(1ULL << bits)));
}

bool Rng::chance(const Rational& p) {
  if (p.sign() <= 0) return false;
  if (p >= Rational(1)) return true;
  return unit(32) < p;
}

Rational Rng::position(const Interval& region, const Rational& len) {
  const Rational room = region.length() - len;
  if (room.sign() <= 0) return region.lo();
  return region.lo() + room * unit(32);
}

}  // namespace microcover
