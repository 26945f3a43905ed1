#pragma once
// Counter-based randomness for disorder draws.  The generator is Widynski's
// "squares" (five rounds, 64-bit output); being a pure function of
// (counter, key) it gives bit-identical streams on every platform and lets
// independent matrix entries be drawn in any order.

#include <cstdint>

namespace speclocal {

inline std::uint64_t splitmix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

inline std::uint64_t squares64(std::uint64_t ctr, std::uint64_t key) {
  std::uint64_t x, y, z, t;
  y = x = ctr * key;
  z = y + key;
  x = x * x + y; x = (x >> 32) | (x << 32);
  x = x * x + z; x = (x >> 32) | (x << 32);
  x = x * x + y; x = (x >> 32) | (x << 32);
  t = x = x * x + z; x = (x >> 32) | (x << 32);
  return t ^ ((x * x + y) >> 32);
}

struct CounterRng {
  std::uint64_t key;
  // The key is a splitmix64-finalized seed, forced odd (an even key would
  // collapse the low bits of the counter multiply).
  explicit CounterRng(std::uint64_t seed) : key(splitmix64(seed) | 1ULL) {}

  double uniform01(std::uint64_t ctr) const {
    return double(squares64(ctr, key) >> 11) * 0x1.0p-53;
  }
  // Uniform on [-lambda, lambda].
  double symmetric(std::uint64_t ctr, double lambda) const {
    return lambda * (2.0 * uniform01(ctr) - 1.0);
  }
};

}  // namespace speclocal
