#include "mimolab/rng.hpp"

#include <cmath>
#include <numbers>

namespace mimolab {

namespace {

inline std::uint64_t splitmix64_next(std::uint64_t& x) {
  x += 0x9e3779b97f4a7c15ULL;
  std::uint64_t z = x;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

inline std::uint64_t rotl(std::uint64_t x, int k) {
  return (x << k) | (x >> (64 - k));
}

}  // namespace

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) {
  std::uint64_t x = seed;
  std::uint64_t h = splitmix64_next(x);
  x ^= rotl(index, 32) + 0x9e3779b97f4a7c15ULL;
  h ^= splitmix64_next(x);
  return h;
}

TrialStream::TrialStream(std::uint64_t seed, std::uint64_t stream_index) {
  std::uint64_t x = derive_seed(seed, stream_index);
  s_[0] = splitmix64_next(x);
  s_[1] = splitmix64_next(x);
  s_[2] = splitmix64_next(x);
  s_[3] = splitmix64_next(x);
  if ((s_[0] | s_[1] | s_[2] | s_[3]) == 0) {
    s_[0] = 1;  // all-zero state is the one forbidden xoshiro state
  }
}

std::uint64_t TrialStream::next_u64() {
  const std::uint64_t result = rotl(s_[0] + s_[3], 23) + s_[0];
  const std::uint64_t t = s_[1] << 17;
  s_[2] ^= s_[0];
  s_[3] ^= s_[1];
  s_[1] ^= s_[2];
  s_[0] ^= s_[3];
  s_[2] ^= t;
  s_[3] = rotl(s_[3], 45);
  return result;
}

double TrialStream::next_unit() {
  return static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53;
}

std::complex<double> TrialStream::next_cgauss() {
  // Exponential modulus-squared plus uniform phase: |h|^2 ~ Exp(1) exactly.
  const double r = std::sqrt(-std::log(next_unit()));
  const double phi = 2.0 * std::numbers::pi * next_unit();
  return {r * std::cos(phi), r * std::sin(phi)};
}

std::uint32_t TrialStream::next_index(std::uint32_t n) {
  return static_cast<std::uint32_t>(((next_u64() >> 32) * static_cast<std::uint64_t>(n)) >> 32);
}

}  // namespace mimolab
