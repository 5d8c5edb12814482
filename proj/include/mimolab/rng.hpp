#pragma once

#include <complex>
#include <cstdint>

namespace mimolab {

// Stateless counter-style seeding: every (seed, index) pair maps to an
// independent stream, so trials can be partitioned across any number of
// workers without changing the draws.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index);

// xoshiro256++ stream keyed by (seed, stream_index) through splitmix64.
// Each Monte Carlo trial owns one stream; no generator state is shared.
class TrialStream {
 public:
  TrialStream(std::uint64_t seed, std::uint64_t stream_index);

  std::uint64_t next_u64();

  // Uniform on (0, 1]; never returns 0 so log() stays finite.
  double next_unit();

  // Circularly-symmetric complex Gaussian, zero mean, unit total variance
  // (variance 1/2 per real component).
  std::complex<double> next_cgauss();

  // Uniform index in [0, n).
  std::uint32_t next_index(std::uint32_t n);

 private:
  std::uint64_t s_[4];
};

}  // namespace mimolab
