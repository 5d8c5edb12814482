#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "mimolab/montecarlo.hpp"

namespace mimolab {

// Empirical verification of the random-matrix facts the diversity
// predictions rest on. Slope checks report the absolute deviation of a
// fitted log-log slope from its target; KS checks report the KS distance.
// pass <=> statistic <= threshold in both cases.
struct DistributionCheckReport {
  std::string check;
  std::string params;     // human-readable parameter summary
  double statistic = 0.0;
  double threshold = 0.0;
  bool pass = false;
  std::uint64_t samples = 0;  // per evaluation point
  double fitted = 0.0;        // fitted slope (slope checks only)
  double target = 0.0;        // target slope (slope checks only)
};

inline constexpr double kSlopeCheckTolerance = 0.3;
inline constexpr std::uint64_t kMinSlopeCheckCount = 50;

// P(#{eigenvalues of H H^H below 1/rho} == s) should decay as
// rho^{-(s^2 + (M-N)s)}. Feasibility guard: exponent <= 3.
DistributionCheckReport check_small_eigenvalue_count(
    std::size_t m, std::size_t n, std::size_t s,
    const std::vector<double>& rho_list, std::uint64_t trials,
    std::uint64_t seed, const RunOptions& opt = {});

// P(lambda_min <= 1/rho) should decay as rho^{-(M-N+1)}; guard M-N+1 <= 3.
DistributionCheckReport check_lambda_min_tail(std::size_t m, std::size_t n,
                                              const std::vector<double>& rho_list,
                                              std::uint64_t trials,
                                              std::uint64_t seed,
                                              const RunOptions& opt = {});

// z = 1/[(H H^H)^{-1}]_kk is Gamma(M-N+1, 1) distributed (the complex
// chi-square convention); one-sample KS at the 1% level.
DistributionCheckReport check_inverse_diag_chisquare(std::size_t m,
                                                     std::size_t n,
                                                     std::uint64_t trials,
                                                     std::uint64_t seed,
                                                     const RunOptions& opt = {},
                                                     std::size_t row = 0);

// q = |U_{row,1}|^2 of the eigenbasis of a square channel Gram matrix is
// Beta(1, N-1) distributed; one-sample KS at the 1% level.
DistributionCheckReport check_unitary_entry_density(std::size_t n,
                                                    std::uint64_t trials,
                                                    std::uint64_t seed,
                                                    const RunOptions& opt = {},
                                                    std::size_t row = 0);

}  // namespace mimolab
