#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <vector>

#include "mimolab/sinr.hpp"

namespace mimolab {

// Execution knobs. Worker count never changes the produced numbers: trial
// randomness is keyed on (seed, point, trial) and aggregation is a
// commutative count.
struct RunOptions {
  unsigned workers = 1;
  std::uint64_t point_index = 0;  // folded into the per-trial stream key
};

struct OutageEstimate {
  double snr_db = 0.0;
  std::uint64_t trials = 0;
  std::uint64_t outage_count = 0;
  std::uint64_t singular_draws = 0;  // scored as outages, counted separately
  double p_hat = 0.0;
  double ci_low = 0.0;   // 95% Wilson
  double ci_high = 0.0;
};

// Counts trials where sum_k log2(1 + gamma_k) <= rate over i.i.d. channel
// draws. Deterministic in (seed, point_index) for any worker count.
OutageEstimate estimate_outage(const LinkConfig& cfg, std::uint64_t trials,
                               std::uint64_t seed,
                               const RunOptions& opt = {});

// One estimate per SNR point (dB, strictly increasing); per-point seeds are
// derived from (master_seed, point index).
std::vector<OutageEstimate> sweep(const LinkConfig& cfg_template,
                                  const std::vector<double>& snr_db,
                                  std::uint64_t trials_per_point,
                                  std::uint64_t master_seed,
                                  const RunOptions& opt = {},
                                  bool progress = false);

struct DiversityFit {
  double slope = 0.0;      // of log10 p_out vs log10 rho; diversity = -slope
  double intercept = 0.0;
  double slope_stderr = 0.0;
  std::array<double, 2> window_db{0.0, 0.0};
  std::size_t points_used = 0;
};

inline constexpr std::uint64_t kMinOutageCountForFit = 25;

// Least squares of log10 p_hat against log10 rho over the dB window.
// Points need outage_count >= 25 and p_hat >= min_pout; fewer than 3 usable
// points raises InsufficientDataError.
DiversityFit fit_diversity(const std::vector<OutageEstimate>& points,
                           double window_db_lo, double window_db_hi,
                           double min_pout = 0.0);

enum class Constellation { kQpsk, k16Qam };

const char* constellation_name(Constellation c);

struct SerEstimate {
  double snr_db = 0.0;
  std::uint64_t trials = 0;
  std::uint64_t error_count = 0;  // vector-error events
  std::uint64_t singular_draws = 0;
  double ser_hat = 0.0;
  double ci_low = 0.0;
  double ci_high = 0.0;
};

// Uncoded symbol transmission: one random symbol vector per trial, per-stream
// nearest-point detection treating residual interference as noise, vector
// error counted when any stream decides wrongly.
SerEstimate simulate_ser(const LinkConfig& cfg, Constellation constellation,
                         std::uint64_t trials, std::uint64_t seed,
                         const RunOptions& opt = {});

std::vector<SerEstimate> sweep_ser(const LinkConfig& cfg_template,
                                   Constellation constellation,
                                   const std::vector<double>& snr_db,
                                   std::uint64_t trials_per_point,
                                   std::uint64_t master_seed,
                                   const RunOptions& opt = {});

// CSV with header snr_db,trials,outages,p_hat,ci_low,ci_high,singular_draws
// and full-precision decimal floats.
void write_outage_csv(std::ostream& os, const std::vector<OutageEstimate>& pts);
void write_ser_csv(std::ostream& os, const std::vector<SerEstimate>& pts);

std::vector<OutageEstimate> read_outage_csv(std::istream& is);

}  // namespace mimolab
