#pragma once

#include <cstddef>
#include <iosfwd>
#include <string>
#include <vector>

#include "mimolab/equalizers.hpp"
#include "mimolab/precoders.hpp"

namespace mimolab {

struct DiversityPrediction {
  double value = 0.0;       // 0 or within [0.5, M*N]
  std::string regime_note;  // e.g. "error floor above R_th"
};

// Spectral-efficiency threshold N log2(N/(N-1)) separating the
// full-diversity and error-floor regimes of regularized-inversion and
// matched-filter precoding. +inf for n == 1 (a single stream has no
// inter-stream interference to floor on).
double rate_threshold(std::size_t n);

// ceil(N 2^{-R/N}) clamped to [1, N]; stream count that stays "strong".
std::size_t strong_stream_count(std::size_t n, double rate);

// Closed-form high-SNR diversity order for a (precoder, equalizer, rate)
// cell. Zero-forcing precoders only support the bare (no equalizer) cell.
DiversityPrediction predicted_diversity(std::size_t m, std::size_t n,
                                        double rate,
                                        const PrecoderConfig& precoder,
                                        EqualizerKind equalizer);

// Diversity-multiplexing tradeoff d(r) for a bare precoder, 0 <= r <= n.
// Regularized-inversion and matched-filter precoding floor at 0 for every
// positive multiplexing gain; no combined precoder+equalizer curve exists.
double dmt_curve(std::size_t m, std::size_t n, PrecoderKind precoder,
                 double r);

struct DiversityTableRow {
  std::string precoder;
  std::string equalizer;
  std::size_t m = 0;
  std::size_t n = 0;
  double rate = 0.0;
  double d_predicted = 0.0;
  std::string regime_note;
};

// All defined (precoder, equalizer) cells for one antenna pair and rate list.
std::vector<DiversityTableRow> diversity_table(std::size_t m, std::size_t n,
                                               const std::vector<double>& rates,
                                               double rzf_c);

// CSV: precoder,equalizer,M,N,R,d_predicted,regime_note
void write_diversity_table_csv(std::ostream& os,
                               const std::vector<DiversityTableRow>& rows);

}  // namespace mimolab
