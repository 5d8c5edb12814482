#pragma once

#include <armadillo>
#include <cstddef>

#include "mimolab/channel.hpp"
#include "mimolab/equalizers.hpp"
#include "mimolab/precoders.hpp"

namespace mimolab {

// Per-stream SINRs gamma_k, all finite and >= 0.
using SinrVector = arma::vec;

// One point of the simulation grid: antenna counts, linear SNR, target
// spectral efficiency and the transmit/receive filter pair.
struct LinkConfig {
  std::size_t m = 1;  // transmit antennas
  std::size_t n = 1;  // receive antennas (= stream count)
  double rho = 1.0;   // linear SNR
  double rate = 0.0;  // b/s/Hz
  PrecoderConfig precoder;
  EqualizerKind equalizer = EqualizerKind::kNone;
};

// Throws ConfigError naming the violated constraint.
void validate_link_config(const LinkConfig& cfg);

// All streams see rho / tr((H H^H)^{-1}).
SinrVector sinr_zf_min_power(const ChannelRealization& h, double rho);

// gamma_k = p_k from the water-filled design (decoupled streams, unit noise).
SinrVector sinr_zf_max_throughput(const ChannelRealization& h, double rho);

// Regularized inversion: desired and interference powers from the weighted
// eigenbasis sums with weights lambda_l / (lambda_l + c).
SinrVector sinr_rzf(const EigenSpectrum& s, double rho, double c);
SinrVector sinr_rzf(const ChannelRealization& h, double rho, double c);

// Matched filter: same structure with weights lambda_l and beta^2 = 1/tr(H^H H).
SinrVector sinr_mf(const EigenSpectrum& s, double rho);
SinrVector sinr_mf(const ChannelRealization& h, double rho);

// MSE-optimal filter, evaluated on the unnormalized composite
// G = H (H^H H + (N/rho) I)^{-1} H^H; the scaling beta cancels:
// gamma_k = (rho/N) G_kk^2 / ((rho/N) sum_{i != k} |G_ki|^2 + eta).
SinrVector sinr_wiener(const ChannelRealization& h, double rho);

// Precoder followed by a ZF equalizer on the compound channel: interference
// cancels exactly and gamma_k = (rho/N) / (eta * sum_l w_l |u_kl|^2) with the
// weight profile of the chosen precoder.
SinrVector sinr_precoded_zf_eq(const EigenSpectrum& s, double rho,
                               const PrecoderConfig& kind);
SinrVector sinr_precoded_zf_eq(const ChannelRealization& h, double rho,
                               const PrecoderConfig& kind);

// Precoder followed by an MMSE equalizer:
// gamma_k = 1 / [I + (rho/N) C^H C]^{-1}_kk - 1 for the normalized composite C.
SinrVector sinr_precoded_mmse_eq(const ChannelRealization& h, double rho,
                                 const PrecoderConfig& kind);

// MMSE-equalized receive system in the trace-noise form: the denominator
// carries tr(W W^H) rather than the per-stream noise variance. Used to check
// the Wiener precoder / MMSE equalizer correspondence on transposed channels.
SinrVector sinr_mmse_equalized_trace_form(const arma::cx_mat& channel,
                                          double rho);

// sum_k log2(1 + gamma_k) in b/s/Hz.
double mutual_info(const SinrVector& gammas);

// Dispatch on (precoder, equalizer); the Monte Carlo per-trial entry point.
SinrVector sinr_for_config(const LinkConfig& cfg, const ChannelRealization& h);

}  // namespace mimolab
