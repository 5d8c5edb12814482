#pragma once

#include <armadillo>
#include <string>

#include "mimolab/channel.hpp"

namespace mimolab {

enum class PrecoderKind {
  kZfMinPower,       // channel inversion, scaled to meet the power budget
  kZfMaxThroughput,  // channel inversion with water-filled stream powers
  kRzf,              // regularized inversion, fixed constant c
  kMf,               // conjugate-transpose (matched) filter
  kWiener            // MSE-optimal filter, equals RZF with c = N/rho
};

struct PrecoderConfig {
  PrecoderKind kind = PrecoderKind::kZfMinPower;
  double rzf_c = 0.0;  // required > 0 when kind == kRzf; fixed w.r.t. rho
};

const char* precoder_name(PrecoderKind kind);

struct PrecoderOutput {
  arma::cx_mat matrix;  // m x n, includes the scaling where the design has one
  double beta = 0.0;   // power scaling factor (1 for the water-filled design)
  double eta = 0.0;    // normalization trace backing beta
  arma::vec powers;    // per-stream powers p_k; only the water-filled design
};

// P = beta H^H (H H^H)^{-1} with beta^2 = rho / tr((H H^H)^{-1}).
PrecoderOutput build_zf_min_power(const ChannelRealization& h, double rho);

// P = H^H (H H^H)^{-1} diag(sqrt(p_k)) where p_k water-fills the throughput
// under sum_k p_k [(H H^H)^{-1}]_kk <= rho. Streams going negative in the
// closed form are deactivated and the remainder re-solved.
PrecoderOutput build_zf_max_throughput(const ChannelRealization& h,
                                       double rho);

// P = beta H^H (H H^H + c I)^{-1}, beta = 1/sqrt(eta),
// eta = sum_l lambda_l / (lambda_l + c)^2.
PrecoderOutput build_rzf(const ChannelRealization& h, double c);

// P = beta H^H, beta = 1/sqrt(tr(H^H H)).
PrecoderOutput build_mf(const ChannelRealization& h);

// P = beta H^H (H H^H + (N/rho) I)^{-1}; the N x N inversion form of the
// MSE-optimal filter (push-through identity, never the M x M inverse).
PrecoderOutput build_wiener(const ChannelRealization& h, double rho);

PrecoderOutput build_precoder(const PrecoderConfig& cfg,
                              const ChannelRealization& h, double rho);

namespace detail {
// Water-filling for max_k sum log(1+p_k) s.t. sum p_k c_k = budget, p_k >= 0.
arma::vec water_fill(const arma::vec& c, double budget);
}  // namespace detail

}  // namespace mimolab
