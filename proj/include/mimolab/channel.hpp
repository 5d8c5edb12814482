#pragma once

#include <armadillo>
#include <cstddef>

#include "mimolab/rng.hpp"

namespace mimolab {

// Flat Rayleigh fading matrix, n receive rows by m transmit columns, m >= n.
// Entries are i.i.d. circularly-symmetric complex Gaussian with unit total
// variance per entry.
struct ChannelRealization {
  arma::cx_mat entries;  // n x m

  std::size_t transmit_count() const { return entries.n_cols; }
  std::size_t receive_count() const { return entries.n_rows; }
};

// Spectral decomposition of the n x n Gram matrix H H^H.
struct EigenSpectrum {
  arma::vec eigenvalues;      // descending, length n
  arma::cx_mat basis;          // unitary, columns match eigenvalues
  arma::vec singular_values;  // of H itself, descending; filled by spectral()
};

// Eigenvalue exponential orders alpha_k = -ln(lambda_k)/ln(rho).
struct ExponentialOrders {
  arma::vec alphas;
  double rho = 0.0;
  bool has_infinite = false;  // set when some lambda_k == 0
};

// Draws an n x m matrix of i.i.d. CN(0,1) entries from the given stream.
// Identical (seed, index) input yields bit-identical output.
ChannelRealization sample_channel(std::size_t m, std::size_t n,
                                  TrialStream& stream);

// Decomposes H H^H = U Lambda U^H and cross-fills the singular values of H.
EigenSpectrum spectral(const ChannelRealization& h);

ExponentialOrders exponential_orders(const EigenSpectrum& s, double rho);

namespace detail {
// Same decomposition without the SVD cross-check field; Monte Carlo paths
// use this to avoid paying for an SVD per trial.
EigenSpectrum gram_spectrum(const arma::cx_mat& h);
}  // namespace detail

}  // namespace mimolab
