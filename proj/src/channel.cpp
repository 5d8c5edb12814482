#include "mimolab/channel.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "mimolab/detail/smallherm.hpp"
#include "mimolab/errors.hpp"

namespace mimolab {

ChannelRealization sample_channel(std::size_t m, std::size_t n,
                                  TrialStream& stream) {
  if (n < 1 || m < n) {
    std::ostringstream msg;
    msg << "sample_channel: need m >= n >= 1 (transmit count m=" << m
        << ", receive count n=" << n << ")";
    throw ConfigError(msg.str());
  }
  ChannelRealization h;
  h.entries.set_size(n, m);
  // column-major fill order, part of the determinism contract
  for (arma::uword j = 0; j < m; ++j) {
    for (arma::uword i = 0; i < n; ++i) {
      h.entries(i, j) = stream.next_cgauss();
    }
  }
  return h;
}

EigenSpectrum spectral(const ChannelRealization& h) {
  EigenSpectrum s = detail::gram_spectrum(h.entries);
  arma::vec sv;
  if (!arma::svd(sv, h.entries)) {
    throw NumericError("spectral: svd failed to converge");
  }
  s.singular_values = sv;  // arma returns descending
  return s;
}

ExponentialOrders exponential_orders(const EigenSpectrum& s, double rho) {
  if (!(rho > 1.0)) {
    std::ostringstream msg;
    msg << "exponential_orders: rho must exceed 1 (got " << rho << ")";
    throw DomainError(msg.str());
  }
  ExponentialOrders out;
  out.rho = rho;
  out.alphas.set_size(s.eigenvalues.n_elem);
  const double log_rho = std::log(rho);
  for (arma::uword k = 0; k < s.eigenvalues.n_elem; ++k) {
    const double lambda = s.eigenvalues(k);
    if (lambda <= 0.0) {
      out.alphas(k) = std::numeric_limits<double>::infinity();
      out.has_infinite = true;
    } else {
      out.alphas(k) = -std::log(lambda) / log_rho;
    }
  }
  return out;
}

namespace detail {

EigenSpectrum gram_spectrum(const arma::cx_mat& h) {
  const arma::cx_mat gram = h * h.t();
  HermEig eig = herm_eig(gram);
  EigenSpectrum s;
  s.eigenvalues = std::move(eig.values);
  s.basis = std::move(eig.vectors);
  return s;
}

}  // namespace detail

}  // namespace mimolab
