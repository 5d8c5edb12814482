#include "mimolab/precoders.hpp"

#include <cmath>
#include <sstream>

#include "mimolab/detail/smallherm.hpp"
#include "mimolab/errors.hpp"

namespace mimolab {

namespace {

arma::cx_mat hermitian_inverse(const arma::cx_mat& a, const char* who) {
  try {
    return detail::herm_inverse(a);
  } catch (const SingularMatrixError&) {
    throw;
  } catch (const NumericError&) {
    throw SingularMatrixError(std::string(who) + ": inversion failed",
                              detail::condition_number(a));
  }
}

}  // namespace

const char* precoder_name(PrecoderKind kind) {
  switch (kind) {
    case PrecoderKind::kZfMinPower: return "zf_min_power";
    case PrecoderKind::kZfMaxThroughput: return "zf_max_throughput";
    case PrecoderKind::kRzf: return "rzf";
    case PrecoderKind::kMf: return "mf";
    case PrecoderKind::kWiener: return "wiener";
  }
  return "unknown";
}

PrecoderOutput build_zf_min_power(const ChannelRealization& h, double rho) {
  if (!(rho > 0.0)) {
    throw DomainError("build_zf_min_power: rho must be positive");
  }
  const arma::cx_mat gram = h.entries * h.entries.t();
  detail::require_invertible(gram, "build_zf_min_power");
  const arma::cx_mat gram_inv = hermitian_inverse(gram, "build_zf_min_power");
  PrecoderOutput out;
  out.eta = arma::trace(gram_inv).real();
  out.beta = std::sqrt(rho / out.eta);
  out.matrix = out.beta * (h.entries.t() * gram_inv);
  return out;
}

PrecoderOutput build_zf_max_throughput(const ChannelRealization& h,
                                       double rho) {
  if (!(rho > 0.0)) {
    throw DomainError("build_zf_max_throughput: rho must be positive");
  }
  const arma::cx_mat gram = h.entries * h.entries.t();
  detail::require_invertible(gram, "build_zf_max_throughput");
  const arma::cx_mat gram_inv =
      hermitian_inverse(gram, "build_zf_max_throughput");
  const arma::vec costs = arma::real(gram_inv.diag());
  PrecoderOutput out;
  out.powers = detail::water_fill(costs, rho);
  out.beta = 1.0;
  out.eta = arma::sum(costs);
  out.matrix = (h.entries.t() * gram_inv) *
               arma::diagmat(arma::conv_to<arma::cx_vec>::from(
                   arma::sqrt(out.powers)));
  return out;
}

PrecoderOutput build_rzf(const ChannelRealization& h, double c) {
  if (!(c > 0.0)) {
    throw DomainError("build_rzf: regularization c must be positive");
  }
  const arma::cx_mat gram = h.entries * h.entries.t();
  const arma::vec lambda = detail::herm_eigvals(gram);
  double eta = 0.0;
  for (const double l : lambda) {
    eta += l / ((l + c) * (l + c));
  }
  if (!(eta > 0.0)) {
    throw DomainError("build_rzf: zero channel");
  }
  arma::cx_mat shifted = gram;
  shifted.diag() += c;
  PrecoderOutput out;
  out.eta = eta;
  out.beta = 1.0 / std::sqrt(eta);
  out.matrix = out.beta * (h.entries.t() * hermitian_inverse(shifted, "build_rzf"));
  return out;
}

PrecoderOutput build_mf(const ChannelRealization& h) {
  const double eta = std::pow(arma::norm(h.entries, "fro"), 2);
  if (!(eta > 0.0)) {
    throw DomainError("build_mf: zero channel");
  }
  PrecoderOutput out;
  out.eta = eta;
  out.beta = 1.0 / std::sqrt(eta);
  out.matrix = out.beta * h.entries.t();
  return out;
}

PrecoderOutput build_wiener(const ChannelRealization& h, double rho) {
  if (!(rho > 0.0)) {
    throw DomainError("build_wiener: rho must be positive");
  }
  const double shift = static_cast<double>(h.receive_count()) / rho;
  const arma::cx_mat gram = h.entries * h.entries.t();
  arma::cx_mat shifted = gram;
  shifted.diag() += shift;
  const arma::cx_mat b = hermitian_inverse(shifted, "build_wiener");
  PrecoderOutput out;
  out.eta = arma::trace(b * gram * b).real();
  if (!(out.eta > 0.0)) {
    throw DomainError("build_wiener: zero channel");
  }
  out.beta = 1.0 / std::sqrt(out.eta);
  out.matrix = out.beta * (h.entries.t() * b);
  return out;
}

PrecoderOutput build_precoder(const PrecoderConfig& cfg,
                              const ChannelRealization& h, double rho) {
  switch (cfg.kind) {
    case PrecoderKind::kZfMinPower: return build_zf_min_power(h, rho);
    case PrecoderKind::kZfMaxThroughput: return build_zf_max_throughput(h, rho);
    case PrecoderKind::kRzf: return build_rzf(h, cfg.rzf_c);
    case PrecoderKind::kMf: return build_mf(h);
    case PrecoderKind::kWiener: return build_wiener(h, rho);
  }
  throw ConfigError("build_precoder: unknown precoder kind");
}

namespace detail {

arma::vec water_fill(const arma::vec& c, double budget) {
  if (c.n_elem == 0 || c.min() <= 0.0) {
    throw DomainError("water_fill: stream costs must be positive");
  }
  if (!(budget > 0.0)) {
    throw DomainError("water_fill: budget must be positive");
  }
  arma::vec p(c.n_elem, arma::fill::zeros);
  std::vector<arma::uword> active(c.n_elem);
  for (arma::uword k = 0; k < c.n_elem; ++k) active[k] = k;

  while (!active.empty()) {
    double cost_sum = 0.0;
    for (const arma::uword k : active) cost_sum += c(k);
    const double mu = (budget + cost_sum) / static_cast<double>(active.size());

    std::vector<arma::uword> next;
    next.reserve(active.size());
    bool dropped = false;
    for (const arma::uword k : active) {
      const double pk = mu / c(k) - 1.0;
      if (pk <= 0.0) {
        p(k) = 0.0;
        dropped = true;
      } else {
        p(k) = pk;
        next.push_back(k);
      }
    }
    if (!dropped) {
      break;
    }
    active = std::move(next);
  }
  return p;
}

}  // namespace detail

}  // namespace mimolab
