#include "mimolab/sinr.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "mimolab/detail/smallherm.hpp"
#include "mimolab/errors.hpp"

namespace mimolab {

namespace {

arma::cx_mat gram_of(const ChannelRealization& h) {
  return h.entries * h.entries.t();
}

// C = U diag(w) U^H; entry (k,i) is the weighted basis sum pairing rows k, i.
arma::cx_mat weighted_composite(const EigenSpectrum& s, const arma::vec& w) {
  const arma::cx_mat scaled =
      s.basis * arma::diagmat(arma::conv_to<arma::cx_vec>::from(w));
  return scaled * s.basis.t();
}

// gamma_k from a Hermitian composite C with symbol power scale:
// gamma_k = scale * C_kk^2 / (scale * sum_{i != k} |C_ik|^2 + noise_k).
SinrVector sinr_from_composite(const arma::cx_mat& comp, double scale,
                               double noise) {
  const arma::uword n = comp.n_rows;
  SinrVector g(n);
  for (arma::uword k = 0; k < n; ++k) {
    const double desired = comp(k, k).real();
    double interference = 0.0;
    for (arma::uword i = 0; i < n; ++i) {
      if (i != k) {
        interference += std::norm(comp(i, k));
      }
    }
    g(k) = scale * desired * desired / (scale * interference + noise);
  }
  return g;
}

arma::cx_mat shifted_gram_inverse(const arma::cx_mat& gram, double shift,
                                  const char* who) {
  arma::cx_mat shifted = gram;
  shifted.diag() += shift;
  try {
    return detail::herm_inverse(shifted);
  } catch (const NumericError&) {
    throw NumericError(std::string(who) + ": shifted Gram inversion failed");
  }
}

}  // namespace

void validate_link_config(const LinkConfig& cfg) {
  if (cfg.n < 1 || cfg.m < cfg.n) {
    std::ostringstream msg;
    msg << "link config: need m >= n >= 1 (m=" << cfg.m << ", n=" << cfg.n
        << ")";
    throw ConfigError(msg.str());
  }
  if (!(cfg.rho > 0.0)) {
    throw ConfigError("link config: rho must be positive");
  }
  if (!(cfg.rate >= 0.0)) {
    throw ConfigError("link config: rate must be >= 0");
  }
  if (cfg.precoder.kind == PrecoderKind::kRzf && !(cfg.precoder.rzf_c > 0.0)) {
    throw ConfigError("link config: rzf_c must be positive for the rzf precoder");
  }
  if (cfg.equalizer != EqualizerKind::kNone &&
      (cfg.precoder.kind == PrecoderKind::kZfMinPower ||
       cfg.precoder.kind == PrecoderKind::kZfMaxThroughput)) {
    throw ConfigError(
        "link config: equalizers are only supported behind rzf, mf or wiener "
        "precoding (zero-forcing precoders already decouple the streams)");
  }
}

SinrVector sinr_zf_min_power(const ChannelRealization& h, double rho) {
  const arma::cx_mat gram = gram_of(h);
  detail::require_invertible(gram, "sinr_zf_min_power");
  const arma::vec lambda = detail::herm_eigvals(gram);
  double trace_inv = 0.0;
  for (const double l : lambda) {
    trace_inv += 1.0 / l;
  }
  SinrVector g(h.receive_count());
  g.fill(rho / trace_inv);
  return g;
}

SinrVector sinr_zf_max_throughput(const ChannelRealization& h, double rho) {
  const arma::cx_mat gram = gram_of(h);
  detail::require_invertible(gram, "sinr_zf_max_throughput");
  return detail::water_fill(detail::inverse_diagonal(gram, false), rho);
}

SinrVector sinr_rzf(const EigenSpectrum& s, double rho, double c) {
  if (!(c > 0.0)) {
    throw DomainError("sinr_rzf: regularization c must be positive");
  }
  const arma::uword n = s.eigenvalues.n_elem;
  arma::vec w(n);
  double eta = 0.0;
  for (arma::uword l = 0; l < n; ++l) {
    const double lam = s.eigenvalues(l);
    w(l) = lam / (lam + c);
    eta += lam / ((lam + c) * (lam + c));
  }
  if (!(eta > 0.0)) {
    throw DomainError("sinr_rzf: zero channel");
  }
  const double scale = rho / (static_cast<double>(n) * eta);  // beta^2 rho / N
  return sinr_from_composite(weighted_composite(s, w), scale, 1.0);
}

SinrVector sinr_rzf(const ChannelRealization& h, double rho, double c) {
  return sinr_rzf(detail::gram_spectrum(h.entries), rho, c);
}

SinrVector sinr_mf(const EigenSpectrum& s, double rho) {
  const double eta = arma::sum(s.eigenvalues);
  if (!(eta > 0.0)) {
    throw DomainError("sinr_mf: zero channel");
  }
  const arma::uword n = s.eigenvalues.n_elem;
  const double scale = rho / (static_cast<double>(n) * eta);
  return sinr_from_composite(weighted_composite(s, s.eigenvalues), scale, 1.0);
}

SinrVector sinr_mf(const ChannelRealization& h, double rho) {
  return sinr_mf(detail::gram_spectrum(h.entries), rho);
}

SinrVector sinr_wiener(const ChannelRealization& h, double rho) {
  if (!(rho > 0.0)) {
    throw DomainError("sinr_wiener: rho must be positive");
  }
  const arma::uword n = h.receive_count();
  const double shift = static_cast<double>(n) / rho;
  const arma::cx_mat gram = gram_of(h);
  const arma::cx_mat b = shifted_gram_inverse(gram, shift, "sinr_wiener");
  const arma::cx_mat composite = gram * b;  // Hermitian: gram and b commute
  const double eta = arma::trace(composite * b).real();
  if (!(eta > 0.0)) {
    throw DomainError("sinr_wiener: zero channel");
  }
  return sinr_from_composite(composite, rho / static_cast<double>(n), eta);
}

SinrVector sinr_precoded_zf_eq(const EigenSpectrum& s, double rho,
                               const PrecoderConfig& kind) {
  const arma::uword n = s.eigenvalues.n_elem;
  const double lambda_min = s.eigenvalues(n - 1);
  const double lambda_max = s.eigenvalues(0);
  if (!(lambda_min > 0.0) ||
      lambda_max >= detail::kMaxCondition * lambda_min) {
    throw SingularMatrixError(
        "sinr_precoded_zf_eq: channel not invertible for ZF equalization",
        lambda_min > 0.0 ? lambda_max / lambda_min
                         : std::numeric_limits<double>::infinity());
  }

  double eta = 0.0;
  arma::vec stream_weight(n);  // ((lambda + shift)/lambda)^2 profile
  if (kind.kind == PrecoderKind::kMf) {
    for (arma::uword l = 0; l < n; ++l) {
      const double lam = s.eigenvalues(l);
      eta += lam;
      stream_weight(l) = 1.0 / (lam * lam);
    }
  } else {
    double shift = 0.0;
    if (kind.kind == PrecoderKind::kWiener) {
      shift = static_cast<double>(n) / rho;
    } else if (kind.kind == PrecoderKind::kRzf) {
      if (!(kind.rzf_c > 0.0)) {
        throw DomainError("sinr_precoded_zf_eq: rzf_c must be positive");
      }
      shift = kind.rzf_c;
    } else {
      throw ConfigError(
          "sinr_precoded_zf_eq: precoder must be rzf, mf or wiener");
    }
    for (arma::uword l = 0; l < n; ++l) {
      const double lam = s.eigenvalues(l);
      const double r = (lam + shift) / lam;
      eta += lam / ((lam + shift) * (lam + shift));
      stream_weight(l) = r * r;
    }
  }

  SinrVector g(n);
  for (arma::uword k = 0; k < n; ++k) {
    double noise = 0.0;
    for (arma::uword l = 0; l < n; ++l) {
      noise += stream_weight(l) * std::norm(s.basis(k, l));
    }
    g(k) = (rho / static_cast<double>(n)) / (eta * noise);
  }
  return g;
}

SinrVector sinr_precoded_zf_eq(const ChannelRealization& h, double rho,
                               const PrecoderConfig& kind) {
  return sinr_precoded_zf_eq(detail::gram_spectrum(h.entries), rho, kind);
}

SinrVector sinr_precoded_mmse_eq(const ChannelRealization& h, double rho,
                                 const PrecoderConfig& kind) {
  if (!(rho > 0.0)) {
    throw DomainError("sinr_precoded_mmse_eq: rho must be positive");
  }
  const arma::uword n = h.receive_count();
  const arma::cx_mat gram = gram_of(h);

  arma::cx_mat composite;  // beta H P, N x N
  switch (kind.kind) {
    case PrecoderKind::kMf: {
      const double eta = arma::trace(gram).real();
      if (eta <= 0.0) {
        return SinrVector(n, arma::fill::zeros);  // zero channel passes zeros
      }
      composite = gram / std::sqrt(eta);
      break;
    }
    case PrecoderKind::kRzf:
    case PrecoderKind::kWiener: {
      double shift;
      if (kind.kind == PrecoderKind::kRzf) {
        if (!(kind.rzf_c > 0.0)) {
          throw DomainError("sinr_precoded_mmse_eq: rzf_c must be positive");
        }
        shift = kind.rzf_c;
      } else {
        shift = static_cast<double>(n) / rho;
      }
      const arma::cx_mat b =
          shifted_gram_inverse(gram, shift, "sinr_precoded_mmse_eq");
      const arma::cx_mat unscaled = gram * b;
      const double eta = arma::trace(unscaled * b).real();
      if (eta <= 0.0) {
        return SinrVector(n, arma::fill::zeros);
      }
      composite = unscaled / std::sqrt(eta);
      break;
    }
    default:
      throw ConfigError(
          "sinr_precoded_mmse_eq: precoder must be rzf, mf or wiener");
  }

  arma::cx_mat mse_core = composite.t() * composite;
  mse_core *= rho / static_cast<double>(n);
  mse_core.diag() += 1.0;
  const arma::vec diag_inv = detail::inverse_diagonal(mse_core, false);
  SinrVector g(n);
  for (arma::uword k = 0; k < n; ++k) {
    g(k) = std::max(1.0 / diag_inv(k) - 1.0, 0.0);
  }
  return g;
}

SinrVector sinr_mmse_equalized_trace_form(const arma::cx_mat& channel,
                                          double rho) {
  if (!(rho > 0.0)) {
    throw DomainError("sinr_mmse_equalized_trace_form: rho must be positive");
  }
  const arma::uword streams = channel.n_cols;
  arma::cx_mat gram = channel.t() * channel;
  gram.diag() += static_cast<double>(streams) / rho;
  arma::cx_mat inv;
  if (!arma::inv_sympd(inv, gram)) {
    throw NumericError("sinr_mmse_equalized_trace_form: inversion failed");
  }
  const arma::cx_mat w = inv * channel.t();
  const arma::cx_mat composite = w * channel;
  const double noise_trace = std::pow(arma::norm(w, "fro"), 2);
  const double scale = rho / static_cast<double>(streams);
  SinrVector g(streams);
  for (arma::uword k = 0; k < streams; ++k) {
    const double desired = std::norm(composite(k, k));
    double interference = 0.0;
    for (arma::uword i = 0; i < streams; ++i) {
      if (i != k) {
        interference += std::norm(composite(k, i));
      }
    }
    g(k) = scale * desired / (scale * interference + noise_trace);
  }
  return g;
}

double mutual_info(const SinrVector& gammas) {
  double bits = 0.0;
  for (const double g : gammas) {
    if (!(g >= 0.0)) {
      throw DomainError("mutual_info: SINR entries must be >= 0");
    }
    bits += std::log1p(g);
  }
  return bits / std::numbers::ln2;
}

SinrVector sinr_for_config(const LinkConfig& cfg, const ChannelRealization& h) {
  switch (cfg.equalizer) {
    case EqualizerKind::kNone:
      switch (cfg.precoder.kind) {
        case PrecoderKind::kZfMinPower:
          return sinr_zf_min_power(h, cfg.rho);
        case PrecoderKind::kZfMaxThroughput:
          return sinr_zf_max_throughput(h, cfg.rho);
        case PrecoderKind::kRzf:
          return sinr_rzf(h, cfg.rho, cfg.precoder.rzf_c);
        case PrecoderKind::kMf:
          return sinr_mf(h, cfg.rho);
        case PrecoderKind::kWiener:
          return sinr_wiener(h, cfg.rho);
      }
      break;
    case EqualizerKind::kZf:
      return sinr_precoded_zf_eq(h, cfg.rho, cfg.precoder);
    case EqualizerKind::kMmse:
      return sinr_precoded_mmse_eq(h, cfg.rho, cfg.precoder);
  }
  throw ConfigError("sinr_for_config: unsupported configuration");
}

}  // namespace mimolab
