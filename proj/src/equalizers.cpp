#include "mimolab/equalizers.hpp"

#include "mimolab/detail/smallherm.hpp"
#include "mimolab/errors.hpp"

namespace mimolab {

const char* equalizer_name(EqualizerKind kind) {
  switch (kind) {
    case EqualizerKind::kNone: return "none";
    case EqualizerKind::kZf: return "zf";
    case EqualizerKind::kMmse: return "mmse";
  }
  return "unknown";
}

arma::cx_mat build_zf_equalizer(const arma::cx_mat& composite) {
  const arma::cx_mat gram = composite.t() * composite;
  detail::require_invertible(gram, "build_zf_equalizer");
  return detail::herm_inverse(gram) * composite.t();
}

arma::cx_mat build_mmse_equalizer(const arma::cx_mat& composite, double rho) {
  if (!(rho > 0.0)) {
    throw DomainError("build_mmse_equalizer: rho must be positive");
  }
  arma::cx_mat gram = composite.t() * composite;
  gram.diag() += static_cast<double>(composite.n_rows) / rho;
  return detail::herm_inverse(gram) * composite.t();
}

}  // namespace mimolab
