#pragma once

#include <armadillo>

namespace mimolab {

enum class EqualizerKind { kNone, kZf, kMmse };

const char* equalizer_name(EqualizerKind kind);

// W = (C^H C)^{-1} C^H for the composite channel C = H P.
// Throws SingularMatrixError when C^H C fails the condition guard.
arma::cx_mat build_zf_equalizer(const arma::cx_mat& composite);

// W = (C^H C + (N/rho) I)^{-1} C^H; regularized, never rank-limited.
arma::cx_mat build_mmse_equalizer(const arma::cx_mat& composite, double rho);

}  // namespace mimolab
