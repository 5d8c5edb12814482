#pragma once

#include <armadillo>

namespace mimolab::detail {

inline constexpr double kMaxCondition = 1e12;

struct HermEig {
  arma::vec values;     // descending
  arma::cx_mat vectors;  // columns, matching values
};

// Eigendecomposition of a Hermitian positive semidefinite matrix, eigenvalues
// sorted descending. Closed form for n <= 2 (no LAPACK call), eig_sym above.
HermEig herm_eig(const arma::cx_mat& a);

// Eigenvalues only, descending.
arma::vec herm_eigvals(const arma::cx_mat& a);

// Real diagonal of inv(a) for Hermitian positive definite a. Cofactor
// formulas for n <= 3, inv_sympd above. With guard set, throws
// SingularMatrixError when the matrix fails the kMaxCondition check.
arma::vec inverse_diagonal(const arma::cx_mat& a, bool guard = true);

// Full inverse for Hermitian positive definite a. Adjugate formulas for
// n <= 3 keep the Monte Carlo hot path off LAPACK (the system BLAS holds a
// global lock that serializes concurrent small-matrix calls).
arma::cx_mat herm_inverse(const arma::cx_mat& a);

// lambda_max / lambda_min; +inf when lambda_min <= 0.
double condition_number(const arma::cx_mat& a);

void require_invertible(const arma::cx_mat& a, const char* who);

}  // namespace mimolab::detail
