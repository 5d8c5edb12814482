// Closed-form kernels for the tiny Hermitian matrices that dominate the
// Monte Carlo hot path. LAPACK handles everything above 3x3.
#include "mimolab/detail/smallherm.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "mimolab/errors.hpp"

namespace mimolab::detail {

namespace {

using cxd = std::complex<double>;

// Eigenvalues of [[a, b], [conj(b), d]] with a, d real.
inline void eig2_values(double a, double d, const cxd& b, double& lo_out,
                        double& hi_out) {
  const double t = 0.5 * (a + d);
  const double half_gap = 0.5 * (a - d);
  const double disc = std::sqrt(half_gap * half_gap + std::norm(b));
  hi_out = t + disc;
  lo_out = t - disc;
  if (lo_out < 0.0 && lo_out > -1e-12 * (std::abs(a) + std::abs(d))) {
    lo_out = 0.0;  // PSD input, clip rounding noise
  }
}

HermEig eig2(const arma::cx_mat& m) {
  const double a = m(0, 0).real();
  const double d = m(1, 1).real();
  const cxd b = m(0, 1);
  HermEig out;
  out.values.set_size(2);
  out.vectors.set_size(2, 2);

  double lo, hi;
  eig2_values(a, d, b, lo, hi);
  out.values(0) = hi;
  out.values(1) = lo;

  const double scale = std::abs(a) + std::abs(d);
  if (std::abs(b) <= scale * 1e-18 || scale == 0.0) {
    // effectively diagonal
    out.vectors.eye(2, 2);
    if (a < d) {
      out.vectors = arma::fliplr(out.vectors.eval());
    }
    out.values(0) = std::max(a, d);
    out.values(1) = std::max(std::min(a, d), 0.0);
    return out;
  }

  // Two algebraically equivalent eigenvector candidates; keep the better
  // conditioned one.
  const double ra = hi - a;
  const double rd = hi - d;
  cxd v0, v1;
  if (rd >= ra) {
    v0 = cxd(rd, 0.0);
    v1 = std::conj(b);
  } else {
    v0 = b;
    v1 = cxd(ra, 0.0);
  }
  const double nn = std::sqrt(std::norm(v0) + std::norm(v1));
  v0 /= nn;
  v1 /= nn;
  out.vectors(0, 0) = v0;
  out.vectors(1, 0) = v1;
  // orthonormal complement
  out.vectors(0, 1) = -std::conj(v1);
  out.vectors(1, 1) = std::conj(v0);
  return out;
}

// Analytic eigenvalues of a 3x3 Hermitian matrix (Cardano on the shifted
// characteristic cubic), descending.
void eig3_values(const arma::cx_mat& m, double out[3]) {
  const double a00 = m(0, 0).real();
  const double a11 = m(1, 1).real();
  const double a22 = m(2, 2).real();
  const double off2 =
      std::norm(m(0, 1)) + std::norm(m(0, 2)) + std::norm(m(1, 2));
  const double q = (a00 + a11 + a22) / 3.0;
  const double p2 = (a00 - q) * (a00 - q) + (a11 - q) * (a11 - q) +
                    (a22 - q) * (a22 - q) + 2.0 * off2;
  if (p2 <= 0.0) {
    out[0] = out[1] = out[2] = q;
    return;
  }
  const double p = std::sqrt(p2 / 6.0);
  // r = det((m - q I)/p) / 2
  const cxd b01 = m(0, 1) / p, b02 = m(0, 2) / p, b12 = m(1, 2) / p;
  const double d0 = (a00 - q) / p, d1 = (a11 - q) / p, d2 = (a22 - q) / p;
  const double det_b =
      d0 * (d1 * d2 - std::norm(b12)) -
      (b01 * (std::conj(b01) * d2 - b12 * std::conj(b02))).real() +
      (b02 * (std::conj(b01) * std::conj(b12) - d1 * std::conj(b02))).real();
  double r = det_b / 2.0;
  r = std::min(1.0, std::max(-1.0, r));
  const double phi = std::acos(r) / 3.0;
  const double two_pi_3 = 2.0943951023931953;
  out[0] = q + 2.0 * p * std::cos(phi);
  out[2] = q + 2.0 * p * std::cos(phi + two_pi_3);
  out[1] = 3.0 * q - out[0] - out[2];
}

// Kernel vector of the (rank-2) matrix a - lambda I via bilinear cross
// products of row pairs; the largest cross product wins.
bool eig3_vector(const arma::cx_mat& a, double lambda, arma::cx_vec& v) {
  cxd rows[3][3];
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      rows[i][j] = a(i, j);
    }
    rows[i][i] -= lambda;
  }
  const int pairs[3][2] = {{0, 1}, {0, 2}, {1, 2}};
  double best_norm = 0.0;
  cxd best[3] = {0.0, 0.0, 0.0};
  for (const auto& pr : pairs) {
    const cxd* u = rows[pr[0]];
    const cxd* w = rows[pr[1]];
    const cxd c0 = u[1] * w[2] - u[2] * w[1];
    const cxd c1 = u[2] * w[0] - u[0] * w[2];
    const cxd c2 = u[0] * w[1] - u[1] * w[0];
    const double nn = std::norm(c0) + std::norm(c1) + std::norm(c2);
    if (nn > best_norm) {
      best_norm = nn;
      best[0] = c0;
      best[1] = c1;
      best[2] = c2;
    }
  }
  if (!(best_norm > 0.0)) {
    return false;
  }
  const double inv_len = 1.0 / std::sqrt(best_norm);
  v.set_size(3);
  v(0) = best[0] * inv_len;
  v(1) = best[1] * inv_len;
  v(2) = best[2] * inv_len;
  return true;
}

HermEig eig_lapack(const arma::cx_mat& a) {
  arma::vec vals;
  arma::cx_mat vecs;
  if (!arma::eig_sym(vals, vecs, a)) {
    std::ostringstream msg;
    msg << "herm_eig: eig_sym failed to converge on " << a.n_rows << "x"
        << a.n_cols << " matrix, trace=" << arma::trace(a).real();
    throw NumericError(msg.str());
  }
  HermEig out;
  out.values = arma::reverse(vals);
  out.vectors = arma::fliplr(vecs);
  return out;
}

}  // namespace

namespace {

HermEig eig3(const arma::cx_mat& a) {
  double vals[3];
  eig3_values(a, vals);
  const double scale =
      std::abs(vals[0]) + std::abs(vals[1]) + std::abs(vals[2]);
  if (scale == 0.0) {
    HermEig out;
    out.values.zeros(3);
    out.vectors.eye(3, 3);
    return out;
  }

  HermEig out;
  out.values.set_size(3);
  out.vectors.set_size(3, 3);
  arma::cx_vec v;
  for (int k = 0; k < 3; ++k) {
    if (!eig3_vector(a, vals[k], v)) {
      return eig_lapack(a);
    }
    // modified Gram-Schmidt against the vectors already accepted
    for (int j = 0; j < k; ++j) {
      const cxd proj = arma::cdot(out.vectors.col(j), v);
      v -= proj * out.vectors.col(j);
    }
    const double len = arma::norm(v);
    if (!(len > 1e-8)) {
      return eig_lapack(a);  // nearly degenerate pair
    }
    out.vectors.col(k) = v / len;
    out.values(k) = vals[k];
  }

  // analytic route must reproduce the matrix; otherwise defer to LAPACK
  double residual = 0.0;
  for (int k = 0; k < 3; ++k) {
    residual = std::max(
        residual, arma::norm(a * out.vectors.col(k) -
                             out.values(k) * out.vectors.col(k)));
  }
  if (residual > 1e-11 * scale) {
    return eig_lapack(a);
  }
  if (out.values(2) < 0.0 && out.values(2) > -1e-12 * scale) {
    out.values(2) = 0.0;
  }
  return out;
}

}  // namespace

HermEig herm_eig(const arma::cx_mat& a) {
  const arma::uword n = a.n_rows;
  if (n == 1) {
    HermEig out;
    out.values = arma::vec{a(0, 0).real()};
    out.vectors = arma::cx_mat(1, 1, arma::fill::eye);
    return out;
  }
  if (n == 2) {
    return eig2(a);
  }
  if (n == 3) {
    return eig3(a);
  }
  return eig_lapack(a);
}

arma::vec herm_eigvals(const arma::cx_mat& a) {
  const arma::uword n = a.n_rows;
  if (n == 1) {
    return arma::vec{a(0, 0).real()};
  }
  if (n == 2) {
    double lo, hi;
    eig2_values(a(0, 0).real(), a(1, 1).real(), a(0, 1), lo, hi);
    return arma::vec{hi, lo};
  }
  if (n == 3) {
    double vals[3];
    eig3_values(a, vals);
    const double scale =
        std::abs(vals[0]) + std::abs(vals[1]) + std::abs(vals[2]);
    if (vals[2] < 0.0 && vals[2] > -1e-12 * scale) {
      vals[2] = 0.0;
    }
    return arma::vec{vals[0], vals[1], vals[2]};
  }
  arma::vec vals;
  if (!arma::eig_sym(vals, a)) {
    throw NumericError("herm_eigvals: eig_sym failed to converge");
  }
  return arma::reverse(vals);
}

arma::cx_mat herm_inverse(const arma::cx_mat& a) {
  const arma::uword n = a.n_rows;
  if (n == 1) {
    const double d = a(0, 0).real();
    if (!(d > 0.0)) {
      throw NumericError("herm_inverse: matrix not positive definite");
    }
    return arma::cx_mat(1, 1, arma::fill::value(cxd(1.0 / d, 0.0)));
  }
  if (n == 2) {
    const double a00 = a(0, 0).real();
    const double a11 = a(1, 1).real();
    const cxd a01 = a(0, 1);
    const double det = a00 * a11 - std::norm(a01);
    if (!(det > 0.0) || !std::isfinite(det)) {
      throw NumericError("herm_inverse: matrix not positive definite");
    }
    arma::cx_mat inv(2, 2);
    inv(0, 0) = a11 / det;
    inv(1, 1) = a00 / det;
    inv(0, 1) = -a01 / det;
    inv(1, 0) = std::conj(inv(0, 1));
    return inv;
  }
  if (n == 3) {
    const cxd a00 = a(0, 0), a01 = a(0, 1), a02 = a(0, 2);
    const cxd a10 = a(1, 0), a11 = a(1, 1), a12 = a(1, 2);
    const cxd a20 = a(2, 0), a21 = a(2, 1), a22 = a(2, 2);
    const cxd c00 = a11 * a22 - a12 * a21;
    const cxd c10 = a10 * a22 - a12 * a20;
    const cxd c20 = a10 * a21 - a11 * a20;
    const double det = (a00 * c00 - a01 * c10 + a02 * c20).real();
    if (!(det > 0.0) || !std::isfinite(det)) {
      throw NumericError("herm_inverse: matrix not positive definite");
    }
    arma::cx_mat inv(3, 3);
    inv(0, 0) = c00 / det;
    inv(0, 1) = -(a01 * a22 - a02 * a21) / det;
    inv(0, 2) = (a01 * a12 - a02 * a11) / det;
    inv(1, 0) = -c10 / det;
    inv(1, 1) = (a00 * a22 - a02 * a20) / det;
    inv(1, 2) = -(a00 * a12 - a02 * a10) / det;
    inv(2, 0) = c20 / det;
    inv(2, 1) = -(a00 * a21 - a01 * a20) / det;
    inv(2, 2) = (a00 * a11 - a01 * a10) / det;
    return inv;
  }
  arma::cx_mat inv;
  if (!arma::inv_sympd(inv, a)) {
    throw SingularMatrixError("herm_inverse: inv_sympd failed",
                              condition_number(a));
  }
  return inv;
}

arma::vec inverse_diagonal(const arma::cx_mat& a, bool guard) {
  if (guard) {
    require_invertible(a, "inverse_diagonal");
  }
  const arma::uword n = a.n_rows;
  if (n == 1) {
    return arma::vec{1.0 / a(0, 0).real()};
  }
  if (n == 2) {
    const double a00 = a(0, 0).real();
    const double a11 = a(1, 1).real();
    const double det = a00 * a11 - std::norm(a(0, 1));
    return arma::vec{a11 / det, a00 / det};
  }
  if (n == 3) {
    const double a00 = a(0, 0).real();
    const double a11 = a(1, 1).real();
    const double a22 = a(2, 2).real();
    const cxd a01 = a(0, 1), a02 = a(0, 2), a12 = a(1, 2);
    const double c00 = a11 * a22 - std::norm(a12);
    const double c11 = a00 * a22 - std::norm(a02);
    const double c22 = a00 * a11 - std::norm(a01);
    const double det = a00 * c00 -
                       (a01 * (std::conj(a01) * a22 - a12 * std::conj(a02))).real() +
                       (a02 * (std::conj(a01) * std::conj(a12) - a11 * std::conj(a02))).real();
    return arma::vec{c00 / det, c11 / det, c22 / det};
  }
  arma::cx_mat inv;
  if (!arma::inv_sympd(inv, a)) {
    throw SingularMatrixError("inverse_diagonal: inv_sympd failed",
                              condition_number(a));
  }
  return arma::real(inv.diag());
}

double condition_number(const arma::cx_mat& a) {
  const arma::vec vals = herm_eigvals(a);
  const double lo = vals(vals.n_elem - 1);
  const double hi = vals(0);
  if (lo <= 0.0) {
    return std::numeric_limits<double>::infinity();
  }
  return hi / lo;
}

void require_invertible(const arma::cx_mat& a, const char* who) {
  const double cond = condition_number(a);
  if (!(cond < kMaxCondition)) {
    std::ostringstream msg;
    msg << who << ": matrix condition " << cond << " exceeds "
        << kMaxCondition;
    throw SingularMatrixError(msg.str(), cond);
  }
}

}  // namespace mimolab::detail
