#pragma once

#include <complex>
#include <optional>

#include <Eigen/Dense>

namespace symbidisk {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;

namespace numkit {

/// True when every entry is finite.
bool is_finite(const ComplexMatrix& m);

/// Throws DimensionError unless `m` is finite. `what` names the matrix in the message.
void require_finite(const ComplexMatrix& m, const char* what);

/// Largest singular value; 0 for an empty matrix.
double op_norm(const ComplexMatrix& m);

/// Smallest eigenvalue of the hermitian part (H + H*)/2. +inf for an empty matrix.
double eig_min(const ComplexMatrix& h);

/// (H + H*)/2.
ComplexMatrix hermitian_part(const ComplexMatrix& h);

/// Nearest positive semidefinite matrix in Frobenius norm. The input is
/// symmetrized first, then negative eigenvalues are clipped to zero.
ComplexMatrix psd_project(const ComplexMatrix& h);

/// Returns U (r x n) with U* U = K, where r counts eigenvalues above the rank
/// tolerance. Rows are ordered by decreasing eigenvalue. The tolerance defaults
/// to 1e-10 times the largest eigenvalue; an eigenvalue below -tol throws
/// NotPsdError. U is unique only up to a left unitary factor.
ComplexMatrix gram_factor(const ComplexMatrix& k, std::optional<double> tol = std::nullopt);

struct SpanMap {
  ComplexMatrix map;          ///< V = Y X^+, with singular values clipped to 1
  double clipped = 0.0;       ///< amount by which the largest singular value exceeded 1
  double gram_mismatch = 0.0; ///< max entrywise |X*X - Y*Y|
  bool gram_warning = false;  ///< gram_mismatch exceeded the tolerance
};

/// The linear map sending column j of X to column j of Y, extended by zero on
/// the orthogonal complement of range(X). If X*X = Y*Y the result is a partial
/// isometry; otherwise singular values above 1 are clipped and reported.
SpanMap solve_on_span(const ComplexMatrix& x, const ComplexMatrix& y, double gram_tol = 1e-10);

/// Unitary matrix drawn from the Haar measure via QR of a Gaussian matrix.
template <class Rng>
ComplexMatrix random_unitary(Eigen::Index n, Rng& rng);

}  // namespace numkit
}  // namespace symbidisk

#include <random>

namespace symbidisk::numkit {

template <class Rng>
ComplexMatrix random_unitary(Eigen::Index n, Rng& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  ComplexMatrix a(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) a(i, j) = Complex(g(rng), g(rng));
  Eigen::HouseholderQR<ComplexMatrix> qr(a);
  ComplexMatrix q = qr.householderQ();
  ComplexMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Eigen::Index j = 0; j < n; ++j) {
    double mag = std::abs(r(j, j));
    if (mag > 0) q.col(j) *= r(j, j) / mag;
  }
  return q;
}

}  // namespace symbidisk::numkit
