#include "symbidisk/numkit.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "symbidisk/errors.hpp"

namespace symbidisk::numkit {

bool is_finite(const ComplexMatrix& m) {
  for (Eigen::Index j = 0; j < m.cols(); ++j)
    for (Eigen::Index i = 0; i < m.rows(); ++i)
      if (!std::isfinite(m(i, j).real()) || !std::isfinite(m(i, j).imag())) return false;
  return true;
}

void require_finite(const ComplexMatrix& m, const char* what) {
  if (!is_finite(m)) throw DomainError(std::string(what) + " has non-finite entries", "non_finite");
}

double op_norm(const ComplexMatrix& m) {
  if (m.size() == 0) return 0.0;
  Eigen::JacobiSVD<ComplexMatrix> svd(m);
  return svd.singularValues()(0);
}

ComplexMatrix hermitian_part(const ComplexMatrix& h) {
  if (h.rows() != h.cols()) throw DimensionError("expected a square matrix");
  return (h + h.adjoint()) * 0.5;
}

double eig_min(const ComplexMatrix& h) {
  if (h.size() == 0) return std::numeric_limits<double>::infinity();
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(hermitian_part(h), Eigen::EigenvaluesOnly);
  return es.eigenvalues()(0);
}

ComplexMatrix psd_project(const ComplexMatrix& h) {
  ComplexMatrix sym = hermitian_part(h);
  if (sym.size() == 0) return sym;
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(sym);
  Eigen::VectorXd lam = es.eigenvalues().cwiseMax(0.0);
  const ComplexMatrix& q = es.eigenvectors();
  ComplexMatrix out = q * lam.cast<Complex>().asDiagonal() * q.adjoint();
  return hermitian_part(out);
}

ComplexMatrix gram_factor(const ComplexMatrix& k, std::optional<double> tol) {
  ComplexMatrix sym = hermitian_part(k);
  const Eigen::Index n = sym.rows();
  if (n == 0) return ComplexMatrix(0, 0);
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(sym);
  const Eigen::VectorXd& lam = es.eigenvalues();  // ascending
  const double lam_max = lam(n - 1);
  const double t = tol.value_or(1e-10 * std::max(lam_max, 0.0));
  if (lam(0) < -t)
    throw NotPsdError("matrix is not positive semidefinite (eigenvalue " + std::to_string(lam(0)) + ")",
                      lam(0));
  Eigen::Index r = 0;
  for (Eigen::Index i = 0; i < n; ++i)
    if (lam(i) > t) ++r;
  ComplexMatrix u(r, n);
  for (Eigen::Index row = 0; row < r; ++row) {
    Eigen::Index idx = n - 1 - row;
    u.row(row) = std::sqrt(lam(idx)) * es.eigenvectors().col(idx).adjoint();
  }
  return u;
}

SpanMap solve_on_span(const ComplexMatrix& x, const ComplexMatrix& y, double gram_tol) {
  if (x.cols() != y.cols())
    throw DimensionError("solve_on_span: X and Y must have the same number of columns");
  SpanMap out;
  if (x.cols() > 0) {
    ComplexMatrix gx = x.adjoint() * x;
    ComplexMatrix gy = y.adjoint() * y;
    out.gram_mismatch = (gx - gy).cwiseAbs().maxCoeff();
  }
  out.gram_warning = out.gram_mismatch > gram_tol;

  ComplexMatrix v = ComplexMatrix::Zero(y.rows(), x.rows());
  if (x.size() > 0 && y.rows() > 0) {
    Eigen::JacobiSVD<ComplexMatrix> svd(x, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const Eigen::VectorXd& sv = svd.singularValues();
    const double cutoff = sv.size() > 0 ? 1e-12 * sv(0) : 0.0;
    Eigen::VectorXcd inv(sv.size());
    for (Eigen::Index i = 0; i < sv.size(); ++i) inv(i) = sv(i) > cutoff ? 1.0 / sv(i) : 0.0;
    ComplexMatrix pinv = svd.matrixV() * inv.asDiagonal() * svd.matrixU().adjoint();
    v = y * pinv;
  }

  if (v.size() > 0) {
    Eigen::JacobiSVD<ComplexMatrix> svd(v, Eigen::ComputeFullU | Eigen::ComputeFullV);
    Eigen::VectorXd sv = svd.singularValues();
    if (sv(0) > 1.0) {
      out.clipped = sv(0) - 1.0;
      sv = sv.cwiseMin(1.0);
      ComplexMatrix s = ComplexMatrix::Zero(v.rows(), v.cols());
      for (Eigen::Index i = 0; i < sv.size(); ++i) s(i, i) = sv(i);
      v = svd.matrixU() * s * svd.matrixV().adjoint();
    }
  }
  out.map = std::move(v);
  return out;
}

}  // namespace symbidisk::numkit
