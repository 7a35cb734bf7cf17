#include "symbidisk/poly2.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include "symbidisk/errors.hpp"

namespace symbidisk {

std::string to_string(Coords c) {
  switch (c) {
    case Coords::ZZeta: return "zzeta";
    case Coords::SP: return "sp";
    case Coords::SigmaE: return "sigmae";
  }
  return "zzeta";
}

Coords coords_from_string(const std::string& s) {
  if (s == "zzeta") return Coords::ZZeta;
  if (s == "sp") return Coords::SP;
  if (s == "sigmae") return Coords::SigmaE;
  throw SchemaError("unknown coordinate tag '" + s + "'");
}

Poly2::Poly2(Coords coords) : coords_(coords), coeffs_(ComplexMatrix::Zero(1, 1)) {}

Poly2::Poly2(Coords coords, ComplexMatrix coeffs) : coords_(coords), coeffs_(std::move(coeffs)) {
  if (coeffs_.size() == 0) coeffs_ = ComplexMatrix::Zero(1, 1);
  numkit::require_finite(coeffs_, "polynomial coefficients");
  normalize();
}

Poly2 Poly2::constant(Coords coords, Complex c) {
  ComplexMatrix m(1, 1);
  m(0, 0) = c;
  return Poly2(coords, m);
}

Poly2 Poly2::monomial(Coords coords, int i, int j, Complex c) {
  ComplexMatrix m = ComplexMatrix::Zero(i + 1, j + 1);
  m(i, j) = c;
  return Poly2(coords, m);
}

void Poly2::normalize() {
  Eigen::Index rows = coeffs_.rows(), cols = coeffs_.cols();
  while (rows > 1 && coeffs_.row(rows - 1).leftCols(cols).isZero(0.0)) --rows;
  while (cols > 1 && coeffs_.col(cols - 1).topRows(rows).isZero(0.0)) --cols;
  if (rows != coeffs_.rows() || cols != coeffs_.cols())
    coeffs_ = coeffs_.topLeftCorner(rows, cols).eval();
}

Complex Poly2::coeff(int i, int j) const {
  if (i < 0 || j < 0 || i > deg_x() || j > deg_y()) return 0.0;
  return coeffs_(i, j);
}

bool Poly2::is_zero() const { return coeffs_.isZero(0.0); }

double Poly2::max_abs_coeff() const { return coeffs_.cwiseAbs().maxCoeff(); }

Complex Poly2::eval(Complex x, Complex y) const {
  Complex acc = 0.0;
  for (Eigen::Index i = coeffs_.rows() - 1; i >= 0; --i) {
    Complex row = 0.0;
    for (Eigen::Index j = coeffs_.cols() - 1; j >= 0; --j) row = row * y + coeffs_(i, j);
    acc = acc * x + row;
  }
  return acc;
}

Poly2 Poly2::cleaned(double rel_tol) const {
  const double cut = rel_tol * max_abs_coeff();
  ComplexMatrix c = coeffs_;
  for (Eigen::Index j = 0; j < c.cols(); ++j)
    for (Eigen::Index i = 0; i < c.rows(); ++i)
      if (std::abs(c(i, j)) < cut) c(i, j) = 0.0;
  return Poly2(coords_, std::move(c));
}

void Poly2::require_same_coords(const Poly2& o) const {
  if (coords_ != o.coords_)
    throw DomainError("polynomial coordinate mismatch: " + to_string(coords_) + " vs " +
                      to_string(o.coords_), "coords_mismatch");
}

namespace {

ComplexMatrix padded(const ComplexMatrix& m, Eigen::Index rows, Eigen::Index cols) {
  ComplexMatrix out = ComplexMatrix::Zero(rows, cols);
  out.topLeftCorner(m.rows(), m.cols()) = m;
  return out;
}

}  // namespace

Poly2& Poly2::operator+=(const Poly2& o) {
  require_same_coords(o);
  const auto r = std::max(coeffs_.rows(), o.coeffs_.rows());
  const auto c = std::max(coeffs_.cols(), o.coeffs_.cols());
  coeffs_ = padded(coeffs_, r, c) + padded(o.coeffs_, r, c);
  normalize();
  return *this;
}

Poly2& Poly2::operator-=(const Poly2& o) {
  require_same_coords(o);
  const auto r = std::max(coeffs_.rows(), o.coeffs_.rows());
  const auto c = std::max(coeffs_.cols(), o.coeffs_.cols());
  coeffs_ = padded(coeffs_, r, c) - padded(o.coeffs_, r, c);
  normalize();
  return *this;
}

Poly2& Poly2::operator*=(Complex c) {
  coeffs_ *= c;
  normalize();
  return *this;
}

Poly2 operator*(const Poly2& a, const Poly2& b) {
  a.require_same_coords(b);
  const ComplexMatrix& ca = a.coeffs();
  const ComplexMatrix& cb = b.coeffs();
  ComplexMatrix out = ComplexMatrix::Zero(ca.rows() + cb.rows() - 1, ca.cols() + cb.cols() - 1);
  for (Eigen::Index i = 0; i < ca.rows(); ++i)
    for (Eigen::Index j = 0; j < ca.cols(); ++j) {
      if (ca(i, j) == Complex(0.0)) continue;
      out.block(i, j, cb.rows(), cb.cols()) += ca(i, j) * cb;
    }
  return Poly2(a.coords(), std::move(out));
}

double max_coeff_diff(const Poly2& a, const Poly2& b) {
  if (a.coords() != b.coords())
    throw DomainError("cannot compare polynomials in different coordinates", "coords_mismatch");
  const auto r = std::max(a.coeffs().rows(), b.coeffs().rows());
  const auto c = std::max(a.coeffs().cols(), b.coeffs().cols());
  return (padded(a.coeffs(), r, c) - padded(b.coeffs(), r, c)).cwiseAbs().maxCoeff();
}

Poly2 substitute(const Poly2& f, const Poly2& x, const Poly2& y) {
  if (x.coords() != y.coords()) throw DomainError("substitution polynomials disagree on coordinates");
  const Coords target = x.coords();
  std::vector<Poly2> xp{Poly2::constant(target, 1.0)};
  std::vector<Poly2> yp{Poly2::constant(target, 1.0)};
  for (int i = 1; i <= f.deg_x(); ++i) xp.push_back(xp.back() * x);
  for (int j = 1; j <= f.deg_y(); ++j) yp.push_back(yp.back() * y);
  Poly2 out(target);
  for (int i = 0; i <= f.deg_x(); ++i)
    for (int j = 0; j <= f.deg_y(); ++j) {
      const Complex c = f.coeff(i, j);
      if (c == Complex(0.0)) continue;
      out += (xp[i] * yp[j]) * c;
    }
  return out;
}

bool is_symmetric(const Poly2& f) {
  if (f.coords() != Coords::ZZeta)
    throw DomainError("is_symmetric requires (z, zeta) coordinates", "coords_mismatch");
  const double tol = 1e-14 * std::max(1.0, f.max_abs_coeff());
  const int d = std::max(f.deg_x(), f.deg_y());
  for (int i = 0; i <= d; ++i)
    for (int j = i + 1; j <= d; ++j)
      if (std::abs(f.coeff(i, j) - f.coeff(j, i)) > tol) return false;
  return true;
}

Poly2 compose_sym(const Poly2& g) {
  if (g.coords() != Coords::SP) throw DomainError("compose_sym requires (s, p) coordinates", "coords_mismatch");
  const Poly2 s = Poly2::monomial(Coords::ZZeta, 1, 0) + Poly2::monomial(Coords::ZZeta, 0, 1);
  const Poly2 p = Poly2::monomial(Coords::ZZeta, 1, 1);
  return substitute(g, s, p);
}

Poly2 power_sum_sp(int k) {
  if (k < 0) throw DomainError("power sum index must be nonnegative");
  const Poly2 s = Poly2::monomial(Coords::SP, 1, 0);
  const Poly2 p = Poly2::monomial(Coords::SP, 0, 1);
  Poly2 prev = Poly2::constant(Coords::SP, 2.0);
  if (k == 0) return prev;
  Poly2 cur = s;
  for (int i = 2; i <= k; ++i) {
    Poly2 next = s * cur - p * prev;
    prev = std::move(cur);
    cur = std::move(next);
  }
  return cur;
}

Poly2 to_sp_basis(const Poly2& f) {
  if (!is_symmetric(f)) throw DomainError("polynomial is not symmetric in (z, zeta)", "not_symmetric");
  const int d = std::max(f.deg_x(), f.deg_y());
  std::vector<Poly2> h;
  for (int k = 0; k <= d; ++k) h.push_back(power_sum_sp(k));
  std::vector<Poly2> ppow{Poly2::constant(Coords::SP, 1.0)};
  for (int b = 1; b <= d; ++b) ppow.push_back(ppow.back() * Poly2::monomial(Coords::SP, 0, 1));

  Poly2 out(Coords::SP);
  for (int a = 0; a <= d; ++a)
    for (int b = 0; b <= a; ++b) {
      // the (a, b) and (b, a) coefficients agree to tolerance; average them
      const Complex c = 0.5 * (f.coeff(a, b) + f.coeff(b, a));
      if (c == Complex(0.0)) continue;
      if (a == b)
        out += ppow[b] * c;
      else
        out += (ppow[b] * h[a - b]) * c;
    }
  return out;
}

Poly2 change_sigma_e(const Poly2& f, SigmaEDirection dir) {
  if (dir == SigmaEDirection::SpToSigmaE) {
    if (f.coords() != Coords::SP) throw DomainError("expected (s, p) coordinates", "coords_mismatch");
    const Poly2 sigma = Poly2::monomial(Coords::SigmaE, 1, 0);
    const Poly2 e = Poly2::monomial(Coords::SigmaE, 0, 1);
    return substitute(f, sigma * 2.0, sigma * sigma - e);
  }
  if (f.coords() != Coords::SigmaE) throw DomainError("expected (sigma, e) coordinates", "coords_mismatch");
  const Poly2 s = Poly2::monomial(Coords::SP, 1, 0);
  const Poly2 p = Poly2::monomial(Coords::SP, 0, 1);
  return substitute(f, s * 0.5, s * s * 0.25 - p);
}

Poly2 convert(const Poly2& f, Coords target) {
  if (f.coords() == target) return f;
  switch (f.coords()) {
    case Coords::ZZeta: {
      Poly2 g = to_sp_basis(f);
      return target == Coords::SP ? g : change_sigma_e(g, SigmaEDirection::SpToSigmaE);
    }
    case Coords::SP:
      return target == Coords::ZZeta ? compose_sym(f) : change_sigma_e(f, SigmaEDirection::SpToSigmaE);
    case Coords::SigmaE: {
      Poly2 g = change_sigma_e(f, SigmaEDirection::SigmaEToSp);
      return target == Coords::SP ? g : compose_sym(g);
    }
  }
  return f;
}

namespace {

/// Row j, column a holds exp(-2 pi i a j / n) / n.
ComplexMatrix inverse_dft(int n) {
  ComplexMatrix f(n, n);
  for (int j = 0; j < n; ++j)
    for (int a = 0; a < n; ++a)
      f(j, a) = std::polar(1.0 / n, -2.0 * std::numbers::pi * ((static_cast<long>(a) * j) % n) / n);
  return f;
}

Complex root_of_unity(int a, int n) { return std::polar(1.0, 2.0 * std::numbers::pi * a / n); }

}  // namespace

Poly2 interpolate_on_torus(const std::function<Complex(Complex, Complex)>& f, int deg_x, int deg_y,
                           Coords coords, double cleanup_rel) {
  if (deg_x < 0 || deg_y < 0) throw DomainError("negative degree bound");
  const int nx = deg_x + 1, ny = deg_y + 1;
  ComplexMatrix values(nx, ny);
  for (int a = 0; a < nx; ++a)
    for (int b = 0; b < ny; ++b) values(a, b) = f(root_of_unity(a, nx), root_of_unity(b, ny));
  ComplexMatrix c = inverse_dft(nx) * values * inverse_dft(ny).transpose();
  return Poly2(coords, std::move(c)).cleaned(cleanup_rel);
}

namespace {

std::vector<Complex> closed_disk_samples(int grid) {
  std::vector<Complex> pts;
  pts.reserve(static_cast<std::size_t>(grid) * grid);
  for (int k = 0; k < grid; ++k) {
    const double r = static_cast<double>(k) / (grid - 1);
    for (int j = 0; j < grid; ++j) pts.push_back(std::polar(r, 2.0 * std::numbers::pi * j / grid));
  }
  return pts;
}

ComplexMatrix vandermonde(const std::vector<Complex>& pts, int deg) {
  ComplexMatrix v(static_cast<Eigen::Index>(pts.size()), deg + 1);
  for (std::size_t i = 0; i < pts.size(); ++i) {
    Complex w = 1.0;
    for (int k = 0; k <= deg; ++k) {
      v(static_cast<Eigen::Index>(i), k) = w;
      w *= pts[i];
    }
  }
  return v;
}

}  // namespace

MinModulusReport no_roots_grid(const Poly2& f, GridDomain domain, int grid) {
  if (grid < 2) throw DomainError("grid must be at least 2");
  Poly2 bidisk_poly = f;
  if (domain == GridDomain::ClosedG) {
    if (f.coords() != Coords::SP) throw DomainError("ClosedG sampling requires (s, p) coordinates", "coords_mismatch");
    bidisk_poly = compose_sym(f);
  }
  const std::vector<Complex> pts = closed_disk_samples(grid);
  const ComplexMatrix vx = vandermonde(pts, bidisk_poly.deg_x());
  const ComplexMatrix vy_t = vandermonde(pts, bidisk_poly.deg_y()).transpose();
  const ComplexMatrix& c = bidisk_poly.coeffs();

  MinModulusReport rep;
  rep.min_modulus = std::numeric_limits<double>::infinity();
  const Eigen::Index n = static_cast<Eigen::Index>(pts.size());
  constexpr Eigen::Index kBlock = 256;
  for (Eigen::Index start = 0; start < n; start += kBlock) {
    const Eigen::Index rows = std::min(kBlock, n - start);
    const ComplexMatrix vals = (vx.middleRows(start, rows) * c) * vy_t;
    for (Eigen::Index j = 0; j < vals.cols(); ++j)
      for (Eigen::Index i = 0; i < rows; ++i) {
        const double m = std::abs(vals(i, j));
        if (m < rep.min_modulus) {
          rep.min_modulus = m;
          rep.arg_x = pts[static_cast<std::size_t>(start + i)];
          rep.arg_y = pts[static_cast<std::size_t>(j)];
        }
      }
  }
  if (domain == GridDomain::ClosedG) {
    const Complex z = rep.arg_x, zeta = rep.arg_y;
    rep.arg_x = z + zeta;
    rep.arg_y = z * zeta;
  }
  return rep;
}

}  // namespace symbidisk
