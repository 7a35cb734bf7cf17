#pragma once

#include <functional>
#include <string>

#include "symbidisk/numkit.hpp"

namespace symbidisk {

/// Variable pair a bivariate polynomial is written in: (z, zeta) on the
/// bidisk, (s, p) = (z + zeta, z zeta) on the symmetrized bidisk, or
/// (sigma, e) = (s/2, s^2/4 - p).
enum class Coords { ZZeta, SP, SigmaE };

std::string to_string(Coords c);
Coords coords_from_string(const std::string& s);

/// Dense bivariate polynomial: coeffs(i, j) multiplies x^i y^j where (x, y)
/// are the variables named by `coords`. Trailing all-zero rows and columns
/// are always trimmed, so equal polynomials have equal coefficient shapes.
class Poly2 {
 public:
  Poly2() : Poly2(Coords::ZZeta) {}
  explicit Poly2(Coords coords);
  Poly2(Coords coords, ComplexMatrix coeffs);

  static Poly2 constant(Coords coords, Complex c);
  static Poly2 monomial(Coords coords, int i, int j, Complex c = 1.0);

  Coords coords() const { return coords_; }
  int deg_x() const { return static_cast<int>(coeffs_.rows()) - 1; }
  int deg_y() const { return static_cast<int>(coeffs_.cols()) - 1; }
  const ComplexMatrix& coeffs() const { return coeffs_; }
  /// Coefficient of x^i y^j; zero outside the stored range.
  Complex coeff(int i, int j) const;
  bool is_zero() const;
  double max_abs_coeff() const;

  Complex operator()(Complex x, Complex y) const { return eval(x, y); }
  Complex eval(Complex x, Complex y) const;

  /// Zeroes coefficients with modulus below rel_tol * max_abs_coeff().
  Poly2 cleaned(double rel_tol) const;
  Poly2 with_coords(Coords c) const { return Poly2(c, coeffs_); }

  Poly2& operator+=(const Poly2& o);
  Poly2& operator-=(const Poly2& o);
  Poly2& operator*=(Complex c);
  friend Poly2 operator+(Poly2 a, const Poly2& b) { return a += b; }
  friend Poly2 operator-(Poly2 a, const Poly2& b) { return a -= b; }
  friend Poly2 operator*(Poly2 a, Complex c) { return a *= c; }
  friend Poly2 operator*(Complex c, Poly2 a) { return a *= c; }
  friend Poly2 operator*(const Poly2& a, const Poly2& b);

 private:
  void require_same_coords(const Poly2& o) const;
  void normalize();

  Coords coords_;
  ComplexMatrix coeffs_;
};

/// max |a_ij - b_ij| over the union of supports (coordinate tags must match).
double max_coeff_diff(const Poly2& a, const Poly2& b);

/// Sum of c_ij X^i Y^j where X and Y are polynomials in the target coordinates.
Poly2 substitute(const Poly2& f, const Poly2& x, const Poly2& y);

/// f(z, zeta) == f(zeta, z) coefficientwise within 1e-14 (scaled by the
/// largest coefficient when it exceeds 1). Requires Coords::ZZeta.
bool is_symmetric(const Poly2& f);

/// g(s, p) -> g(z + zeta, z zeta).
Poly2 compose_sym(const Poly2& g);

/// Power sums z^k + zeta^k as polynomials in (s, p): h_0 = 2, h_1 = s,
/// h_k = s h_{k-1} - p h_{k-2}.
Poly2 power_sum_sp(int k);

/// Inverse of compose_sym on symmetric polynomials. Throws DomainError when
/// the input is not symmetric.
Poly2 to_sp_basis(const Poly2& f);

enum class SigmaEDirection { SpToSigmaE, SigmaEToSp };

/// SP -> SigmaE substitutes s = 2 sigma, p = sigma^2 - e; SigmaE -> SP
/// substitutes sigma = s/2, e = s^2/4 - p.
Poly2 change_sigma_e(const Poly2& f, SigmaEDirection dir);

/// Convert between any two coordinate systems. ZZeta targets go through
/// compose_sym; ZZeta sources must be symmetric.
Poly2 convert(const Poly2& f, Coords target);

/// Recovers the coefficients of a polynomial of degree at most (deg_x, deg_y)
/// from its values on a tensor grid of roots of unity (inverse DFT per axis).
/// Coefficients below 1e-11 times the largest are zeroed.
Poly2 interpolate_on_torus(const std::function<Complex(Complex, Complex)>& f, int deg_x, int deg_y,
                           Coords coords, double cleanup_rel = 1e-11);

enum class GridDomain { ClosedBidisk, ClosedG };

struct MinModulusReport {
  double min_modulus = 0.0;
  Complex arg_x;  ///< location in the polynomial's own coordinates
  Complex arg_y;
};

/// Samples |f| over grid radii (0 .. 1 inclusive) times grid phases per
/// variable. ClosedG requires SP coordinates and samples the image of the
/// closed-bidisk grid under (z, zeta) -> (z + zeta, z zeta). A sampling
/// heuristic: a positive minimum does not prove zero-freeness.
MinModulusReport no_roots_grid(const Poly2& f, GridDomain domain, int grid);

}  // namespace symbidisk
