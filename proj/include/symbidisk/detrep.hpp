#pragma once

#include "symbidisk/numkit.hpp"
#include "symbidisk/poly2.hpp"

namespace symbidisk {

/// D2: p(z,zeta) = constant * det(I - [A1 A2; A2 A1] diag(z I, zeta I)).
/// G:  g(s,p)    = constant * det(I - s A1 + p (A1 + A2)(A1 - A2)).
enum class DetForm { D2, G };

std::string to_string(DetForm f);
DetForm det_form_from_string(const std::string& s);

struct DetRep {
  DetForm form = DetForm::G;
  ComplexMatrix A1, A2;
  Complex constant = 1.0;

  Eigen::Index size() const { return A1.rows(); }
  /// Throws DimensionError for non-square or mismatched blocks, DomainError
  /// for a zero constant.
  void validate() const;
  /// [A1 A2; A2 A1]
  ComplexMatrix block_matrix() const;
};

/// (n + m) x (n + m) contraction with blocks K11 (n x n), K12 (n x m),
/// K21 (m x n), K22 (m x m).
struct KBlocks {
  Eigen::Index n = 0, m = 0;
  ComplexMatrix K;

  void validate() const;
  auto K11() const { return K.topLeftCorner(n, n); }
  auto K12() const { return K.topRightCorner(n, m); }
  auto K21() const { return K.bottomLeftCorner(m, n); }
  auto K22() const { return K.bottomRightCorner(m, m); }
};

/// Exact coefficients of the determinant polynomial of `rep` in the given
/// form (ZZeta coordinates for D2, SP for G), recovered from a tensor grid of
/// roots of unity.
Poly2 det_poly(const DetRep& rep, DetForm form);
Poly2 det_poly(const DetRep& rep);

/// q(sigma, e) = det(I - K diag(sigma I_n, e I_m)) in SigmaE coordinates.
Poly2 det_poly(const KBlocks& k);

/// Direct determinant evaluation, independent of the interpolation path.
Complex det_value(const DetRep& rep, DetForm form, Complex x, Complex y);

/// Size n + 2m representation of g(s,p) = constant * q(s/2, s^2/4 - p):
///
///   A1 = [ K11/2  0     -K12/2 ]      A2 = [ K11/2  0     -K12/2 ]
///        [ K21/2  0     -K22/2 ]           [ K21/2  0     -K22/2 ]
///        [ 0     -I/2    0     ]           [ 0      I/2    0     ]
///
/// Throws NotContractiveError when ||K|| > 1 + 1e-10.
DetRep from_K(const KBlocks& k, Complex constant = 1.0);

/// The same matrices read as a bidisk representation; its determinant
/// polynomial is compose_sym of the G-form polynomial.
DetRep g_rep_to_d2_rep(const DetRep& r);

enum class Contractivity { Strict, Boundary, NotContractive };
std::string to_string(Contractivity c);

struct VerifyReport {
  double residual = 0.0;       ///< max coefficient difference / largest target coefficient
  double norm_sum = 0.0;       ///< ||A1 + A2||
  double norm_diff = 0.0;      ///< ||A1 - A2||
  double block_norm = 0.0;     ///< ||[A1 A2; A2 A1]||
  bool strict = false;
  Contractivity contractivity = Contractivity::Boundary;
};

/// Compares det_poly(r) with `target` (ZZeta for D2, SP for G). The block
/// norm is classified strict below 1 - 1e-10, boundary within 1e-10 of 1.
VerifyReport verify(const DetRep& r, const Poly2& target);

/// (A1/R, A2/R, constant): if r represents h, the result represents
/// h(s/R, p/R^2) (G form) or h(z/R, zeta/R) (D2 form).
DetRep strict_rescale(const DetRep& r, double radius);

}  // namespace symbidisk
