#pragma once

#include <cstddef>
#include <variant>

#include "symbidisk/numkit.hpp"

namespace symbidisk {

/// Bidisk colligation with independent state blocks:
///
///     [ A11 A12 B1 ]
///     [ A21 A22 B2 ]   realizing  f(z,zeta) = D + [C1 C2] Z (I - A Z)^{-1} [B1; B2],
///     [ C1  C2  D  ]              Z = diag(z I_h1, zeta I_h2).
struct GeneralColligation {
  ComplexMatrix A11, A12, A21, A22;
  ComplexMatrix B1, B2;
  ComplexMatrix C1, C2;
  ComplexMatrix D;

  Eigen::Index h1() const { return A11.rows(); }
  Eigen::Index h2() const { return A22.rows(); }
  Eigen::Index outputs() const { return D.rows(); }
  Eigen::Index inputs() const { return D.cols(); }

  /// Throws DimensionError on inconsistent block shapes.
  void validate() const;
  ComplexMatrix state() const;
  ComplexMatrix assembled() const;
};

/// Colligation whose block structure forces a symmetric transfer function:
///
///     [ A1 A2 B ]
///     [ A2 A1 B ]   f(z,zeta) = D + [C C] Z (I - [A1 A2; A2 A1] Z)^{-1} [B; B].
///     [ C  C  D ]
struct SymmetricColligation {
  ComplexMatrix A1, A2, B, C, D;

  Eigen::Index h() const { return A1.rows(); }
  Eigen::Index outputs() const { return D.rows(); }
  Eigen::Index inputs() const { return D.cols(); }

  void validate() const;
  ComplexMatrix assembled() const;
};

/// Colligation on the symmetrized bidisk:
///
///     [ alpha1 0      beta  ]
///     [ 0      alpha2 0     ]
///     [ gamma  0      delta ]
///
/// g(s,p) = delta + 1/2 gamma (s I - 2p alpha2) (I - s/2 (alpha1 + alpha2) + p alpha1 alpha2)^{-1} beta.
struct GammaColligation {
  ComplexMatrix alpha1, alpha2, beta, gamma, delta;

  Eigen::Index h() const { return alpha1.rows(); }
  Eigen::Index outputs() const { return delta.rows(); }
  Eigen::Index inputs() const { return delta.cols(); }

  void validate() const;
  ComplexMatrix assembled() const;
};

using AnyColligation = std::variant<GeneralColligation, SymmetricColligation, GammaColligation>;

struct EvalOptions {
  /// Permit points on the closed domain's boundary. The resolvent may be
  /// singular there, in which case EvaluationSingularity is thrown.
  bool allow_boundary = false;
};

ComplexMatrix eval_general(const GeneralColligation& c, Complex z, Complex zeta, EvalOptions opts = {});
ComplexMatrix eval_symmetric(const SymmetricColligation& c, Complex z, Complex zeta, EvalOptions opts = {});
ComplexMatrix eval_gamma(const GammaColligation& c, Complex s, Complex p, EvalOptions opts = {});

/// Symmetric colligation realizing (f(z,zeta) + f(zeta,z)) / 2. Contractive
/// input gives contractive output.
SymmetricColligation symmetrize(const GeneralColligation& c);

/// alpha1 = A1 + A2, alpha2 = A1 - A2, beta = sqrt2 B, gamma = sqrt2 C, delta = D.
GammaColligation to_gamma(const SymmetricColligation& c);

/// Same blocks as to_gamma(symmetrize(c)), assembled directly from the
/// general colligation.
GammaColligation general_to_gamma(const GeneralColligation& c);

/// Partition a square contraction acting on Y (+) H1 (+) H2 as
/// [[D, C1, C2], [B1, A11, A12], [B2, A21, A22]], the external channel first.
GeneralColligation colligation_from_contraction(const ComplexMatrix& v, Eigen::Index h1, Eigen::Index h2,
                                                Eigen::Index outputs = 1, Eigen::Index inputs = 1);

struct ColligationReport {
  double op_norm = 0.0;
  bool contractive = false;  ///< op_norm <= 1 + 1e-10
  Eigen::Index state_dim_1 = 0, state_dim_2 = 0;
  Eigen::Index inputs = 0, outputs = 0;
};

ColligationReport check_colligation(const AnyColligation& c);

struct SupNormReport {
  double max = 0.0;
  Complex arg_x, arg_y;      ///< (z, zeta) for bidisk colligations, (s, p) for gamma
  std::size_t samples = 0;
  std::size_t skipped = 0;   ///< singular evaluations
  bool flagged = false;      ///< max > 1 + 1e-9
};

/// Maximum of the largest singular value of the transfer function over grid
/// radii times grid phases per variable. Radii are k/grid for k < grid (open
/// bidisk) or k/(grid-1) with `include_boundary`. Gamma colligations are
/// sampled on the image of the same bidisk grid.
SupNormReport sup_norm_grid(const AnyColligation& c, int grid, bool include_boundary = false);

}  // namespace symbidisk
