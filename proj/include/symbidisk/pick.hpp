#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "symbidisk/errors.hpp"
#include "symbidisk/numkit.hpp"
#include "symbidisk/realize.hpp"

namespace symbidisk {

struct LiftedPoint {
  Complex z, zeta;   ///< roots of t^2 - s t + p, lexicographically ordered
  bool in_g = false; ///< both moduli < 1 - 1e-12
};

/// Preimage of (s, p) under (z, zeta) -> (z + zeta, z zeta). Near-double
/// roots (|s^2 - 4p| <= 1e-14 max(1, |s|^2)) are returned as z = zeta = s/2.
LiftedPoint lift_point(Complex s, Complex p);

struct GNode {
  Complex s, p;
};

/// Interpolation data on the symmetrized bidisk: g(s_i, p_i) = w_i.
struct PickProblemG {
  std::vector<GNode> nodes;
  std::vector<Complex> values;

  /// Throws DimensionError on length mismatch, DomainError for nodes outside G.
  void validate() const;
};

struct D2Node {
  Complex z, zeta;
};

/// Interpolation data on the bidisk. `orbits` groups node indices that are
/// swaps of one another (a single index when z == zeta).
struct PickProblemD2 {
  std::vector<D2Node> nodes;
  std::vector<Complex> values;
  std::vector<std::vector<std::size_t>> orbits;

  void validate() const;
};

/// Lift every G-node to the bidisk, emitting (z, zeta) and (zeta, z) with the
/// same value when z != zeta, and one node otherwise. Repeated G-nodes are
/// merged when their values agree and rejected when they conflict.
PickProblemD2 build_symm_data(const PickProblemG& g);

/// W = (1 - conj(w_i) w_j), Pz = (1 - conj(z_i) z_j), Pzeta = (1 - conj(zeta_i) zeta_j).
struct KernelMatrices {
  ComplexMatrix W, Pz, Pzeta;
  Eigen::Index size() const { return W.rows(); }
  void validate() const;
};

KernelMatrices kernel_matrices(const PickProblemD2& d);

/// PSD pair solving W = K1 o Pz + K2 o Pzeta (o = entrywise product).
struct AglerCertificate {
  ComplexMatrix K1, K2;
  double residual = 0.0;  ///< max entrywise |W - K1 o Pz - K2 o Pzeta|
  double eig_min = 0.0;   ///< min over both matrices
};

struct CertificateReport {
  double residual = 0.0;
  double eig_min_k1 = 0.0;
  double eig_min_k2 = 0.0;
};

CertificateReport check_certificate(const ComplexMatrix& k1, const ComplexMatrix& k2, const KernelMatrices& km);

enum class FeasibilityStatus { Feasible, Infeasible, Undetermined };
std::string to_string(FeasibilityStatus s);

struct FeasibilityOptions {
  int max_iter = 50000;
  double tol = 1e-10;
};

struct FeasibilityResult {
  FeasibilityStatus status = FeasibilityStatus::Undetermined;
  std::optional<AglerCertificate> certificate;
  int iterations = 0;
  double residual = 0.0;  ///< residual of the last PSD iterate
  std::string explanation;
};

/// Dykstra alternating projections between the PSD cone pair and the affine
/// set {K1 o Pz + K2 o Pzeta = W}, started from (0, 0). Infeasibility is only
/// certified by scalar separation on a single entry; otherwise the run ends
/// as undetermined after max_iter.
FeasibilityResult feasibility(const KernelMatrices& km, const FeasibilityOptions& opts = {});

struct LurkingOptions {
  double max_residual = 1e-6;
};

struct LurkingResult {
  GeneralColligation colligation;
  ComplexMatrix contraction;  ///< the assembled V
  double gram_mismatch = 0.0;
  double clipped = 0.0;
};

/// Lurking-contraction realization: factor K_k = U_k* U_k, map the columns
/// (1; z_j u_j; zeta_j u_j) to (w_j; u_j; u_j) by V = Y X^+, and read the
/// colligation off V.
LurkingResult lurking(const AglerCertificate& cert, const PickProblemD2& d, const LurkingOptions& opts = {});

struct SolveOptions {
  FeasibilityOptions feasibility;
  LurkingOptions lurking;
  int grid = 41;             ///< sup-norm sampling grid; < 2 disables the sweep
  std::uint64_t seed = 0;    ///< drives the random symmetry probe
  bool allow_boundary = false;
};

struct SolveDiagnostics {
  std::vector<double> interp_errors;  ///< |g(s_i, p_i) - w_i| per G-node
  std::optional<SupNormReport> sup_norm;
  double symmetry_error = 0.0;        ///< max |f(z,zeta) - f(zeta,z)| at 25 seeded points
  double gram_mismatch = 0.0;
  double clipped = 0.0;
};

struct SolveResult {
  FeasibilityStatus status = FeasibilityStatus::Undetermined;
  std::optional<GammaColligation> gamma;
  std::optional<SymmetricColligation> symmetric;
  std::optional<AglerCertificate> certificate;
  SolveDiagnostics diagnostics;
  int iterations = 0;
  std::string explanation;
};

/// Failure inside one stage of solve_G.
class StageError : public Error {
 public:
  StageError(std::string stage, const Error& cause)
      : Error(cause.code(), stage + ": " + cause.what()), stage_(std::move(stage)) {}
  const std::string& stage() const noexcept { return stage_; }

 private:
  std::string stage_;
};

/// Full pipeline: lift, kernels, feasibility, lurking contraction,
/// symmetrization and conversion to a gamma colligation.
SolveResult solve_G(const PickProblemG& g, const SolveOptions& opts = {});

}  // namespace symbidisk
