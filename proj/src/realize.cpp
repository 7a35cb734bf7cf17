#include "symbidisk/realize.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <string>
#include <vector>

#include "symbidisk/errors.hpp"
#include "symbidisk/pick.hpp"

namespace symbidisk {

namespace {

constexpr double kRcondFloor = 1e-13;
constexpr double kBoundarySlack = 1e-12;
const double kSqrt2 = std::numbers::sqrt2;
const double kInvSqrt2 = 1.0 / std::numbers::sqrt2;

void expect_shape(const ComplexMatrix& m, Eigen::Index rows, Eigen::Index cols, const char* name) {
  if (m.rows() != rows || m.cols() != cols)
    throw DimensionError(std::string(name) + " has shape " + std::to_string(m.rows()) + "x" +
                         std::to_string(m.cols()) + ", expected " + std::to_string(rows) + "x" +
                         std::to_string(cols));
}

/// Evaluates D + C Z (I - A Z)^{-1} B with Z = diag(x I_h1, y I_h2), reusing
/// its workspace across calls.
class BidiskEvaluator {
 public:
  BidiskEvaluator(ComplexMatrix a, ComplexMatrix b, ComplexMatrix c, ComplexMatrix d, Eigen::Index h1)
      : a_(std::move(a)), b_(std::move(b)), c_(std::move(c)), d_(std::move(d)), h1_(h1),
        t_(a_.rows(), a_.cols()), lu_(a_.rows()) {}

  /// False when the resolvent is numerically singular.
  bool eval(Complex x, Complex y, ComplexMatrix& out) {
    const Eigen::Index h = a_.rows();
    if (h == 0) {
      out = d_;
      return true;
    }
    const Eigen::Index h2 = h - h1_;
    t_.leftCols(h1_) = -x * a_.leftCols(h1_);
    t_.rightCols(h2) = -y * a_.rightCols(h2);
    t_.diagonal().array() += 1.0;
    lu_.compute(t_);
    if (!(lu_.rcond() >= kRcondFloor)) return false;
    ComplexMatrix sol = lu_.solve(b_);
    sol.topRows(h1_) *= x;
    sol.bottomRows(h2) *= y;
    out = d_ + c_ * sol;
    return true;
  }

 private:
  ComplexMatrix a_, b_, c_, d_;
  Eigen::Index h1_;
  ComplexMatrix t_;
  Eigen::PartialPivLU<ComplexMatrix> lu_;
};

BidiskEvaluator make_evaluator(const GeneralColligation& c) {
  ComplexMatrix b(c.h1() + c.h2(), c.inputs());
  b << c.B1, c.B2;
  ComplexMatrix cc(c.outputs(), c.h1() + c.h2());
  cc << c.C1, c.C2;
  return BidiskEvaluator(c.state(), std::move(b), std::move(cc), c.D, c.h1());
}

BidiskEvaluator make_evaluator(const SymmetricColligation& c) {
  const Eigen::Index h = c.h();
  ComplexMatrix a(2 * h, 2 * h);
  a << c.A1, c.A2, c.A2, c.A1;
  ComplexMatrix b(2 * h, c.inputs());
  b << c.B, c.B;
  ComplexMatrix cc(c.outputs(), 2 * h);
  cc << c.C, c.C;
  return BidiskEvaluator(std::move(a), std::move(b), std::move(cc), c.D, h);
}

/// Evaluates delta + 1/2 gamma (s I - 2p alpha2) (I - s S + p P)^{-1} beta
/// with S = (alpha1 + alpha2)/2 and P = alpha1 alpha2.
class GammaEvaluator {
 public:
  explicit GammaEvaluator(const GammaColligation& c)
      : alpha2_(c.alpha2), beta_(c.beta), gamma_(c.gamma), delta_(c.delta),
        half_sum_((c.alpha1 + c.alpha2) * 0.5), product_(c.alpha1 * c.alpha2),
        t_(c.h(), c.h()), lu_(c.h()) {}

  bool eval(Complex s, Complex p, ComplexMatrix& out) {
    const Eigen::Index h = alpha2_.rows();
    if (h == 0) {
      out = delta_;
      return true;
    }
    t_ = p * product_ - s * half_sum_;
    t_.diagonal().array() += 1.0;
    lu_.compute(t_);
    if (!(lu_.rcond() >= kRcondFloor)) return false;
    const ComplexMatrix x = lu_.solve(beta_);
    out = delta_ + 0.5 * gamma_ * (s * x - 2.0 * p * (alpha2_ * x));
    return true;
  }

 private:
  ComplexMatrix alpha2_, beta_, gamma_, delta_;
  ComplexMatrix half_sum_, product_;
  ComplexMatrix t_;
  Eigen::PartialPivLU<ComplexMatrix> lu_;
};

void check_bidisk_point(Complex z, Complex zeta, const EvalOptions& opts) {
  const double bound = opts.allow_boundary ? 1.0 + kBoundarySlack : 1.0;
  const bool ok = opts.allow_boundary ? (std::abs(z) <= bound && std::abs(zeta) <= bound)
                                      : (std::abs(z) < bound && std::abs(zeta) < bound);
  if (!ok)
    throw DomainError("point (" + std::to_string(z.real()) + "+" + std::to_string(z.imag()) + "i, " +
                          std::to_string(zeta.real()) + "+" + std::to_string(zeta.imag()) +
                          "i) is outside the " + (opts.allow_boundary ? "closed " : "open ") + "bidisk",
                      "outside_domain");
}

[[noreturn]] void throw_singular(Complex x, Complex y) {
  throw EvaluationSingularity("evaluation singularity: resolvent is numerically singular", x, y);
}

double largest_singular_value(const ComplexMatrix& m) {
  if (m.size() == 1) return std::abs(m(0, 0));
  return numkit::op_norm(m);
}

}  // namespace

void GeneralColligation::validate() const {
  const Eigen::Index n1 = A11.rows(), n2 = A22.rows();
  const Eigen::Index u = D.cols(), y = D.rows();
  expect_shape(A11, n1, n1, "A11");
  expect_shape(A22, n2, n2, "A22");
  expect_shape(A12, n1, n2, "A12");
  expect_shape(A21, n2, n1, "A21");
  expect_shape(B1, n1, u, "B1");
  expect_shape(B2, n2, u, "B2");
  expect_shape(C1, y, n1, "C1");
  expect_shape(C2, y, n2, "C2");
}

ComplexMatrix GeneralColligation::state() const {
  ComplexMatrix a(h1() + h2(), h1() + h2());
  a << A11, A12, A21, A22;
  return a;
}

ComplexMatrix GeneralColligation::assembled() const {
  validate();
  const Eigen::Index n = h1() + h2();
  ComplexMatrix m(n + outputs(), n + inputs());
  m << A11, A12, B1, A21, A22, B2, C1, C2, D;
  return m;
}

void SymmetricColligation::validate() const {
  const Eigen::Index n = A1.rows();
  expect_shape(A1, n, n, "A1");
  expect_shape(A2, n, n, "A2");
  expect_shape(B, n, D.cols(), "B");
  expect_shape(C, D.rows(), n, "C");
}

ComplexMatrix SymmetricColligation::assembled() const {
  validate();
  const Eigen::Index n = h();
  ComplexMatrix m(2 * n + outputs(), 2 * n + inputs());
  m << A1, A2, B, A2, A1, B, C, C, D;
  return m;
}

void GammaColligation::validate() const {
  const Eigen::Index n = alpha1.rows();
  expect_shape(alpha1, n, n, "alpha1");
  expect_shape(alpha2, n, n, "alpha2");
  expect_shape(beta, n, delta.cols(), "beta");
  expect_shape(gamma, delta.rows(), n, "gamma");
}

ComplexMatrix GammaColligation::assembled() const {
  validate();
  const Eigen::Index n = h();
  ComplexMatrix m = ComplexMatrix::Zero(2 * n + outputs(), 2 * n + inputs());
  m.topLeftCorner(n, n) = alpha1;
  m.block(0, 2 * n, n, inputs()) = beta;
  m.block(n, n, n, n) = alpha2;
  m.block(2 * n, 0, outputs(), n) = gamma;
  m.bottomRightCorner(outputs(), inputs()) = delta;
  return m;
}

ComplexMatrix eval_general(const GeneralColligation& c, Complex z, Complex zeta, EvalOptions opts) {
  c.validate();
  check_bidisk_point(z, zeta, opts);
  ComplexMatrix out;
  if (!make_evaluator(c).eval(z, zeta, out)) throw_singular(z, zeta);
  return out;
}

ComplexMatrix eval_symmetric(const SymmetricColligation& c, Complex z, Complex zeta, EvalOptions opts) {
  c.validate();
  check_bidisk_point(z, zeta, opts);
  ComplexMatrix out;
  if (!make_evaluator(c).eval(z, zeta, out)) throw_singular(z, zeta);
  return out;
}

ComplexMatrix eval_gamma(const GammaColligation& c, Complex s, Complex p, EvalOptions opts) {
  c.validate();
  const LiftedPoint lp = lift_point(s, p);
  if (opts.allow_boundary) {
    if (std::abs(lp.z) > 1.0 + kBoundarySlack || std::abs(lp.zeta) > 1.0 + kBoundarySlack)
      throw DomainError("point is outside the closed symmetrized bidisk", "outside_domain");
  } else if (!lp.in_g) {
    throw DomainError("point is outside the symmetrized bidisk", "outside_domain");
  }
  ComplexMatrix out;
  if (!GammaEvaluator(c).eval(s, p, out)) throw_singular(s, p);
  return out;
}

SymmetricColligation symmetrize(const GeneralColligation& c) {
  c.validate();
  const Eigen::Index n1 = c.h1(), n2 = c.h2(), n = n1 + n2;
  SymmetricColligation out;
  out.A1 = ComplexMatrix::Zero(n, n);
  out.A1.topLeftCorner(n1, n1) = c.A11;
  out.A1.bottomRightCorner(n2, n2) = c.A22;
  out.A2 = ComplexMatrix::Zero(n, n);
  out.A2.topRightCorner(n1, n2) = c.A12;
  out.A2.bottomLeftCorner(n2, n1) = c.A21;
  out.B.resize(n, c.inputs());
  out.B << c.B1, c.B2;
  out.B *= kInvSqrt2;
  out.C.resize(c.outputs(), n);
  out.C << c.C1, c.C2;
  out.C *= kInvSqrt2;
  out.D = c.D;
  return out;
}

GammaColligation to_gamma(const SymmetricColligation& c) {
  c.validate();
  GammaColligation out;
  out.alpha1 = c.A1 + c.A2;
  out.alpha2 = c.A1 - c.A2;
  out.beta = kSqrt2 * c.B;
  out.gamma = kSqrt2 * c.C;
  out.delta = c.D;
  return out;
}

GammaColligation general_to_gamma(const GeneralColligation& c) {
  c.validate();
  GammaColligation out;
  const Eigen::Index n = c.h1() + c.h2();
  out.alpha1.resize(n, n);
  out.alpha1 << c.A11, c.A12, c.A21, c.A22;
  out.alpha2.resize(n, n);
  out.alpha2 << c.A11, -c.A12, -c.A21, c.A22;
  out.beta.resize(n, c.inputs());
  out.beta << c.B1, c.B2;
  out.gamma.resize(c.outputs(), n);
  out.gamma << c.C1, c.C2;
  out.delta = c.D;
  return out;
}

GeneralColligation colligation_from_contraction(const ComplexMatrix& v, Eigen::Index h1, Eigen::Index h2,
                                                Eigen::Index outputs, Eigen::Index inputs) {
  if (h1 < 0 || h2 < 0 || v.rows() != outputs + h1 + h2 || v.cols() != inputs + h1 + h2)
    throw DimensionError("contraction of shape " + std::to_string(v.rows()) + "x" + std::to_string(v.cols()) +
                         " does not match state dimensions (" + std::to_string(h1) + ", " +
                         std::to_string(h2) + ")");
  const Eigen::Index y = outputs, u = inputs;
  GeneralColligation c;
  c.D = v.block(0, 0, y, u);
  c.C1 = v.block(0, u, y, h1);
  c.C2 = v.block(0, u + h1, y, h2);
  c.B1 = v.block(y, 0, h1, u);
  c.A11 = v.block(y, u, h1, h1);
  c.A12 = v.block(y, u + h1, h1, h2);
  c.B2 = v.block(y + h1, 0, h2, u);
  c.A21 = v.block(y + h1, u, h2, h1);
  c.A22 = v.block(y + h1, u + h1, h2, h2);
  return c;
}

ColligationReport check_colligation(const AnyColligation& any) {
  ColligationReport r;
  std::visit(
      [&r](const auto& c) {
        r.op_norm = numkit::op_norm(c.assembled());
        r.inputs = c.inputs();
        r.outputs = c.outputs();
        using T = std::decay_t<decltype(c)>;
        if constexpr (std::is_same_v<T, GeneralColligation>) {
          r.state_dim_1 = c.h1();
          r.state_dim_2 = c.h2();
        } else {
          r.state_dim_1 = c.h();
          r.state_dim_2 = c.h();
        }
      },
      any);
  r.contractive = r.op_norm <= 1.0 + 1e-10;
  return r;
}

namespace {

std::vector<Complex> disk_samples(int grid, bool include_boundary) {
  std::vector<Complex> pts;
  pts.reserve(static_cast<std::size_t>(grid) * grid);
  const double denom = include_boundary ? grid - 1 : grid;
  for (int k = 0; k < grid; ++k) {
    const double r = k / denom;
    for (int j = 0; j < grid; ++j) pts.push_back(std::polar(r, 2.0 * std::numbers::pi * j / grid));
  }
  return pts;
}

template <class Eval>
void sweep(Eval& ev, const std::vector<Complex>& pts, bool symmetric, bool gamma_image, SupNormReport& rep) {
  ComplexMatrix val;
  const std::size_t n = pts.size();
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = symmetric ? i : 0; j < n; ++j) {
      const Complex z = pts[i], zeta = pts[j];
      const Complex x = gamma_image ? z + zeta : z;
      const Complex y = gamma_image ? z * zeta : zeta;
      ++rep.samples;
      if (!ev.eval(x, y, val)) {
        ++rep.skipped;
        continue;
      }
      const double m = largest_singular_value(val);
      if (m > rep.max) {
        rep.max = m;
        rep.arg_x = x;
        rep.arg_y = y;
      }
    }
  }
}

}  // namespace

SupNormReport sup_norm_grid(const AnyColligation& any, int grid, bool include_boundary) {
  if (grid < 2) throw DomainError("grid must be at least 2");
  const std::vector<Complex> pts = disk_samples(grid, include_boundary);
  SupNormReport rep;
  rep.max = -std::numeric_limits<double>::infinity();
  std::visit(
      [&](const auto& c) {
        c.validate();
        using T = std::decay_t<decltype(c)>;
        if constexpr (std::is_same_v<T, GammaColligation>) {
          GammaEvaluator ev(c);
          sweep(ev, pts, true, true, rep);
        } else {
          auto ev = make_evaluator(c);
          sweep(ev, pts, std::is_same_v<T, SymmetricColligation>, false, rep);
        }
      },
      any);
  if (rep.samples == rep.skipped) rep.max = std::numeric_limits<double>::quiet_NaN();
  rep.flagged = !(rep.max <= 1.0 + 1e-9);
  return rep;
}

}  // namespace symbidisk
