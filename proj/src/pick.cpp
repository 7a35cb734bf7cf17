#include "symbidisk/pick.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <string>

namespace symbidisk {

namespace {

constexpr double kNodeTol = 1e-12;

bool lex_less(Complex a, Complex b) {
  if (a.real() != b.real()) return a.real() < b.real();
  return a.imag() < b.imag();
}

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

}  // namespace

LiftedPoint lift_point(Complex s, Complex p) {
  LiftedPoint out;
  const Complex disc = s * s - 4.0 * p;
  Complex r1, r2;
  if (std::abs(disc) <= 1e-14 * std::max(1.0, std::norm(s))) {
    r1 = r2 = 0.5 * s;
  } else {
    const Complex root = std::sqrt(disc);
    // add the square root in the direction of s to avoid cancellation
    const Complex big = (std::real(std::conj(s) * root) >= 0.0) ? 0.5 * (s + root) : 0.5 * (s - root);
    r1 = big;
    r2 = (big == Complex(0.0)) ? Complex(0.0) : p / big;
  }
  if (lex_less(r2, r1)) std::swap(r1, r2);
  out.z = r1;
  out.zeta = r2;
  out.in_g = std::abs(r1) < 1.0 - 1e-12 && std::abs(r2) < 1.0 - 1e-12;
  return out;
}

void PickProblemG::validate() const {
  if (nodes.size() != values.size())
    throw DimensionError("problem has " + std::to_string(nodes.size()) + " nodes but " +
                         std::to_string(values.size()) + " values");
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    if (!lift_point(nodes[i].s, nodes[i].p).in_g)
      throw DomainError("node " + std::to_string(i) + " is not in the symmetrized bidisk", "outside_domain");
  }
}

void PickProblemD2::validate() const {
  if (nodes.size() != values.size())
    throw DimensionError("problem has " + std::to_string(nodes.size()) + " nodes but " +
                         std::to_string(values.size()) + " values");
  for (std::size_t i = 0; i < nodes.size(); ++i)
    if (!(std::abs(nodes[i].z) < 1.0 && std::abs(nodes[i].zeta) < 1.0))
      throw DomainError("node " + std::to_string(i) + " is not in the open bidisk", "outside_domain");
  for (const auto& orbit : orbits) {
    for (std::size_t idx : orbit)
      if (idx >= nodes.size()) throw DimensionError("orbit refers to missing node " + std::to_string(idx));
    if (orbit.size() == 2) {
      const D2Node& a = nodes[orbit[0]];
      const D2Node& b = nodes[orbit[1]];
      if (std::abs(a.z - b.zeta) > kNodeTol || std::abs(a.zeta - b.z) > kNodeTol ||
          std::abs(values[orbit[0]] - values[orbit[1]]) > kNodeTol)
        throw DomainError("orbit {" + std::to_string(orbit[0]) + ", " + std::to_string(orbit[1]) +
                              "} is not a swapped pair with equal values",
                          "broken_symmetry");
    } else if (orbit.size() > 2) {
      throw DimensionError("orbits have at most two nodes");
    }
  }
}

PickProblemD2 build_symm_data(const PickProblemG& g) {
  g.validate();
  PickProblemD2 out;
  for (std::size_t i = 0; i < g.nodes.size(); ++i) {
    const LiftedPoint lp = lift_point(g.nodes[i].s, g.nodes[i].p);
    const Complex w = g.values[i];
    std::vector<D2Node> candidates{{lp.z, lp.zeta}};
    if (lp.z != lp.zeta) candidates.push_back({lp.zeta, lp.z});

    std::vector<std::size_t> orbit;
    for (const D2Node& c : candidates) {
      bool merged = false;
      for (std::size_t k = 0; k < out.nodes.size(); ++k) {
        if (std::abs(out.nodes[k].z - c.z) <= kNodeTol && std::abs(out.nodes[k].zeta - c.zeta) <= kNodeTol) {
          if (std::abs(out.values[k] - w) > kNodeTol)
            throw DomainError("node " + std::to_string(i) + " repeats an earlier node with a different value",
                              "conflicting_data");
          merged = true;
          break;
        }
      }
      if (merged) continue;
      orbit.push_back(out.nodes.size());
      out.nodes.push_back(c);
      out.values.push_back(w);
    }
    if (!orbit.empty()) out.orbits.push_back(std::move(orbit));
  }
  return out;
}

void KernelMatrices::validate() const {
  const Eigen::Index n = W.rows();
  if (W.cols() != n || Pz.rows() != n || Pz.cols() != n || Pzeta.rows() != n || Pzeta.cols() != n)
    throw DimensionError("W, Pz and Pzeta must be square matrices of equal size");
  numkit::require_finite(W, "W");
  numkit::require_finite(Pz, "Pz");
  numkit::require_finite(Pzeta, "Pzeta");
}

KernelMatrices kernel_matrices(const PickProblemD2& d) {
  d.validate();
  const auto n = static_cast<Eigen::Index>(d.nodes.size());
  KernelMatrices km{ComplexMatrix(n, n), ComplexMatrix(n, n), ComplexMatrix(n, n)};
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) {
      const auto a = static_cast<std::size_t>(i), b = static_cast<std::size_t>(j);
      km.W(i, j) = 1.0 - std::conj(d.values[a]) * d.values[b];
      km.Pz(i, j) = 1.0 - std::conj(d.nodes[a].z) * d.nodes[b].z;
      km.Pzeta(i, j) = 1.0 - std::conj(d.nodes[a].zeta) * d.nodes[b].zeta;
    }
  return km;
}

namespace {

double residual_of(const ComplexMatrix& k1, const ComplexMatrix& k2, const KernelMatrices& km) {
  if (km.size() == 0) return 0.0;
  return (km.W - k1.cwiseProduct(km.Pz) - k2.cwiseProduct(km.Pzeta)).cwiseAbs().maxCoeff();
}

/// Entrywise closed-form projection onto {K1 o Pz + K2 o Pzeta = W}.
void project_affine(const KernelMatrices& km, ComplexMatrix& k1, ComplexMatrix& k2) {
  const Eigen::Index n = km.size();
  for (Eigen::Index j = 0; j < n; ++j)
    for (Eigen::Index i = 0; i < n; ++i) {
      const Complex x = km.Pz(i, j), y = km.Pzeta(i, j);
      const double denom = std::norm(x) + std::norm(y);
      if (denom == 0.0) continue;
      const Complex r = (km.W(i, j) - k1(i, j) * x - k2(i, j) * y) / denom;
      k1(i, j) += std::conj(x) * r;
      k2(i, j) += std::conj(y) * r;
    }
}

/// Looks for an entry whose single equation has no solution with PSD K1, K2.
std::optional<std::string> scalar_separation(const KernelMatrices& km, double tol) {
  const Eigen::Index n = km.size();
  for (Eigen::Index i = 0; i < n; ++i) {
    const double w = km.W(i, i).real(), a = km.Pz(i, i).real(), b = km.Pzeta(i, i).real();
    const std::string at = "diagonal entry " + std::to_string(i) + ": ";
    if (a >= 0 && b >= 0 && w < -tol)
      return at + "K1_ii*Pz_ii + K2_ii*Pzeta_ii >= 0 for PSD K1, K2 (Pz_ii = " + fmt(a) +
             ", Pzeta_ii = " + fmt(b) + ") but W_ii = " + fmt(w);
    if (a <= 0 && b <= 0 && w > tol)
      return at + "K1_ii*Pz_ii + K2_ii*Pzeta_ii <= 0 for PSD K1, K2 (Pz_ii = " + fmt(a) +
             ", Pzeta_ii = " + fmt(b) + ") but W_ii = " + fmt(w);
  }
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j)
      if (km.Pz(i, j) == Complex(0.0) && km.Pzeta(i, j) == Complex(0.0) && std::abs(km.W(i, j)) > tol)
        return "entry (" + std::to_string(i) + ", " + std::to_string(j) +
               "): Pz and Pzeta vanish but W = " + fmt(std::abs(km.W(i, j)));
  return std::nullopt;
}

AglerCertificate make_certificate(ComplexMatrix k1, ComplexMatrix k2, const KernelMatrices& km) {
  AglerCertificate c;
  c.K1 = numkit::hermitian_part(k1);
  c.K2 = numkit::hermitian_part(k2);
  const CertificateReport r = check_certificate(c.K1, c.K2, km);
  c.residual = r.residual;
  c.eig_min = std::min(r.eig_min_k1, r.eig_min_k2);
  return c;
}

}  // namespace

CertificateReport check_certificate(const ComplexMatrix& k1, const ComplexMatrix& k2, const KernelMatrices& km) {
  km.validate();
  const Eigen::Index n = km.size();
  if (k1.rows() != n || k1.cols() != n || k2.rows() != n || k2.cols() != n)
    throw DimensionError("certificate matrices must match the kernel size " + std::to_string(n));
  CertificateReport r;
  r.residual = residual_of(k1, k2, km);
  r.eig_min_k1 = n == 0 ? 0.0 : numkit::eig_min(k1);
  r.eig_min_k2 = n == 0 ? 0.0 : numkit::eig_min(k2);
  return r;
}

std::string to_string(FeasibilityStatus s) {
  switch (s) {
    case FeasibilityStatus::Feasible: return "feasible";
    case FeasibilityStatus::Infeasible: return "infeasible";
    case FeasibilityStatus::Undetermined: return "undetermined";
  }
  return "undetermined";
}

FeasibilityResult feasibility(const KernelMatrices& km, const FeasibilityOptions& opts) {
  km.validate();
  FeasibilityResult res;
  const Eigen::Index n = km.size();
  if (auto why = scalar_separation(km, opts.tol)) {
    res.status = FeasibilityStatus::Infeasible;
    res.explanation = "scalar separation at " + *why;
    return res;
  }
  if (n == 0) {
    res.status = FeasibilityStatus::Feasible;
    res.certificate = make_certificate(ComplexMatrix(0, 0), ComplexMatrix(0, 0), km);
    return res;
  }

  ComplexMatrix x1 = ComplexMatrix::Zero(n, n), x2 = ComplexMatrix::Zero(n, n);
  ComplexMatrix p1 = x1, p2 = x1, q1 = x1, q2 = x1;
  for (int it = 1; it <= opts.max_iter; ++it) {
    ComplexMatrix y1 = x1 + p1, y2 = x2 + p2;
    project_affine(km, y1, y2);
    p1 += x1 - y1;
    p2 += x2 - y2;

    // the affine iterate satisfies the equations exactly; accept it once PSD
    if (numkit::eig_min(y1) >= -opts.tol && numkit::eig_min(y2) >= -opts.tol) {
      AglerCertificate c = make_certificate(y1, y2, km);
      if (c.residual <= opts.tol && c.eig_min >= -opts.tol) {
        res.status = FeasibilityStatus::Feasible;
        res.iterations = it;
        res.residual = c.residual;
        res.certificate = std::move(c);
        return res;
      }
    }

    x1 = numkit::psd_project(y1 + q1);
    x2 = numkit::psd_project(y2 + q2);
    q1 += y1 - x1;
    q2 += y2 - x2;

    res.residual = residual_of(x1, x2, km);
    res.iterations = it;
    if (res.residual <= opts.tol) {
      AglerCertificate c = make_certificate(x1, x2, km);
      if (c.residual <= opts.tol && c.eig_min >= -opts.tol) {
        res.status = FeasibilityStatus::Feasible;
        res.certificate = std::move(c);
        return res;
      }
    }
  }
  res.status = FeasibilityStatus::Undetermined;
  res.explanation = "no certificate within " + std::to_string(opts.max_iter) +
                    " iterations (last residual " + fmt(res.residual) + ")";
  return res;
}

LurkingResult lurking(const AglerCertificate& cert, const PickProblemD2& d, const LurkingOptions& opts) {
  const KernelMatrices km = kernel_matrices(d);
  const CertificateReport chk = check_certificate(cert.K1, cert.K2, km);
  if (!(chk.residual <= opts.max_residual))
    throw DomainError("certificate residual " + fmt(chk.residual) + " exceeds " + fmt(opts.max_residual),
                      "certificate_residual");
  const ComplexMatrix u1 = numkit::gram_factor(numkit::psd_project(cert.K1));
  const ComplexMatrix u2 = numkit::gram_factor(numkit::psd_project(cert.K2));
  const Eigen::Index n = km.size(), r1 = u1.rows(), r2 = u2.rows(), dim = 1 + r1 + r2;

  ComplexMatrix x(dim, n), y(dim, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    const auto jj = static_cast<std::size_t>(j);
    x(0, j) = 1.0;
    x.block(1, j, r1, 1) = d.nodes[jj].z * u1.col(j);
    x.block(1 + r1, j, r2, 1) = d.nodes[jj].zeta * u2.col(j);
    y(0, j) = d.values[jj];
    y.block(1, j, r1, 1) = u1.col(j);
    y.block(1 + r1, j, r2, 1) = u2.col(j);
  }
  numkit::SpanMap sm = numkit::solve_on_span(x, y);
  LurkingResult out;
  out.colligation = colligation_from_contraction(sm.map, r1, r2);
  out.contraction = std::move(sm.map);
  out.gram_mismatch = sm.gram_mismatch;
  out.clipped = sm.clipped;
  return out;
}

namespace {

template <class F>
auto run_stage(const char* stage, F&& f) {
  try {
    return f();
  } catch (const StageError&) {
    throw;
  } catch (const Error& e) {
    throw StageError(stage, e);
  }
}

}  // namespace

SolveResult solve_G(const PickProblemG& g, const SolveOptions& opts) {
  SolveResult res;
  const PickProblemD2 d2 = run_stage("lift", [&] { return build_symm_data(g); });
  const KernelMatrices km = run_stage("kernels", [&] { return kernel_matrices(d2); });
  FeasibilityResult feas = run_stage("feasibility", [&] { return feasibility(km, opts.feasibility); });
  res.status = feas.status;
  res.iterations = feas.iterations;
  res.explanation = feas.explanation;
  if (feas.status != FeasibilityStatus::Feasible) return res;
  res.certificate = feas.certificate;

  const LurkingResult lr = run_stage("lurking", [&] { return lurking(*feas.certificate, d2, opts.lurking); });
  res.symmetric = run_stage("symmetrize", [&] { return symmetrize(lr.colligation); });
  res.gamma = run_stage("to_gamma", [&] { return to_gamma(*res.symmetric); });
  res.diagnostics.gram_mismatch = lr.gram_mismatch;
  res.diagnostics.clipped = lr.clipped;

  run_stage("diagnostics", [&] {
    for (std::size_t i = 0; i < g.nodes.size(); ++i) {
      const ComplexMatrix v = eval_gamma(*res.gamma, g.nodes[i].s, g.nodes[i].p);
      res.diagnostics.interp_errors.push_back(std::abs(v(0, 0) - g.values[i]));
    }
    if (opts.grid >= 2) res.diagnostics.sup_norm = sup_norm_grid(*res.gamma, opts.grid, opts.allow_boundary);

    std::mt19937_64 rng(opts.seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    auto disk_point = [&] { return std::polar(std::sqrt(unit(rng)), 2.0 * std::numbers::pi * unit(rng)); };
    double sym = 0.0;
    for (int k = 0; k < 25; ++k) {
      const Complex z = disk_point(), zeta = disk_point();
      sym = std::max(sym, (eval_symmetric(*res.symmetric, z, zeta) - eval_symmetric(*res.symmetric, zeta, z))
                              .cwiseAbs()
                              .maxCoeff());
    }
    res.diagnostics.symmetry_error = sym;
    return 0;
  });
  return res;
}

}  // namespace symbidisk
