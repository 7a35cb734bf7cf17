#include <doctest.h>

#include "symbidisk/errors.hpp"
#include "symbidisk/pick.hpp"
#include "test_support.hpp"

using namespace symbidisk;
using namespace symbidisk::testing;

namespace {

const ComplexMatrix& displayed_k() {
  static const ComplexMatrix k = mat({{0.5, 0.5, 0.5}, {0.5, 0.75, 0.25}, {0.5, 0.25, 0.75}});
  return k;
}

PickProblemG example_problem() { return json_io::problem_g_from(load_fixture("worked_problem.json")); }

PickProblemG single(Complex s, Complex p, Complex w) { return PickProblemG{{{s, p}}, {w}}; }

}  // namespace

TEST_CASE("lift_point examples") {
  const LiftedPoint o = lift_point(0.0, 0.0);
  CHECK(o.z == Complex(0));
  CHECK(o.zeta == Complex(0));
  CHECK(o.in_g);

  const LiftedPoint h = lift_point(0.0, 0.5);
  CHECK(std::abs(h.z + kI * kRt2) <= 1e-15);
  CHECK(std::abs(h.zeta - kI * kRt2) <= 1e-15);
  CHECK(h.in_g);

  const LiftedPoint d = lift_point(1.9, 0.9025);
  CHECK(d.z == d.zeta);
  CHECK(std::abs(d.z - 0.95) <= 1e-15);
  CHECK(d.in_g);

  CHECK_FALSE(lift_point(2.0, 1.0).in_g);
}

TEST_CASE("lift_point roots reproduce s and p") {
  Rng rng(41);
  for (int t = 0; t < 200; ++t) {
    const Complex z = random_disk_point(rng, 1.5), w = random_disk_point(rng, 1.5);
    const Complex s = z + w, p = z * w;
    const LiftedPoint l = lift_point(s, p);
    const double scale = std::max(1.0, std::abs(s) + std::abs(p));
    CHECK(std::abs(l.z + l.zeta - s) <= 1e-12 * scale);
    CHECK(std::abs(l.z * l.zeta - p) <= 1e-12 * scale);
    const bool ordered = l.z.real() < l.zeta.real() || (l.z.real() == l.zeta.real() && l.z.imag() <= l.zeta.imag());
    CHECK(ordered);
  }
}

TEST_CASE("build_symm_data examples") {
  const PickProblemD2 d = build_symm_data(example_problem());
  REQUIRE(d.nodes.size() == 3);
  CHECK(d.nodes[0].z == Complex(0));
  CHECK(d.nodes[0].zeta == Complex(0));
  const Complex a = kI * kRt2;
  // the swapped pair appears in both orders
  CHECK(std::abs(d.nodes[1].z - d.nodes[2].zeta) == 0.0);
  CHECK(std::abs(d.nodes[1].zeta - d.nodes[2].z) == 0.0);
  CHECK(std::min(std::abs(d.nodes[1].z - a), std::abs(d.nodes[1].z + a)) <= 1e-15);
  CHECK(std::abs(d.values[0]) == 0.0);
  CHECK(d.values[1] == Complex(0.5));
  CHECK(d.values[2] == Complex(0.5));
  CHECK_NOTHROW(d.validate());

  const PickProblemD2 c = build_symm_data(single(1.9, 0.9025, 0.1));
  REQUIRE(c.nodes.size() == 1);
  CHECK(std::abs(c.nodes[0].z - 0.95) <= 1e-15);
  CHECK(c.values[0] == Complex(0.1));

  CHECK(build_symm_data(PickProblemG{}).nodes.empty());
}

TEST_CASE("build_symm_data merges and rejects repeated nodes") {
  PickProblemG g{{{0.0, 0.5}, {0.0, 0.5}}, {0.5, 0.5}};
  CHECK(build_symm_data(g).nodes.size() == 2);
  g.values[1] = 0.4;
  try {
    build_symm_data(g);
    FAIL("expected conflicting data");
  } catch (const DomainError& e) {
    CHECK(e.code() == "conflicting_data");
  }
}

TEST_CASE("build_symm_data output satisfies the swap invariant") {
  Rng rng(42);
  for (int t = 0; t < 20; ++t) {
    PickProblemG g;
    for (int k = 0; k < 4; ++k) {
      const Complex z = random_disk_point(rng, 0.9), w = random_disk_point(rng, 0.9);
      g.nodes.push_back({z + w, z * w});
      g.values.push_back(random_disk_point(rng, 0.9));
    }
    const PickProblemD2 d = build_symm_data(g);
    CHECK_NOTHROW(d.validate());
    CHECK(d.nodes.size() == 8);
  }
}

TEST_CASE("PickProblemG validation") {
  CHECK_THROWS_AS(single(2.0, 1.0, 0.0).validate(), DomainError);
  PickProblemG g{{{0.0, 0.0}}, {}};
  CHECK_THROWS_AS(g.validate(), DimensionError);
}

TEST_CASE("kernel_matrices examples") {
  const KernelMatrices km = kernel_matrices(build_symm_data(example_problem()));
  const KernelMatrices shown = json_io::kernels_from(load_fixture("worked_kernels.json"));
  CHECK(max_abs(km.W - shown.W) <= 1e-15);
  CHECK(max_abs(km.Pz - shown.Pz) <= 1e-15);
  CHECK(max_abs(km.Pzeta - shown.Pzeta) <= 1e-15);
  CHECK(max_abs(shown.W - mat({{1, 1, 1}, {1, 0.75, 0.75}, {1, 0.75, 0.75}})) == 0.0);
  CHECK(max_abs(shown.Pz - mat({{1, 1, 1}, {1, 0.5, 1.5}, {1, 1.5, 0.5}})) == 0.0);

  const KernelMatrices one = kernel_matrices(build_symm_data(single(0.0, 0.0, 0.0)));
  CHECK(one.W == mat({{1}}));
  CHECK(one.Pz == mat({{1}}));
  CHECK(one.Pzeta == mat({{1}}));
  CHECK(kernel_matrices(build_symm_data(single(0.0, 0.0, 2.0))).W == mat({{-3}}));
}

TEST_CASE("check_certificate examples") {
  const KernelMatrices km = json_io::kernels_from(load_fixture("worked_kernels.json"));
  const CertificateReport r = check_certificate(displayed_k(), displayed_k(), km);
  CHECK(r.residual <= 1e-15);
  CHECK(r.eig_min_k1 >= -1e-15);
  CHECK(r.eig_min_k2 >= -1e-15);

  const Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(displayed_k());
  CHECK(std::abs(es.eigenvalues()(0)) <= 1e-15);
  CHECK(std::abs(es.eigenvalues()(1) - 0.5) <= 1e-15);
  CHECK(std::abs(es.eigenvalues()(2) - 1.5) <= 1e-15);

  const ComplexMatrix zero = ComplexMatrix::Zero(3, 3);
  CHECK(check_certificate(zero, zero, km).residual == 1.0);

  ComplexMatrix bumped = displayed_k();
  bumped(1, 2) += 0.1;
  CHECK(check_certificate(bumped, displayed_k(), km).residual == doctest::Approx(0.1 * 1.5));
  ComplexMatrix bumped_diag = displayed_k();
  bumped_diag(0, 0) += 0.1;
  CHECK(check_certificate(bumped_diag, displayed_k(), km).residual == doctest::Approx(0.1));

  CHECK_THROWS_AS(check_certificate(ComplexMatrix::Zero(2, 2), zero, km), DimensionError);
}

TEST_CASE("feasibility examples") {
  const KernelMatrices km = kernel_matrices(build_symm_data(example_problem()));
  const FeasibilityResult r = feasibility(km);
  CHECK(r.status == FeasibilityStatus::Feasible);
  REQUIRE(r.certificate);
  const CertificateReport c = check_certificate(r.certificate->K1, r.certificate->K2, km);
  CHECK(c.residual <= 1e-10);
  CHECK(std::min(c.eig_min_k1, c.eig_min_k2) >= -1e-10);

  const FeasibilityResult z = feasibility(kernel_matrices(build_symm_data(single(0.0, 0.0, 0.0))));
  CHECK(z.status == FeasibilityStatus::Feasible);
  REQUIRE(z.certificate);
  CHECK(std::abs(z.certificate->K1(0, 0) + z.certificate->K2(0, 0) - 1.0) <= 1e-10);
  CHECK(z.certificate->K1(0, 0).real() >= -1e-10);
  CHECK(z.certificate->K2(0, 0).real() >= -1e-10);

  const FeasibilityResult bad = feasibility(kernel_matrices(build_symm_data(single(0.0, 0.0, 2.0))));
  CHECK(bad.status == FeasibilityStatus::Infeasible);
  CHECK_FALSE(bad.certificate);
  CHECK(bad.explanation.find("separation") != std::string::npos);
}

TEST_CASE("returned certificates are sound on random feasible data") {
  // values of a known Schur function (f = z zeta / 2) are always feasible
  Rng rng(43);
  for (int t = 0; t < 5; ++t) {
    PickProblemG g;
    for (int k = 0; k < 3; ++k) {
      const Complex z = random_disk_point(rng, 0.8), w = random_disk_point(rng, 0.8);
      g.nodes.push_back({z + w, z * w});
      g.values.push_back(0.5 * z * w);
    }
    const KernelMatrices km = kernel_matrices(build_symm_data(g));
    const FeasibilityOptions opts{50000, 1e-10};
    const FeasibilityResult r = feasibility(km, opts);
    CHECK(r.status != FeasibilityStatus::Infeasible);
    if (r.certificate) {
      const CertificateReport c = check_certificate(r.certificate->K1, r.certificate->K2, km);
      CHECK(c.residual <= opts.tol);
      CHECK(std::min(c.eig_min_k1, c.eig_min_k2) >= -opts.tol);
    }
  }
}

TEST_CASE("lurking examples") {
  const PickProblemD2 one = build_symm_data(single(0.0, 0.0, 0.0));
  AglerCertificate half{mat({{0.5}}), mat({{0.5}})};
  const LurkingResult r = lurking(half, one);
  CHECK(std::abs(r.colligation.D(0, 0)) <= 1e-15);
  CHECK(max_abs(r.colligation.C1) <= 1e-15);
  CHECK(max_abs(r.colligation.C2) <= 1e-15);
  CHECK(numkit::op_norm(r.contraction) <= 1.0 + 1e-12);

  const Complex c{0.3, -0.4};
  const double k = (1.0 - std::norm(c)) / 2.0;
  const LurkingResult rc = lurking(AglerCertificate{mat({{k}}), mat({{k}})}, build_symm_data(single(0.0, 0.0, c)));
  CHECK(std::abs(eval_general(rc.colligation, 0.0, 0.0)(0, 0) - c) <= 1e-12);
}

TEST_CASE("lurking with the worked example's certificate") {
  const PickProblemD2 d = build_symm_data(example_problem());
  const LurkingResult r = lurking(AglerCertificate{displayed_k(), displayed_k()}, d);
  CHECK(r.contraction.rows() == 5);
  CHECK(r.contraction.cols() == 5);
  CHECK(r.gram_mismatch <= 1e-10);
  CHECK(numkit::op_norm(r.contraction) <= 1.0 + 1e-12);
  for (std::size_t j = 0; j < d.nodes.size(); ++j)
    CHECK(std::abs(eval_general(r.colligation, d.nodes[j].z, d.nodes[j].zeta)(0, 0) - d.values[j]) <= 1e-9);

  AglerCertificate bad{displayed_k(), displayed_k()};
  bad.K1(0, 0) += 0.1;
  CHECK_THROWS_AS(lurking(bad, d), DomainError);
}

TEST_CASE("the worked example's completions interpolate and realize p and p - s^2/2") {
  const PickProblemG g = example_problem();
  Rng rng(44);
  for (const char* f : {"worked_V1.json", "worked_V2.json"}) {
    const json_io::Json fx = load_fixture(f);
    const ComplexMatrix v = json_io::matrix_from(fx["V"], "V");
    const GammaColligation gam = general_to_gamma(colligation_from_contraction(v, 2, 2));
    for (std::size_t j = 0; j < g.nodes.size(); ++j)
      CHECK(std::abs(eval_gamma(gam, g.nodes[j].s, g.nodes[j].p)(0, 0) - g.values[j]) <= 1e-15);
    const bool is_p = fx["solution"] == "p";
    for (int t = 0; t < 20; ++t) {
      const Complex z = random_disk_point(rng), w = random_disk_point(rng);
      const Complex s = z + w, p = z * w;
      const Complex expect = is_p ? p : p - s * s / 2.0;
      CHECK(std::abs(eval_gamma(gam, s, p)(0, 0) - expect) <= 1e-10);
    }
  }
}

TEST_CASE("solve_G on the worked example") {
  SolveOptions opts;
  opts.grid = 21;
  const SolveResult r = solve_G(example_problem(), opts);
  CHECK(r.status == FeasibilityStatus::Feasible);
  REQUIRE(r.gamma);
  REQUIRE(r.diagnostics.interp_errors.size() == 2);
  for (double e : r.diagnostics.interp_errors) CHECK(e <= 1e-8);
  REQUIRE(r.diagnostics.sup_norm);
  CHECK(r.diagnostics.sup_norm->max <= 1.0 + 1e-6);
  CHECK(r.diagnostics.symmetry_error <= 1e-10);

  // independent re-evaluation of the returned realization
  const PickProblemG g = example_problem();
  for (std::size_t j = 0; j < g.nodes.size(); ++j)
    CHECK(std::abs(eval_gamma(*r.gamma, g.nodes[j].s, g.nodes[j].p)(0, 0) - g.values[j]) <= 1e-8);
  REQUIRE(r.symmetric);
  Rng rng(45);
  for (int t = 0; t < 25; ++t) {
    const Complex z = random_disk_point(rng), w = random_disk_point(rng);
    CHECK(std::abs(eval_symmetric(*r.symmetric, z, w)(0, 0) - eval_symmetric(*r.symmetric, w, z)(0, 0)) <= 1e-10);
    CHECK(std::abs(eval_gamma(*r.gamma, z + w, z * w)(0, 0) - eval_symmetric(*r.symmetric, z, w)(0, 0)) <= 1e-10);
  }
}

TEST_CASE("solve_G on single-node problems") {
  SolveOptions opts;
  opts.grid = 0;
  const SolveResult z = solve_G(single(0.0, 0.0, 0.0), opts);
  CHECK(z.status == FeasibilityStatus::Feasible);
  REQUIRE(z.gamma);
  CHECK(std::abs(eval_gamma(*z.gamma, 0.0, 0.0)(0, 0)) <= 1e-10);

  const SolveResult bad = solve_G(single(0.0, 0.0, 2.0), opts);
  CHECK(bad.status == FeasibilityStatus::Infeasible);
  CHECK_FALSE(bad.gamma);
}

TEST_CASE("solve_G on a random feasible problem interpolates") {
  Rng rng(46);
  PickProblemG g;
  for (int k = 0; k < 3; ++k) {
    const Complex z = random_disk_point(rng, 0.7), w = random_disk_point(rng, 0.7);
    g.nodes.push_back({z + w, z * w});
    g.values.push_back(0.5 * (z + w) * 0.5);
  }
  SolveOptions opts;
  opts.grid = 11;
  const SolveResult r = solve_G(g, opts);
  REQUIRE(r.status == FeasibilityStatus::Feasible);
  for (double e : r.diagnostics.interp_errors) CHECK(e <= 1e-6);
  CHECK(r.diagnostics.sup_norm->max <= 1.0 + 1e-6);
}

TEST_CASE("solve_G failures carry their stage") {
  try {
    solve_G(single(2.0, 1.0, 0.0));
    FAIL("expected a stage error");
  } catch (const StageError& e) {
    CHECK(!e.stage().empty());
  }
}
