#include <doctest.h>

#include "symbidisk/errors.hpp"
#include "symbidisk/numkit.hpp"
#include "test_support.hpp"

using namespace symbidisk;
using namespace symbidisk::testing;

namespace {

// Independent oracle for the largest singular value: power iteration on M*M.
double power_iteration_norm(const ComplexMatrix& m) {
  Rng rng(99);
  ComplexVector v = random_matrix(m.cols(), 1, rng);
  double est = 0.0;
  for (int i = 0; i < 5000; ++i) {
    ComplexVector w = m.adjoint() * (m * v);
    const double nw = w.norm();
    if (nw == 0.0) return 0.0;
    v = w / nw;
    est = std::sqrt(nw);
  }
  return est;
}

}  // namespace

TEST_CASE("op_norm examples") {
  CHECK(numkit::op_norm(ComplexMatrix::Zero(2, 2)) == 0.0);
  CHECK(numkit::op_norm(ComplexMatrix::Identity(2, 2)) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(numkit::op_norm(mat({{0, 1}, {0, 0}})) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(numkit::op_norm(ComplexMatrix(0, 0)) == 0.0);
  CHECK(numkit::op_norm(ComplexMatrix(0, 3)) == 0.0);
}

TEST_CASE("op_norm agrees with power iteration and is unitarily invariant") {
  Rng rng(1);
  for (int t = 0; t < 20; ++t) {
    const ComplexMatrix m = random_matrix(4, 3, rng);
    const double n = numkit::op_norm(m);
    CHECK(std::abs(n - power_iteration_norm(m)) <= 1e-10 * n);
    const ComplexMatrix u = numkit::random_unitary(4, rng), w = numkit::random_unitary(3, rng);
    CHECK(std::abs(numkit::op_norm(u * m * w) - n) <= 1e-10);
  }
}

TEST_CASE("psd_project examples") {
  const ComplexMatrix out = numkit::psd_project(mat({{1, 0}, {0, -1}}));
  CHECK(max_abs(out - mat({{1, 0}, {0, 0}})) <= 1e-15);
  CHECK(max_abs(numkit::psd_project(ComplexMatrix::Zero(3, 3))) == 0.0);

  Rng rng(2);
  const ComplexMatrix g = random_matrix(4, 4, rng);
  const ComplexMatrix psd = g * g.adjoint();
  CHECK((numkit::psd_project(psd) - psd).norm() <= 1e-12 * std::max(1.0, psd.norm()));

  CHECK_THROWS_AS(numkit::psd_project(ComplexMatrix::Zero(2, 3)), DimensionError);
}

TEST_CASE("psd_project is idempotent with nonnegative spectrum") {
  Rng rng(3);
  for (int t = 0; t < 20; ++t) {
    const ComplexMatrix h = numkit::hermitian_part(random_matrix(5, 5, rng));
    const ComplexMatrix p = numkit::psd_project(h);
    CHECK(numkit::eig_min(p) >= -1e-12);
    CHECK((numkit::psd_project(p) - p).norm() <= 1e-12);
  }
}

TEST_CASE("gram_factor examples") {
  {
    const ComplexMatrix u = numkit::gram_factor(ComplexMatrix::Identity(2, 2));
    CHECK(u.rows() == 2);
    CHECK(max_abs(u.adjoint() * u - ComplexMatrix::Identity(2, 2)) <= 1e-14);
  }
  {
    const ComplexMatrix k = mat({{1, 1}, {1, 1}});
    const ComplexMatrix u = numkit::gram_factor(k);
    CHECK(u.rows() == 1);
    CHECK(u.cols() == 2);
    CHECK(max_abs(u.adjoint() * u - k) <= 1e-14);
  }
  {
    const ComplexMatrix k = mat({{0.5, 0.5, 0.5}, {0.5, 0.75, 0.25}, {0.5, 0.25, 0.75}});
    const ComplexMatrix u = numkit::gram_factor(k);
    CHECK(u.rows() == 2);
    CHECK(max_abs(u.adjoint() * u - k) <= 1e-10);
    // the worked example's factor is another valid answer
    const ComplexMatrix given_u = json_io::matrix_from(load_fixture("worked_U.json")["U"], "U");
    CHECK(max_abs(given_u.adjoint() * given_u - k) <= 1e-15);
  }
}

TEST_CASE("gram_factor rank and residual on random PSD matrices") {
  Rng rng(4);
  for (Eigen::Index rank = 0; rank <= 4; ++rank) {
    const ComplexMatrix g = random_matrix(rank, 5, rng);
    const ComplexMatrix k = g.adjoint() * g;
    const ComplexMatrix u = numkit::gram_factor(k);
    CHECK(u.rows() == rank);
    CHECK((u.adjoint() * u - k).norm() <= 1e-10 * std::max(1.0, k.norm()));
  }
}

TEST_CASE("gram_factor rejects indefinite input") {
  CHECK_THROWS_AS(numkit::gram_factor(mat({{1, 0}, {0, -1}})), NotPsdError);
  // within tolerance counts as PSD
  CHECK(numkit::gram_factor(mat({{1, 0}, {0, -1e-13}})).rows() == 1);
}

TEST_CASE("solve_on_span examples") {
  {
    const ComplexMatrix i3 = ComplexMatrix::Identity(3, 3);
    const auto sm = numkit::solve_on_span(i3, i3);
    CHECK(max_abs(sm.map - i3) <= 1e-15);
  }
  {
    const ComplexMatrix x = mat({{1}, {0}, {0}});
    const ComplexMatrix y = mat({{0}, {kRt2}, {kRt2}});
    const auto sm = numkit::solve_on_span(x, y);
    CHECK(max_abs(sm.map - y * x.adjoint()) <= 1e-15);
    CHECK(numkit::op_norm(sm.map) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK_FALSE(sm.gram_warning);
  }
}

TEST_CASE("solve_on_span on the worked example's column families") {
  // columns (1; z_j u_j; zeta_j u_j) -> (w_j; u_j; u_j) as displayed
  const Complex a = kI / 2.0, b = kI / (2.0 * std::numbers::sqrt2);
  const ComplexMatrix x = mat({{1, 1, 1}, {0, a, -a}, {0, b, b}, {0, -a, a}, {0, -b, -b}});
  const ComplexMatrix y = mat({{0, 0.5, 0.5}, {kRt2, kRt2, kRt2}, {0, 0.5, -0.5}, {kRt2, kRt2, kRt2}, {0, 0.5, -0.5}});
  const auto sm = numkit::solve_on_span(x, y);
  CHECK(sm.gram_mismatch <= 1e-15);
  CHECK(max_abs(sm.map * x - y) <= 1e-14);
  CHECK(numkit::op_norm(sm.map) <= 1.0 + 1e-14);

  // both displayed completions solve the same equation and are contractions
  for (const char* f : {"worked_V1.json", "worked_V2.json"}) {
    const ComplexMatrix v = json_io::matrix_from(load_fixture(f)["V"], "V");
    CHECK(max_abs(v * x - y) <= 1e-15);
    CHECK(numkit::op_norm(v) <= 1.0 + 1e-15);
  }
}

TEST_CASE("solve_on_span reproduces Y on full-rank isometric families") {
  Rng rng(5);
  for (int t = 0; t < 20; ++t) {
    const ComplexMatrix x = random_matrix(6, 3, rng);
    const ComplexMatrix w = numkit::random_unitary(6, rng);
    const ComplexMatrix y = w * x;
    const auto sm = numkit::solve_on_span(x, y);
    CHECK(sm.gram_mismatch <= 1e-12);
    CHECK(max_abs(sm.map * x - y) <= 1e-10);
    CHECK(numkit::op_norm(sm.map) <= 1.0 + 1e-12);
  }
}

TEST_CASE("solve_on_span clips and reports a Gram mismatch") {
  const ComplexMatrix x = mat({{1}, {0}});
  const ComplexMatrix y = mat({{2}, {0}});
  const auto sm = numkit::solve_on_span(x, y);
  CHECK(sm.gram_warning);
  CHECK(sm.gram_mismatch == doctest::Approx(3.0));
  CHECK(sm.clipped == doctest::Approx(1.0));
  CHECK(numkit::op_norm(sm.map) == doctest::Approx(1.0));
  CHECK_THROWS_AS(numkit::solve_on_span(ComplexMatrix::Zero(2, 2), ComplexMatrix::Zero(2, 3)), DimensionError);
}
