#include "symbidisk/detrep.hpp"

#include <cmath>
#include <string>

#include "symbidisk/errors.hpp"

namespace symbidisk {

std::string to_string(DetForm f) { return f == DetForm::D2 ? "d2" : "g"; }

DetForm det_form_from_string(const std::string& s) {
  if (s == "d2") return DetForm::D2;
  if (s == "g") return DetForm::G;
  throw SchemaError("unknown determinantal form '" + s + "'");
}

std::string to_string(Contractivity c) {
  switch (c) {
    case Contractivity::Strict: return "strict";
    case Contractivity::Boundary: return "boundary";
    case Contractivity::NotContractive: return "not_contractive";
  }
  return "boundary";
}

void DetRep::validate() const {
  if (A1.rows() != A1.cols() || A2.rows() != A2.cols() || A1.rows() != A2.rows())
    throw DimensionError("A1 and A2 must be square matrices of equal size");
  numkit::require_finite(A1, "A1");
  numkit::require_finite(A2, "A2");
  if (constant == Complex(0.0))
    throw DomainError("determinantal representation needs a nonzero constant", "zero_constant");
}

ComplexMatrix DetRep::block_matrix() const {
  ComplexMatrix m(2 * size(), 2 * size());
  m << A1, A2, A2, A1;
  return m;
}

void KBlocks::validate() const {
  if (n < 0 || m < 0 || K.rows() != n + m || K.cols() != n + m)
    throw DimensionError("K must be (n+m)x(n+m) with n=" + std::to_string(n) + ", m=" + std::to_string(m));
  numkit::require_finite(K, "K");
}

Complex det_value(const DetRep& rep, DetForm form, Complex x, Complex y) {
  const Eigen::Index l = rep.size();
  if (l == 0) return rep.constant;
  if (form == DetForm::D2) {
    ComplexMatrix t = rep.block_matrix();
    t.leftCols(l) *= -x;
    t.rightCols(l) *= -y;
    t.diagonal().array() += 1.0;
    return rep.constant * t.partialPivLu().determinant();
  }
  ComplexMatrix t = -x * rep.A1 + y * ((rep.A1 + rep.A2) * (rep.A1 - rep.A2));
  t.diagonal().array() += 1.0;
  return rep.constant * t.partialPivLu().determinant();
}

Poly2 det_poly(const DetRep& rep, DetForm form) {
  rep.validate();
  const int l = static_cast<int>(rep.size());
  return interpolate_on_torus([&](Complex x, Complex y) { return det_value(rep, form, x, y); }, l, l,
                              form == DetForm::D2 ? Coords::ZZeta : Coords::SP);
}

Poly2 det_poly(const DetRep& rep) { return det_poly(rep, rep.form); }

Poly2 det_poly(const KBlocks& k) {
  k.validate();
  const Eigen::Index n = k.n, m = k.m;
  auto value = [&](Complex sigma, Complex e) {
    if (n + m == 0) return Complex(1.0);
    ComplexMatrix t = k.K;
    t.leftCols(n) *= -sigma;
    t.rightCols(m) *= -e;
    t.diagonal().array() += 1.0;
    return t.partialPivLu().determinant();
  };
  return interpolate_on_torus(value, static_cast<int>(n), static_cast<int>(m), Coords::SigmaE);
}

DetRep from_K(const KBlocks& k, Complex constant) {
  k.validate();
  const double norm = numkit::op_norm(k.K);
  if (norm > 1.0 + 1e-10)
    throw NotContractiveError("K is not a contraction (norm " + std::to_string(norm) + ")", norm);
  const Eigen::Index n = k.n, m = k.m, l = n + 2 * m;
  DetRep r;
  r.form = DetForm::G;
  r.constant = constant;
  r.A1 = ComplexMatrix::Zero(l, l);
  r.A1.block(0, 0, n, n) = 0.5 * k.K11();
  r.A1.block(0, n + m, n, m) = -0.5 * k.K12();
  r.A1.block(n, 0, m, n) = 0.5 * k.K21();
  r.A1.block(n, n + m, m, m) = -0.5 * k.K22();
  r.A2 = r.A1;
  r.A1.block(n + m, n, m, m).diagonal().setConstant(-0.5);
  r.A2.block(n + m, n, m, m).diagonal().setConstant(0.5);
  r.validate();
  return r;
}

DetRep g_rep_to_d2_rep(const DetRep& r) {
  DetRep out = r;
  out.form = DetForm::D2;
  return out;
}

VerifyReport verify(const DetRep& r, const Poly2& target) {
  r.validate();
  const Coords expected = r.form == DetForm::D2 ? Coords::ZZeta : Coords::SP;
  if (target.coords() != expected)
    throw DomainError("target must be in " + to_string(expected) + " coordinates for form " + to_string(r.form),
                      "coords_mismatch");
  VerifyReport rep;
  const Poly2 got = det_poly(r);
  const double scale = target.max_abs_coeff();
  const double diff = max_coeff_diff(got, target);
  rep.residual = scale > 0 ? diff / scale : diff;
  rep.norm_sum = numkit::op_norm(r.A1 + r.A2);
  rep.norm_diff = numkit::op_norm(r.A1 - r.A2);
  rep.block_norm = numkit::op_norm(r.block_matrix());
  if (rep.block_norm < 1.0 - 1e-10)
    rep.contractivity = Contractivity::Strict;
  else if (rep.block_norm <= 1.0 + 1e-10)
    rep.contractivity = Contractivity::Boundary;
  else
    rep.contractivity = Contractivity::NotContractive;
  rep.strict = rep.contractivity == Contractivity::Strict;
  return rep;
}

DetRep strict_rescale(const DetRep& r, double radius) {
  if (!(radius > 1.0)) throw DomainError("rescaling radius must exceed 1", "bad_radius");
  r.validate();
  DetRep out = r;
  out.A1 /= radius;
  out.A2 /= radius;
  return out;
}

}  // namespace symbidisk
