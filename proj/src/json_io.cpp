#include "symbidisk/json_io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "symbidisk/errors.hpp"

namespace symbidisk::json_io {

namespace {

void dump_rec(const Json& j, int indent, int depth, std::string& out) {
  auto newline = [&](int d) {
    if (indent <= 0) return;
    out += '\n';
    out.append(static_cast<std::size_t>(indent * d), ' ');
  };
  switch (j.type()) {
    case Json::value_t::object: {
      if (j.empty()) {
        out += "{}";
        return;
      }
      out += '{';
      bool first = true;
      for (auto it = j.begin(); it != j.end(); ++it) {
        if (!first) out += ',';
        first = false;
        newline(depth + 1);
        out += Json(it.key()).dump();
        out += indent > 0 ? ": " : ":";
        dump_rec(it.value(), indent, depth + 1, out);
      }
      newline(depth);
      out += '}';
      return;
    }
    case Json::value_t::array: {
      if (j.empty()) {
        out += "[]";
        return;
      }
      // arrays of scalars stay on one line
      const bool flat = std::all_of(j.begin(), j.end(), [](const Json& e) { return e.is_primitive(); });
      out += '[';
      bool first = true;
      for (const auto& e : j) {
        if (!first) out += flat && indent > 0 ? ", " : ",";
        first = false;
        if (!flat) newline(depth + 1);
        dump_rec(e, indent, depth + 1, out);
      }
      if (!flat) newline(depth);
      out += ']';
      return;
    }
    case Json::value_t::number_float: {
      const double v = j.get<double>();
      if (!std::isfinite(v)) {
        out += "null";
        return;
      }
      char buf[40];
      std::snprintf(buf, sizeof buf, "%.17g", v);
      out += buf;
      return;
    }
    default:
      out += j.dump();
  }
}

const Json& field(const Json& j, const char* key) {
  if (!j.is_object()) throw SchemaError("expected a JSON object");
  auto it = j.find(key);
  if (it == j.end()) throw SchemaError(std::string("missing field '") + key + "'");
  return *it;
}

const Json* optional_field(const Json& j, const char* key) {
  if (!j.is_object()) throw SchemaError("expected a JSON object");
  auto it = j.find(key);
  return it == j.end() ? nullptr : &*it;
}

std::string string_field(const Json& j, const char* key) {
  const Json& v = field(j, key);
  if (!v.is_string()) throw SchemaError(std::string("field '") + key + "' must be a string");
  return v.get<std::string>();
}

Eigen::Index count_field(const Json& j, const char* key) {
  const Json& v = field(j, key);
  if (!v.is_number_integer() || v.get<long long>() < 0)
    throw SchemaError(std::string("field '") + key + "' must be a nonnegative integer");
  return static_cast<Eigen::Index>(v.get<long long>());
}

Eigen::Index nonempty_rows(const Json* j) {
  return (j && j->is_array() && !j->empty()) ? static_cast<Eigen::Index>(j->size()) : -1;
}

Eigen::Index nonempty_cols(const Json* j) {
  if (!j || !j->is_array() || j->empty() || !(*j)[0].is_array()) return -1;
  return static_cast<Eigen::Index>((*j)[0].size());
}

/// First known dimension among the candidates, else 0.
Eigen::Index infer(std::initializer_list<Eigen::Index> candidates) {
  for (Eigen::Index c : candidates)
    if (c >= 0) return c;
  return 0;
}

ComplexMatrix block(const Json& j, const char* key, Eigen::Index rows, Eigen::Index cols) {
  const Json* v = optional_field(j, key);
  if (!v) {
    if (rows == 0 || cols == 0) return ComplexMatrix(rows, cols);
    throw SchemaError(std::string("missing field '") + key + "'");
  }
  return matrix_from(*v, key, rows, cols);
}

Json complex_array(const std::vector<Complex>& v) {
  Json a = Json::array();
  for (Complex c : v) a.push_back(to_json(c));
  return a;
}

}  // namespace

std::string dump(const Json& j, int indent) {
  std::string out;
  dump_rec(j, indent, 0, out);
  return out;
}

Json to_json(Complex c) { return Json::array({c.real(), c.imag()}); }

Complex complex_from(const Json& j, const char* what) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number())
    return {j[0].get<double>(), j[1].get<double>()};
  throw SchemaError(std::string(what) + ": expected a complex number [re, im]");
}

Json to_json(const ComplexMatrix& m) {
  Json rows = Json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (Eigen::Index k = 0; k < m.cols(); ++k) row.push_back(to_json(m(i, k)));
    rows.push_back(std::move(row));
  }
  return rows;
}

ComplexMatrix matrix_from(const Json& j, const char* what, Eigen::Index rows, Eigen::Index cols) {
  if (!j.is_array()) throw SchemaError(std::string(what) + ": expected a matrix (array of rows)");
  const std::string name(what);
  if (j.empty()) {
    const Eigen::Index r = rows >= 0 ? rows : 0, c = cols >= 0 ? cols : 0;
    if (r > 0 && c > 0)
      throw DimensionError(name + " is empty, expected " + std::to_string(r) + "x" + std::to_string(c));
    return ComplexMatrix(r, c);
  }
  const auto r = static_cast<Eigen::Index>(j.size());
  if (!j[0].is_array()) throw SchemaError(name + ": matrix rows must be arrays");
  const auto c = static_cast<Eigen::Index>(j[0].size());
  ComplexMatrix m(r, c);
  for (Eigen::Index i = 0; i < r; ++i) {
    const Json& row = j[static_cast<std::size_t>(i)];
    if (!row.is_array()) throw SchemaError(name + ": matrix rows must be arrays");
    if (static_cast<Eigen::Index>(row.size()) != c) throw DimensionError(name + ": ragged matrix rows");
    for (Eigen::Index k = 0; k < c; ++k) m(i, k) = complex_from(row[static_cast<std::size_t>(k)], what);
  }
  if ((rows >= 0 && r != rows) || (cols >= 0 && c != cols))
    throw DimensionError(name + " has shape " + std::to_string(r) + "x" + std::to_string(c) + ", expected " +
                         std::to_string(rows >= 0 ? rows : r) + "x" + std::to_string(cols >= 0 ? cols : c));
  numkit::require_finite(m, what);
  return m;
}

Json to_json(const GeneralColligation& c) {
  return Json{{"type", "general"}, {"A11", to_json(c.A11)}, {"A12", to_json(c.A12)},
              {"A21", to_json(c.A21)}, {"A22", to_json(c.A22)}, {"B1", to_json(c.B1)},
              {"B2", to_json(c.B2)},   {"C1", to_json(c.C1)},   {"C2", to_json(c.C2)},
              {"D", to_json(c.D)}};
}

Json to_json(const SymmetricColligation& c) {
  return Json{{"type", "symmetric"}, {"A1", to_json(c.A1)}, {"A2", to_json(c.A2)},
              {"B", to_json(c.B)},     {"C", to_json(c.C)},   {"D", to_json(c.D)}};
}

Json to_json(const GammaColligation& c) {
  return Json{{"type", "gamma"},          {"alpha1", to_json(c.alpha1)}, {"alpha2", to_json(c.alpha2)},
              {"beta", to_json(c.beta)},   {"gamma", to_json(c.gamma)},   {"delta", to_json(c.delta)}};
}

Json to_json(const AnyColligation& c) {
  return std::visit([](const auto& v) { return to_json(v); }, c);
}

AnyColligation colligation_from(const Json& j) {
  const std::string type = string_field(j, "type");
  const char* dkey = type == "gamma" ? "delta" : "D";
  const ComplexMatrix d = matrix_from(field(j, dkey), dkey);
  const Eigen::Index y = d.rows(), u = d.cols();
  if (y == 0 || u == 0) throw DimensionError("feedthrough block must be nonempty");
  if (type == "general") {
    const Eigen::Index h1 = infer({nonempty_rows(optional_field(j, "A11")), nonempty_rows(optional_field(j, "B1")),
                                   nonempty_cols(optional_field(j, "C1")), nonempty_cols(optional_field(j, "A21"))});
    const Eigen::Index h2 = infer({nonempty_rows(optional_field(j, "A22")), nonempty_rows(optional_field(j, "B2")),
                                   nonempty_cols(optional_field(j, "C2")), nonempty_cols(optional_field(j, "A12"))});
    GeneralColligation c;
    c.A11 = block(j, "A11", h1, h1);
    c.A12 = block(j, "A12", h1, h2);
    c.A21 = block(j, "A21", h2, h1);
    c.A22 = block(j, "A22", h2, h2);
    c.B1 = block(j, "B1", h1, u);
    c.B2 = block(j, "B2", h2, u);
    c.C1 = block(j, "C1", y, h1);
    c.C2 = block(j, "C2", y, h2);
    c.D = d;
    c.validate();
    return c;
  }
  if (type == "symmetric") {
    const Eigen::Index h = infer({nonempty_rows(optional_field(j, "A1")), nonempty_rows(optional_field(j, "B")),
                                  nonempty_cols(optional_field(j, "C"))});
    SymmetricColligation c;
    c.A1 = block(j, "A1", h, h);
    c.A2 = block(j, "A2", h, h);
    c.B = block(j, "B", h, u);
    c.C = block(j, "C", y, h);
    c.D = d;
    c.validate();
    return c;
  }
  if (type == "gamma") {
    const Eigen::Index h = infer({nonempty_rows(optional_field(j, "alpha1")),
                                  nonempty_rows(optional_field(j, "beta")),
                                  nonempty_cols(optional_field(j, "gamma"))});
    GammaColligation c;
    c.alpha1 = block(j, "alpha1", h, h);
    c.alpha2 = block(j, "alpha2", h, h);
    c.beta = block(j, "beta", h, u);
    c.gamma = block(j, "gamma", y, h);
    c.delta = d;
    c.validate();
    return c;
  }
  throw SchemaError("unknown colligation type '" + type + "'");
}

Json to_json(const Poly2& p) {
  return Json{{"coords", to_string(p.coords())},
              {"deg", Json::array({p.deg_x(), p.deg_y()})},
              {"coeffs", to_json(p.coeffs())}};
}

Poly2 poly_from(const Json& j) {
  const Coords coords = coords_from_string(string_field(j, "coords"));
  const Json& deg = field(j, "deg");
  if (!deg.is_array() || deg.size() != 2 || !deg[0].is_number_integer() || !deg[1].is_number_integer() ||
      deg[0].get<long long>() < 0 || deg[1].get<long long>() < 0)
    throw SchemaError("'deg' must be a pair of nonnegative integers");
  const auto d1 = static_cast<Eigen::Index>(deg[0].get<long long>());
  const auto d2 = static_cast<Eigen::Index>(deg[1].get<long long>());
  return Poly2(coords, matrix_from(field(j, "coeffs"), "coeffs", d1 + 1, d2 + 1));
}

Json to_json(const DetRep& r) {
  return Json{{"form", to_string(r.form)}, {"A1", to_json(r.A1)}, {"A2", to_json(r.A2)},
              {"constant", to_json(r.constant)}};
}

DetRep detrep_from(const Json& j) {
  DetRep r;
  r.form = det_form_from_string(string_field(j, "form"));
  r.A1 = matrix_from(field(j, "A1"), "A1");
  r.A2 = matrix_from(field(j, "A2"), "A2", r.A1.rows(), r.A1.cols());
  const Json* c = optional_field(j, "constant");
  r.constant = c ? complex_from(*c, "constant") : Complex(1.0);
  r.validate();
  return r;
}

Json to_json(const KBlocks& k) { return Json{{"n", k.n}, {"m", k.m}, {"K", to_json(k.K)}}; }

KBlocks kblocks_from(const Json& j) {
  KBlocks k;
  k.n = count_field(j, "n");
  k.m = count_field(j, "m");
  k.K = matrix_from(field(j, "K"), "K", k.n + k.m, k.n + k.m);
  k.validate();
  return k;
}

Json to_json(const PickProblemG& g) {
  Json nodes = Json::array();
  for (const GNode& n : g.nodes) nodes.push_back(Json{{"s", to_json(n.s)}, {"p", to_json(n.p)}});
  return Json{{"nodes", nodes}, {"values", complex_array(g.values)}};
}

PickProblemG problem_g_from(const Json& j) {
  PickProblemG g;
  const Json& nodes = field(j, "nodes");
  const Json& values = field(j, "values");
  if (!nodes.is_array() || !values.is_array()) throw SchemaError("'nodes' and 'values' must be arrays");
  for (const Json& n : nodes) g.nodes.push_back({complex_from(field(n, "s"), "s"), complex_from(field(n, "p"), "p")});
  for (const Json& v : values) g.values.push_back(complex_from(v, "values"));
  if (g.nodes.size() != g.values.size()) throw DimensionError("'nodes' and 'values' differ in length");
  return g;
}

Json to_json(const PickProblemD2& d) {
  Json nodes = Json::array();
  for (const D2Node& n : d.nodes) nodes.push_back(Json{{"z", to_json(n.z)}, {"zeta", to_json(n.zeta)}});
  return Json{{"nodes", nodes}, {"values", complex_array(d.values)}, {"orbits", d.orbits}};
}

PickProblemD2 problem_d2_from(const Json& j) {
  PickProblemD2 d;
  const Json& nodes = field(j, "nodes");
  const Json& values = field(j, "values");
  if (!nodes.is_array() || !values.is_array()) throw SchemaError("'nodes' and 'values' must be arrays");
  for (const Json& n : nodes)
    d.nodes.push_back({complex_from(field(n, "z"), "z"), complex_from(field(n, "zeta"), "zeta")});
  for (const Json& v : values) d.values.push_back(complex_from(v, "values"));
  if (const Json* o = optional_field(j, "orbits")) {
    try {
      d.orbits = o->get<std::vector<std::vector<std::size_t>>>();
    } catch (const nlohmann::json::exception&) {
      throw SchemaError("'orbits' must be an array of index arrays");
    }
  }
  if (d.nodes.size() != d.values.size()) throw DimensionError("'nodes' and 'values' differ in length");
  d.validate();
  return d;
}

Json to_json(const KernelMatrices& km) {
  return Json{{"W", to_json(km.W)}, {"Pz", to_json(km.Pz)}, {"Pzeta", to_json(km.Pzeta)}};
}

KernelMatrices kernels_from(const Json& j) {
  KernelMatrices km;
  km.W = matrix_from(field(j, "W"), "W");
  km.Pz = matrix_from(field(j, "Pz"), "Pz", km.W.rows(), km.W.cols());
  km.Pzeta = matrix_from(field(j, "Pzeta"), "Pzeta", km.W.rows(), km.W.cols());
  km.validate();
  return km;
}

Json to_json(const AglerCertificate& c) {
  return Json{{"K1", to_json(c.K1)}, {"K2", to_json(c.K2)}, {"residual", c.residual}, {"eig_min", c.eig_min}};
}

Json to_json(const ColligationReport& r) {
  return Json{{"op_norm", r.op_norm},
              {"contractive", r.contractive},
              {"dims", Json{{"state", Json::array({r.state_dim_1, r.state_dim_2})},
                            {"inputs", r.inputs},
                            {"outputs", r.outputs}}}};
}

Json to_json(const SupNormReport& r, bool gamma_coords) {
  Json arg = gamma_coords ? Json{{"s", to_json(r.arg_x)}, {"p", to_json(r.arg_y)}}
                          : Json{{"z", to_json(r.arg_x)}, {"zeta", to_json(r.arg_y)}};
  return Json{{"max", r.max}, {"argmax", arg}, {"samples", r.samples}, {"skipped", r.skipped},
              {"flagged", r.flagged}};
}

Json to_json(const VerifyReport& r) {
  return Json{{"residual", r.residual},         {"norm_sum", r.norm_sum},
              {"norm_diff", r.norm_diff},       {"block_norm", r.block_norm},
              {"strict", r.strict},             {"contractivity", to_string(r.contractivity)}};
}

Json to_json(const MinModulusReport& r) {
  return Json{{"min", r.min_modulus}, {"argmin", Json::array({to_json(r.arg_x), to_json(r.arg_y)})}};
}

Json to_json(const CertificateReport& r) {
  return Json{{"residual", r.residual}, {"eig_min_K1", r.eig_min_k1}, {"eig_min_K2", r.eig_min_k2}};
}

Json to_json(const FeasibilityResult& r) {
  Json j{{"status", to_string(r.status)}, {"iterations", r.iterations}, {"residual", r.residual}};
  if (!r.explanation.empty()) j["explanation"] = r.explanation;
  if (r.certificate) j["certificate"] = to_json(*r.certificate);
  return j;
}

Json to_json(const SolveResult& r) {
  Json j{{"status", to_string(r.status)}, {"iterations", r.iterations}};
  if (!r.explanation.empty()) j["explanation"] = r.explanation;
  if (r.certificate) j["certificate"] = to_json(*r.certificate);
  if (r.gamma) j["colligation"] = to_json(*r.gamma);
  if (r.symmetric) j["symmetric_colligation"] = to_json(*r.symmetric);
  if (r.status == FeasibilityStatus::Feasible) {
    const auto& d = r.diagnostics;
    double worst = 0.0;
    for (double e : d.interp_errors) worst = std::max(worst, e);
    Json diag{{"interp_errors", d.interp_errors},
              {"max_interp_error", worst},
              {"symmetry_error", d.symmetry_error},
              {"gram_mismatch", d.gram_mismatch},
              {"clipped", d.clipped}};
    if (d.sup_norm) diag["sup_norm"] = to_json(*d.sup_norm, true);
    j["diagnostics"] = diag;
  }
  return j;
}

}  // namespace symbidisk::json_io
