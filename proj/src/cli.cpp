#include "symbidisk/cli.hpp"

#include <fstream>
#include <functional>
#include <iostream>
#include <iterator>
#include <map>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "symbidisk/detrep.hpp"
#include "symbidisk/errors.hpp"
#include "symbidisk/json_io.hpp"
#include "symbidisk/pick.hpp"
#include "symbidisk/poly2.hpp"
#include "symbidisk/realize.hpp"

namespace symbidisk::cli {

namespace {

using json_io::Json;

struct Flags {
  std::string input = "-";
  double tol = 1e-10;
  int max_iter = 50000;
  int grid = 41;
  std::uint64_t seed = 0;
  bool allow_boundary = false;
  std::string x, y;        // point coordinates "re,im"
  std::string to;          // poly-convert target
  std::string form;        // det-poly form
  std::string target;      // detrep-verify target polynomial
  std::optional<double> radius;
};

bool is_input_code(const std::string& code) {
  return code == "schema_violation" || code == "dimension_mismatch" || code == "malformed_json" ||
         code == "io_error" || code == "usage";
}

Json parse_text(const std::string& text, const std::string& origin) {
  try {
    return Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error("malformed_json", origin + ": " + e.what());
  }
}

/// Inline JSON (starting with '{' or '['), '-' for stdin, or a file path.
Json load(const std::string& spec) {
  const auto first = spec.find_first_not_of(" \t\r\n");
  if (first != std::string::npos && (spec[first] == '{' || spec[first] == '[')) return parse_text(spec, "inline input");
  if (spec == "-") {
    std::string text((std::istreambuf_iterator<char>(std::cin)), std::istreambuf_iterator<char>());
    return parse_text(text, "standard input");
  }
  std::ifstream in(spec);
  if (!in) throw Error("io_error", "cannot open input file '" + spec + "'");
  std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return parse_text(text, spec);
}

Complex parse_complex_flag(const std::string& s, const char* name) {
  std::istringstream in(s);
  double re = 0, im = 0;
  char comma = 0;
  if (!(in >> re)) throw Error("usage", std::string("--") + name + " expects re[,im]");
  if (in >> comma) {
    if (comma != ',' || !(in >> im)) throw Error("usage", std::string("--") + name + " expects re[,im]");
  }
  return {re, im};
}

/// The object under `key` when present, else the document itself.
const Json& unwrap(const Json& doc, const char* key) {
  if (doc.is_object()) {
    auto it = doc.find(key);
    if (it != doc.end()) return *it;
  }
  return doc;
}

Complex point_coord(const Json& doc, const std::string& flag, const char* key, const char* flag_name) {
  if (!flag.empty()) return parse_complex_flag(flag, flag_name);
  if (doc.is_object() && doc.contains(key)) return json_io::complex_from(doc[key], key);
  throw SchemaError(std::string("missing point coordinate '") + key + "' (field or --" + flag_name + ")");
}

Json matrix_value(const ComplexMatrix& m) {
  if (m.rows() == 1 && m.cols() == 1) return json_io::to_json(m(0, 0));
  return json_io::to_json(m);
}

bool has_field(const Json& j, const char* key) { return j.is_object() && j.contains(key); }

KernelMatrices kernels_for(const Json& doc) {
  if (has_field(doc, "W")) return json_io::kernels_from(doc);
  const Json& prob = unwrap(doc, "problem");
  if (has_field(prob, "nodes") && prob["nodes"].is_array() && !prob["nodes"].empty() &&
      has_field(prob["nodes"][0], "z"))
    return kernel_matrices(json_io::problem_d2_from(prob));
  if (has_field(doc, "d2_problem")) return kernel_matrices(json_io::problem_d2_from(doc["d2_problem"]));
  return kernel_matrices(build_symm_data(json_io::problem_g_from(prob)));
}

using Handler = std::function<Json(const Json&, const Flags&)>;

std::map<std::string, std::pair<std::string, Handler>> handlers() {
  std::map<std::string, std::pair<std::string, Handler>> h;

  h["eval-d2"] = {"evaluate a bidisk colligation at (z, zeta)", [](const Json& doc, const Flags& f) {
    const AnyColligation c = json_io::colligation_from(unwrap(doc, "colligation"));
    const Complex z = point_coord(doc, f.x, "z", "z"), zeta = point_coord(doc, f.y, "zeta", "zeta");
    const EvalOptions opts{f.allow_boundary};
    if (auto g = std::get_if<GeneralColligation>(&c)) return Json{{"value", matrix_value(eval_general(*g, z, zeta, opts))}};
    if (auto s = std::get_if<SymmetricColligation>(&c)) return Json{{"value", matrix_value(eval_symmetric(*s, z, zeta, opts))}};
    throw SchemaError("eval-d2 expects a general or symmetric colligation");
  }};
  h["eval-g"] = {"evaluate a gamma colligation at (s, p)", [](const Json& doc, const Flags& f) {
    const AnyColligation c = json_io::colligation_from(unwrap(doc, "colligation"));
    const auto* g = std::get_if<GammaColligation>(&c);
    if (!g) throw SchemaError("eval-g expects a gamma colligation");
    const Complex s = point_coord(doc, f.x, "s", "s"), p = point_coord(doc, f.y, "p", "p");
    return Json{{"value", matrix_value(eval_gamma(*g, s, p, EvalOptions{f.allow_boundary}))}};
  }};
  h["symmetrize"] = {"general colligation -> symmetric colligation", [](const Json& doc, const Flags&) {
    const AnyColligation c = json_io::colligation_from(unwrap(doc, "colligation"));
    const auto* g = std::get_if<GeneralColligation>(&c);
    if (!g) throw SchemaError("symmetrize expects a general colligation");
    return json_io::to_json(symmetrize(*g));
  }};
  h["to-gamma"] = {"symmetric colligation -> gamma colligation", [](const Json& doc, const Flags&) {
    const AnyColligation c = json_io::colligation_from(unwrap(doc, "colligation"));
    const auto* s = std::get_if<SymmetricColligation>(&c);
    if (!s) throw SchemaError("to-gamma expects a symmetric colligation");
    return json_io::to_json(to_gamma(*s));
  }};
  h["general-to-gamma"] = {"general colligation -> gamma colligation", [](const Json& doc, const Flags&) {
    const AnyColligation c = json_io::colligation_from(unwrap(doc, "colligation"));
    const auto* g = std::get_if<GeneralColligation>(&c);
    if (!g) throw SchemaError("general-to-gamma expects a general colligation");
    return json_io::to_json(general_to_gamma(*g));
  }};
  h["check-colligation"] = {"operator norm and dimensions of a colligation", [](const Json& doc, const Flags&) {
    return json_io::to_json(check_colligation(json_io::colligation_from(unwrap(doc, "colligation"))));
  }};
  h["supnorm"] = {"sampled supremum norm of a transfer function", [](const Json& doc, const Flags& f) {
    const AnyColligation c = json_io::colligation_from(unwrap(doc, "colligation"));
    return json_io::to_json(sup_norm_grid(c, f.grid, f.allow_boundary),
                            std::holds_alternative<GammaColligation>(c));
  }};
  h["detrep-from-k"] = {"determinantal representation on G from a contraction K", [](const Json& doc, const Flags&) {
    const KBlocks k = json_io::kblocks_from(doc);
    const Complex constant = has_field(doc, "constant") ? json_io::complex_from(doc["constant"], "constant") : 1.0;
    return json_io::to_json(from_K(k, constant));
  }};
  h["detrep-verify"] = {"compare a representation with a target polynomial", [](const Json& doc, const Flags& f) {
    const DetRep r = json_io::detrep_from(unwrap(doc, "rep"));
    Json target;
    if (!f.target.empty())
      target = load(f.target);
    else if (has_field(doc, "target"))
      target = doc["target"];
    else
      throw SchemaError("detrep-verify needs a target polynomial (field 'target' or --target)");
    return json_io::to_json(verify(r, json_io::poly_from(target)));
  }};
  h["detrep-rescale"] = {"divide a representation by R > 1", [](const Json& doc, const Flags& f) {
    const DetRep r = json_io::detrep_from(unwrap(doc, "rep"));
    double radius = 0.0;
    if (f.radius)
      radius = *f.radius;
    else if (has_field(doc, "R") && doc["R"].is_number())
      radius = doc["R"].get<double>();
    else
      throw SchemaError("detrep-rescale needs R (field 'R' or --R)");
    return json_io::to_json(strict_rescale(r, radius));
  }};
  h["poly-convert"] = {"convert a polynomial between zzeta, sp and sigmae", [](const Json& doc, const Flags& f) {
    const Poly2 p = json_io::poly_from(unwrap(doc, "poly"));
    std::string to = f.to;
    if (to.empty() && has_field(doc, "to") && doc["to"].is_string()) to = doc["to"].get<std::string>();
    if (to.empty()) throw SchemaError("poly-convert needs a target (field 'to' or --to)");
    return json_io::to_json(convert(p, coords_from_string(to)));
  }};
  h["det-poly"] = {"coefficients of a determinantal polynomial", [](const Json& doc, const Flags& f) {
    if (has_field(doc, "K")) {
      if (!f.form.empty() && f.form != "sigmae") {
        const DetRep r = from_K(json_io::kblocks_from(doc));
        return json_io::to_json(det_poly(r, det_form_from_string(f.form)));
      }
      return json_io::to_json(det_poly(json_io::kblocks_from(doc)));
    }
    const DetRep r = json_io::detrep_from(unwrap(doc, "rep"));
    if (f.form == "sigmae") throw SchemaError("form sigmae needs K blocks ({\"n\", \"m\", \"K\"})");
    return json_io::to_json(det_poly(r, f.form.empty() ? r.form : det_form_from_string(f.form)));
  }};
  h["pick-lift"] = {"lift (s, p) points to the bidisk", [](const Json& doc, const Flags&) {
    auto lifted = [](Complex s, Complex p) {
      const LiftedPoint lp = lift_point(s, p);
      return Json{{"z", json_io::to_json(lp.z)}, {"zeta", json_io::to_json(lp.zeta)}, {"in_G", lp.in_g}};
    };
    const Json& prob = unwrap(doc, "problem");
    if (has_field(prob, "nodes")) {
      const PickProblemG g = json_io::problem_g_from(prob);
      Json pts = Json::array();
      for (const GNode& n : g.nodes) pts.push_back(lifted(n.s, n.p));
      return Json{{"points", pts}, {"d2_problem", json_io::to_json(build_symm_data(g))}};
    }
    const Complex s = json_io::complex_from(doc.value("s", Json()), "s");
    const Complex p = json_io::complex_from(doc.value("p", Json()), "p");
    return Json{{"points", Json::array({lifted(s, p)})}};
  }};
  h["pick-kernels"] = {"Pick kernel matrices W, Pz, Pzeta", [](const Json& doc, const Flags&) {
    const Json& prob = unwrap(doc, "problem");
    PickProblemD2 d;
    if (has_field(doc, "d2_problem"))
      d = json_io::problem_d2_from(doc["d2_problem"]);
    else if (has_field(prob, "nodes") && prob["nodes"].is_array() && !prob["nodes"].empty() &&
             has_field(prob["nodes"][0], "z"))
      d = json_io::problem_d2_from(prob);
    else
      d = build_symm_data(json_io::problem_g_from(prob));
    Json out = json_io::to_json(kernel_matrices(d));
    out["d2_problem"] = json_io::to_json(d);
    return out;
  }};
  h["pick-feas"] = {"search for an Agler certificate", [](const Json& doc, const Flags& f) {
    return json_io::to_json(feasibility(kernels_for(doc), FeasibilityOptions{f.max_iter, f.tol}));
  }};
  h["pick-check"] = {"residual and eigenvalues of a certificate", [](const Json& doc, const Flags&) {
    const Json& cert = unwrap(doc, "certificate");
    const KernelMatrices km = kernels_for(doc);
    const ComplexMatrix k1 = json_io::matrix_from(json_io::Json(cert.value("K1", Json())), "K1", km.size(), km.size());
    const ComplexMatrix k2 = json_io::matrix_from(json_io::Json(cert.value("K2", Json())), "K2", km.size(), km.size());
    return json_io::to_json(check_certificate(k1, k2, km));
  }};
  h["pick-solve"] = {"solve a Nevanlinna-Pick problem on G", [](const Json& doc, const Flags& f) {
    SolveOptions opts;
    opts.feasibility = {f.max_iter, f.tol};
    opts.grid = f.grid;
    opts.seed = f.seed;
    opts.allow_boundary = f.allow_boundary;
    Json out = json_io::to_json(solve_G(json_io::problem_g_from(unwrap(doc, "problem")), opts));
    out["seed"] = f.seed;
    return out;
  }};
  return h;
}

void emit_error(std::ostream& out, std::ostream& err, const std::string& code, const std::string& message) {
  out << json_io::dump(Json{{"error", Json{{"code", code}, {"message", message}}}}) << "\n";
  err << "error [" << code << "]: " << message << "\n";
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Schur-class realizations, determinantal representations and Pick interpolation on the "
               "symmetrized bidisk",
               "symbidisk"};
  app.require_subcommand(1, 1);
  Flags flags;
  const auto table = handlers();
  std::string chosen;
  for (const auto& [name, entry] : table) {
    CLI::App* sub = app.add_subcommand(name, entry.first);
    sub->add_option("input", flags.input, "JSON file, inline JSON, or - for stdin")->capture_default_str();
    sub->add_option("--tol", flags.tol, "feasibility tolerance")->capture_default_str();
    sub->add_option("--max-iter", flags.max_iter, "alternating projection iterations")->capture_default_str();
    sub->add_option("--grid", flags.grid, "sampling grid size per axis")->capture_default_str();
    sub->add_option("--seed", flags.seed, "seed for randomized probes")->capture_default_str();
    sub->add_flag("--allow-boundary", flags.allow_boundary, "permit points on the closed domain boundary");
    if (name == "eval-d2") {
      sub->add_option("--z", flags.x, "z as re,im");
      sub->add_option("--zeta", flags.y, "zeta as re,im");
    } else if (name == "eval-g") {
      sub->add_option("--s", flags.x, "s as re,im");
      sub->add_option("--p", flags.y, "p as re,im");
    } else if (name == "poly-convert") {
      sub->add_option("--to", flags.to, "zzeta | sp | sigmae");
    } else if (name == "det-poly") {
      sub->add_option("--form", flags.form, "d2 | g | sigmae");
    } else if (name == "detrep-verify") {
      sub->add_option("--target", flags.target, "target polynomial (file or inline JSON)");
    } else if (name == "detrep-rescale") {
      sub->add_option("--R", flags.radius, "rescaling radius R > 1");
    }
    sub->callback([&chosen, n = name] { chosen = n; });
  }

  std::vector<std::string> argv(args.rbegin(), args.rend());
  try {
    app.parse(argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    emit_error(out, err, "usage", e.what());
    return 2;
  }

  try {
    const Json doc = load(flags.input);
    const Json result = table.at(chosen).second(doc, flags);
    out << json_io::dump(result) << "\n";
    return 0;
  } catch (const Error& e) {
    emit_error(out, err, e.code(), e.what());
    return is_input_code(e.code()) ? 2 : 1;
  } catch (const nlohmann::json::exception& e) {
    emit_error(out, err, "schema_violation", e.what());
    return 2;
  } catch (const std::exception& e) {
    emit_error(out, err, "internal_error", e.what());
    return 1;
  }
}

}  // namespace symbidisk::cli
