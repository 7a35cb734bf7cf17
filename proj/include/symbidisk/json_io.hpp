#pragma once

#include <string>

#include <json.hpp>

#include "symbidisk/detrep.hpp"
#include "symbidisk/pick.hpp"
#include "symbidisk/poly2.hpp"
#include "symbidisk/realize.hpp"

// JSON wire formats. Complex numbers are [re, im] pairs (a bare number is
// accepted on input as a real value); matrices are row-major nested arrays of
// complex numbers. Malformed documents raise SchemaError, inconsistent shapes
// DimensionError.
namespace symbidisk::json_io {

using Json = nlohmann::json;

/// Serializes with every double printed to 17 significant digits.
std::string dump(const Json& j, int indent = 2);

Json to_json(Complex c);
Complex complex_from(const Json& j, const char* what = "value");

Json to_json(const ComplexMatrix& m);
/// Empty arrays take the expected shape when it is known (>= 0).
ComplexMatrix matrix_from(const Json& j, const char* what, Eigen::Index rows = -1, Eigen::Index cols = -1);

Json to_json(const GeneralColligation& c);
Json to_json(const SymmetricColligation& c);
Json to_json(const GammaColligation& c);
Json to_json(const AnyColligation& c);
/// Dispatches on the "type" field: "general", "symmetric" or "gamma".
AnyColligation colligation_from(const Json& j);

Json to_json(const Poly2& p);
Poly2 poly_from(const Json& j);

Json to_json(const DetRep& r);
DetRep detrep_from(const Json& j);
Json to_json(const KBlocks& k);
KBlocks kblocks_from(const Json& j);

Json to_json(const PickProblemG& g);
PickProblemG problem_g_from(const Json& j);
Json to_json(const PickProblemD2& d);
PickProblemD2 problem_d2_from(const Json& j);
Json to_json(const KernelMatrices& km);
KernelMatrices kernels_from(const Json& j);
Json to_json(const AglerCertificate& c);

Json to_json(const ColligationReport& r);
Json to_json(const SupNormReport& r, bool gamma_coords);
Json to_json(const VerifyReport& r);
Json to_json(const MinModulusReport& r);
Json to_json(const CertificateReport& r);
Json to_json(const FeasibilityResult& r);
Json to_json(const SolveResult& r);

}  // namespace symbidisk::json_io
