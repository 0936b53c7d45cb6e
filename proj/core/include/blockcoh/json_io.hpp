#pragma once

// JSON encodings.
//
//   complex scalar   [re, im]
//   matrix           row-major array of rows of complex scalars
//   decomposition    {"dim": d, "projectors": [matrix, ...]}
//   POVM             {"dim": d, "elements": [matrix, ...]}
//   partition        {"groups": [[indices], ...]}
//
// Parse failures throw Error(ParseError); validation failures carry the
// validator's own ErrorKind.

#include <nlohmann/json.hpp>

#include "blockcoh/decompositions.hpp"
#include "blockcoh/property_suite.hpp"
#include "blockcoh/spectral.hpp"

namespace blockcoh {

using Json = nlohmann::json;

Json matrix_to_json(const ComplexMatrix& m);
ComplexMatrix matrix_from_json(const Json& j);

/// Accepts a bare matrix or an object with a "matrix" or "state" member.
DensityMatrix density_from_json(const Json& j, const Tolerances& tol = {});

Json decomposition_to_json(const ProjectiveDecomposition& p);
ProjectiveDecomposition decomposition_from_json(const Json& j, const Tolerances& tol = {});

Json povm_to_json(const Povm& e);
Povm povm_from_json(const Json& j, const Tolerances& tol = {});

Json partition_to_json(const Partition& p);
/// `outcomes` is the size of the index set the groups must cover.
Partition partition_from_json(const Json& j, std::size_t outcomes);

/// {"master_seed", "config", "checks": [...]}; elapsed times are included
/// only when `include_timing` is set so reports compare bytewise otherwise.
Json report_to_json(const SuiteReport& report, bool include_timing = true);
Json record_to_json(const CheckRecord& rec, bool include_timing = true);

/// Parses text, mapping nlohmann parse errors to Error(ParseError).
Json parse_json(std::string_view text);

}  // namespace blockcoh
