#include "blockcoh/json_io.hpp"

#include <string>

#include "blockcoh/errors.hpp"

namespace blockcoh {

namespace {

[[noreturn]] void parse_fail(const std::string& what) { throw Error(ErrorKind::ParseError, what); }

Complex scalar_from_json(const Json& j) {
  if (j.is_number()) return Complex(j.get<double>(), 0.0);
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number()) {
    parse_fail("complex scalar must be [re, im]");
  }
  return Complex(j[0].get<double>(), j[1].get<double>());
}

std::vector<ComplexMatrix> matrices_from(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key) || !j[key].is_array()) {
    parse_fail(std::string("expected an object with a \"") + key + "\" array");
  }
  std::vector<ComplexMatrix> mats;
  for (const auto& m : j[key]) mats.push_back(matrix_from_json(m));
  if (j.contains("dim")) {
    if (!j["dim"].is_number_integer()) parse_fail("\"dim\" must be an integer");
    const auto d = j["dim"].get<Index>();
    for (std::size_t i = 0; i < mats.size(); ++i) {
      if (mats[i].rows() != d) {
        throw Error(ErrorKind::DimensionMismatch,
                    std::string(key) + " entry " + std::to_string(i) + " has dimension " +
                        std::to_string(mats[i].rows()) + " but \"dim\" is " + std::to_string(d),
                    std::nullopt, std::nullopt, i);
      }
    }
  }
  return mats;
}

}  // namespace

Json matrix_to_json(const ComplexMatrix& m) {
  Json rows = Json::array();
  for (Index r = 0; r < m.rows(); ++r) {
    Json row = Json::array();
    for (Index c = 0; c < m.cols(); ++c) row.push_back({m(r, c).real(), m(r, c).imag()});
    rows.push_back(std::move(row));
  }
  return rows;
}

ComplexMatrix matrix_from_json(const Json& j) {
  if (!j.is_array() || j.empty()) parse_fail("matrix must be a non-empty array of rows");
  const std::size_t rows = j.size();
  if (!j[0].is_array()) parse_fail("matrix rows must be arrays");
  const std::size_t cols = j[0].size();
  ComplexMatrix m(static_cast<Index>(rows), static_cast<Index>(cols));
  for (std::size_t r = 0; r < rows; ++r) {
    if (!j[r].is_array() || j[r].size() != cols) parse_fail("matrix rows have unequal lengths");
    for (std::size_t c = 0; c < cols; ++c) {
      m(static_cast<Index>(r), static_cast<Index>(c)) = scalar_from_json(j[r][c]);
    }
  }
  return m;
}

DensityMatrix density_from_json(const Json& j, const Tolerances& tol) {
  if (j.is_object()) {
    for (const char* key : {"matrix", "state"}) {
      if (j.contains(key)) return validate_density(matrix_from_json(j[key]), tol);
    }
    parse_fail("state object needs a \"matrix\" member");
  }
  return validate_density(matrix_from_json(j), tol);
}

Json decomposition_to_json(const ProjectiveDecomposition& p) {
  Json projectors = Json::array();
  for (const auto& m : p.projectors()) projectors.push_back(matrix_to_json(m));
  return Json{{"dim", p.dim()}, {"projectors", std::move(projectors)}};
}

ProjectiveDecomposition decomposition_from_json(const Json& j, const Tolerances& tol) {
  return validate_decomposition(matrices_from(j, "projectors"), tol);
}

Json povm_to_json(const Povm& e) {
  Json elements = Json::array();
  for (const auto& m : e.elements()) elements.push_back(matrix_to_json(m));
  return Json{{"dim", e.dim()}, {"elements", std::move(elements)}};
}

Povm povm_from_json(const Json& j, const Tolerances& tol) {
  return validate_povm(matrices_from(j, "elements"), tol);
}

Json partition_to_json(const Partition& p) { return Json{{"groups", p.groups()}}; }

Partition partition_from_json(const Json& j, std::size_t outcomes) {
  if (!j.is_object() || !j.contains("groups") || !j["groups"].is_array()) {
    parse_fail("partition must be {\"groups\": [[indices], ...]}");
  }
  std::vector<std::vector<std::size_t>> groups;
  for (const auto& g : j["groups"]) {
    if (!g.is_array()) parse_fail("partition groups must be arrays");
    std::vector<std::size_t> group;
    for (const auto& idx : g) {
      if (!idx.is_number_unsigned() && !(idx.is_number_integer() && idx.get<long long>() >= 0)) {
        parse_fail("partition indices must be non-negative integers");
      }
      group.push_back(idx.get<std::size_t>());
    }
    groups.push_back(std::move(group));
  }
  return Partition::validated(std::move(groups), outcomes);
}

Json record_to_json(const CheckRecord& rec, bool include_timing) {
  Json j{{"name", rec.name},
         {"trials", rec.trials},
         {"failures", rec.failures},
         {"worst_violation", rec.worst_violation ? Json(*rec.worst_violation) : Json(nullptr)},
         {"worst_case_seed", rec.worst_case_seed}};
  if (!rec.diagnostics.empty()) j["diagnostics"] = rec.diagnostics;
  if (include_timing) j["elapsed"] = rec.elapsed_seconds;
  return j;
}

Json report_to_json(const SuiteReport& report, bool include_timing) {
  const SuiteConfig& cfg = report.config;
  Json checks = Json::array();
  for (const auto& c : report.checks) checks.push_back(record_to_json(c, include_timing));
  return Json{{"master_seed", cfg.master_seed},
              {"config",
               {{"trials_per_check", cfg.trials_per_check},
                {"dims", cfg.dims},
                {"tol_assert", cfg.tol_assert},
                {"checks", cfg.checks},
                {"oracle_samples", cfg.oracle_samples},
                {"povm_dims", cfg.povm_dims},
                {"max_povm_outcomes", cfg.max_povm_outcomes},
                {"pure_states_per_trial", cfg.pure_states_per_trial}}},
              {"checks", std::move(checks)},
              {"total_failures", report.total_failures()}};
}

Json parse_json(std::string_view text) {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    parse_fail(std::string("malformed JSON: ") + e.what());
  }
}

}  // namespace blockcoh
