#pragma once

// Seeded randomized verification of the block and POVM coherence
// properties. Every check draws each trial from its own RNG stream, derived
// from (master seed, check name, trial index), so trials are independent of
// execution order and any single trial can be replayed from its seed.
//
// Violation convention: a trial reports one signed number per check, the
// worst over its assertions. For an assertion `lhs <= rhs` at the suite
// tolerance the violation is lhs - rhs; assertions with a fixed tolerance t
// are shifted to lhs - rhs - t + tol_assert. A trial fails iff its violation
// exceeds tol_assert; negative values are margins.

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "blockcoh/spectral.hpp"

namespace blockcoh {

inline constexpr std::uint64_t kDefaultMasterSeed = 20240601;

struct SuiteConfig {
  std::uint64_t master_seed = kDefaultMasterSeed;
  std::size_t trials_per_check = 200;
  std::vector<Index> dims = {2, 3, 4, 5, 6, 7, 8};
  double tol_assert = 1e-9;
  /// Selected check names; an empty list runs nothing.
  std::vector<std::string> checks;
  /// Random free states compared against the closest free state per trial.
  std::size_t oracle_samples = 200;
  /// Dimensions and outcome counts for the POVM checks.
  std::vector<Index> povm_dims = {2, 3, 4, 5, 6};
  std::size_t max_povm_outcomes = 6;
  /// Random pure states tested against the maximal-coherence bound per trial.
  std::size_t pure_states_per_trial = 4;

  /// Config selecting every check.
  static SuiteConfig all_checks();
};

struct CheckRecord {
  std::string name;
  std::size_t trials = 0;
  std::size_t failures = 0;
  std::optional<double> worst_violation;
  std::uint64_t worst_case_seed = 0;
  double elapsed_seconds = 0.0;
  /// Check-specific measured quantities (maxima over trials).
  std::map<std::string, double> diagnostics;
};

struct SuiteReport {
  SuiteConfig config;
  std::vector<CheckRecord> checks;

  std::size_t total_failures() const;
};

/// Names accepted in SuiteConfig::checks, in run order.
const std::vector<std::string>& check_names();

struct TrialResult {
  double violation;
  std::map<std::string, double> diagnostics;
};

/// Runs one trial of `check` with the given stream seed. Throws
/// InvalidArgument for an unknown check name.
TrialResult run_trial(std::string_view check, const SuiteConfig& cfg, std::uint64_t trial_seed);

/// Stream seed of trial `index` of `check`.
std::uint64_t trial_seed(const SuiteConfig& cfg, std::string_view check, std::uint64_t index);

CheckRecord run_check(std::string_view check, const SuiteConfig& cfg);

CheckRecord check_faithfulness(const SuiteConfig& cfg);
CheckRecord check_monotonicity(const SuiteConfig& cfg);
CheckRecord check_additivity(const SuiteConfig& cfg);
CheckRecord check_order_preserving_block(const SuiteConfig& cfg);
CheckRecord check_closest_free_state(const SuiteConfig& cfg);
CheckRecord check_basis_degeneration(const SuiteConfig& cfg);
CheckRecord check_max_coherent(const SuiteConfig& cfg);
CheckRecord check_povm_order_preserving(const SuiteConfig& cfg);
CheckRecord check_kraus_invariance(const SuiteConfig& cfg);

/// Runs the selected checks in check_names() order. Throws InvalidArgument
/// for unknown names or an invalid config (no trials, dims < 1).
SuiteReport run_suite(const SuiteConfig& cfg);

}  // namespace blockcoh
