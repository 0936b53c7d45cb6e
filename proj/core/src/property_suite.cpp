#include "blockcoh/property_suite.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>

#include "blockcoh/block_coherence.hpp"
#include "blockcoh/decompositions.hpp"
#include "blockcoh/errors.hpp"
#include "blockcoh/povm_coherence.hpp"
#include "blockcoh/random.hpp"

namespace blockcoh {

namespace {

constexpr double kNonFreeFloor = 1e-7;         // non-free pure states must exceed this
constexpr double kNonFreeRejection = 1e-6;     // resample pure states closer than this to free
constexpr double kFaithfulDefect = 1e-7;       // free-state defect bound for the iff
constexpr double kBasisTolerance = 1e-10;      // block vs basis formula
constexpr double kUniformityTolerance = 1e-6;  // equality-iff-uniform band
constexpr double kFreeSetTolerance = 1e-9;     // free operations keep free states free

class Assertions {
 public:
  explicit Assertions(double tol_assert) : tol_(tol_assert) {}

  /// lhs <= rhs at the suite tolerance.
  void at_most(double lhs, double rhs) { record(lhs - rhs); }
  /// lhs <= rhs + fixed_tol, independent of the suite tolerance.
  void at_most(double lhs, double rhs, double fixed_tol) { record(lhs - rhs - fixed_tol + tol_); }
  void holds(bool ok) { record(ok ? -tol_ : 1.0 + tol_); }

  double worst() const { return worst_; }

 private:
  void record(double v) {
    if (std::isnan(v)) v = 1.0 + tol_;
    worst_ = std::max(worst_, v);
  }
  double tol_;
  double worst_ = -std::numeric_limits<double>::infinity();
};

TrialResult finish(const Assertions& a) { return TrialResult{a.worst(), {}}; }

// Sentinel for trials that do not apply (no admissible dimension).
TrialResult skipped() {
  return TrialResult{-std::numeric_limits<double>::infinity(), {{"skipped", 1.0}}};
}

std::optional<Index> draw_dim(const std::vector<Index>& dims, Rng& rng, Index min_dim) {
  std::vector<Index> eligible;
  std::copy_if(dims.begin(), dims.end(), std::back_inserter(eligible),
               [&](Index d) { return d >= min_dim; });
  if (eligible.empty()) return std::nullopt;
  return eligible[uniform_index(rng, eligible.size())];
}

Index draw_rank(Index d, Rng& rng) {
  return 1 + static_cast<Index>(uniform_index(rng, static_cast<std::size_t>(d)));
}

DensityMatrix draw_state(Index d, Rng& rng) { return random_density(d, draw_rank(d, rng), rng); }

ProjectiveDecomposition draw_decomposition(Index d, Rng& rng) {
  return random_decomposition(d, random_composition(d, rng), rng);
}

// Random state of the free set: sum_m w_m B_m tau_m B_m^dagger.
DensityMatrix random_free_state(const ProjectiveDecomposition& p, Rng& rng) {
  const auto weights = random_simplex(p.size(), rng);
  ComplexMatrix sigma = ComplexMatrix::Zero(p.dim(), p.dim());
  for (std::size_t m = 0; m < p.size(); ++m) {
    const Index r = p.block_dims()[m];
    const ComplexMatrix basis = p.range_basis(m);
    sigma += weights[m] * basis * random_density(r, draw_rank(r, rng), rng).matrix() *
             basis.adjoint();
  }
  return validate_density(sigma);
}

ComplexMatrix concat_bases(const ProjectiveDecomposition& p,
                           const std::vector<std::size_t>& blocks) {
  Index cols = 0;
  for (std::size_t m : blocks) cols += p.block_dims()[m];
  ComplexMatrix basis(p.dim(), cols);
  Index at = 0;
  for (std::size_t m : blocks) {
    basis.middleCols(at, p.block_dims()[m]) = p.range_basis(m);
    at += p.block_dims()[m];
  }
  return basis;
}

// Decomposition of span(basis) induced by the listed blocks of p.
ProjectiveDecomposition restrict_decomposition(const ProjectiveDecomposition& p,
                                               const std::vector<std::size_t>& blocks,
                                               const ComplexMatrix& basis) {
  std::vector<ComplexMatrix> restricted;
  for (std::size_t m : blocks) restricted.push_back(basis.adjoint() * p[m] * basis);
  return validate_decomposition(std::move(restricted));
}

// ---------------------------------------------------------------------------
// Trials

TrialResult faithfulness_trial(const SuiteConfig& cfg, Rng& rng) {
  const auto d = draw_dim(cfg.dims, rng, 2);
  if (!d) return skipped();
  Assertions a(cfg.tol_assert);
  // At least two blocks, so that non-free states exist.
  auto sizes = random_composition(*d, rng);
  if (sizes.size() == 1) sizes = {1, *d - 1};
  const auto p = random_decomposition(*d, sizes, rng);

  const DensityMatrix rho = draw_state(*d, rng);
  const DensityMatrix free_state = dephase(rho, p);
  const double c_free = block_coherence(free_state, p);
  a.at_most(c_free, 0.0);
  a.at_most(-c_free, 0.0, kValueClampBand);
  a.at_most(free_state_defect(free_state, p), 0.0, kFaithfulDefect);

  // Mixed input: a visible defect must show up as positive coherence.
  const double c_rho = block_coherence(rho, p);
  a.at_most(-c_rho, 0.0, kValueClampBand);
  if (free_state_defect(rho, p) > kFaithfulDefect) a.at_most(cfg.tol_assert, c_rho, 0.0);

  double non_free = 0.0;
  for (int attempt = 0; attempt < 16; ++attempt) {
    const DensityMatrix psi = random_pure(*d, rng);
    if (free_state_defect(psi, p) < kNonFreeRejection) continue;
    a.at_most(kNonFreeFloor, block_coherence(psi, p), 0.0);
    non_free = 1.0;
    break;
  }
  TrialResult r = finish(a);
  r.diagnostics["count_non_free"] = non_free;
  return r;
}

TrialResult monotonicity_trial(const SuiteConfig& cfg, Rng& rng) {
  const auto d = draw_dim(cfg.dims, rng, 1);
  if (!d) return skipped();
  Assertions a(cfg.tol_assert);
  const auto p = draw_decomposition(*d, rng);
  const DensityMatrix rho = draw_state(*d, rng);
  const double c = block_coherence(rho, p);

  const FreeOperation op = sample_free_operation(p, rng);
  a.at_most(block_coherence(apply_operation(op, rho), p), c);

  const DensityMatrix sigma = random_free_state(p, rng);
  a.at_most(free_state_defect(apply_operation(op, sigma), p), 0.0, kFreeSetTolerance);

  std::vector<UnitaryMatrix> blocks;
  for (Index r : p.block_dims()) blocks.push_back(haar_unitary(r, rng));
  const FreeOperation rotate{BlockUnitary{block_diagonal_unitary(p, blocks)}};
  a.at_most(std::abs(block_coherence(apply_operation(rotate, rho), p) - c), 0.0);

  TrialResult r = finish(a);
  r.diagnostics["kind_" + std::string(to_string(op.kind()))] = 1.0;
  return r;
}

TrialResult additivity_trial(const SuiteConfig& cfg, Rng& rng) {
  const auto d = draw_dim(cfg.dims, rng, 2);
  if (!d) return skipped();
  Assertions a(cfg.tol_assert);
  auto sizes = random_composition(*d, rng);
  if (sizes.size() == 1) sizes = {1, *d - 1};
  const auto p = random_decomposition(*d, sizes, rng);

  // Split the blocks into two non-empty groups.
  std::vector<std::size_t> first, second;
  for (std::size_t m = 0; m < p.size(); ++m) {
    (uniform_real(rng) < 0.5 ? first : second).push_back(m);
  }
  if (first.empty()) {
    first.push_back(second.back());
    second.pop_back();
  } else if (second.empty()) {
    second.push_back(first.back());
    first.pop_back();
  }

  const ComplexMatrix b1 = concat_bases(p, first);
  const ComplexMatrix b2 = concat_bases(p, second);
  const auto p1 = restrict_decomposition(p, first, b1);
  const auto p2 = restrict_decomposition(p, second, b2);
  const DensityMatrix rho1 = draw_state(b1.cols(), rng);
  const DensityMatrix rho2 = draw_state(b2.cols(), rng);
  const double q = uniform_real(rng);

  const ComplexMatrix joint = q * b1 * rho1.matrix() * b1.adjoint() +
                              (1.0 - q) * b2 * rho2.matrix() * b2.adjoint();
  const double lhs = block_coherence(validate_density(joint), p);
  const double rhs = q * block_coherence(rho1, p1) + (1.0 - q) * block_coherence(rho2, p2);
  a.at_most(std::abs(lhs - rhs), 0.0);
  return finish(a);
}

TrialResult order_preserving_block_trial(const SuiteConfig& cfg, Rng& rng) {
  const auto d = draw_dim(cfg.dims, rng, 2);
  if (!d) return skipped();
  Assertions a(cfg.tol_assert);
  auto sizes = random_composition(*d, rng);
  if (std::all_of(sizes.begin(), sizes.end(), [](Index s) { return s == 1; })) {
    sizes.erase(sizes.begin());
    sizes.front() += 1;
  }
  const auto p = random_decomposition(*d, sizes, rng);
  const DensityMatrix rho = draw_state(*d, rng);

  const Refinement refined = refine_randomly(p, rng);
  const auto found = is_refinement(refined.fine, p);
  a.holds(std::holds_alternative<RefinementWitness>(found) &&
          std::get<RefinementWitness>(found) == refined.witness);
  a.at_most(block_coherence(rho, p), block_coherence(rho, refined.fine));

  // Maximal chain {I} -> rank one; coherence must be non-decreasing.
  ProjectiveDecomposition current = trivial_decomposition(*d);
  double previous = block_coherence(rho, current);
  a.at_most(std::abs(previous), 0.0);
  while (std::any_of(current.block_dims().begin(), current.block_dims().end(),
                     [](Index r) { return r >= 2; })) {
    Refinement step = refine_randomly(current, rng);
    const double next = block_coherence(rho, step.fine);
    a.at_most(previous, next);
    previous = next;
    current = std::move(step.fine);
  }
  a.holds(current.size() == static_cast<std::size_t>(*d));
  return finish(a);
}

TrialResult closest_free_state_trial(const SuiteConfig& cfg, Rng& rng) {
  const auto d = draw_dim(cfg.dims, rng, 1);
  if (!d) return skipped();
  Assertions a(cfg.tol_assert);
  const auto p = draw_decomposition(*d, rng);
  const DensityMatrix rho = draw_state(*d, rng);

  const DensityMatrix sigma = closest_free_state(rho, p);
  const double best = affinity_distance(rho, sigma);
  a.at_most(std::abs(best - block_coherence(rho, p)), 0.0);
  a.at_most(free_state_defect(sigma, p), 0.0, kFreeSetTolerance);

  double oracle_min = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < cfg.oracle_samples; ++k) {
    const double dist = affinity_distance(rho, random_free_state(p, rng));
    oracle_min = std::min(oracle_min, dist);
    a.at_most(best, dist);
  }
  TrialResult r = finish(a);
  if (cfg.oracle_samples > 0) r.diagnostics["min_oracle_gap"] = -(oracle_min - best);
  return r;
}

TrialResult basis_degeneration_trial(const SuiteConfig& cfg, Rng& rng) {
  const auto d = draw_dim(cfg.dims, rng, 1);
  if (!d) return skipped();
  Assertions a(cfg.tol_assert);
  const UnitaryMatrix u = haar_unitary(*d, rng);
  const auto p = basis_decomposition(u);
  const DensityMatrix rho = draw_state(*d, rng);

  const ComplexMatrix root = psd_sqrt(rho).matrix();
  double direct = 1.0;
  for (Index i = 0; i < *d; ++i) {
    const double diag = (u.matrix().col(i).adjoint() * root * u.matrix().col(i))(0, 0).real();
    direct -= diag * diag;
  }
  a.at_most(std::abs(block_coherence(rho, p) - direct), 0.0, kBasisTolerance);
  return finish(a);
}

TrialResult max_coherent_trial(const SuiteConfig& cfg, Rng& rng) {
  const auto d = draw_dim(cfg.dims, rng, 1);
  if (!d) return skipped();
  Assertions a(cfg.tol_assert);
  const auto p = draw_decomposition(*d, rng);
  const double m = static_cast<double>(p.size());
  const double bound = 1.0 - 1.0 / m;

  // For a pure state, bound - C = sum_m (w_m - 1/M)^2 with w_m = ||P_m psi||^2.
  auto examine = [&](const DensityMatrix& psi) {
    const double c = block_coherence(psi, p);
    double spread = 0.0;
    double max_dev = 0.0;
    for (const auto& proj : p.projectors()) {
      const double w = trace_product(proj, psi.matrix()).real();
      spread += (w - 1.0 / m) * (w - 1.0 / m);
      max_dev = std::max(max_dev, std::abs(w - 1.0 / m));
    }
    a.at_most(c, bound);
    a.at_most(std::abs((bound - c) - spread), 0.0);
    const bool at_bound = std::abs(c - bound) <= kUniformityTolerance;
    const bool uniform = max_dev <= kUniformityTolerance;
    a.holds(at_bound == uniform);
    return c;
  };

  const double c_max = examine(max_coherent_state(p, rng));
  a.at_most(std::abs(c_max - bound), 0.0);

  for (std::size_t k = 0; k < cfg.pure_states_per_trial; ++k) examine(random_pure(*d, rng));

  if (p.size() >= 2) {
    // Skewed superposition with ||P_0 psi||^2 = s, the rest spread evenly.
    const double s = uniform_real(rng, 0.6, 0.95);
    ComplexVector psi = std::sqrt(s) * p.range_basis(0) * random_unit_vector(p.block_dims()[0], rng);
    const double rest = (1.0 - s) / (m - 1.0);
    for (std::size_t k = 1; k < p.size(); ++k) {
      psi += std::sqrt(rest) * p.range_basis(k) * random_unit_vector(p.block_dims()[k], rng);
    }
    const double c = examine(DensityMatrix::from_pure(psi));
    const double expected = 1.0 - s * s - (m - 1.0) * rest * rest;
    a.at_most(std::abs(c - expected), 0.0);
    a.at_most(c, bound, -kUniformityTolerance);
  }
  TrialResult r = finish(a);
  r.diagnostics["count_random_pure"] = static_cast<double>(cfg.pure_states_per_trial);
  return r;
}

Partition random_nontrivial_partition(std::size_t outcomes, Rng& rng) {
  // At most outcomes - 1 labels, so some group has two members.
  const std::size_t labels = outcomes <= 2 ? 1 : 1 + uniform_index(rng, outcomes - 1);
  std::vector<std::size_t> raw(outcomes);
  for (auto& x : raw) x = uniform_index(rng, labels);
  std::vector<std::vector<std::size_t>> groups(labels);
  for (std::size_t i = 0; i < outcomes; ++i) groups[raw[i]].push_back(i);
  std::erase_if(groups, [](const auto& g) { return g.empty(); });
  return Partition::validated(std::move(groups), outcomes);
}

Partition random_partition(std::size_t outcomes, Rng& rng) {
  const std::size_t labels = 1 + uniform_index(rng, outcomes);
  std::vector<std::vector<std::size_t>> groups(labels);
  for (std::size_t i = 0; i < outcomes; ++i) groups[uniform_index(rng, labels)].push_back(i);
  std::erase_if(groups, [](const auto& g) { return g.empty(); });
  return Partition::validated(std::move(groups), outcomes);
}

TrialResult povm_order_preserving_trial(const SuiteConfig& cfg, Rng& rng) {
  const auto d = draw_dim(cfg.povm_dims, rng, 1);
  if (!d || cfg.max_povm_outcomes < 2) return skipped();
  Assertions a(cfg.tol_assert);
  const std::size_t outcomes = 2 + uniform_index(rng, cfg.max_povm_outcomes - 1);
  const Povm e = random_povm(*d, outcomes, rng);
  const DensityMatrix rho = draw_state(*d, rng);
  const Partition partition = random_nontrivial_partition(outcomes, rng);

  const PovmOrderRecord rec = povm_order_check(rho, e, partition);
  a.at_most(rec.coarse_rel, rec.fine_rel);
  a.at_most(rec.coarse_aff, rec.fine_aff);
  a.at_most(-rec.fine_rel, 0.0);
  a.at_most(-rec.coarse_rel, 0.0);

  // Two-step coarse-graining equals the composed one-step coarse-graining.
  const Partition outer = random_partition(partition.size(), rng);
  const Partition composed = partition.then(outer);
  const Povm coarse = coarse_grain_povm(e, partition);
  const Povm two_step = coarse_grain_povm(coarse, outer);
  const Povm one_step = coarse_grain_povm(e, composed);
  a.at_most(std::abs(affinity_povm_coherence(rho, two_step) -
                     affinity_povm_coherence(rho, one_step)),
            0.0);
  const OutcomeEnsemble fine_ens = outcome_ensemble(rho, canonical_kraus(e));
  const double rel_two_step = relative_entropy_coherence(
      rho, coarse_grain_ensemble(coarse_grain_ensemble(fine_ens, partition), outer));
  const double rel_one_step =
      relative_entropy_coherence(rho, coarse_grain_ensemble(fine_ens, composed));
  a.at_most(std::abs(rel_two_step - rel_one_step), 0.0);

  TrialResult r = finish(a);
  r.diagnostics["rel_direct_minus_mixture"] = rec.coarse_rel_direct - rec.coarse_rel;
  r.diagnostics["rel_direct_minus_fine"] = rec.coarse_rel_direct - rec.fine_rel;
  return r;
}

TrialResult kraus_invariance_trial(const SuiteConfig& cfg, Rng& rng) {
  const auto d = draw_dim(cfg.povm_dims, rng, 1);
  if (!d || cfg.max_povm_outcomes < 1) return skipped();
  Assertions a(cfg.tol_assert);
  const std::size_t outcomes = 1 + uniform_index(rng, cfg.max_povm_outcomes);
  const Povm e = random_povm(*d, outcomes, rng);
  const DensityMatrix rho = draw_state(*d, rng);
  const KrausSet canonical = canonical_kraus(e);
  const KrausSet rotated = randomize_kraus(canonical, rng);

  a.at_most(std::abs(relative_entropy_povm_coherence(rho, rotated) -
                     relative_entropy_povm_coherence(rho, canonical)),
            0.0);
  a.at_most(std::abs(affinity_povm_coherence(rho, rotated) -
                     affinity_povm_coherence(rho, canonical)),
            0.0);
  return finish(a);
}

using TrialFn = TrialResult (*)(const SuiteConfig&, Rng&);

struct CheckEntry {
  std::string name;
  TrialFn trial;
};

const std::vector<CheckEntry>& registry() {
  static const std::vector<CheckEntry> entries = {
      {"faithfulness", &faithfulness_trial},
      {"monotonicity", &monotonicity_trial},
      {"additivity", &additivity_trial},
      {"order_preserving_block", &order_preserving_block_trial},
      {"closest_free_state", &closest_free_state_trial},
      {"basis_degeneration", &basis_degeneration_trial},
      {"max_coherent", &max_coherent_trial},
      {"povm_order_preserving", &povm_order_preserving_trial},
      {"kraus_invariance", &kraus_invariance_trial},
  };
  return entries;
}

const CheckEntry& find_check(std::string_view name) {
  for (const auto& e : registry()) {
    if (e.name == name) return e;
  }
  throw Error(ErrorKind::InvalidArgument, "unknown check '" + std::string(name) + "'");
}

void validate_config(const SuiteConfig& cfg) {
  if (cfg.trials_per_check < 1) {
    throw Error(ErrorKind::InvalidArgument, "trials_per_check must be at least 1");
  }
  if (cfg.dims.empty()) throw Error(ErrorKind::InvalidArgument, "dims must not be empty");
  for (Index d : cfg.dims) {
    if (d < 1) throw Error(ErrorKind::InvalidArgument, "dims must all be >= 1");
  }
  for (Index d : cfg.povm_dims) {
    if (d < 1) throw Error(ErrorKind::InvalidArgument, "povm_dims must all be >= 1");
  }
  if (!(cfg.tol_assert >= 0.0)) {
    throw Error(ErrorKind::InvalidArgument, "tol_assert must be non-negative");
  }
}

}  // namespace

SuiteConfig SuiteConfig::all_checks() {
  SuiteConfig cfg;
  cfg.checks = check_names();
  return cfg;
}

std::size_t SuiteReport::total_failures() const {
  std::size_t n = 0;
  for (const auto& c : checks) n += c.failures;
  return n;
}

const std::vector<std::string>& check_names() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> out;
    for (const auto& e : registry()) out.push_back(e.name);
    return out;
  }();
  return names;
}

std::uint64_t trial_seed(const SuiteConfig& cfg, std::string_view check, std::uint64_t index) {
  return derive_seed(cfg.master_seed, check, index);
}

TrialResult run_trial(std::string_view check, const SuiteConfig& cfg, std::uint64_t seed) {
  const CheckEntry& entry = find_check(check);
  Rng rng = make_rng(seed);
  try {
    return entry.trial(cfg, rng);
  } catch (const Error& e) {
    // A numerical failure inside a trial is a failed trial, not a crash.
    return TrialResult{1.0 + cfg.tol_assert, {{"errors", 1.0}}};
  }
}

CheckRecord run_check(std::string_view check, const SuiteConfig& cfg) {
  validate_config(cfg);
  find_check(check);
  const auto start = std::chrono::steady_clock::now();

  CheckRecord rec;
  rec.name = std::string(check);
  for (std::uint64_t t = 0; t < cfg.trials_per_check; ++t) {
    const std::uint64_t seed = trial_seed(cfg, check, t);
    const TrialResult r = run_trial(check, cfg, seed);
    if (r.diagnostics.count("skipped")) continue;
    ++rec.trials;
    if (r.violation > cfg.tol_assert) ++rec.failures;
    if (!rec.worst_violation || r.violation > *rec.worst_violation) {
      rec.worst_violation = r.violation;
      rec.worst_case_seed = seed;
    }
    for (const auto& [key, value] : r.diagnostics) {
      auto [it, inserted] = rec.diagnostics.emplace(key, value);
      if (key.rfind("kind_", 0) == 0 || key.rfind("count_", 0) == 0 || key == "errors") {
        if (!inserted) it->second += value;  // counters
      } else if (!inserted) {
        it->second = std::max(it->second, value);
      }
    }
  }
  rec.elapsed_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return rec;
}

CheckRecord check_faithfulness(const SuiteConfig& cfg) { return run_check("faithfulness", cfg); }
CheckRecord check_monotonicity(const SuiteConfig& cfg) { return run_check("monotonicity", cfg); }
CheckRecord check_additivity(const SuiteConfig& cfg) { return run_check("additivity", cfg); }
CheckRecord check_order_preserving_block(const SuiteConfig& cfg) {
  return run_check("order_preserving_block", cfg);
}
CheckRecord check_closest_free_state(const SuiteConfig& cfg) {
  return run_check("closest_free_state", cfg);
}
CheckRecord check_basis_degeneration(const SuiteConfig& cfg) {
  return run_check("basis_degeneration", cfg);
}
CheckRecord check_max_coherent(const SuiteConfig& cfg) { return run_check("max_coherent", cfg); }
CheckRecord check_povm_order_preserving(const SuiteConfig& cfg) {
  return run_check("povm_order_preserving", cfg);
}
CheckRecord check_kraus_invariance(const SuiteConfig& cfg) {
  return run_check("kraus_invariance", cfg);
}

SuiteReport run_suite(const SuiteConfig& cfg) {
  validate_config(cfg);
  for (const auto& name : cfg.checks) find_check(name);
  SuiteReport report;
  report.config = cfg;
  for (const auto& name : check_names()) {
    if (std::find(cfg.checks.begin(), cfg.checks.end(), name) != cfg.checks.end()) {
      report.checks.push_back(run_check(name, cfg));
    }
  }
  return report;
}

}  // namespace blockcoh
