#pragma once

// POVM coherence:
//
//   C_rel(rho, E) = H[{p_i}] + sum_i p_i S(rho_i) - S(rho),
//   C_aff(rho, E) = 1 - sum_i Tr[(A_i sqrt(rho) A_i^dagger)^2],
//
// with p_i = Tr(E_i rho), rho_i = A_i rho A_i^dagger / p_i and A_i any
// measurement operators realizing E (A_i^dagger A_i = E_i).

#include <optional>
#include <vector>

#include "blockcoh/decompositions.hpp"
#include "blockcoh/random.hpp"
#include "blockcoh/spectral.hpp"

namespace blockcoh {

/// Measurement operators {A_i}.
struct KrausSet {
  std::vector<ComplexMatrix> operators;

  Index dim() const { return operators.empty() ? 0 : operators.front().cols(); }
  std::size_t size() const noexcept { return operators.size(); }
  /// Max-abs deviation of sum_i A_i^dagger A_i from the identity.
  double completeness_defect() const;
};

struct OutcomeEnsemble {
  ProbabilityVector probs;
  /// Post-measurement states; empty where p_i <= tol.zero.
  std::vector<std::optional<DensityMatrix>> states;
};

/// A_i = sqrt(E_i).
KrausSet canonical_kraus(const Povm& e);

/// A_i' = U_i A_i with independent Haar U_i.
KrausSet randomize_kraus(const KrausSet& k, Rng& rng);

/// Throws DimensionMismatch.
OutcomeEnsemble outcome_ensemble(const DensityMatrix& rho, const KrausSet& k,
                                 const Tolerances& tol = {});

double relative_entropy_povm_coherence(const DensityMatrix& rho, const Povm& e);
double relative_entropy_povm_coherence(const DensityMatrix& rho, const KrausSet& k);

double affinity_povm_coherence(const DensityMatrix& rho, const Povm& e);
double affinity_povm_coherence(const DensityMatrix& rho, const KrausSet& k);

/// H[p] + sum_i p_i S(rho_i) - S(rho) for an already computed ensemble.
double relative_entropy_coherence(const DensityMatrix& rho, const OutcomeEnsemble& ens);

/// Merges outcomes: q_j = sum_{i in Lambda_j} p_i and
/// rho_j = sum_{i in Lambda_j} (p_i / q_j) rho_i. Throws InvalidPartition.
OutcomeEnsemble coarse_grain_ensemble(const OutcomeEnsemble& fine, const Partition& partition,
                                      const Tolerances& tol = {});

struct PovmOrderRecord {
  double fine_rel;
  double coarse_rel;         // mixture evaluation over the fine outcomes
  double coarse_rel_direct;  // canonical Kraus operators of the coarse POVM
  double fine_aff;
  double coarse_aff;
};

/// Both measures for e and for coarse_grain_povm(e, partition). Throws
/// InvalidPartition, DimensionMismatch.
PovmOrderRecord povm_order_check(const DensityMatrix& rho, const Povm& e,
                                 const Partition& partition);

}  // namespace blockcoh
