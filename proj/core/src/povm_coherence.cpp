#include "blockcoh/povm_coherence.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "blockcoh/errors.hpp"

namespace blockcoh {

namespace {

constexpr double kRelClampBand = 1e-9;
constexpr double kAffClampBand = 1e-12;

void require_same_dim(Index a, Index b, std::string_view what) {
  if (a != b) {
    throw Error(ErrorKind::DimensionMismatch, std::string(what) + ": dimensions " +
                                                  std::to_string(a) + " and " + std::to_string(b));
  }
}

double clamp_band(double c, double band) { return (c < 0.0 && c > -band) ? 0.0 : c; }

}  // namespace

double KrausSet::completeness_defect() const {
  const Index d = dim();
  ComplexMatrix sum = ComplexMatrix::Zero(d, d);
  for (const auto& a : operators) sum += a.adjoint() * a;
  return max_abs(sum - ComplexMatrix::Identity(d, d));
}

KrausSet canonical_kraus(const Povm& e) {
  KrausSet k;
  k.operators.reserve(e.size());
  for (const auto& element : e.elements()) {
    k.operators.push_back(principal_sqrt(HermitianMatrix::trusted(element)).matrix());
  }
  return k;
}

KrausSet randomize_kraus(const KrausSet& k, Rng& rng) {
  KrausSet out;
  out.operators.reserve(k.size());
  for (const auto& a : k.operators) {
    out.operators.push_back(haar_unitary(a.rows(), rng).matrix() * a);
  }
  return out;
}

OutcomeEnsemble outcome_ensemble(const DensityMatrix& rho, const KrausSet& k,
                                 const Tolerances& tol) {
  require_same_dim(rho.dim(), k.dim(), "outcome_ensemble");
  std::vector<double> probs;
  std::vector<std::optional<DensityMatrix>> states;
  probs.reserve(k.size());
  states.reserve(k.size());
  for (const auto& a : k.operators) {
    const ComplexMatrix post = a * rho.matrix() * a.adjoint();
    const double p = post.trace().real();
    probs.push_back(p);
    if (p > tol.zero) {
      states.emplace_back(normalize_positive(post, tol));
    } else {
      states.emplace_back(std::nullopt);
    }
  }
  // Probabilities inherit the completeness defect of the Kraus set.
  Tolerances prob_tol = tol;
  prob_tol.prob = std::max(tol.prob, tol.proj * static_cast<double>(k.dim()));
  return OutcomeEnsemble{ProbabilityVector::validated(std::move(probs), prob_tol),
                         std::move(states)};
}

double relative_entropy_coherence(const DensityMatrix& rho, const OutcomeEnsemble& ens) {
  double value = shannon_entropy(ens.probs) - von_neumann_entropy(rho);
  for (std::size_t i = 0; i < ens.states.size(); ++i) {
    if (ens.states[i]) value += ens.probs[i] * von_neumann_entropy(*ens.states[i]);
  }
  return clamp_band(value, kRelClampBand);
}

double relative_entropy_povm_coherence(const DensityMatrix& rho, const KrausSet& k) {
  return relative_entropy_coherence(rho, outcome_ensemble(rho, k));
}

double relative_entropy_povm_coherence(const DensityMatrix& rho, const Povm& e) {
  require_same_dim(rho.dim(), e.dim(), "relative_entropy_povm_coherence");
  return relative_entropy_povm_coherence(rho, canonical_kraus(e));
}

double affinity_povm_coherence(const DensityMatrix& rho, const KrausSet& k) {
  require_same_dim(rho.dim(), k.dim(), "affinity_povm_coherence");
  const ComplexMatrix root = psd_sqrt(rho).matrix();
  double total = 0.0;
  // A S A^dagger is Hermitian: Tr[(A S A^dagger)^2] = ||A S A^dagger||_F^2.
  for (const auto& a : k.operators) total += (a * root * a.adjoint()).squaredNorm();
  const double c = clamp_band(1.0 - total, kAffClampBand);
  return (c > 1.0 && c < 1.0 + kAffClampBand) ? 1.0 : c;
}

double affinity_povm_coherence(const DensityMatrix& rho, const Povm& e) {
  require_same_dim(rho.dim(), e.dim(), "affinity_povm_coherence");
  return affinity_povm_coherence(rho, canonical_kraus(e));
}

OutcomeEnsemble coarse_grain_ensemble(const OutcomeEnsemble& fine, const Partition& partition,
                                      const Tolerances& tol) {
  if (partition.outcomes() != fine.probs.size()) {
    throw Error(ErrorKind::InvalidPartition, "partition covers " +
                                                 std::to_string(partition.outcomes()) +
                                                 " outcomes, ensemble has " +
                                                 std::to_string(fine.probs.size()));
  }
  Index d = 0;
  for (const auto& s : fine.states) {
    if (s) d = s->dim();
  }
  std::vector<double> probs;
  std::vector<std::optional<DensityMatrix>> states;
  for (const auto& group : partition.groups()) {
    double q = 0.0;
    ComplexMatrix unnormalized = ComplexMatrix::Zero(d, d);
    for (std::size_t i : group) {
      q += fine.probs[i];
      if (fine.states[i]) unnormalized += fine.probs[i] * fine.states[i]->matrix();
    }
    probs.push_back(q);
    if (q > tol.zero) {
      states.emplace_back(normalize_positive(unnormalized, tol));
    } else {
      states.emplace_back(std::nullopt);
    }
  }
  // Merging outcomes cannot add normalization error beyond what the fine
  // ensemble already carried.
  double fine_total = 0.0;
  for (double p : fine.probs.values()) fine_total += p;
  Tolerances prob_tol = tol;
  prob_tol.prob = std::max(tol.prob, std::abs(fine_total - 1.0) + tol.prob);
  return OutcomeEnsemble{ProbabilityVector::validated(std::move(probs), prob_tol),
                         std::move(states)};
}

PovmOrderRecord povm_order_check(const DensityMatrix& rho, const Povm& e,
                                 const Partition& partition) {
  require_same_dim(rho.dim(), e.dim(), "povm_order_check");
  const Povm coarse = coarse_grain_povm(e, partition);
  const KrausSet fine_kraus = canonical_kraus(e);
  const OutcomeEnsemble fine_ens = outcome_ensemble(rho, fine_kraus);

  PovmOrderRecord rec{};
  rec.fine_rel = relative_entropy_coherence(rho, fine_ens);
  rec.coarse_rel = relative_entropy_coherence(rho, coarse_grain_ensemble(fine_ens, partition));
  rec.coarse_rel_direct = relative_entropy_povm_coherence(rho, coarse);
  rec.fine_aff = affinity_povm_coherence(rho, fine_kraus);
  rec.coarse_aff = affinity_povm_coherence(rho, coarse);
  return rec;
}

}  // namespace blockcoh
