#pragma once

// Projective decompositions {P_m} and POVMs {E_i} as validated values, the
// refinement order between decompositions, and coarse-graining by outcome
// partitions.

#include <cstddef>
#include <variant>
#include <vector>

#include "blockcoh/random.hpp"
#include "blockcoh/spectral.hpp"

namespace blockcoh {

/// Containment tolerance for |P_m Q_n - Q_n| in the refinement test.
inline constexpr double kRefinementTolerance = 1e-8;

/// Orthogonal projectors summing to the identity, stored explicitly.
class ProjectiveDecomposition {
 public:
  Index dim() const noexcept { return dim_; }
  std::size_t size() const noexcept { return projectors_.size(); }
  const std::vector<ComplexMatrix>& projectors() const noexcept { return projectors_; }
  const ComplexMatrix& operator[](std::size_t m) const { return projectors_[m]; }
  /// Rank of each projector, rounded from its trace.
  const std::vector<Index>& block_dims() const noexcept { return block_dims_; }

  /// Orthonormal basis (d x rank) of the range of P_m.
  ComplexMatrix range_basis(std::size_t m) const;

 private:
  friend ProjectiveDecomposition validate_decomposition(std::vector<ComplexMatrix>,
                                                        const Tolerances&);
  ProjectiveDecomposition(Index dim, std::vector<ComplexMatrix> p, std::vector<Index> ranks)
      : dim_(dim), projectors_(std::move(p)), block_dims_(std::move(ranks)) {}

  Index dim_;
  std::vector<ComplexMatrix> projectors_;
  std::vector<Index> block_dims_;
};

/// Positive operators summing to the identity.
class Povm {
 public:
  Index dim() const noexcept { return dim_; }
  std::size_t size() const noexcept { return elements_.size(); }
  const std::vector<ComplexMatrix>& elements() const noexcept { return elements_; }
  const ComplexMatrix& operator[](std::size_t i) const { return elements_[i]; }

 private:
  friend Povm validate_povm(std::vector<ComplexMatrix>, const Tolerances&);
  Povm(Index dim, std::vector<ComplexMatrix> e) : dim_(dim), elements_(std::move(e)) {}

  Index dim_;
  std::vector<ComplexMatrix> elements_;
};

/// Disjoint, non-empty groups exactly covering {0, ..., M-1}.
class Partition {
 public:
  /// Throws InvalidPartition.
  static Partition validated(std::vector<std::vector<std::size_t>> groups, std::size_t outcomes);
  static Partition singletons(std::size_t outcomes);
  static Partition total(std::size_t outcomes);
  /// Group j collects every fine index n with assignment[n] == j.
  static Partition from_assignment(const std::vector<std::size_t>& assignment,
                                   std::size_t groups);

  const std::vector<std::vector<std::size_t>>& groups() const noexcept { return groups_; }
  std::size_t size() const noexcept { return groups_.size(); }
  std::size_t outcomes() const noexcept { return outcomes_; }
  /// Inverse map: fine index -> group.
  std::vector<std::size_t> assignment() const;

  /// Composition: `coarser` partitions the groups of *this.
  Partition then(const Partition& coarser) const;

 private:
  Partition(std::vector<std::vector<std::size_t>> g, std::size_t n)
      : groups_(std::move(g)), outcomes_(n) {}
  std::vector<std::vector<std::size_t>> groups_;
  std::size_t outcomes_;
};

/// assignment[n] = m such that Q_n sits inside P_m.
struct RefinementWitness {
  std::vector<std::size_t> assignment;
  std::size_t coarse_size = 0;

  Partition partition() const { return Partition::from_assignment(assignment, coarse_size); }
  friend bool operator==(const RefinementWitness&, const RefinementWitness&) = default;
};

struct NotRefinement {
  enum class Reason {
    NoAbsorbingBlock,  // index = fine n contained in no P_m
    AmbiguousBlock,    // index = fine n contained in two P_m
    SumMismatch,       // index = coarse m with sum over Lambda_m != P_m
  };
  Reason reason;
  std::size_t index;
  double residual;
};

using RefinementResult = std::variant<RefinementWitness, NotRefinement>;

/// Errors: NotSquare, DimensionMismatch, NonHermitian(m), NotIdempotent(m),
/// NotOrthogonal(m, n), Incomplete, RankDeviation(m), EmptyBlock(m).
ProjectiveDecomposition validate_decomposition(std::vector<ComplexMatrix> mats,
                                               const Tolerances& tol = {});

/// P_m = sum of u_k u_k^dagger over the m-th consecutive column group.
ProjectiveDecomposition decomposition_from_blocks(const UnitaryMatrix& u,
                                                  const std::vector<Index>& block_sizes);

/// The rank-1 decomposition along the columns of u.
ProjectiveDecomposition basis_decomposition(const UnitaryMatrix& u);

ProjectiveDecomposition trivial_decomposition(Index d);

/// Is `fine` a refinement of `coarse` (fine >= coarse)? Throws
/// DimensionMismatch.
RefinementResult is_refinement(const ProjectiveDecomposition& fine,
                               const ProjectiveDecomposition& coarse,
                               double tol = kRefinementTolerance);

/// Group sums of projectors. Throws InvalidPartition.
ProjectiveDecomposition coarse_grain(const ProjectiveDecomposition& p, const Partition& partition);

struct Refinement {
  ProjectiveDecomposition fine;
  RefinementWitness witness;
};

/// Splits one block of rank >= 2 into two sub-blocks along a Haar-random
/// basis of its range. The new blocks occupy positions m and m+1. Throws
/// NothingToRefine when every block has rank one.
Refinement refine_randomly(const ProjectiveDecomposition& p, Rng& rng);

/// Haar-random decomposition with the given block ranks.
ProjectiveDecomposition random_decomposition(Index d, const std::vector<Index>& block_sizes,
                                             Rng& rng);

/// Errors: NotSquare, DimensionMismatch, NonHermitian(i), NotPositive(i),
/// Incomplete.
Povm validate_povm(std::vector<ComplexMatrix> mats, const Tolerances& tol = {});

Povm povm_from_decomposition(const ProjectiveDecomposition& p);

/// F_j = sum over Lambda_j of E_i. Throws InvalidPartition.
Povm coarse_grain_povm(const Povm& e, const Partition& partition);

/// E_i = S^{-1/2} G_i G_i^dagger S^{-1/2}, S = sum_k G_k G_k^dagger, with
/// each G_k a d x d complex Gaussian matrix.
Povm random_povm(Index d, std::size_t outcomes, Rng& rng);

}  // namespace blockcoh
