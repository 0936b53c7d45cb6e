#include "blockcoh/decompositions.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "blockcoh/errors.hpp"

namespace blockcoh {

namespace {

constexpr double kRankRoundingTolerance = 1e-6;

Index common_dim(const std::vector<ComplexMatrix>& mats, std::string_view what) {
  if (mats.empty()) {
    throw Error(ErrorKind::Incomplete, std::string(what) + " has no operators");
  }
  const Index d = mats.front().rows();
  for (std::size_t i = 0; i < mats.size(); ++i) {
    const auto& m = mats[i];
    if (m.rows() != m.cols() || m.rows() == 0) {
      throw Error(ErrorKind::NotSquare, std::string(what) + " operator " + std::to_string(i) +
                                            " is not a non-empty square matrix",
                  std::nullopt, std::nullopt, i);
    }
    if (m.rows() != d) {
      throw Error(ErrorKind::DimensionMismatch,
                  std::string(what) + " operator " + std::to_string(i) + " has dimension " +
                      std::to_string(m.rows()) + ", expected " + std::to_string(d),
                  std::nullopt, std::nullopt, i);
    }
  }
  return d;
}

void hermitize_each(std::vector<ComplexMatrix>& mats, const Tolerances& tol,
                    std::string_view what) {
  for (std::size_t i = 0; i < mats.size(); ++i) {
    const double defect = hermiticity_defect(mats[i]);
    if (defect > tol.herm) {
      throw Error(ErrorKind::NonHermitian,
                  std::string(what) + " operator " + std::to_string(i) + " is not Hermitian",
                  defect, tol.herm, i);
    }
    mats[i] = (mats[i] + mats[i].adjoint()) / 2.0;
  }
}

void require_complete(const std::vector<ComplexMatrix>& mats, Index d, const Tolerances& tol,
                      std::string_view what) {
  ComplexMatrix sum = ComplexMatrix::Zero(d, d);
  for (const auto& m : mats) sum += m;
  const double defect = max_abs(sum - ComplexMatrix::Identity(d, d));
  if (defect > tol.proj) {
    throw Error(ErrorKind::Incomplete, std::string(what) + " does not sum to the identity",
                defect, tol.proj);
  }
}

std::vector<ComplexMatrix> group_sums(const std::vector<ComplexMatrix>& ops, Index d,
                                      const Partition& partition) {
  if (partition.outcomes() != ops.size()) {
    throw Error(ErrorKind::InvalidPartition,
                "partition covers " + std::to_string(partition.outcomes()) + " outcomes, expected " +
                    std::to_string(ops.size()));
  }
  std::vector<ComplexMatrix> sums;
  sums.reserve(partition.size());
  for (const auto& group : partition.groups()) {
    ComplexMatrix s = ComplexMatrix::Zero(d, d);
    for (std::size_t i : group) s += ops[i];
    sums.push_back(std::move(s));
  }
  return sums;
}

}  // namespace

// ---------------------------------------------------------------------------
// Partition

Partition Partition::validated(std::vector<std::vector<std::size_t>> groups,
                               std::size_t outcomes) {
  std::vector<bool> seen(outcomes, false);
  for (std::size_t j = 0; j < groups.size(); ++j) {
    if (groups[j].empty()) {
      throw Error(ErrorKind::InvalidPartition, "group " + std::to_string(j) + " is empty",
                  std::nullopt, std::nullopt, j);
    }
    for (std::size_t i : groups[j]) {
      if (i >= outcomes) {
        throw Error(ErrorKind::InvalidPartition,
                    "index " + std::to_string(i) + " out of range for " +
                        std::to_string(outcomes) + " outcomes",
                    std::nullopt, std::nullopt, j);
      }
      if (seen[i]) {
        throw Error(ErrorKind::InvalidPartition,
                    "index " + std::to_string(i) + " appears in more than one group",
                    std::nullopt, std::nullopt, j);
      }
      seen[i] = true;
    }
  }
  const auto missing = std::find(seen.begin(), seen.end(), false);
  if (missing != seen.end()) {
    throw Error(ErrorKind::InvalidPartition,
                "index " + std::to_string(missing - seen.begin()) + " is not covered");
  }
  return Partition(std::move(groups), outcomes);
}

Partition Partition::singletons(std::size_t outcomes) {
  std::vector<std::vector<std::size_t>> g(outcomes);
  for (std::size_t i = 0; i < outcomes; ++i) g[i] = {i};
  return Partition(std::move(g), outcomes);
}

Partition Partition::total(std::size_t outcomes) {
  std::vector<std::size_t> all(outcomes);
  for (std::size_t i = 0; i < outcomes; ++i) all[i] = i;
  return validated({std::move(all)}, outcomes);
}

Partition Partition::from_assignment(const std::vector<std::size_t>& assignment,
                                     std::size_t groups) {
  std::vector<std::vector<std::size_t>> g(groups);
  for (std::size_t n = 0; n < assignment.size(); ++n) {
    if (assignment[n] >= groups) {
      throw Error(ErrorKind::InvalidPartition, "assignment target out of range", std::nullopt,
                  std::nullopt, n);
    }
    g[assignment[n]].push_back(n);
  }
  return validated(std::move(g), assignment.size());
}

std::vector<std::size_t> Partition::assignment() const {
  std::vector<std::size_t> a(outcomes_);
  for (std::size_t j = 0; j < groups_.size(); ++j) {
    for (std::size_t i : groups_[j]) a[i] = j;
  }
  return a;
}

Partition Partition::then(const Partition& coarser) const {
  if (coarser.outcomes() != size()) {
    throw Error(ErrorKind::InvalidPartition, "partitions do not compose");
  }
  std::vector<std::vector<std::size_t>> g;
  g.reserve(coarser.size());
  for (const auto& outer : coarser.groups()) {
    std::vector<std::size_t> merged;
    for (std::size_t j : outer) merged.insert(merged.end(), groups_[j].begin(), groups_[j].end());
    std::sort(merged.begin(), merged.end());
    g.push_back(std::move(merged));
  }
  return validated(std::move(g), outcomes_);
}

// ---------------------------------------------------------------------------
// Projective decompositions

ProjectiveDecomposition validate_decomposition(std::vector<ComplexMatrix> mats,
                                               const Tolerances& tol) {
  const Index d = common_dim(mats, "decomposition");
  hermitize_each(mats, tol, "decomposition");

  std::vector<Index> ranks;
  ranks.reserve(mats.size());
  for (std::size_t m = 0; m < mats.size(); ++m) {
    const auto& p = mats[m];
    const double defect = max_abs(p * p - p);
    if (defect > tol.proj) {
      throw Error(ErrorKind::NotIdempotent,
                  "projector " + std::to_string(m) + " is not idempotent", defect, tol.proj, m);
    }
    const double trace = p.trace().real();
    const double rounded = std::round(trace);
    if (std::abs(trace - rounded) > kRankRoundingTolerance) {
      throw Error(ErrorKind::RankDeviation,
                  "trace of projector " + std::to_string(m) + " is not an integer",
                  std::abs(trace - rounded), kRankRoundingTolerance, m);
    }
    if (rounded < 1.0) {
      throw Error(ErrorKind::EmptyBlock, "projector " + std::to_string(m) + " is zero",
                  std::nullopt, std::nullopt, m);
    }
    ranks.push_back(static_cast<Index>(rounded));
  }

  for (std::size_t m = 0; m < mats.size(); ++m) {
    for (std::size_t n = m + 1; n < mats.size(); ++n) {
      const double overlap = max_abs(mats[m] * mats[n]);
      if (overlap > tol.proj) {
        throw Error(ErrorKind::NotOrthogonal,
                    "projectors " + std::to_string(m) + " and " + std::to_string(n) +
                        " are not orthogonal",
                    overlap, tol.proj, m, n);
      }
    }
  }
  require_complete(mats, d, tol, "decomposition");
  return ProjectiveDecomposition(d, std::move(mats), std::move(ranks));
}

ComplexMatrix ProjectiveDecomposition::range_basis(std::size_t m) const {
  const EigenDecomposition eig = hermitian_eig(HermitianMatrix::trusted(projectors_.at(m)));
  const Index r = block_dims_[m];
  // eigenvalues ascending: the rank-r range sits in the last r columns
  return eig.vectors.matrix().rightCols(r);
}

ProjectiveDecomposition decomposition_from_blocks(const UnitaryMatrix& u,
                                                  const std::vector<Index>& block_sizes) {
  Index total = 0;
  for (Index s : block_sizes) {
    if (s < 1) throw Error(ErrorKind::SizeMismatch, "block sizes must be positive");
    total += s;
  }
  if (total != u.dim() || block_sizes.empty()) {
    throw Error(ErrorKind::SizeMismatch, "block sizes sum to " + std::to_string(total) +
                                             ", expected " + std::to_string(u.dim()));
  }
  std::vector<ComplexMatrix> projectors;
  projectors.reserve(block_sizes.size());
  Index start = 0;
  for (Index s : block_sizes) {
    const auto cols = u.matrix().middleCols(start, s);
    projectors.push_back(cols * cols.adjoint());
    start += s;
  }
  return validate_decomposition(std::move(projectors));
}

ProjectiveDecomposition basis_decomposition(const UnitaryMatrix& u) {
  return decomposition_from_blocks(u, std::vector<Index>(static_cast<std::size_t>(u.dim()), 1));
}

ProjectiveDecomposition trivial_decomposition(Index d) {
  return validate_decomposition({ComplexMatrix::Identity(d, d)});
}

RefinementResult is_refinement(const ProjectiveDecomposition& fine,
                               const ProjectiveDecomposition& coarse, double tol) {
  if (fine.dim() != coarse.dim()) {
    throw Error(ErrorKind::DimensionMismatch, "decompositions act on spaces of dimension " +
                                                  std::to_string(fine.dim()) + " and " +
                                                  std::to_string(coarse.dim()));
  }
  RefinementWitness witness;
  witness.coarse_size = coarse.size();
  witness.assignment.resize(fine.size());

  for (std::size_t n = 0; n < fine.size(); ++n) {
    const auto& q = fine[n];
    std::size_t hits = 0;
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t m = 0; m < coarse.size(); ++m) {
      const double residual = max_abs(coarse[m] * q - q);
      best = std::min(best, residual);
      if (residual <= tol) {
        witness.assignment[n] = m;
        ++hits;
      }
    }
    if (hits == 0) return NotRefinement{NotRefinement::Reason::NoAbsorbingBlock, n, best};
    if (hits > 1) return NotRefinement{NotRefinement::Reason::AmbiguousBlock, n, 0.0};
  }

  const Index d = fine.dim();
  for (std::size_t m = 0; m < coarse.size(); ++m) {
    ComplexMatrix sum = ComplexMatrix::Zero(d, d);
    for (std::size_t n = 0; n < fine.size(); ++n) {
      if (witness.assignment[n] == m) sum += fine[n];
    }
    const double residual = max_abs(sum - coarse[m]);
    if (residual > tol) return NotRefinement{NotRefinement::Reason::SumMismatch, m, residual};
  }
  return witness;
}

ProjectiveDecomposition coarse_grain(const ProjectiveDecomposition& p,
                                     const Partition& partition) {
  return validate_decomposition(group_sums(p.projectors(), p.dim(), partition));
}

Refinement refine_randomly(const ProjectiveDecomposition& p, Rng& rng) {
  std::vector<std::size_t> splittable;
  for (std::size_t m = 0; m < p.size(); ++m) {
    if (p.block_dims()[m] >= 2) splittable.push_back(m);
  }
  if (splittable.empty()) {
    throw Error(ErrorKind::NothingToRefine, "every block has rank one");
  }
  const std::size_t target = splittable[uniform_index(rng, splittable.size())];
  const Index rank = p.block_dims()[target];

  const ComplexMatrix basis = p.range_basis(target) * haar_unitary(rank, rng).matrix();
  const Index first = 1 + static_cast<Index>(uniform_index(rng, static_cast<std::size_t>(rank - 1)));
  const auto head = basis.leftCols(first);
  const auto tail = basis.rightCols(rank - first);

  std::vector<ComplexMatrix> projectors;
  RefinementWitness witness;
  witness.coarse_size = p.size();
  for (std::size_t m = 0; m < p.size(); ++m) {
    if (m == target) {
      projectors.push_back(head * head.adjoint());
      projectors.push_back(tail * tail.adjoint());
      witness.assignment.push_back(m);
      witness.assignment.push_back(m);
    } else {
      projectors.push_back(p[m]);
      witness.assignment.push_back(m);
    }
  }
  return Refinement{validate_decomposition(std::move(projectors)), std::move(witness)};
}

ProjectiveDecomposition random_decomposition(Index d, const std::vector<Index>& block_sizes,
                                             Rng& rng) {
  return decomposition_from_blocks(haar_unitary(d, rng), block_sizes);
}

// ---------------------------------------------------------------------------
// POVMs

Povm validate_povm(std::vector<ComplexMatrix> mats, const Tolerances& tol) {
  const Index d = common_dim(mats, "POVM");
  hermitize_each(mats, tol, "POVM");
  for (std::size_t i = 0; i < mats.size(); ++i) {
    const double smallest = hermitian_eig(HermitianMatrix::trusted(mats[i])).values.minCoeff();
    if (smallest < -tol.psd) {
      throw Error(ErrorKind::NotPositive,
                  "POVM element " + std::to_string(i) + " has a negative eigenvalue", smallest,
                  tol.psd, i);
    }
  }
  require_complete(mats, d, tol, "POVM");
  return Povm(d, std::move(mats));
}

Povm povm_from_decomposition(const ProjectiveDecomposition& p) {
  return validate_povm(p.projectors());
}

Povm coarse_grain_povm(const Povm& e, const Partition& partition) {
  return validate_povm(group_sums(e.elements(), e.dim(), partition));
}

Povm random_povm(Index d, std::size_t outcomes, Rng& rng) {
  if (d < 1 || outcomes < 1) {
    throw Error(ErrorKind::InvalidArgument, "random_povm needs d >= 1 and at least one outcome");
  }
  std::vector<ComplexMatrix> grams;
  grams.reserve(outcomes);
  ComplexMatrix total = ComplexMatrix::Zero(d, d);
  for (std::size_t i = 0; i < outcomes; ++i) {
    const ComplexMatrix g = gaussian_matrix(d, d, rng);
    grams.push_back(g * g.adjoint());
    total += grams.back();
  }
  const EigenDecomposition eig =
      hermitian_eig(HermitianMatrix::trusted((total + total.adjoint()) / 2.0));
  const ComplexMatrix inv_root = spectral_apply(eig, [](double x) { return 1.0 / std::sqrt(x); });
  for (auto& g : grams) {
    g = inv_root * g * inv_root;
    g = (g + g.adjoint()) / 2.0;
  }
  return validate_povm(std::move(grams));
}

}  // namespace blockcoh
