#pragma once

// The 1/2-affinity block coherence
//
//   C(rho, P) = 1 - sum_m Tr[(P_m sqrt(rho) P_m)^2],
//
// its closest free state, block dephasing, maximally coherent states and a
// sampled family of free (block-incoherent) operations.

#include <cstddef>
#include <string_view>
#include <variant>
#include <vector>

#include "blockcoh/decompositions.hpp"
#include "blockcoh/random.hpp"
#include "blockcoh/spectral.hpp"

namespace blockcoh {

/// Coherence values in (-kValueClampBand, 0) are reported as 0.
inline constexpr double kValueClampBand = 1e-12;

/// Tr[(P_m S P_m)^2] for each block, S = sqrt(rho).
std::vector<double> block_weights(const HermitianMatrix& sqrt_rho, const ProjectiveDecomposition& p);

/// Throws DimensionMismatch.
double block_coherence(const DensityMatrix& rho, const ProjectiveDecomposition& p);

/// 1 - [Tr(sqrt(rho) sqrt(sigma))]^2, clamped to [0, 1].
double affinity_distance(const DensityMatrix& rho, const DensityMatrix& sigma);

/// sum_m (P_m S P_m)^2 / sum_n Tr[(P_n S P_n)^2]. Blocks whose weight is at
/// most tol.zero are left empty. Throws DegenerateNormalization when all
/// blocks vanish, DimensionMismatch on size mismatch.
DensityMatrix closest_free_state(const DensityMatrix& rho, const ProjectiveDecomposition& p,
                                 const Tolerances& tol = {});

/// sum_m P_m rho P_m.
DensityMatrix dephase(const DensityMatrix& rho, const ProjectiveDecomposition& p);

/// Max-abs distance from rho to its dephased version.
double free_state_defect(const DensityMatrix& rho, const ProjectiveDecomposition& p);

/// (1/sqrt(M)) sum_m |psi_m> with |psi_m> Haar-random in the range of P_m.
DensityMatrix max_coherent_state(const ProjectiveDecomposition& p, Rng& rng);

/// Block-diagonal unitary built from one r x r unitary per block, expressed
/// in the range bases of p.
UnitaryMatrix block_diagonal_unitary(const ProjectiveDecomposition& p,
                                     const std::vector<UnitaryMatrix>& block_unitaries);

// ---------------------------------------------------------------------------
// Free operations

struct FreeOperation;

struct BlockUnitary {
  UnitaryMatrix u;  // commutes with every P_m
};

struct Dephasing {
  ProjectiveDecomposition p;
};

/// Exchanges the ranges of two equal-rank blocks a and b:
/// V = B_b W B_a^dagger + B_a W B_b^dagger + sum_{m != a,b} P_m,
/// with B_a, B_b range bases and W a unitary on the shared block dimension.
struct BlockSwap {
  std::size_t first;
  std::size_t second;
  UnitaryMatrix subspace_unitary;  // W
  UnitaryMatrix u;                 // V
};

struct ConvexMixture {
  std::vector<double> weights;  // a probability vector
  std::vector<FreeOperation> parts;
};

struct FreeOperation {
  enum class Kind { BlockUnitary, Dephasing, BlockSwap, ConvexMixture };
  std::variant<BlockUnitary, Dephasing, BlockSwap, ConvexMixture> op;

  Kind kind() const noexcept { return static_cast<Kind>(op.index()); }
};

std::string_view to_string(FreeOperation::Kind kind) noexcept;

BlockSwap make_block_swap(const ProjectiveDecomposition& p, std::size_t first, std::size_t second,
                          const UnitaryMatrix& w);

/// Uniformly picks a kind. BlockSwap falls back to BlockUnitary when no two
/// blocks share a rank; ConvexMixture mixes two freshly sampled operations
/// (non-mixtures once `depth` reaches 2).
FreeOperation sample_free_operation(const ProjectiveDecomposition& p, Rng& rng, int depth = 0);

/// Throws DimensionMismatch.
DensityMatrix apply_operation(const FreeOperation& op, const DensityMatrix& rho);

}  // namespace blockcoh
