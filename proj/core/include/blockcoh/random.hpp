#pragma once

// Seeded random instances: Haar unitaries, Ginibre-type mixed states,
// Gaussian pure states and block compositions. All randomness flows through
// an explicit engine; nothing here touches global state.

#include <cstdint>
#include <random>
#include <string_view>
#include <vector>

#include "blockcoh/spectral.hpp"

namespace blockcoh {

using Rng = std::mt19937_64;

/// Independent stream seed for (master seed, label, index) via splitmix64
/// mixing of an FNV-1a hash of the label.
std::uint64_t derive_seed(std::uint64_t master, std::string_view label, std::uint64_t index);

inline Rng make_rng(std::uint64_t seed) { return Rng(seed); }

/// Matrix of i.i.d. standard complex Gaussians, E|z|^2 = 1.
ComplexMatrix gaussian_matrix(Index rows, Index cols, Rng& rng);

/// Haar-distributed unitary: QR of a Ginibre matrix with the phases of
/// diag(R) folded back into Q.
UnitaryMatrix haar_unitary(Index d, Rng& rng);

/// Uniformly distributed unit vector in C^d.
ComplexVector random_unit_vector(Index d, Rng& rng);

/// G G^dagger / Tr(G G^dagger) with G a d x rank complex Gaussian matrix.
/// Throws InvalidArgument unless 1 <= rank <= d.
DensityMatrix random_density(Index d, Index rank, Rng& rng);

DensityMatrix random_pure(Index d, Rng& rng);

/// Uniformly random composition of d into positive parts (each of the d-1
/// gaps is a cut with probability 1/2).
std::vector<Index> random_composition(Index d, Rng& rng);

/// Flat Dirichlet sample on the (n-1)-simplex.
std::vector<double> random_simplex(std::size_t n, Rng& rng);

double uniform_real(Rng& rng, double lo = 0.0, double hi = 1.0);
std::size_t uniform_index(Rng& rng, std::size_t n);

}  // namespace blockcoh
