#include <gtest/gtest.h>

#include <cmath>

#include "blockcoh/block_coherence.hpp"
#include "blockcoh/errors.hpp"
#include "test_util.hpp"

namespace blockcoh {
namespace {

using test::diag;
using test::ket;

// Pure-state reduction: C(|psi>, P) = 1 - sum_m ||P_m psi||^4.
double pure_state_oracle(const ComplexVector& psi, const ProjectiveDecomposition& p) {
  const ComplexVector unit = psi / psi.norm();
  double c = 1.0;
  for (const auto& proj : p.projectors()) c -= std::pow((proj * unit).squaredNorm(), 2);
  return c;
}

// 1 - sum_m ||P_m S P_m||^2 = sum_{m != n} ||P_m S P_n||_F^2 because ||S||_F^2 = Tr rho = 1.
double off_block_oracle(const DensityMatrix& rho, const ProjectiveDecomposition& p) {
  const ComplexMatrix s = psd_sqrt(rho).matrix();
  double c = 0.0;
  for (std::size_t m = 0; m < p.size(); ++m) {
    for (std::size_t n = 0; n < p.size(); ++n) {
      if (m != n) c += (p[m] * s * p[n]).squaredNorm();
    }
  }
  return c;
}

ProjectiveDecomposition draw(Index d, Rng& rng) {
  return random_decomposition(d, random_composition(d, rng), rng);
}

DensityMatrix random_free(const ProjectiveDecomposition& p, Rng& rng) {
  const auto w = random_simplex(p.size(), rng);
  ComplexMatrix sigma = ComplexMatrix::Zero(p.dim(), p.dim());
  for (std::size_t m = 0; m < p.size(); ++m) {
    const ComplexMatrix b = p.range_basis(m);
    const Index r = p.block_dims()[m];
    sigma += w[m] * b * random_density(r, 1 + Index(uniform_index(rng, r)), rng).matrix() *
             b.adjoint();
  }
  return validate_density(sigma);
}

TEST(BlockCoherence, TrivialDecompositionIsZero) {
  Rng rng = make_rng(1);
  for (Index d = 1; d <= 6; ++d) {
    EXPECT_NEAR(block_coherence(random_density(d, d, rng), trivial_decomposition(d)), 0.0, 1e-12);
  }
}

TEST(BlockCoherence, PlusStateInZBasis) {
  const DensityMatrix plus = DensityMatrix::from_pure(test::plus());
  EXPECT_NEAR(block_coherence(plus, test::z_basis()), 0.5, 1e-12);
}

TEST(BlockCoherence, BlockDiagonalStateIsZero) {
  Rng rng = make_rng(2);
  const auto p = random_decomposition(5, {2, 3}, rng);
  EXPECT_NEAR(block_coherence(dephase(random_density(5, 5, rng), p), p), 0.0, 1e-12);
}

TEST(BlockCoherence, MatchesPureStateAndOffBlockOracles) {
  Rng rng = make_rng(3);
  for (int trial = 0; trial < 100; ++trial) {
    const Index d = 1 + Index(uniform_index(rng, 8));
    const auto p = draw(d, rng);
    const ComplexVector psi = random_unit_vector(d, rng);
    EXPECT_NEAR(block_coherence(DensityMatrix::from_pure(psi), p), pure_state_oracle(psi, p),
                1e-10);
    const DensityMatrix rho = random_density(d, 1 + Index(uniform_index(rng, d)), rng);
    EXPECT_NEAR(block_coherence(rho, p), off_block_oracle(rho, p), 1e-10);
  }
}

TEST(BlockCoherence, DimensionMismatch) {
  const DensityMatrix rho = validate_density(ComplexMatrix::Identity(3, 3) / 3.0);
  try {
    block_coherence(rho, test::z_basis());
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::DimensionMismatch);
  }
}

TEST(AffinityDistance, SpotValues) {
  Rng rng = make_rng(4);
  const DensityMatrix rho = random_density(4, 3, rng);
  EXPECT_NEAR(affinity_distance(rho, rho), 0.0, 1e-12);
  const DensityMatrix zero = DensityMatrix::from_pure(ket({1, 0}));
  const DensityMatrix one = DensityMatrix::from_pure(ket({0, 1}));
  EXPECT_NEAR(affinity_distance(zero, one), 1.0, 1e-15);
  // Tr(sqrt(I/2) |0><0|) = 1/sqrt(2).
  const DensityMatrix mixed = validate_density(ComplexMatrix::Identity(2, 2) / 2.0);
  EXPECT_NEAR(affinity_distance(mixed, zero), 0.5, 1e-12);
}

TEST(ClosestFreeState, PlusStateGivesMaximallyMixed) {
  const DensityMatrix plus = DensityMatrix::from_pure(test::plus());
  const DensityMatrix sigma = closest_free_state(plus, test::z_basis());
  EXPECT_LE(max_abs(sigma.matrix() - ComplexMatrix::Identity(2, 2) / 2.0), 1e-12);
  EXPECT_NEAR(affinity_distance(plus, sigma), 0.5, 1e-12);
}

TEST(ClosestFreeState, FreeStateIsItsOwnMinimizer) {
  Rng rng = make_rng(5);
  for (int trial = 0; trial < 20; ++trial) {
    const Index d = 1 + Index(uniform_index(rng, 6));
    const auto p = draw(d, rng);
    const DensityMatrix free_state = random_free(p, rng);
    EXPECT_LE(max_abs(closest_free_state(free_state, p).matrix() - free_state.matrix()), 1e-9);
  }
}

TEST(ClosestFreeState, BeatsSampledFreeStates) {
  Rng rng = make_rng(6);
  for (int trial = 0; trial < 10; ++trial) {
    const auto p = random_decomposition(4, {2, 2}, rng);
    const DensityMatrix rho = random_density(4, 4, rng);
    const DensityMatrix sigma = closest_free_state(rho, p);
    const double best = affinity_distance(rho, sigma);
    EXPECT_NEAR(best, block_coherence(rho, p), 1e-9);
    EXPECT_LE(free_state_defect(sigma, p), 1e-9);
    for (int k = 0; k < 200; ++k) {
      EXPECT_GE(affinity_distance(rho, random_free(p, rng)), best - 1e-9);
    }
  }
}

TEST(ClosestFreeState, ZeroWeightBlocksAreEmpty) {
  // rho supported on the first block only: block 1 gets no weight.
  const auto p = decomposition_from_blocks(UnitaryMatrix::identity(3), {2, 1});
  const DensityMatrix rho = DensityMatrix::from_pure(ket({0.6, 0.8, 0.0}));
  const DensityMatrix sigma = closest_free_state(rho, p);
  EXPECT_LE(max_abs(p[1] * sigma.matrix()), 1e-15);
  EXPECT_LE(max_abs(sigma.matrix() - rho.matrix()), 1e-12);
}

TEST(Dephase, Examples) {
  const DensityMatrix plus = DensityMatrix::from_pure(test::plus());
  EXPECT_LE(max_abs(dephase(plus, test::z_basis()).matrix() - diag({0.5, 0.5})), 1e-15);

  Rng rng = make_rng(7);
  const DensityMatrix rho = random_density(4, 4, rng);
  EXPECT_LE(max_abs(dephase(rho, trivial_decomposition(4)).matrix() - rho.matrix()), 1e-15);
  const auto p = random_decomposition(4, {1, 3}, rng);
  const DensityMatrix once = dephase(rho, p);
  EXPECT_LE(max_abs(dephase(once, p).matrix() - once.matrix()), 1e-12);
  EXPECT_NO_THROW(validate_density(once.matrix()));
}

TEST(MaxCoherentState, HitsBound) {
  Rng rng = make_rng(8);
  EXPECT_NEAR(block_coherence(max_coherent_state(test::z_basis(), rng), test::z_basis()), 0.5,
              1e-9);
  const auto trivial = trivial_decomposition(3);
  const DensityMatrix psi = max_coherent_state(trivial, rng);
  EXPECT_NEAR(psi.purity(), 1.0, 1e-12);
  EXPECT_NEAR(block_coherence(psi, trivial), 0.0, 1e-12);
  const auto basis = basis_decomposition(haar_unitary(4, rng));
  EXPECT_NEAR(block_coherence(max_coherent_state(basis, rng), basis), 0.75, 1e-9);
}

TEST(MaxCoherentState, SkewedSuperpositionFallsShort) {
  // ||P_0 psi||^2 = 0.9: C = 1 - 0.81 - 0.01 = 0.18.
  const DensityMatrix psi = DensityMatrix::from_pure(ket({std::sqrt(0.9), std::sqrt(0.1)}));
  EXPECT_NEAR(block_coherence(psi, test::z_basis()), 0.18, 1e-12);
}

TEST(FreeOperations, IdentityBlockUnitary) {
  Rng rng = make_rng(9);
  const DensityMatrix rho = random_density(3, 3, rng);
  const FreeOperation id{BlockUnitary{UnitaryMatrix::identity(3)}};
  EXPECT_LE(max_abs(apply_operation(id, rho).matrix() - rho.matrix()), 1e-15);
}

TEST(FreeOperations, DephasingIsIdempotent) {
  Rng rng = make_rng(10);
  const auto p = random_decomposition(4, {2, 1, 1}, rng);
  const DensityMatrix rho = random_density(4, 2, rng);
  const FreeOperation deph{Dephasing{p}};
  const DensityMatrix once = apply_operation(deph, rho);
  EXPECT_LE(max_abs(apply_operation(deph, once).matrix() - once.matrix()), 1e-12);
  EXPECT_LE(free_state_defect(once, p), 1e-12);
}

TEST(FreeOperations, ConvexMixtureIsWeightedSum) {
  Rng rng = make_rng(11);
  const auto p = random_decomposition(4, {2, 2}, rng);
  const DensityMatrix rho = random_density(4, 4, rng);
  const FreeOperation a = sample_free_operation(p, rng, 2);
  const FreeOperation b = sample_free_operation(p, rng, 2);
  ConvexMixture mix;
  mix.weights = {0.3, 0.7};
  mix.parts = {a, b};
  const ComplexMatrix expected =
      0.3 * apply_operation(a, rho).matrix() + 0.7 * apply_operation(b, rho).matrix();
  EXPECT_LE(max_abs(apply_operation(FreeOperation{mix}, rho).matrix() - expected), 1e-12);
}

TEST(FreeOperations, RankOneBlockUnitariesAreDiagonalPhases) {
  Rng rng = make_rng(12);
  const auto p = decomposition_from_blocks(UnitaryMatrix::identity(3), {1, 1, 1});
  for (int k = 0; k < 20; ++k) {
    const FreeOperation op = sample_free_operation(p, rng, 2);
    if (op.kind() != FreeOperation::Kind::BlockUnitary) continue;
    const ComplexMatrix u = std::get<BlockUnitary>(op.op).u.matrix();
    ComplexMatrix off = u;
    off.diagonal().setZero();
    EXPECT_LE(max_abs(off), 1e-15);
    for (Index i = 0; i < 3; ++i) EXPECT_NEAR(std::abs(u(i, i)), 1.0, 1e-14);
  }
}

TEST(FreeOperations, BlockSwapSquaredIsBlockUnitary) {
  Rng rng = make_rng(13);
  const auto p = random_decomposition(5, {2, 1, 2}, rng);
  const UnitaryMatrix w = haar_unitary(2, rng);
  const BlockSwap swap = make_block_swap(p, 0, 2, w);
  EXPECT_LE(swap.u.unitarity_defect(), 1e-12);

  const UnitaryMatrix w2 = UnitaryMatrix::trusted(w.matrix() * w.matrix());
  const UnitaryMatrix expected =
      block_diagonal_unitary(p, {w2, UnitaryMatrix::identity(1), w2});
  EXPECT_LE(max_abs(swap.u.matrix() * swap.u.matrix() - expected.matrix()), 1e-12);

  // The swap moves block 0 onto block 2.
  EXPECT_LE(max_abs(swap.u.matrix() * p[0] * swap.u.matrix().adjoint() - p[2]), 1e-12);
  EXPECT_THROW(make_block_swap(p, 0, 1, w), Error);
}

TEST(FreeOperations, SampledFamilyKeepsFreeStatesFreeAndIsMonotone) {
  Rng rng = make_rng(14);
  int kinds[4] = {0, 0, 0, 0};
  for (int trial = 0; trial < 200; ++trial) {
    const Index d = 1 + Index(uniform_index(rng, 6));
    const auto p = draw(d, rng);
    const FreeOperation op = sample_free_operation(p, rng);
    ++kinds[static_cast<int>(op.kind())];
    EXPECT_LE(free_state_defect(apply_operation(op, random_free(p, rng)), p), 1e-9);
    const DensityMatrix rho = random_density(d, d, rng);
    EXPECT_LE(block_coherence(apply_operation(op, rho), p), block_coherence(rho, p) + 1e-9);
  }
  for (int k : kinds) EXPECT_GT(k, 0);
}

TEST(BlockCoherence, BlockUnitaryInvariance) {
  Rng rng = make_rng(15);
  for (int trial = 0; trial < 50; ++trial) {
    const Index d = 1 + Index(uniform_index(rng, 8));
    const auto p = draw(d, rng);
    std::vector<UnitaryMatrix> blocks;
    for (Index r : p.block_dims()) blocks.push_back(haar_unitary(r, rng));
    const UnitaryMatrix u = block_diagonal_unitary(p, blocks);
    for (const auto& proj : p.projectors()) {
      EXPECT_LE(max_abs(u.matrix() * proj - proj * u.matrix()), 1e-10);
    }
    const DensityMatrix rho = random_density(d, d, rng);
    const DensityMatrix rotated =
        validate_density(u.matrix() * rho.matrix() * u.matrix().adjoint());
    EXPECT_NEAR(block_coherence(rotated, p), block_coherence(rho, p), 1e-9);
  }
}

TEST(BlockCoherence, PropertyRangeAndFaithfulness) {
  Rng rng = make_rng(16);
  for (int trial = 0; trial < 100; ++trial) {
    const Index d = 1 + Index(uniform_index(rng, 8));
    const auto p = draw(d, rng);
    const DensityMatrix rho = random_density(d, 1 + Index(uniform_index(rng, d)), rng);
    const double c = block_coherence(rho, p);
    EXPECT_GE(c, -1e-12);
    EXPECT_LE(c, 1.0);
    const bool free_state = free_state_defect(rho, p) <= 1e-7;
    EXPECT_EQ(c <= 1e-9, free_state);
  }
}

}  // namespace
}  // namespace blockcoh
