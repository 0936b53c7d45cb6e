#include <gtest/gtest.h>

#include <functional>

#include "blockcoh/decompositions.hpp"
#include "blockcoh/errors.hpp"
#include "test_util.hpp"

namespace blockcoh {
namespace {

using test::diag;
using test::projector;

ErrorKind kind_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  ADD_FAILURE() << "no error thrown";
  return ErrorKind::InvalidArgument;
}

TEST(ValidateDecomposition, BasisAndTrivial) {
  const auto z = test::z_basis();
  EXPECT_EQ(z.size(), 2u);
  EXPECT_EQ(z.block_dims(), (std::vector<Index>{1, 1}));
  for (Index d = 1; d <= 5; ++d) {
    const auto t = trivial_decomposition(d);
    EXPECT_EQ(t.block_dims(), (std::vector<Index>{d}));
  }
}

TEST(ValidateDecomposition, OverlappingProjectorsReportPair) {
  try {
    validate_decomposition({diag({1, 0}), projector(test::plus())});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::NotOrthogonal);
    EXPECT_EQ(*e.first_index(), 0u);
    EXPECT_EQ(*e.second_index(), 1u);
  }
}

TEST(ValidateDecomposition, OtherErrors) {
  EXPECT_EQ(kind_of([] { validate_decomposition({diag({0.5, 0}), diag({0, 1})}); }),
            ErrorKind::NotIdempotent);
  EXPECT_EQ(kind_of([] { validate_decomposition({diag({1, 0})}); }), ErrorKind::Incomplete);
  EXPECT_EQ(kind_of([] { validate_decomposition({}); }), ErrorKind::Incomplete);
  EXPECT_EQ(kind_of([] {
              validate_decomposition({diag({1, 0}), diag({0, 1}), diag({0, 0})});
            }),
            ErrorKind::EmptyBlock);
  EXPECT_EQ(kind_of([] { validate_decomposition({diag({1, 0}), diag({0, 1, 0})}); }),
            ErrorKind::DimensionMismatch);
  ComplexMatrix skew = diag({1, 0});
  skew(0, 1) = 0.1;
  EXPECT_EQ(kind_of([&] { validate_decomposition({skew, diag({0, 1})}); }),
            ErrorKind::NonHermitian);
}

TEST(DecompositionFromBlocks, IdentityAndHaar) {
  const auto basis = decomposition_from_blocks(UnitaryMatrix::identity(2), {1, 1});
  EXPECT_LE(max_abs(basis[0] - diag({1, 0})), 0.0);
  EXPECT_LE(max_abs(basis[1] - diag({0, 1})), 0.0);

  const auto halves = decomposition_from_blocks(UnitaryMatrix::identity(4), {2, 2});
  EXPECT_LE(max_abs(halves[0] - diag({1, 1, 0, 0})), 0.0);
  EXPECT_LE(max_abs(halves[1] - diag({0, 0, 1, 1})), 0.0);

  Rng rng = make_rng(31);
  const auto p = random_decomposition(5, {2, 3}, rng);
  EXPECT_NEAR(p[0].trace().real(), 2.0, 1e-12);
  EXPECT_NEAR(p[1].trace().real(), 3.0, 1e-12);
  EXPECT_EQ(p.block_dims(), (std::vector<Index>{2, 3}));

  EXPECT_EQ(kind_of([] { decomposition_from_blocks(UnitaryMatrix::identity(3), {1, 1}); }),
            ErrorKind::SizeMismatch);
}

TEST(RangeBasis, SpansBlock) {
  Rng rng = make_rng(2);
  const auto p = random_decomposition(6, {1, 3, 2}, rng);
  for (std::size_t m = 0; m < p.size(); ++m) {
    const ComplexMatrix b = p.range_basis(m);
    EXPECT_EQ(b.cols(), p.block_dims()[m]);
    EXPECT_LE(max_abs(b * b.adjoint() - p[m]), 1e-10);
  }
}

TEST(IsRefinement, EverythingRefinesTrivial) {
  Rng rng = make_rng(1);
  const auto q = basis_decomposition(haar_unitary(4, rng));
  const auto result = is_refinement(q, trivial_decomposition(4));
  ASSERT_TRUE(std::holds_alternative<RefinementWitness>(result));
  EXPECT_EQ(std::get<RefinementWitness>(result).assignment,
            (std::vector<std::size_t>{0, 0, 0, 0}));
}

TEST(IsRefinement, Reflexive) {
  Rng rng = make_rng(9);
  for (int trial = 0; trial < 20; ++trial) {
    const Index d = 1 + static_cast<Index>(uniform_index(rng, 7));
    const auto p = random_decomposition(d, random_composition(d, rng), rng);
    const auto result = is_refinement(p, p);
    ASSERT_TRUE(std::holds_alternative<RefinementWitness>(result));
    const auto& w = std::get<RefinementWitness>(result);
    for (std::size_t n = 0; n < p.size(); ++n) EXPECT_EQ(w.assignment[n], n);
  }
}

TEST(IsRefinement, ZAndXBasesAreIncomparable) {
  const auto result = is_refinement(test::z_basis(), test::x_basis());
  ASSERT_TRUE(std::holds_alternative<NotRefinement>(result));
  const auto& nr = std::get<NotRefinement>(result);
  EXPECT_EQ(nr.reason, NotRefinement::Reason::NoAbsorbingBlock);
  EXPECT_EQ(nr.index, 0u);
  // |P_+ |0><0| - |0><0|| has max entry 1/2.
  EXPECT_NEAR(nr.residual, 0.5, 1e-12);
}

TEST(IsRefinement, SumMismatchAndDimensionMismatch) {
  // Fine blocks all sit inside the coarse ones, but block 1 of the coarse
  // decomposition is never reached.
  const auto coarse = validate_decomposition({diag({1, 0, 0}), diag({0, 1, 1})});
  const auto fine = validate_decomposition({diag({1, 0, 0}), diag({0, 1, 0}), diag({0, 0, 1})});
  EXPECT_TRUE(std::holds_alternative<RefinementWitness>(is_refinement(fine, coarse)));
  const auto reversed = is_refinement(coarse, fine);
  ASSERT_TRUE(std::holds_alternative<NotRefinement>(reversed));
  EXPECT_EQ(std::get<NotRefinement>(reversed).reason, NotRefinement::Reason::NoAbsorbingBlock);
  EXPECT_EQ(std::get<NotRefinement>(reversed).index, 1u);

  EXPECT_EQ(kind_of([] { is_refinement(trivial_decomposition(2), trivial_decomposition(3)); }),
            ErrorKind::DimensionMismatch);
}

TEST(IsRefinement, UnrelatedHaarDecompositionsAreNotOrdered) {
  Rng rng = make_rng(1234);
  for (int trial = 0; trial < 100; ++trial) {
    const Index d = 2 + static_cast<Index>(uniform_index(rng, 6));
    auto sizes_a = random_composition(d, rng);
    auto sizes_b = random_composition(d, rng);
    if (sizes_a.size() == 1) sizes_a = {1, d - 1};
    if (sizes_b.size() == 1) sizes_b = {1, d - 1};
    const auto a = random_decomposition(d, sizes_a, rng);
    const auto b = random_decomposition(d, sizes_b, rng);
    EXPECT_TRUE(std::holds_alternative<NotRefinement>(is_refinement(a, b)));
    EXPECT_TRUE(std::holds_alternative<NotRefinement>(is_refinement(b, a)));
  }
}

TEST(CoarseGrain, DefinitionSingletonsAndTotal) {
  const auto p = decomposition_from_blocks(UnitaryMatrix::identity(4), {1, 2, 1});
  const auto merged = coarse_grain(p, Partition::validated({{0, 1}, {2}}, 3));
  EXPECT_EQ(merged.size(), 2u);
  EXPECT_LE(max_abs(merged[0] - (p[0] + p[1])), 0.0);

  const auto same = coarse_grain(p, Partition::singletons(3));
  for (std::size_t m = 0; m < 3; ++m) EXPECT_LE(max_abs(same[m] - p[m]), 0.0);

  const auto all = coarse_grain(p, Partition::total(3));
  ASSERT_EQ(all.size(), 1u);
  EXPECT_LE(max_abs(all[0] - ComplexMatrix::Identity(4, 4)), 1e-15);

  const auto witness = is_refinement(p, merged);
  ASSERT_TRUE(std::holds_alternative<RefinementWitness>(witness));
  EXPECT_EQ(std::get<RefinementWitness>(witness).assignment, (std::vector<std::size_t>{0, 0, 1}));

  EXPECT_EQ(kind_of([&] { coarse_grain(p, Partition::singletons(2)); }),
            ErrorKind::InvalidPartition);
}

TEST(Partition, Validation) {
  EXPECT_EQ(kind_of([] { Partition::validated({{0}, {0, 1}}, 2); }), ErrorKind::InvalidPartition);
  EXPECT_EQ(kind_of([] { Partition::validated({{0}}, 2); }), ErrorKind::InvalidPartition);
  EXPECT_EQ(kind_of([] { Partition::validated({{0, 1}, {}}, 2); }), ErrorKind::InvalidPartition);
  EXPECT_EQ(kind_of([] { Partition::validated({{0, 2}}, 2); }), ErrorKind::InvalidPartition);
  const auto p = Partition::validated({{2, 0}, {1}}, 3);
  EXPECT_EQ(p.assignment(), (std::vector<std::size_t>{0, 1, 0}));
}

TEST(Partition, Composition) {
  const auto inner = Partition::validated({{0, 3}, {1}, {2, 4}}, 5);
  const auto outer = Partition::validated({{0, 2}, {1}}, 3);
  const auto composed = inner.then(outer);
  EXPECT_EQ(composed.groups(), (std::vector<std::vector<std::size_t>>{{0, 2, 3, 4}, {1}}));
}

TEST(RefineRandomly, SplitsIdentity) {
  Rng rng = make_rng(17);
  const auto p = trivial_decomposition(4);
  const Refinement r = refine_randomly(p, rng);
  EXPECT_EQ(r.fine.size(), 2u);
  EXPECT_LE(max_abs(r.fine[0] + r.fine[1] - ComplexMatrix::Identity(4, 4)), 1e-12);
  EXPECT_EQ(r.witness.assignment, (std::vector<std::size_t>{0, 0}));
}

TEST(RefineRandomly, NothingToRefine) {
  EXPECT_EQ(kind_of([] {
              Rng rng = make_rng(1);
              refine_randomly(test::z_basis(), rng);
            }),
            ErrorKind::NothingToRefine);
}

TEST(RefineRandomly, WitnessRoundTripAndTransitivity) {
  Rng rng = make_rng(44);
  for (int trial = 0; trial < 50; ++trial) {
    const Index d = 2 + static_cast<Index>(uniform_index(rng, 7));
    auto sizes = random_composition(d, rng);
    if (std::all_of(sizes.begin(), sizes.end(), [](Index s) { return s == 1; })) sizes = {d};
    const auto p = random_decomposition(d, sizes, rng);
    const Refinement q = refine_randomly(p, rng);

    const auto found = is_refinement(q.fine, p);
    ASSERT_TRUE(std::holds_alternative<RefinementWitness>(found));
    EXPECT_EQ(std::get<RefinementWitness>(found), q.witness);

    const auto back = coarse_grain(q.fine, q.witness.partition());
    ASSERT_EQ(back.size(), p.size());
    for (std::size_t m = 0; m < p.size(); ++m) EXPECT_LE(max_abs(back[m] - p[m]), 1e-9);

    bool can_refine = false;
    for (Index r : q.fine.block_dims()) can_refine |= r >= 2;
    if (can_refine) {
      const Refinement r = refine_randomly(q.fine, rng);
      EXPECT_TRUE(std::holds_alternative<RefinementWitness>(is_refinement(r.fine, p)));
    }
  }
}

TEST(RefineRandomly, MaximalChainTerminates) {
  Rng rng = make_rng(8);
  const Index d = 6;
  ProjectiveDecomposition current = trivial_decomposition(d);
  int steps = 0;
  while (current.size() < static_cast<std::size_t>(d)) {
    Refinement r = refine_randomly(current, rng);
    EXPECT_TRUE(std::holds_alternative<RefinementWitness>(is_refinement(r.fine, current)));
    current = std::move(r.fine);
    ++steps;
  }
  // Each split lowers sum(rank - 1) by exactly one.
  EXPECT_EQ(steps, d - 1);
  EXPECT_TRUE(
      std::holds_alternative<RefinementWitness>(is_refinement(current, trivial_decomposition(d))));
}

TEST(IsRefinement, EqualBlockCountMeansEqualDecomposition) {
  Rng rng = make_rng(71);
  for (int trial = 0; trial < 20; ++trial) {
    const Index d = 2 + static_cast<Index>(uniform_index(rng, 6));
    const auto p = random_decomposition(d, random_composition(d, rng), rng);
    // A permuted copy is the only kind of refinement with the same block count.
    std::vector<ComplexMatrix> shuffled(p.projectors().rbegin(), p.projectors().rend());
    const auto q = validate_decomposition(shuffled);
    const auto result = is_refinement(q, p);
    ASSERT_TRUE(std::holds_alternative<RefinementWitness>(result));
    const auto& w = std::get<RefinementWitness>(result);
    std::vector<bool> hit(p.size(), false);
    for (std::size_t n = 0; n < q.size(); ++n) {
      EXPECT_FALSE(hit[w.assignment[n]]);
      hit[w.assignment[n]] = true;
      EXPECT_LE(max_abs(q[n] - p[w.assignment[n]]), 1e-9);
    }
  }
}

TEST(ValidatePovm, Examples) {
  EXPECT_EQ(validate_povm({diag({1, 0}), diag({0, 1})}).size(), 2u);
  const ComplexMatrix half = ComplexMatrix::Identity(2, 2) / 2.0;
  EXPECT_EQ(validate_povm({half, half}).size(), 2u);
  EXPECT_EQ(kind_of([] {
              validate_povm({ComplexMatrix::Identity(2, 2), ComplexMatrix::Identity(2, 2)});
            }),
            ErrorKind::Incomplete);
  EXPECT_EQ(kind_of([] { validate_povm({diag({1.2, 0.5}), diag({-0.2, 0.5})}); }),
            ErrorKind::NotPositive);
}

TEST(CoarseGrainPovm, Examples) {
  Rng rng = make_rng(5);
  const Povm e = random_povm(3, 4, rng);
  const Povm same = coarse_grain_povm(e, Partition::singletons(4));
  for (std::size_t i = 0; i < 4; ++i) EXPECT_LE(max_abs(same[i] - e[i]), 1e-15);
  const Povm all = coarse_grain_povm(e, Partition::total(4));
  EXPECT_LE(max_abs(all[0] - ComplexMatrix::Identity(3, 3)), 1e-12);

  // Basis projectors padded with a zero element: merging the first two
  // gives the identity.
  const Povm padded = validate_povm({diag({1, 0}), diag({0, 1}), diag({0, 0})});
  const Povm merged = coarse_grain_povm(padded, Partition::validated({{0, 1}, {2}}, 3));
  EXPECT_LE(max_abs(merged[0] - ComplexMatrix::Identity(2, 2)), 0.0);
  EXPECT_LE(max_abs(merged[1]), 0.0);
}

TEST(RandomPovm, CompleteAndPositive) {
  Rng rng = make_rng(13);
  for (int trial = 0; trial < 20; ++trial) {
    const Index d = 1 + static_cast<Index>(uniform_index(rng, 6));
    const std::size_t m = 1 + uniform_index(rng, 6);
    const Povm e = random_povm(d, m, rng);
    ComplexMatrix sum = ComplexMatrix::Zero(d, d);
    for (const auto& x : e.elements()) sum += x;
    EXPECT_LE(max_abs(sum - ComplexMatrix::Identity(d, d)), 1e-12);
  }
}

}  // namespace
}  // namespace blockcoh
