#include <gtest/gtest.h>

#include <functional>

#include "blockcoh/errors.hpp"
#include "blockcoh/json_io.hpp"
#include "test_util.hpp"

namespace blockcoh {
namespace {

ErrorKind kind_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  ADD_FAILURE() << "no error thrown";
  return ErrorKind::InvalidArgument;
}

TEST(JsonIo, MatrixRoundTripIsExact) {
  Rng rng = make_rng(1);
  const ComplexMatrix m = gaussian_matrix(3, 4, rng);
  const Json j = matrix_to_json(m);
  EXPECT_EQ(matrix_from_json(parse_json(j.dump())), m);
}

TEST(JsonIo, RealEntriesAreAccepted) {
  const ComplexMatrix m = matrix_from_json(parse_json("[[0.5, [0, 0.5]], [[0, -0.5], 0.5]]"));
  EXPECT_EQ(m(0, 0), Complex(0.5, 0));
  EXPECT_EQ(m(0, 1), Complex(0, 0.5));
  EXPECT_NO_THROW(density_from_json(parse_json("[[0.5, [0, 0.5]], [[0, -0.5], 0.5]]")));
}

TEST(JsonIo, DensityWrappers) {
  const Json bare = parse_json("[[1, 0], [0, 0]]");
  const Json wrapped = Json{{"matrix", bare}};
  const Json state = Json{{"state", bare}};
  EXPECT_EQ(density_from_json(bare).matrix(), density_from_json(wrapped).matrix());
  EXPECT_EQ(density_from_json(bare).matrix(), density_from_json(state).matrix());
  EXPECT_EQ(kind_of([] { density_from_json(Json{{"rho", 1}}); }), ErrorKind::ParseError);
}

TEST(JsonIo, DensityValidationErrorsPassThrough) {
  EXPECT_EQ(kind_of([] { density_from_json(parse_json("[[1, 1], [0, 0]]")); }),
            ErrorKind::NonHermitian);
  EXPECT_EQ(kind_of([] { density_from_json(parse_json("[[1, 0], [0, 1]]")); }),
            ErrorKind::TraceDeviation);
  EXPECT_EQ(kind_of([] { density_from_json(parse_json("[[1.5, 0], [0, -0.5]]")); }),
            ErrorKind::NotPositive);
  EXPECT_EQ(kind_of([] { density_from_json(parse_json("[[1, 0]]")); }), ErrorKind::NotSquare);
}

TEST(JsonIo, MalformedInput) {
  EXPECT_EQ(kind_of([] { parse_json("[[1, 0], "); }), ErrorKind::ParseError);
  EXPECT_EQ(kind_of([] { matrix_from_json(parse_json("[]")); }), ErrorKind::ParseError);
  EXPECT_EQ(kind_of([] { matrix_from_json(parse_json("[[1, 0], [0]]")); }),
            ErrorKind::ParseError);
  EXPECT_EQ(kind_of([] { matrix_from_json(parse_json("[[\"a\"]]")); }), ErrorKind::ParseError);
  EXPECT_EQ(kind_of([] { matrix_from_json(parse_json("[[[1, 2, 3]]]")); }),
            ErrorKind::ParseError);
  EXPECT_EQ(kind_of([] { decomposition_from_json(parse_json("{\"dim\": 2}")); }),
            ErrorKind::ParseError);
}

TEST(JsonIo, DecompositionRoundTrip) {
  Rng rng = make_rng(2);
  const auto p = random_decomposition(4, {1, 3}, rng);
  const Json j = decomposition_to_json(p);
  EXPECT_EQ(j["dim"], 4);
  const auto back = decomposition_from_json(parse_json(j.dump()));
  ASSERT_EQ(back.size(), 2u);
  for (std::size_t m = 0; m < 2; ++m) EXPECT_LE(max_abs(back[m] - p[m]), 1e-15);
  EXPECT_EQ(back.block_dims(), p.block_dims());
}

TEST(JsonIo, DeclaredDimensionMustMatch) {
  Json j = decomposition_to_json(test::z_basis());
  j["dim"] = 3;
  EXPECT_EQ(kind_of([&] { decomposition_from_json(j); }), ErrorKind::DimensionMismatch);
}

TEST(JsonIo, PovmRoundTrip) {
  Rng rng = make_rng(3);
  const Povm e = random_povm(3, 5, rng);
  const Povm back = povm_from_json(parse_json(povm_to_json(e).dump()));
  ASSERT_EQ(back.size(), 5u);
  for (std::size_t i = 0; i < 5; ++i) EXPECT_LE(max_abs(back[i] - e[i]), 1e-15);
  EXPECT_EQ(kind_of([] {
              povm_from_json(parse_json("{\"elements\": [[[1, 0], [0, 1]], [[1, 0], [0, 0]]]}"));
            }),
            ErrorKind::Incomplete);
}

TEST(JsonIo, Partition) {
  const Partition p = partition_from_json(parse_json("{\"groups\": [[0, 2], [1]]}"), 3);
  EXPECT_EQ(p.groups(), (std::vector<std::vector<std::size_t>>{{0, 2}, {1}}));
  EXPECT_EQ(partition_to_json(p).dump(), "{\"groups\":[[0,2],[1]]}");
  EXPECT_EQ(kind_of([] { partition_from_json(parse_json("{\"groups\": [[0], [0, 1]]}"), 2); }),
            ErrorKind::InvalidPartition);
  EXPECT_EQ(kind_of([] { partition_from_json(parse_json("{\"groups\": [[0]]}"), 2); }),
            ErrorKind::InvalidPartition);
  EXPECT_EQ(kind_of([] { partition_from_json(parse_json("{\"groups\": [[-1]]}"), 2); }),
            ErrorKind::ParseError);
  EXPECT_EQ(kind_of([] { partition_from_json(parse_json("[[0, 1]]"), 2); }),
            ErrorKind::ParseError);
}

TEST(JsonIo, ReportLayout) {
  SuiteConfig cfg;
  cfg.checks = {"additivity"};
  cfg.trials_per_check = 3;
  const SuiteReport r = run_suite(cfg);
  const Json timed = report_to_json(r);
  const Json untimed = report_to_json(r, false);
  EXPECT_EQ(timed["master_seed"], kDefaultMasterSeed);
  EXPECT_EQ(timed["config"]["trials_per_check"], 3);
  EXPECT_EQ(timed["total_failures"], 0);
  ASSERT_EQ(timed["checks"].size(), 1u);
  const Json& c = timed["checks"][0];
  EXPECT_EQ(c["name"], "additivity");
  EXPECT_EQ(c["trials"], 3);
  EXPECT_TRUE(c["worst_violation"].is_number());
  EXPECT_TRUE(c["worst_case_seed"].is_number_unsigned());
  EXPECT_TRUE(c.contains("elapsed"));
  EXPECT_FALSE(untimed["checks"][0].contains("elapsed"));

  CheckRecord empty;
  empty.name = "x";
  EXPECT_TRUE(record_to_json(empty)["worst_violation"].is_null());
}

}  // namespace
}  // namespace blockcoh
