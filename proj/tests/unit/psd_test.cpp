#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "corpus.hpp"
#include "quadsketch/graph_io.hpp"
#include "quadsketch/psd.hpp"

using namespace quadsketch;

namespace {

SymMatrix dense(std::size_t n, std::vector<double> a) { return SymMatrix(n, std::move(a)); }

double form(const SymMatrix& a, const std::vector<double>& x) { return a.quadratic_form(x); }

}  // namespace

TEST(SymMatrix, RejectsAsymmetry) {
  EXPECT_THROW(dense(2, {1.0, 2.0, 2.5, 1.0}), std::invalid_argument);
  EXPECT_THROW(dense(2, {1.0, 2.0, 2.0}), std::invalid_argument);
}

TEST(MatrixIo, RoundTrip) {
  Rng rng(71);
  const SymMatrix a = qs_test::random_sdd(7, rng);
  std::stringstream text;
  write_matrix(text, a);
  EXPECT_EQ(read_matrix(text), a);
}

TEST(MatrixIo, ParseErrorsHaveLines) {
  std::istringstream bad("2\n1 0\n0 x\n");
  try {
    read_matrix(bad);
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 3u);
  }
  std::istringstream short_rows("# comment\n3\n1 0 0\n0 1 0\n");
  EXPECT_THROW(read_matrix(short_rows), ParseError);
}

TEST(SddReduction, UnitEdgeLaplacianPlusIdentity) {
  const SymMatrix a = dense(2, {2.0, -1.0, -1.0, 2.0});
  const SddReduction r = sdd_to_laplacian(a);
  EXPECT_EQ(r.diag_slack, (std::vector<double>{1.0, 1.0}));
  EXPECT_EQ(r.laplacian.num_vertices(), 4u);
  const std::vector<double> x = {1.0, 0.0};
  EXPECT_DOUBLE_EQ(r.evaluate(x), 2.0);
  double slack = 0.0;
  for (std::size_t i = 0; i < 2; ++i) slack += r.diag_slack[i] * x[i] * x[i];
  EXPECT_DOUBLE_EQ(slack, 1.0);
  EXPECT_DOUBLE_EQ(0.5 * quadratic_form(r.laplacian, SddReduction::embed(x)), 1.0);
}

TEST(SddReduction, PositiveOffDiagonal) {
  const SymMatrix a = dense(2, {1.0, 1.0, 1.0, 1.0});
  const SddReduction r = sdd_to_laplacian(a);
  const std::vector<double> x = {1.0, 1.0};
  EXPECT_EQ(r.diag_slack, (std::vector<double>{0.0, 0.0}));
  EXPECT_DOUBLE_EQ(0.5 * quadratic_form(r.laplacian, SddReduction::embed(x)), 4.0);
  EXPECT_DOUBLE_EQ(form(a, x), 4.0);
}

TEST(SddReduction, DiagonalHasNoEdges) {
  const SymMatrix a = dense(3, {2.0, 0, 0, 0, 0.5, 0, 0, 0, 3.0});
  const SddReduction r = sdd_to_laplacian(a);
  EXPECT_EQ(r.laplacian.num_edges(), 0u);
  const std::vector<double> x = {1.0, -2.0, 0.5};
  EXPECT_DOUBLE_EQ(r.evaluate(x), form(a, x));
}

TEST(SddReduction, IdentityOnRandomMatrices) {
  Rng rng(72);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 1 + rng.below(40);
    const SymMatrix a = qs_test::random_sdd(n, rng, 0.3);
    ASSERT_TRUE(is_sdd(a));
    const SddReduction r = sdd_to_laplacian(a);
    const auto x = qs_test::gaussian_vector(n, rng);
    const double want = form(a, x);
    EXPECT_NEAR(r.evaluate(x), want, 1e-9 * std::max(1.0, std::abs(want)));
  }
}

TEST(SddReduction, RejectsNonDominantRow) {
  const SymMatrix a = dense(3, {3.0, 1.0, 1.0, 1.0, 1.0, 1.0, 1.0, 1.0, 3.0});
  EXPECT_EQ(sdd_violation(a), std::optional<std::size_t>{1});
  try {
    sdd_to_laplacian(a);
    FAIL();
  } catch (const std::domain_error& e) {
    EXPECT_NE(std::string(e.what()).find("row 1"), std::string::npos);
  }
}

TEST(SddSketch, DiagonalIsExact) {
  const SymMatrix a = dense(3, {2.0, 0, 0, 0, 0.5, 0, 0, 0, 3.0});
  const SddSketch sk = SddSketch::build(a, 0.2, 1);
  Rng rng(73);
  for (int q = 0; q < 10; ++q) {
    const auto x = qs_test::gaussian_vector(3, rng);
    EXPECT_DOUBLE_EQ(sk.estimate(x), form(a, x));
  }
}

TEST(SddSketch, ScaledEdgeLaplacian) {
  const SymMatrix a = dense(2, {2.0, -2.0, -2.0, 2.0});
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const SddSketch sk = SddSketch::build(a, 0.2, seed);
    const std::vector<double> x = {0.3, -1.2};
    EXPECT_NEAR(sk.estimate(x), 2.0 * 1.5 * 1.5, 1e-12);
  }
}

TEST(SddSketch, RandomMatricesWithinEpsilon) {
  Rng rng(74);
  const SymMatrix a = qs_test::random_sdd(32, rng, 0.6);
  std::size_t ok = 0;
  for (int t = 0; t < 300; ++t) {
    const auto x = qs_test::gaussian_vector(32, rng);
    const double want = form(a, x);
    const double got = SddSketch::build(a, 0.2, derive_seed(74, t)).estimate(x);
    ok += std::abs(got - want) <= 0.2 * want ? 1 : 0;
  }
  EXPECT_GE(ok, 270u);
}

TEST(SddSketch, RoundTrip) {
  Rng rng(75);
  const SymMatrix a = qs_test::random_sdd(20, rng);
  const SddSketch sk = SddSketch::build(a, 0.2, 3);
  const SddSketch back = SddSketch::from_bytes(sk.to_bytes());
  EXPECT_EQ(back, sk);
  const auto x = qs_test::gaussian_vector(20, rng);
  EXPECT_EQ(back.estimate(x), sk.estimate(x));
}

TEST(JlSketch, ZeroMatrixAndZeroVector) {
  const JlSketch zero = JlSketch::build(SymMatrix(5), 0.3, 0.1, 1);
  Rng rng(76);
  EXPECT_EQ(zero.estimate(qs_test::gaussian_vector(5, rng)), 0.0);
  const SymMatrix a = qs_test::random_psd(5, 3, rng);
  EXPECT_EQ(JlSketch::build(a, 0.3, 0.1, 1).estimate(std::vector<double>(5, 0.0)), 0.0);
}

TEST(JlSketch, RowCount) {
  EXPECT_EQ(JlSketch::rows_for(0.5, 0.1), static_cast<std::size_t>(std::ceil(8.0 * std::log(10.0) / 0.25)));
  EXPECT_EQ(JlSketch::build(SymMatrix(3), 0.5, 0.1, 0).rows(), JlSketch::rows_for(0.5, 0.1));
}

TEST(JlSketch, IdentityFailureRate) {
  SymMatrix eye(16);
  for (std::size_t i = 0; i < 16; ++i) eye.set(i, i, 1.0);
  std::vector<double> e0(16, 0.0);
  e0[0] = 1.0;
  std::size_t fail = 0;
  const int trials = 2000;
  for (int t = 0; t < trials; ++t) {
    fail += std::abs(JlSketch::build(eye, 0.5, 0.1, derive_seed(77, t)).estimate(e0) - 1.0) > 0.5 ? 1 : 0;
  }
  EXPECT_LE(static_cast<double>(fail) / trials, 0.12);
}

TEST(JlSketch, UnbiasedAndNonnegative) {
  Rng rng(78);
  const SymMatrix a = qs_test::random_psd(10, 4, rng);
  const auto x = qs_test::gaussian_vector(10, rng);
  const double want = form(a, x);
  const int trials = 3000;
  double sum = 0.0, sq = 0.0;
  for (int t = 0; t < trials; ++t) {
    const double v = JlSketch::build(a, 0.5, 0.3, derive_seed(78, t)).estimate(x);
    EXPECT_GE(v, 0.0);
    sum += v;
    sq += v * v;
  }
  const double mean = sum / trials;
  const double se = std::sqrt((sq / trials - mean * mean) / trials);
  EXPECT_NEAR(mean, want, 4.0 * se);
}

TEST(JlSketch, RejectsIndefiniteMatrix) {
  EXPECT_THROW(JlSketch::build(dense(2, {1.0, 2.0, 2.0, 1.0}), 0.5, 0.1, 0), std::domain_error);
  EXPECT_FALSE(is_psd(dense(2, {1.0, 2.0, 2.0, 1.0})));
}

TEST(JlSketch, RoundTrip) {
  Rng rng(79);
  const JlSketch sk = JlSketch::build(qs_test::random_psd(6, 6, rng), 0.3, 0.1, 9);
  EXPECT_EQ(JlSketch::from_bytes(sk.to_bytes()), sk);
}
