#include "latfit/refine.hpp"

#include <algorithm>
#include <random>

#include <gtest/gtest.h>

#include "datasets.hpp"
#include "latfit/error.hpp"
#include "latfit/linalg.hpp"

namespace latfit {
namespace {

const std::vector<IntVector> kPermutedRows{{-14, 11}, {0, 0},   {-19, 7},
                                           {-7, -3},  {-13, -7}, {-2, -31}};

CoefficientAssignment sqrt_prime_assignment() {
  std::vector<IntVector> rows;
  for (std::int64_t p : {0, 72, 93, 110, 138, 150}) rows.push_back({p});
  return CoefficientAssignment::identity_order(rows);
}

TEST(Design, PermutedPointsAssignment) {
  const auto d = build_design(CoefficientAssignment::identity_order(kPermutedRows));
  EXPECT_EQ(d, (Matrix{{1, -14, 11}, {1, 0, 0}, {1, -19, 7}, {1, -7, -3}, {1, -13, -7},
                       {1, -2, -31}}));
}

TEST(Design, SinglePointAtOrigin) {
  const auto d = build_design(CoefficientAssignment::identity_order({{0, 0, 0}}));
  EXPECT_EQ(d, (Matrix{{1, 0, 0, 0}}));
}

TEST(Design, OneDimensional) {
  const auto d = build_design(sqrt_prime_assignment());
  ASSERT_EQ(d.cols(), 2u);
  EXPECT_EQ(d.col_vector(0), std::vector<double>(6, 1.0));
  EXPECT_EQ(d.col_vector(1), (std::vector<double>{0, 72, 93, 110, 138, 150}));
}

TEST(RefineFit, OneDimensional) {
  const PointSet ps = PointSet::from_values(testdata::sqrt_primes());
  const auto r = refine_fit(ps, sqrt_prime_assignment());
  EXPECT_NEAR(r.lattice.origin()[0], 0.0007, 5e-5);
  EXPECT_NEAR(r.lattice.basis()(0, 0), 0.0240, 5e-5);
  EXPECT_NEAR(r.report.norm_l2, 0.2766, 5e-5);
}

TEST(RefineFit, PermutedPoints) {
  const PointSet ps = testdata::permuted_points();
  const auto r = refine_fit(ps, CoefficientAssignment::identity_order(kPermutedRows));
  EXPECT_NEAR(r.lattice.origin()[0], 1.2955, 5e-5);
  EXPECT_NEAR(r.lattice.origin()[1], 0.0000, 5e-5);
  EXPECT_NEAR(r.lattice.basis()(0, 0), -0.1231, 5e-5);
  EXPECT_NEAR(r.lattice.basis()(0, 1), -0.2162, 5e-5);
  EXPECT_NEAR(r.lattice.basis()(1, 0), -0.1998, 5e-5);
  EXPECT_NEAR(r.lattice.basis()(1, 1), -0.0715, 5e-5);
  EXPECT_NEAR(r.report.norm_l2, 0.8302, 1e-4);
}

TEST(RefineFit, ExactLatticeIsAFixedPoint) {
  const AffineLattice lat({0.5, -1}, Matrix{{0.3, 0.1}, {-0.2, 0.7}});
  std::vector<IntVector> coeffs{{0, 0}, {1, 0}, {0, 1}, {3, -2}, {-4, 5}, {2, 2}};
  std::vector<Vector> rows;
  for (const auto& c : coeffs) rows.push_back(lat.point_at(c));
  const auto r = refine_fit(PointSet::from_rows(rows), CoefficientAssignment::identity_order(coeffs));
  EXPECT_NEAR(r.frozen_rss, 0.0, 1e-24);
  EXPECT_LT(max_abs_diff(r.lattice.basis(), lat.basis()), 1e-12);
  EXPECT_NEAR(r.lattice.origin()[0], 0.5, 1e-12);
  EXPECT_NEAR(r.lattice.origin()[1], -1.0, 1e-12);
}

TEST(RefineFit, MinimalDesignInterpolatesExactly) {
  const auto assign = CoefficientAssignment::identity_order({{0, 0}, {1, 0}, {0, 1}});
  const Matrix targets{{0.3, 0.9}, {1.7, -0.2}, {2.5, 4.0}};
  const Matrix x = linalg::least_squares(build_design(assign), targets);
  EXPECT_LT(max_abs_diff(build_design(assign) * x, targets), 1e-14);
}

TEST(RefineFit, TooFewDistinctRows) {
  const PointSet ps = testdata::permuted_points();
  std::vector<IntVector> rows(6, IntVector{1, 1});
  rows[0] = {0, 0};
  try {
    refine_fit(ps, CoefficientAssignment::identity_order(rows));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kRankDeficient);
  }
  EXPECT_THROW(refine_fit(ps, CoefficientAssignment::identity_order({{0, 0}})), Error);
}

TEST(RefineFit, RelabelingLeavesSolutionUnchanged) {
  const PointSet ps = testdata::permuted_points();
  const auto base = refine_fit(ps, CoefficientAssignment::identity_order(kPermutedRows));
  std::vector<std::size_t> order{0, 1, 2, 3, 4, 5};
  std::mt19937_64 rng(9);
  for (int t = 0; t < 10; ++t) {
    std::shuffle(order.begin(), order.end(), rng);
    CoefficientAssignment a;
    for (std::size_t i : order) a.rows.push_back(kPermutedRows[i]);
    a.point_order = order;
    const auto r = refine_fit(ps, a);
    EXPECT_LT(max_abs_diff(r.lattice.basis(), base.lattice.basis()), 1e-12);
    EXPECT_NEAR(r.lattice.origin()[0], base.lattice.origin()[0], 1e-12);
    EXPECT_NEAR(r.lattice.origin()[1], base.lattice.origin()[1], 1e-12);
  }
}

TEST(RefineCandidate, GeneralPipeline) {
  const PointSet ps = testdata::permuted_points();
  const auto cand = approximate_general(ps, 1e-3);
  const auto s = refine_candidate(ps, cand);
  EXPECT_NEAR(s.after.report.norm_l2, 0.8302, 5e-4);
  EXPECT_LE(s.after.frozen_rss, s.before_frozen_rss);
}

TEST(RefineCandidate, OneDimensionalPipeline) {
  auto values = testdata::sqrt_primes();
  std::reverse(values.begin(), values.end());
  const auto r = approximate_1d(values, 1e-3);
  const auto it = std::find_if(r.all.begin(), r.all.end(), [](const auto& c) { return c.q == 150; });
  ASSERT_NE(it, r.all.end());
  const auto s = refine_candidate(PointSet::from_values(values), *it, r.normalized);
  EXPECT_NEAR(s.after.lattice.origin()[0], 0.0007, 5e-5);
  EXPECT_NEAR(s.after.report.norm_l2, 0.2766, 5e-5);
  EXPECT_LE(s.after.frozen_rss, s.before_frozen_rss);
}

TEST(RefineCandidate, FrozenResidualNeverIncreases) {
  std::mt19937_64 rng(77);
  std::uniform_real_distribution<double> u(-5, 5);
  std::uniform_int_distribution<int> kd(4, 9);
  for (int t = 0; t < 100; ++t) {
    std::vector<Vector> rows(static_cast<std::size_t>(kd(rng)));
    for (auto& r : rows) r = {u(rng), u(rng)};
    const PointSet ps = PointSet::from_rows(rows);
    const auto cand = approximate_general(ps, 1e-3);
    const auto s = refine_candidate(ps, cand);
    EXPECT_LE(s.after.frozen_rss, s.before_frozen_rss * (1 + 1e-12) + 1e-24) << "trial " << t;
  }
}

}  // namespace
}  // namespace latfit
