#include <gtest/gtest.h>

#include <algorithm>
#include <random>

#include "halfdens/config.hpp"
#include "halfdens/fibers.hpp"

using namespace halfdens;

TEST(Project, SortsDecreasing) {
  const PointSet y = project(PointTuple(1, {3.0, 1.0, 2.0}));
  EXPECT_EQ(y.flat(), (std::vector<double>{3.0, 2.0, 1.0}));
  EXPECT_EQ(project(y.as_tuple()), y);
}

TEST(Project, AllPermutationsCollapse) {
  std::vector<double> v{0.4, -1.2, 3.3, 2.0};
  std::sort(v.begin(), v.end());
  const PointSet ref = project(PointTuple(1, v));
  do {
    EXPECT_EQ(project(PointTuple(1, v)), ref);
  } while (std::next_permutation(v.begin(), v.end()));
}

TEST(Project, LexicographicInTwoDimensions) {
  const PointSet y = project(PointTuple(2, {1.0, 5.0, 1.0, 7.0, 3.0, 0.0}));
  EXPECT_EQ(y.flat(), (std::vector<double>{3.0, 0.0, 1.0, 7.0, 1.0, 5.0}));
}

TEST(Project, RejectsCoincidentPoints) {
  EXPECT_THROW(project(PointTuple(1, {1.0, 1.0})), std::invalid_argument);
  EXPECT_THROW(PointTuple(2, {1.0, 2.0, 3.0}), std::invalid_argument);
  EXPECT_THROW(PointSet::from_canonical(1, {1.0, 2.0}), std::invalid_argument);
}

TEST(SortedChart, Examples) {
  EXPECT_EQ(sorted_chart(project(PointTuple(1, {1.0, 2.0}))), (std::vector<double>{2.0, 1.0}));
  EXPECT_EQ(sorted_chart(project(PointTuple(1, {5.0}))), (std::vector<double>{5.0}));
  const PointSet y = project(PointTuple(1, {0.1, 9.0, -3.0}));
  EXPECT_EQ(from_sorted_chart(sorted_chart(y)), y);
  EXPECT_THROW(from_sorted_chart({1.0, 2.0}), std::invalid_argument);
  EXPECT_THROW(sorted_chart(project(PointTuple(2, {1.0, 2.0}))), std::invalid_argument);
}

TEST(PointSet, JsonRoundTrip) {
  const PointSet y = project(PointTuple(2, {0.1, 0.2, -3.0, 1.0 / 3.0}));
  EXPECT_EQ(PointSet::from_json(y.to_json()), y);
}

TEST(LocalChart, Example) {
  const PointSet y = project(PointTuple(1, {1.0, 4.0}));
  const Chart c = local_chart(y, 1.0);
  ASSERT_EQ(c.slots(), 2);
  EXPECT_EQ(c.boxes()[0][0].lo, 3.0);
  EXPECT_EQ(c.boxes()[0][0].hi, 5.0);
  EXPECT_EQ(c.boxes()[1][0].lo, 0.0);
  EXPECT_EQ(c.boxes()[1][0].hi, 2.0);
  const PointSet p = project(PointTuple(1, {1.5, 3.5}));
  EXPECT_EQ(c.map(p), (std::vector<double>{3.5, 1.5}));
  EXPECT_EQ(c.inverse(c.map(p)), p);
  EXPECT_FALSE(c.contains(project(PointTuple(1, {1.5, 2.5}))));
  EXPECT_THROW(c.map(project(PointTuple(1, {1.5, 1.7}))), std::domain_error);
  EXPECT_THROW(local_chart(y, 1.5), std::invalid_argument);
}

TEST(Chart, RejectsIntersectingBoxes) {
  EXPECT_THROW(Chart(1, {{{0.0, 2.0}}, {{1.0, 3.0}}}), std::invalid_argument);
}

TEST(ChartTransition, IdentityAndSwap) {
  const PointSet y = project(PointTuple(1, {1.0, 4.0}));
  const Chart c = local_chart(y, 1.0);
  const std::vector<double> coords{3.8, 0.6};
  EXPECT_EQ(chart_transition(c, c, coords), coords);
  const Chart swapped = c.reordered({1, 0});
  EXPECT_EQ(chart_transition(c, swapped, coords), (std::vector<double>{0.6, 3.8}));
  EXPECT_EQ(transition_permutation(c, swapped, y), (std::vector<int>{1, 0}));
  const Chart far = local_chart(project(PointTuple(1, {10.0, 20.0})), 1.0);
  EXPECT_THROW(chart_transition(c, far, coords), std::domain_error);
}

TEST(InducedDiffeo, Examples) {
  const PointSet y = project(PointTuple(1, {1.0, 2.0}));
  EXPECT_EQ(induced_diffeo(Diffeo1D::identity(), y), y);
  EXPECT_EQ(induced_diffeo(Diffeo1D::affine(1.0, 1.0), y), project(PointTuple(1, {2.0, 3.0})));
}

TEST(TransportedChart, PreservesAtlas) {
  const PointSet y = project(PointTuple(1, {-2.0, 0.5, 3.0}));
  const Chart c = local_chart(y, 0.8);
  const auto theta = Diffeo1D::soft(0.5, 1.2);
  const Chart t = c.transported(theta);
  const PointSet p = project(PointTuple(1, {-1.7, 0.9, 3.2}));
  const auto again = t.map(induced_diffeo(theta, p));
  const auto direct = c.map(p);
  for (std::size_t k = 0; k < direct.size(); ++k) EXPECT_NEAR(again[k], direct[k], 1e-12);
}

TEST(TangentBlocks, Examples) {
  const PointSet one = project(PointTuple(1, {2.0}));
  const auto b1 = tangent_blocks(one, local_chart(one, 0.5));
  ASSERT_EQ(b1.size(), 1u);
  EXPECT_EQ(b1[0].slot, 0);
  const PointSet two = project(PointTuple(1, {1.0, 2.0}));
  const auto b2 = tangent_blocks(two, local_chart(two, 0.25));
  ASSERT_EQ(b2.size(), 2u);
  EXPECT_EQ(b2[0].point, std::vector<double>{2.0});
  EXPECT_EQ(b2[0].first_coord, 0);
  EXPECT_EQ(b2[1].point, std::vector<double>{1.0});
  EXPECT_EQ(b2[1].first_coord, 1);
}

TEST(BlockScalarProduct, PullbackIsBlockwise) {
  const PointSet y = project(PointTuple(1, {1.0, 4.0}));
  const auto theta = Diffeo1D::affine(2.0, 0.0);
  const PointSet ty = induced_diffeo(theta, y);
  const SymMatrix g = assemble_blocks({SymMatrix(Mat::Constant(1, 1, 3.0)), SymMatrix(Mat::Constant(1, 1, 5.0))});
  const auto pulled = split_blocks(pullback_block_scalar_product(theta, y, local_chart(y, 1.0), local_chart(ty, 1.0), g), 2);
  EXPECT_NEAR(pulled[0](0, 0), 12.0, 1e-10);
  EXPECT_NEAR(pulled[1](0, 0), 20.0, 1e-10);
}

TEST(BlockScalarProduct, TwoDimensionalPoints) {
  std::mt19937_64 rng(4);
  const PointSet y = project(PointTuple(2, {0.0, 0.0, 2.0, -1.0}));
  const auto theta = Diffeo1D::sine(0.4);
  const PointSet ty = induced_diffeo(theta, y);
  const std::vector<SymMatrix> blocks{sample_gamma(SignatureSpec(2, 0), rng), sample_gamma(SignatureSpec(2, 0), rng)};
  const auto pulled =
      split_blocks(pullback_block_scalar_product(theta, y, local_chart(y, 0.4), local_chart(ty, 0.4), assemble_blocks(blocks)), 2);
  for (int k = 0; k < 2; ++k) {
    const auto x = y.point(k);
    const Mat d = Eigen::Vector2d(theta.derivative(x[0]), theta.derivative(x[1])).asDiagonal();
    const Mat want = d * blocks[k].matrix() * d;
    EXPECT_LT((pulled[k].matrix() - want).cwiseAbs().maxCoeff(), 1e-10 * want.cwiseAbs().maxCoeff());
  }
}
