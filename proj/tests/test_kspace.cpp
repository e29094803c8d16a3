#include <gtest/gtest.h>

#include <cmath>
#include <numeric>
#include <random>

#include "halfdens/kspace.hpp"

using namespace halfdens;

namespace {

const InvariantMeasure kMu(SignatureSpec(1, 0), 1.0);
const QuadConfig kQuad{48, 1e-10};

PointSet pts(std::vector<double> v) { return project(PointTuple(1, std::move(v))); }

BumpExpansion value(double center, double width, cplx c = 1.0) { return BumpExpansion::product(c, {{center, width}}); }

}  // namespace

TEST(KInner, DisjointSupportsAndSharedPoint) {
  const FiberSpace fiber(kMu, 1);
  SparseSection a(fiber), b(fiber);
  a.add(pts({1.0}), value(3.0, 1.0));
  b.add(pts({2.0}), value(3.0, 1.0));
  EXPECT_EQ(k_inner(a, b, kQuad), cplx{});
  const auto f = value(3.0, 1.0, {0.5, 0.5});
  SparseSection c(fiber);
  c.add(pts({1.0}), f);
  EXPECT_EQ(k_inner(c, c, kQuad), fiber_inner(f, f, fiber, kQuad));
}

TEST(SparseSection, AddMergesAndRejects) {
  const FiberSpace fiber(kMu, 2);
  SparseSection s(fiber);
  const PointSet y = pts({1.0, 2.0});
  s.add(y, BumpExpansion::product(1.0, {{3.0, 1.0}, {3.0, 1.0}}));
  s.add(y, BumpExpansion::product(2.0, {{2.5, 1.0}, {3.0, 1.0}}));
  EXPECT_EQ(s.entries().size(), 1u);
  EXPECT_EQ(s.entries().at(y).terms().size(), 2u);
  EXPECT_THROW(s.add(pts({1.0}), value(3.0, 1.0)), std::invalid_argument);
  EXPECT_THROW(s.add(y, BumpExpansion::product(1.0, {{0.5, 1.0}, {3.0, 1.0}})), std::domain_error);
}

TEST(SparseSection, JsonRoundTrip) {
  const FiberSpace fiber(kMu, 2);
  SparseSection s(fiber);
  s.add(pts({1.0, -2.5}), BumpExpansion::product({0.1, 0.3}, {{3.0, 1.0}, {2.0, 0.5}}));
  s.add(pts({0.3, 7.0}), BumpExpansion::product({-1.0, 0.0}, {{4.0, 1.0}, {2.0, 0.25}}));
  EXPECT_EQ(SparseSection::from_json(s.to_json()).to_json(), s.to_json());
}

TEST(KPullback, Identity) {
  SparseSection s(FiberSpace(kMu, 1));
  s.add(pts({1.0}), value(3.0, 1.0));
  const auto p = k_pullback(Diffeo1D::identity(), s);
  EXPECT_EQ(p.entries(), s.entries());
}

TEST(KPullback, TranslationShiftsSupport) {
  SparseSection s(FiberSpace(kMu, 2));
  const auto f = BumpExpansion::product(1.0, {{3.0, 1.0}, {2.0, 0.5}});
  s.add(pts({1.0, 4.0}), f);
  const auto p = k_pullback(Diffeo1D::affine(1.0, 1.0), s);
  ASSERT_EQ(p.entries().size(), 1u);
  EXPECT_EQ(p.entries().begin()->first, pts({0.0, 3.0}));
  EXPECT_EQ(p.entries().begin()->second, f);
  EXPECT_EQ(k_norm(p, kQuad), k_norm(s, kQuad));
}

TEST(KPullback, ScalingPreservesInner) {
  const FiberSpace fiber(kMu, 1);
  SparseSection a(fiber), b(fiber);
  a.add(pts({1.0}), value(3.0, 1.0, {1.0, 0.5}));
  a.add(pts({2.0}), value(2.0, 0.5));
  b.add(pts({1.0}), value(3.3, 0.8));
  const auto theta = Diffeo1D::affine(2.0, 0.0);
  const cplx before = k_inner(a, b, kQuad);
  const cplx after = k_inner(k_pullback(theta, a), k_pullback(theta, b), kQuad);
  EXPECT_LT(rel_err(after, before), 1e-6);
  EXPECT_EQ(k_pullback(theta, a).entries().begin()->first, pts({0.5}));
}

TEST(KInner, OrderIndependent) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const FiberSpace fiber(kMu, 1);
  SparseSection a(fiber), b(fiber);
  for (int i = 0; i < 12; ++i) {
    const PointSet y = pts({0.5 * i});
    a.add(y, value(2.0 + u(rng), 0.5, {u(rng), u(rng)}));
    b.add(y, value(2.0 + u(rng), 0.5, {u(rng), u(rng)}));
  }
  std::vector<std::size_t> order(12);
  std::iota(order.begin(), order.end(), 0);
  std::shuffle(order.begin(), order.end(), rng);
  EXPECT_LT(std::abs(k_inner_ordered(a, b, kQuad, order) - k_inner(a, b, kQuad)), 1e-12 * std::abs(k_inner(a, b, kQuad)));
  EXPECT_THROW(k_inner_ordered(a, b, kQuad, {0, 1}), std::invalid_argument);
}

TEST(BasisElement, OrthonormalFamily) {
  const FiberSpace fiber(kMu, 1);
  const auto onb = orthonormalize({value(3.0, 1.0), value(3.2, 0.8), value(2.5, 0.6, {0.0, 1.0})}, fiber, kQuad);
  const PointSet y = pts({1.0}), y2 = pts({1.5});
  for (int i = 0; i < 3; ++i) {
    EXPECT_NEAR(k_norm(basis_element(y, onb, i, fiber), kQuad), 1.0, 1e-9);
    for (int j = 0; j < i; ++j)
      EXPECT_LT(std::abs(k_inner(basis_element(y, onb, i, fiber), basis_element(y, onb, j, fiber), kQuad)), 1e-9);
  }
  EXPECT_EQ(k_inner(basis_element(y, onb, 0, fiber), basis_element(y2, onb, 0, fiber), kQuad), cplx{});
  EXPECT_THROW(basis_element(y, onb, 3, fiber), std::out_of_range);
  EXPECT_THROW(orthonormalize({value(3.0, 1.0), value(3.0, 1.0, 2.0)}, fiber, kQuad), std::invalid_argument);
}

TEST(FiniteApproximant, ErrorBelowOneOverM) {
  const FiberSpace fiber(kMu, 1);
  SparseSection target(fiber);
  std::vector<PointSet> order;
  for (int n = 1; n <= 20; ++n) {
    BumpExpansion v(1);
    for (int j = 0; j < 6; ++j) v.add_term({std::pow(2.0, -0.5 * (n + j)), {{2.0 + 0.2 * j, 0.5}}});
    order.push_back(pts({static_cast<double>(n)}));
    target.add(order.back(), v);
  }
  for (int m : {2, 4, 8}) {
    const auto approx = finite_approximant(target, order, m, kQuad);
    EXPECT_LT(k_norm(approx - target, kQuad), 1.0 / m);
    EXPECT_LE(approx.entries().size(), order.size());
  }
  EXPECT_THROW(finite_approximant(target, order, 0, kQuad), std::invalid_argument);
}

TEST(GradedKInner, Examples) {
  const FiberSpace f1(kMu, 1), f2(kMu, 2);
  SparseSection a(f1), b(f2);
  a.add(pts({1.0}), value(3.0, 1.0));
  b.add(pts({1.0, 2.0}), BumpExpansion::product(1.0, {{3.0, 1.0}, {3.0, 1.0}}));
  const GradedSection ga{{1, a}}, gb{{2, b}};
  EXPECT_EQ(graded_k_inner(ga, gb, kQuad), cplx{});
  EXPECT_EQ(graded_k_inner(ga, ga, kQuad), k_inner(a, a, kQuad));
  const GradedSection both{{1, a}, {2, b}};
  EXPECT_LT(rel_err(graded_k_inner(both, both, kQuad), k_inner(a, a, kQuad) + k_inner(b, b, kQuad)), 1e-15);
}
