#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "halfdens/fibers.hpp"

using namespace halfdens;

namespace {

const InvariantMeasure kMu(SignatureSpec(1, 0), 1.0);
const QuadConfig kQuad{48, 1e-10};

double block_norm2(const BumpFunction& b) {
  return integrate_interval(b.support(), 96, [&](double g) { return b(g) * b(g) / g; });
}

}  // namespace

TEST(FiberInner, ZeroAndDisjoint) {
  const FiberSpace fiber(kMu, 1);
  const auto f = BumpExpansion::product(1.0, {{3.0, 1.0}});
  EXPECT_EQ(fiber_inner(f, BumpExpansion(1), fiber, kQuad), cplx{});
  EXPECT_EQ(fiber_inner(f, BumpExpansion::product(1.0, {{6.0, 1.0}}), fiber, kQuad), cplx{});
}

TEST(FiberInner, SeparableFactorizes) {
  const FiberSpace fiber(kMu, 2);
  const BumpFunction a{3.0, 1.0}, b{2.5, 0.7};
  const auto f = BumpExpansion::product(1.0, {a, b});
  const double want = block_norm2(a) * block_norm2(b);
  EXPECT_NEAR(fiber_inner(f, f, fiber, kQuad).real(), want, 1e-8 * want);
  const FiberSpace one(kMu, 1);
  const double per_block = fiber_norm(BumpExpansion::product(1.0, {a}), one, kQuad) *
                           fiber_norm(BumpExpansion::product(1.0, {b}), one, kQuad);
  EXPECT_NEAR(fiber_norm(f, fiber, kQuad), per_block, 1e-8 * per_block);
}

TEST(FiberInner, ScalesWithCToTheN) {
  const auto f = BumpExpansion::product(1.0, {{3.0, 1.0}, {2.0, 0.5}});
  const cplx base = fiber_inner(f, f, FiberSpace(kMu, 2), kQuad);
  const cplx scaled = fiber_inner(f, f, FiberSpace(InvariantMeasure(kMu.spec, 3.0), 2), kQuad);
  EXPECT_NEAR(scaled.real(), 9.0 * base.real(), 1e-13 * scaled.real());
}

TEST(FiberInner, SesquilinearHermitianPositive) {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const FiberSpace fiber(kMu, 2);
  auto rand = [&] {
    BumpExpansion f(2);
    for (int t = 0; t < 3; ++t)
      f.add_term({{u(rng) - 0.5, u(rng) - 0.5}, {{2.0 + 2 * u(rng), 0.3 + 0.8 * u(rng)}, {2.0 + 2 * u(rng), 0.3 + 0.8 * u(rng)}}});
    return f;
  };
  const auto f = rand(), g = rand(), h = rand();
  const cplx z{0.3, -1.2};
  const cplx lhs = fiber_inner(f, g + h * z, fiber, kQuad);
  const cplx rhs = fiber_inner(f, g, fiber, kQuad) + z * fiber_inner(f, h, fiber, kQuad);
  EXPECT_LT(std::abs(lhs - rhs), 1e-12 * std::abs(rhs));
  const cplx anti = fiber_inner(g * z, f, fiber, kQuad);
  EXPECT_LT(std::abs(anti - std::conj(z) * fiber_inner(g, f, fiber, kQuad)), 1e-12 * std::abs(anti));
  EXPECT_LT(std::abs(fiber_inner(f, g, fiber, kQuad) - std::conj(fiber_inner(g, f, fiber, kQuad))), 1e-15);
  EXPECT_GT(fiber_inner(f, f, fiber, kQuad).real(), 0.0);
}

TEST(FiberInner, BlockOrderIndependent) {
  const FiberSpace fiber(kMu, 3);
  BumpExpansion f(3), g(3);
  f.add_term({{1.0, 0.5}, {{3.0, 1.0}, {2.0, 0.6}, {4.0, 1.5}}});
  g.add_term({{0.2, -1.0}, {{3.3, 0.8}, {2.2, 0.5}, {3.5, 1.2}}});
  const std::vector<int> perm{2, 0, 1};
  const cplx a = fiber_inner(f, g, fiber, kQuad);
  const cplx b = fiber_inner(f.permuted(perm), g.permuted(perm), fiber, kQuad);
  EXPECT_LT(std::abs(a - b), 1e-10 * std::abs(a));
}

TEST(FiberInner, RejectsOutOfCone) {
  const FiberSpace fiber(kMu, 1);
  const auto bad = BumpExpansion::product(1.0, {{0.5, 1.0}});
  EXPECT_THROW(fiber_inner(bad, bad, fiber, kQuad), std::domain_error);
  EXPECT_THROW(fiber_inner(BumpExpansion(2), BumpExpansion(1), fiber, kQuad), std::invalid_argument);
}

TEST(BlockBijection, RoundTrip) {
  std::mt19937_64 rng(2);
  const std::vector<SymMatrix> blocks{sample_gamma(SignatureSpec(2, 0), rng), sample_gamma(SignatureSpec(2, 0), rng)};
  const SymMatrix bd = assemble_blocks(blocks);
  EXPECT_EQ(bd.matrix().block(0, 2, 2, 2), Mat::Zero(2, 2));
  EXPECT_EQ(split_blocks(bd, 2), blocks);
  EXPECT_EQ(assemble_blocks(split_blocks(bd, 2)), bd);
  EXPECT_EQ(split_blocks(bd, 1).front(), bd);
  Mat off = bd.matrix();
  off(0, 3) = off(3, 0) = 0.1;
  EXPECT_THROW(split_blocks(SymMatrix(off), 2), std::domain_error);
  EXPECT_THROW(split_blocks(bd, 3), std::invalid_argument);
}

TEST(Pushforward, IdentityIsExact) {
  const auto h = BumpExpansion::product(1.0, {{3.0, 1.0}, {2.0, 0.5}});
  auto inv = [](double x) { return 1.0 / x; };
  const auto r = pushforward_product_check(Homeo1D::identity(), Homeo1D::identity(), h, inv, inv, kQuad);
  EXPECT_EQ(r.rel_err, 0.0);
}

TEST(Pushforward, ScaleAndSquare) {
  const auto h = BumpExpansion::product(1.0, {{3.0, 1.0}, {3.0, 1.0}});
  auto inv = [](double x) { return 1.0 / x; };
  const auto r = pushforward_product_check(Homeo1D::affine(2.0, 0.0), Homeo1D::square(), h, inv, inv, kQuad);
  EXPECT_LT(r.rel_err, 1e-7);
}

TEST(Pushforward, ShiftMatchesProductOfOneDimensionalIntegrals) {
  const BumpFunction a{3.0, 1.0}, b{2.5, 0.5};
  const auto h = BumpExpansion::product(1.0, {a, b});
  auto inv = [](double x) { return 1.0 / x; };
  const auto r = pushforward_product_check(Homeo1D::affine(1.0, 1.0), Homeo1D::identity(), h, inv, inv, kQuad);
  // (alpha_* mu)(du) = du / (u - 1) for alpha(x) = x + 1.
  const double ia = integrate_interval(a.support(), 96, [&](double u) { return a(u) / (u - 1.0); });
  const double ib = integrate_interval(b.support(), 96, [&](double v) { return b(v) / v; });
  EXPECT_NEAR(r.lhs.real(), ia * ib, 1e-9 * ia * ib);
  EXPECT_NEAR(r.rhs.real(), ia * ib, 1e-9 * ia * ib);
}
