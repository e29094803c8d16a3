#include "halfdens/fibers.hpp"

#include <cmath>
#include <stdexcept>

namespace halfdens {

FiberSpace::FiberSpace(InvariantMeasure m, int n_blocks) : measure(m), block_count(n_blocks) {
  if (block_count < 1) throw std::invalid_argument("FiberSpace: block_count must be >= 1");
}

namespace {

Box block_of(const Box& box, int k, int bd) { return Box(box.begin() + k * bd, box.begin() + (k + 1) * bd); }

}  // namespace

void require_in_fiber(const BumpExpansion& f, const FiberSpace& fiber) {
  if (f.dims() != 0 && f.dims() != fiber.dims()) throw std::invalid_argument("fiber element dimension does not match the fiber");
  const int bd = fiber.block_dim();
  for (const auto& t : f.terms()) {
    const Box box = t.support();
    for (int k = 0; k < fiber.block_count; ++k) require_box_in_cone(block_of(box, k, bd), fiber.measure.spec);
  }
}

cplx fiber_inner(const BumpExpansion& f1, const BumpExpansion& f2, const FiberSpace& fiber, const QuadConfig& quad) {
  quad.validate();
  require_in_fiber(f1, fiber);
  require_in_fiber(f2, fiber);
  if (f1.is_zero() || f2.is_zero()) return {0.0, 0.0};
  const int bd = fiber.block_dim();
  const int nodes = quad.nodes_per_dim;
  const InvariantMeasure& mu = fiber.measure;

  cplx total{0.0, 0.0};
  for (const auto& a : f1.terms()) {
    for (const auto& b : f2.terms()) {
      const Box box = intersect(a.support(), b.support());
      if (empty(box)) continue;
      cplx value = std::conj(a.coeff) * b.coeff;
      for (int k = 0; k < fiber.block_count && value != 0.0; ++k) {
        const int off = k * bd;
        const cplx block = integrate_box(block_of(box, k, bd), nodes, [&](std::span<const double> v) {
          double p = natural_density_coords(v, mu);
          for (int d = 0; d < bd; ++d) p *= a.bumps[off + d](v[d]) * b.bumps[off + d](v[d]);
          return cplx{p, 0.0};
        });
        value *= block;
      }
      total += value;
    }
  }
  return total;
}

double fiber_norm(const BumpExpansion& f, const FiberSpace& fiber, const QuadConfig& quad) {
  return std::sqrt(std::max(0.0, fiber_inner(f, f, fiber, quad).real()));
}

std::vector<SymMatrix> split_blocks(const SymMatrix& block_diag, int block_count) {
  const int total = block_diag.n();
  if (block_count < 1 || total % block_count != 0) throw std::invalid_argument("split_blocks: size not divisible by block count");
  const int n = total / block_count;
  const Mat& m = block_diag.matrix();
  for (int i = 0; i < total; ++i)
    for (int j = 0; j < total; ++j)
      if (i / n != j / n && std::abs(m(i, j)) > 1e-12)
        throw std::domain_error("split_blocks: matrix is not block diagonal");
  std::vector<SymMatrix> out;
  out.reserve(block_count);
  for (int k = 0; k < block_count; ++k) out.emplace_back(Mat(m.block(k * n, k * n, n, n)));
  return out;
}

SymMatrix assemble_blocks(const std::vector<SymMatrix>& blocks) {
  if (blocks.empty()) throw std::invalid_argument("assemble_blocks: no blocks");
  const int n = blocks.front().n();
  const int total = n * static_cast<int>(blocks.size());
  Mat m = Mat::Zero(total, total);
  for (std::size_t k = 0; k < blocks.size(); ++k) {
    if (blocks[k].n() != n) throw std::invalid_argument("assemble_blocks: blocks differ in size");
    m.block(k * n, k * n, n, n) = blocks[k].matrix();
  }
  return SymMatrix(std::move(m));
}

Homeo1D Homeo1D::identity() {
  return {"identity", [](double x) { return x; }, [](double x) { return x; }, [](double) { return 1.0; }};
}

Homeo1D Homeo1D::affine(double a, double b) {
  if (a == 0.0) throw std::invalid_argument("Homeo1D::affine: slope must be nonzero");
  return {"affine", [a, b](double x) { return a * x + b; }, [a, b](double y) { return (y - b) / a; },
          [a](double) { return a; }};
}

Homeo1D Homeo1D::square() {
  return {"square", [](double x) { return x * x; }, [](double y) { return std::sqrt(y); },
          [](double x) { return 2.0 * x; }};
}

namespace {

Interval preimage(const Homeo1D& h, const Interval& iv) {
  const double a = h.inverse(iv.lo);
  const double b = h.inverse(iv.hi);
  if (!std::isfinite(a) || !std::isfinite(b)) throw std::domain_error("pushforward_product_check: inverse undefined on support");
  for (double x : {a, b, 0.5 * (a + b)}) {
    if (!(std::abs(h.derivative(x)) > 0.0)) throw std::domain_error("pushforward_product_check: map not invertible on support");
  }
  return {std::min(a, b), std::max(a, b)};
}

}  // namespace

PushforwardReport pushforward_product_check(const Homeo1D& alpha, const Homeo1D& beta, const BumpExpansion& h,
                                            const std::function<double(double)>& rho_mu,
                                            const std::function<double(double)>& rho_nu, const QuadConfig& quad) {
  quad.validate();
  if (h.dims() != 2) throw std::invalid_argument("pushforward_product_check: h must have two variables");
  PushforwardReport r{};
  const int nodes = quad.nodes_per_dim;
  for (const auto& t : h.terms()) {
    const Box box = t.support();
    // (alpha_* mu) has density rho_mu(alpha^-1(x)) / |alpha'(alpha^-1(x))| on the codomain.
    r.lhs += integrate_box(box, nodes, [&](std::span<const double> v) {
      const double x = alpha.inverse(v[0]);
      const double y = beta.inverse(v[1]);
      const double dx = alpha.derivative(x);
      const double dy = beta.derivative(y);
      if (dx == 0.0 || dy == 0.0) throw std::domain_error("pushforward_product_check: vanishing derivative");
      return t(v) * (rho_mu(x) / std::abs(dx)) * (rho_nu(y) / std::abs(dy));
    });
    const Box pre{preimage(alpha, box[0]), preimage(beta, box[1])};
    r.rhs += integrate_box(pre, nodes, [&](std::span<const double> v) {
      const double img[2] = {alpha.forward(v[0]), beta.forward(v[1])};
      return t(img) * rho_mu(v[0]) * rho_nu(v[1]);
    });
  }
  r.rel_err = rel_err(r.lhs, r.rhs);
  return r;
}

}  // namespace halfdens
