#pragma once

#include <functional>
#include <string>
#include <vector>

#include "halfdens/bump.hpp"
#include "halfdens/gamma.hpp"

namespace halfdens {

/// L^2(Gamma^N, product of invariant measures): the fiber over an N-point
/// configuration. Variables are the N blocks' coordinates, block after block.
struct FiberSpace {
  InvariantMeasure measure;
  int block_count = 1;

  FiberSpace() = default;
  FiberSpace(InvariantMeasure measure, int block_count);

  int block_dim() const { return measure.spec.dim(); }
  int dims() const { return block_count * block_dim(); }
  bool operator==(const FiberSpace&) const = default;
};

/// Throws if some term's block boxes leave the cone.
void require_in_fiber(const BumpExpansion& f, const FiberSpace& fiber);

/// <f1|f2> = c^N * int conj(f1) f2 prod_K Delta(gamma_K) d(Lebesgue). Each
/// pair of terms factorizes over blocks; every block integral runs over the
/// intersection of the two term boxes.
cplx fiber_inner(const BumpExpansion& f1, const BumpExpansion& f2, const FiberSpace& fiber, const QuadConfig& quad);

double fiber_norm(const BumpExpansion& f, const FiberSpace& fiber, const QuadConfig& quad);

/// blockdiag(g_1..g_N) -> (g_1..g_N). Throws if an off-block entry exceeds 1e-12.
std::vector<SymMatrix> split_blocks(const SymMatrix& block_diag, int block_count);
SymMatrix assemble_blocks(const std::vector<SymMatrix>& blocks);

/// Strictly monotone map of an interval with its inverse and derivative.
struct Homeo1D {
  std::string name;
  std::function<double(double)> forward;
  std::function<double(double)> inverse;
  std::function<double(double)> derivative;

  static Homeo1D identity();
  static Homeo1D affine(double a, double b);
  /// x -> x^2 on (0, inf).
  static Homeo1D square();
};

struct PushforwardReport {
  cplx lhs;   // against (alpha_* mu) x (beta_* nu)
  cplx rhs;   // against (alpha x beta)_* (mu x nu)
  double rel_err = 0.0;
};

/// Both sides of int h d[(alpha_* mu) x (beta_* nu)] = int h d[(alpha x beta)_* (mu x nu)]
/// for measures mu = rho_mu dx and nu = rho_nu dy, each realized by change of
/// variables. h is a 2-variable expansion supported in the codomain.
PushforwardReport pushforward_product_check(const Homeo1D& alpha, const Homeo1D& beta, const BumpExpansion& h,
                                            const std::function<double(double)>& rho_mu,
                                            const std::function<double(double)>& rho_nu, const QuadConfig& quad);

}  // namespace halfdens
