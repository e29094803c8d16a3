#pragma once

#include <map>
#include <string>
#include <vector>

#include "halfdens/config.hpp"
#include "halfdens/diffeo.hpp"
#include "halfdens/fibers.hpp"

namespace halfdens {

/// Finitely supported section of the bundle y -> H_y over N_N (M = R): a map
/// from configurations to fiber elements in L^2(Gamma^N, dmu^x).
class SparseSection {
 public:
  explicit SparseSection(FiberSpace fiber);

  const FiberSpace& fiber() const { return fiber_; }
  int blocks() const { return fiber_.block_count; }
  const std::map<PointSet, BumpExpansion>& entries() const { return entries_; }

  /// Adds `value` to the entry at y (creating it if absent).
  void add(const PointSet& y, const BumpExpansion& value);

  SparseSection operator+(const SparseSection& o) const;
  SparseSection operator-(const SparseSection& o) const;
  SparseSection operator*(cplx z) const;

  std::string to_json() const;
  static SparseSection from_json(const std::string& text);

 private:
  FiberSpace fiber_;
  std::map<PointSet, BumpExpansion> entries_;
};

inline SparseSection operator*(cplx z, const SparseSection& s) { return s * z; }

/// Sum over shared support points of the fiber inner products. `order` lets
/// callers choose the iteration order (a permutation of the support of s1).
cplx k_inner(const SparseSection& s1, const SparseSection& s2, const QuadConfig& quad);
cplx k_inner_ordered(const SparseSection& s1, const SparseSection& s2, const QuadConfig& quad,
                     const std::vector<std::size_t>& order);
double k_norm(const SparseSection& s, const QuadConfig& quad);

/// (Theta^* s)(y) = (Theta^{-1})'^*_push s(Theta(y)): support moves by theta^{-1},
/// fiber values are transported by gamma_K -> gamma_K / theta'(x_K)^2.
SparseSection k_pullback(const Diffeo1D& theta, const SparseSection& s);

/// Gram-Schmidt over fiber_inner applied to a list of fiber elements.
std::vector<BumpExpansion> orthonormalize(const std::vector<BumpExpansion>& family, const FiberSpace& fiber,
                                          const QuadConfig& quad);

/// The section equal to basis[index] at y and zero elsewhere.
SparseSection basis_element(const PointSet& y, const std::vector<BumpExpansion>& orthonormal_basis, int index,
                            const FiberSpace& fiber);

/// Finite-support approximant Psi_m of `target` with ||Psi_m - Psi|| < 1/m.
/// The n-th support point (1-based, in `support_order`) keeps the shortest
/// term prefix of its fiber value within 1/(sqrt(2^n) m); an empty prefix
/// drops the point.
SparseSection finite_approximant(const SparseSection& target, const std::vector<PointSet>& support_order, int m,
                                 const QuadConfig& quad);

using GradedSection = std::map<int, SparseSection>;
cplx graded_k_inner(const GradedSection& g1, const GradedSection& g2, const QuadConfig& quad);

}  // namespace halfdens
