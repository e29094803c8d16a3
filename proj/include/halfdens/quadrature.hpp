#pragma once

#include <complex>
#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <vector>

namespace halfdens {

using cplx = std::complex<double>;

/// Tensor Gauss-Legendre settings shared by every integral in the library.
struct QuadConfig {
  int nodes_per_dim = 32;
  double rel_tol_report = 1e-5;

  void validate() const;
  std::string to_json() const;
  static QuadConfig from_json(const std::string& text);
};

/// Closed interval [lo, hi]; empty when lo >= hi.
struct Interval {
  double lo = 0.0;
  double hi = 0.0;

  bool empty() const { return !(lo < hi); }
  double length() const { return empty() ? 0.0 : hi - lo; }
  bool contains(double x) const { return lo <= x && x <= hi; }
};

Interval intersect(const Interval& a, const Interval& b);

/// Axis-aligned box, one interval per dimension.
using Box = std::vector<Interval>;

Box intersect(const Box& a, const Box& b);
bool empty(const Box& b);

struct GaussRule {
  std::vector<double> nodes;    // on [-1, 1], ascending
  std::vector<double> weights;
};

/// Gauss-Legendre rule with n points. Results are cached; thread-safe.
const GaussRule& gauss_legendre(int n);

/// 1-D rule mapped onto an interval; returns (nodes, weights).
GaussRule mapped_rule(const Interval& iv, int n);

/// Tensor-product Gauss-Legendre over a box. The visiting order is
/// lexicographic with the last dimension fastest, so the sum is bit-stable.
cplx integrate_box(const Box& box, int nodes_per_dim,
                   const std::function<cplx(std::span<const double>)>& f);

double integrate_interval(const Interval& iv, int nodes, const std::function<double(double)>& f);

}  // namespace halfdens
