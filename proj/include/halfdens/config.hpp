#pragma once

#include <string>
#include <vector>

#include "halfdens/diffeo.hpp"
#include "halfdens/gamma.hpp"
#include "halfdens/quadrature.hpp"

namespace halfdens {

/// Ordered N-tuple of pairwise distinct points of R^d, stored flat.
class PointTuple {
 public:
  PointTuple(int d, std::vector<double> flat);

  int d() const { return d_; }
  int size() const { return static_cast<int>(flat_.size()) / d_; }
  const std::vector<double>& flat() const { return flat_; }
  std::span<const double> point(int k) const { return {flat_.data() + k * d_, static_cast<std::size_t>(d_)}; }

  /// Smallest pairwise Euclidean distance (infinity for N = 1).
  double min_distance() const;

 private:
  int d_;
  std::vector<double> flat_;
};

/// N-element subset of R^d, held in canonical order: strictly decreasing for
/// d = 1, lexicographically decreasing otherwise.
class PointSet {
 public:
  int d() const { return d_; }
  int size() const { return static_cast<int>(flat_.size()) / d_; }
  const std::vector<double>& flat() const { return flat_; }
  std::span<const double> point(int k) const { return {flat_.data() + k * d_, static_cast<std::size_t>(d_)}; }
  PointTuple as_tuple() const { return PointTuple(d_, flat_); }

  /// Parses the flat canonical serialization; throws if not canonical.
  static PointSet from_canonical(int d, std::vector<double> flat);

  std::string to_json() const;
  static PointSet from_json(const std::string& text);

  bool operator==(const PointSet&) const = default;
  auto operator<=>(const PointSet&) const = default;

 private:
  friend PointSet project(const PointTuple& t);
  PointSet(int d, std::vector<double> flat) : d_(d), flat_(std::move(flat)) {}
  int d_ = 1;
  std::vector<double> flat_;
};

/// Canonical projection M^N_0 -> N_N; throws on points closer than 1e-12.
PointSet project(const PointTuple& t);

/// Global sorted chart for d = 1: the decreasing coordinate tuple in R^N_>.
std::vector<double> sorted_chart(const PointSet& y);
/// Inverse of sorted_chart.
PointSet from_sorted_chart(const std::vector<double>& coords);

/// Chart of N_N built from pairwise disjoint open boxes U_K (one per slot).
/// A point set in the domain has exactly one point in each box; its
/// coordinates are coord_map applied componentwise to the slot points,
/// concatenated in slot order.
class Chart {
 public:
  Chart(int d, std::vector<Box> boxes, Diffeo1D coord_map = {});

  int d() const { return d_; }
  int slots() const { return static_cast<int>(boxes_.size()); }
  const std::vector<Box>& boxes() const { return boxes_; }
  const Diffeo1D& coord_map() const { return coord_map_; }

  bool contains(const PointSet& y) const;
  /// Slot index of each canonical point of y; throws if y is outside the domain.
  std::vector<int> slot_of_points(const PointSet& y) const;

  std::vector<double> map(const PointSet& y) const;
  PointSet inverse(std::span<const double> coords) const;

  /// Same domain, slots listed in a different order: new slot i is old slot perm[i].
  Chart reordered(const std::vector<int>& perm) const;
  /// The chart Phi o Theta^{-1}: boxes theta(U_K), coordinates coord_map o theta^{-1}.
  Chart transported(const Diffeo1D& theta) const;

 private:
  int d_;
  std::vector<Box> boxes_;
  Diffeo1D coord_map_;
};

/// Boxes of half-width `box_radius` around each point of y, canonical slot order.
/// Throws unless 2 * box_radius < min max-norm distance.
Chart local_chart(const PointSet& y, double box_radius);

/// Phi_2 o Phi_1^{-1}; throws if the point is outside the overlap.
std::vector<double> chart_transition(const Chart& from, const Chart& to, std::span<const double> coords);

/// Block permutation sigma of the transition at y: slot i of `from` is slot sigma[i] of `to`.
std::vector<int> transition_permutation(const Chart& from, const Chart& to, const PointSet& y);

/// Theta(y) = {theta(x_K)} with theta applied to every coordinate.
PointSet induced_diffeo(const Diffeo1D& theta, const PointSet& y);

struct TangentBlock {
  int slot = 0;                // chart slot
  int first_coord = 0;         // slot * d
  int point_index = 0;         // index of the point in canonical order
  std::vector<double> point;   // x_K
};

/// Assigns coordinate slots of the chart to the points of y they move.
std::vector<TangentBlock> tangent_blocks(const PointSet& y, const Chart& chart);

/// Jacobian of Theta in the charts (from at y, to at Theta(y)) by a 4th-order
/// central difference with step h.
Mat induced_jacobian(const Diffeo1D& theta, const PointSet& y, const Chart& from, const Chart& to, double h = 1e-3);

/// Pull-back Theta'^* of a block scalar product on T_{Theta(y)}, expressed in
/// the given charts: J^T G J with J from induced_jacobian.
SymMatrix pullback_block_scalar_product(const Diffeo1D& theta, const PointSet& y, const Chart& from,
                                        const Chart& to, const SymMatrix& g_image);

}  // namespace halfdens
