#include "halfdens/config.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace halfdens {

PointTuple::PointTuple(int d, std::vector<double> flat) : d_(d), flat_(std::move(flat)) {
  if (d_ < 1) throw std::invalid_argument("PointTuple: dimension must be >= 1");
  if (flat_.empty() || flat_.size() % d_ != 0) throw std::invalid_argument("PointTuple: coordinate count must be a positive multiple of d");
  for (double v : flat_)
    if (!std::isfinite(v)) throw std::invalid_argument("PointTuple: coordinates must be finite");
}

double PointTuple::min_distance() const {
  double best = std::numeric_limits<double>::infinity();
  for (int i = 0; i < size(); ++i)
    for (int j = i + 1; j < size(); ++j) {
      double s = 0.0;
      for (int k = 0; k < d_; ++k) {
        const double diff = flat_[i * d_ + k] - flat_[j * d_ + k];
        s += diff * diff;
      }
      best = std::min(best, std::sqrt(s));
    }
  return best;
}

namespace {

// Lexicographically decreasing order of points.
std::vector<int> canonical_order(int d, const std::vector<double>& flat) {
  const int n = static_cast<int>(flat.size()) / d;
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    return std::lexicographical_compare(flat.begin() + b * d, flat.begin() + (b + 1) * d, flat.begin() + a * d,
                                        flat.begin() + (a + 1) * d);
  });
  return order;
}

}  // namespace

PointSet project(const PointTuple& t) {
  if (t.min_distance() < 1e-12) throw std::invalid_argument("project: points are not pairwise distinct");
  const int d = t.d();
  std::vector<double> out;
  out.reserve(t.flat().size());
  for (int k : canonical_order(d, t.flat())) {
    const auto p = t.point(k);
    out.insert(out.end(), p.begin(), p.end());
  }
  return PointSet(d, std::move(out));
}

PointSet PointSet::from_canonical(int d, std::vector<double> flat) {
  PointSet y = project(PointTuple(d, flat));
  if (y.flat() != flat) throw std::invalid_argument("PointSet: coordinates are not in canonical order");
  return y;
}

std::string PointSet::to_json() const { return nlohmann::json{{"d", d_}, {"points", flat_}}.dump(); }

PointSet PointSet::from_json(const std::string& text) {
  const auto j = nlohmann::json::parse(text);
  return from_canonical(j.at("d").get<int>(), j.at("points").get<std::vector<double>>());
}

std::vector<double> sorted_chart(const PointSet& y) {
  if (y.d() != 1) throw std::invalid_argument("sorted_chart: only defined for d = 1");
  return y.flat();
}

PointSet from_sorted_chart(const std::vector<double>& coords) {
  for (std::size_t i = 1; i < coords.size(); ++i)
    if (!(coords[i - 1] > coords[i])) throw std::invalid_argument("from_sorted_chart: coordinates must be strictly decreasing");
  return PointSet::from_canonical(1, coords);
}

namespace {

bool box_contains_open(const Box& b, std::span<const double> p) {
  for (std::size_t k = 0; k < b.size(); ++k)
    if (!(b[k].lo < p[k] && p[k] < b[k].hi)) return false;
  return true;
}

bool boxes_disjoint(const Box& a, const Box& b) {
  for (std::size_t k = 0; k < a.size(); ++k)
    if (a[k].hi <= b[k].lo || b[k].hi <= a[k].lo) return true;
  return false;
}

}  // namespace

Chart::Chart(int d, std::vector<Box> boxes, Diffeo1D coord_map)
    : d_(d), boxes_(std::move(boxes)), coord_map_(std::move(coord_map)) {
  if (d_ < 1 || boxes_.empty()) throw std::invalid_argument("Chart: need d >= 1 and at least one box");
  for (const auto& b : boxes_) {
    if (static_cast<int>(b.size()) != d_) throw std::invalid_argument("Chart: box dimension mismatch");
    if (empty(b)) throw std::invalid_argument("Chart: empty box");
  }
  for (std::size_t i = 0; i < boxes_.size(); ++i)
    for (std::size_t j = i + 1; j < boxes_.size(); ++j)
      if (!boxes_disjoint(boxes_[i], boxes_[j])) throw std::invalid_argument("Chart: boxes intersect");
}

std::vector<int> Chart::slot_of_points(const PointSet& y) const {
  if (y.d() != d_ || y.size() != slots()) throw std::domain_error("Chart: point set outside the chart domain");
  std::vector<int> slot(y.size(), -1);
  std::vector<bool> used(slots(), false);
  for (int k = 0; k < y.size(); ++k) {
    for (int s = 0; s < slots(); ++s) {
      if (box_contains_open(boxes_[s], y.point(k))) {
        if (used[s]) throw std::domain_error("Chart: two points in one box");
        slot[k] = s;
        used[s] = true;
        break;
      }
    }
    if (slot[k] < 0) throw std::domain_error("Chart: point set outside the chart domain");
  }
  return slot;
}

bool Chart::contains(const PointSet& y) const {
  try {
    slot_of_points(y);
    return true;
  } catch (const std::domain_error&) {
    return false;
  }
}

std::vector<double> Chart::map(const PointSet& y) const {
  const auto slot = slot_of_points(y);
  std::vector<double> out(y.flat().size());
  for (int k = 0; k < y.size(); ++k)
    for (int j = 0; j < d_; ++j) out[slot[k] * d_ + j] = coord_map_(y.point(k)[j]);
  return out;
}

PointSet Chart::inverse(std::span<const double> coords) const {
  if (static_cast<int>(coords.size()) != slots() * d_) throw std::invalid_argument("Chart::inverse: wrong coordinate count");
  std::vector<double> flat(coords.size());
  for (std::size_t i = 0; i < coords.size(); ++i) flat[i] = coord_map_.inverse(coords[i]);
  for (int s = 0; s < slots(); ++s)
    if (!box_contains_open(boxes_[s], std::span<const double>(flat.data() + s * d_, d_)))
      throw std::domain_error("Chart::inverse: coordinates outside the chart image");
  return project(PointTuple(d_, std::move(flat)));
}

Chart Chart::reordered(const std::vector<int>& perm) const {
  if (static_cast<int>(perm.size()) != slots()) throw std::invalid_argument("Chart::reordered: bad permutation");
  std::vector<Box> b(slots());
  std::vector<bool> seen(slots(), false);
  for (int i = 0; i < slots(); ++i) {
    if (perm[i] < 0 || perm[i] >= slots() || seen[perm[i]]) throw std::invalid_argument("Chart::reordered: bad permutation");
    seen[perm[i]] = true;
    b[i] = boxes_[perm[i]];
  }
  return Chart(d_, std::move(b), coord_map_);
}

Chart Chart::transported(const Diffeo1D& theta) const {
  std::vector<Box> b = boxes_;
  for (auto& box : b)
    for (auto& iv : box) iv = {theta(iv.lo), theta(iv.hi)};
  return Chart(d_, std::move(b), Diffeo1D::compose(coord_map_, Diffeo1D::inverse_of(theta)));
}

Chart local_chart(const PointSet& y, double box_radius) {
  if (!(box_radius > 0.0)) throw std::invalid_argument("local_chart: radius must be positive");
  const int d = y.d();
  double min_dist = std::numeric_limits<double>::infinity();
  for (int i = 0; i < y.size(); ++i)
    for (int j = i + 1; j < y.size(); ++j) {
      double m = 0.0;
      for (int k = 0; k < d; ++k) m = std::max(m, std::abs(y.point(i)[k] - y.point(j)[k]));
      min_dist = std::min(min_dist, m);
    }
  if (!(2.0 * box_radius < min_dist)) throw std::invalid_argument("local_chart: radius too large, boxes would intersect");
  std::vector<Box> boxes;
  for (int i = 0; i < y.size(); ++i) {
    Box b;
    for (int k = 0; k < d; ++k) b.push_back({y.point(i)[k] - box_radius, y.point(i)[k] + box_radius});
    boxes.push_back(std::move(b));
  }
  return Chart(d, std::move(boxes));
}

std::vector<double> chart_transition(const Chart& from, const Chart& to, std::span<const double> coords) {
  const PointSet y = from.inverse(coords);
  if (!to.contains(y)) throw std::domain_error("chart_transition: point outside the chart overlap");
  return to.map(y);
}

std::vector<int> transition_permutation(const Chart& from, const Chart& to, const PointSet& y) {
  const auto a = from.slot_of_points(y);
  const auto b = to.slot_of_points(y);
  std::vector<int> sigma(a.size());
  for (std::size_t k = 0; k < a.size(); ++k) sigma[a[k]] = b[k];
  return sigma;
}

PointSet induced_diffeo(const Diffeo1D& theta, const PointSet& y) {
  std::vector<double> flat = y.flat();
  for (double& v : flat) v = theta(v);
  return project(PointTuple(y.d(), std::move(flat)));
}

std::vector<TangentBlock> tangent_blocks(const PointSet& y, const Chart& chart) {
  const auto slot = chart.slot_of_points(y);
  std::vector<TangentBlock> out(y.size());
  for (int k = 0; k < y.size(); ++k) {
    const auto p = y.point(k);
    out[slot[k]] = {slot[k], slot[k] * y.d(), k, std::vector<double>(p.begin(), p.end())};
  }
  return out;
}

Mat induced_jacobian(const Diffeo1D& theta, const PointSet& y, const Chart& from, const Chart& to, double h) {
  const std::vector<double> c0 = from.map(y);
  const int m = static_cast<int>(c0.size());
  auto f = [&](const std::vector<double>& c) { return to.map(induced_diffeo(theta, from.inverse(c))); };
  Mat j(m, m);
  for (int col = 0; col < m; ++col) {
    auto shifted = [&](double s) {
      std::vector<double> c = c0;
      c[col] += s;
      return f(c);
    };
    const auto p2 = shifted(2 * h), p1 = shifted(h), m1 = shifted(-h), m2 = shifted(-2 * h);
    for (int r = 0; r < m; ++r) j(r, col) = (8.0 * (p1[r] - m1[r]) - (p2[r] - m2[r])) / (12.0 * h);
  }
  return j;
}

SymMatrix pullback_block_scalar_product(const Diffeo1D& theta, const PointSet& y, const Chart& from,
                                        const Chart& to, const SymMatrix& g_image) {
  const Mat j = induced_jacobian(theta, y, from, to);
  if (j.rows() != g_image.n()) throw std::invalid_argument("pullback_block_scalar_product: size mismatch");
  return symmetrize(j.transpose() * g_image.matrix() * j);
}

}  // namespace halfdens
