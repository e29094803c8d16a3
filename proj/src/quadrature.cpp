#include "halfdens/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace halfdens {

void QuadConfig::validate() const {
  if (nodes_per_dim < 2) throw std::invalid_argument("QuadConfig: nodes_per_dim must be >= 2");
  if (!(rel_tol_report > 0.0)) throw std::invalid_argument("QuadConfig: rel_tol_report must be positive");
}

std::string QuadConfig::to_json() const {
  nlohmann::json j{{"nodes_per_dim", nodes_per_dim}, {"rel_tol_report", rel_tol_report}};
  return j.dump();
}

QuadConfig QuadConfig::from_json(const std::string& text) {
  const auto j = nlohmann::json::parse(text);
  QuadConfig q;
  q.nodes_per_dim = j.value("nodes_per_dim", q.nodes_per_dim);
  q.rel_tol_report = j.value("rel_tol_report", q.rel_tol_report);
  q.validate();
  return q;
}

Interval intersect(const Interval& a, const Interval& b) {
  return {std::max(a.lo, b.lo), std::min(a.hi, b.hi)};
}

Box intersect(const Box& a, const Box& b) {
  if (a.size() != b.size()) throw std::invalid_argument("intersect: box dimension mismatch");
  Box out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = intersect(a[i], b[i]);
  return out;
}

bool empty(const Box& b) {
  return std::any_of(b.begin(), b.end(), [](const Interval& iv) { return iv.empty(); });
}

namespace {

// Newton iteration on P_n from the Chebyshev-like initial guess.
GaussRule compute_rule(int n) {
  GaussRule r;
  r.nodes.resize(n);
  r.weights.resize(n);
  const int m = (n + 1) / 2;
  for (int i = 0; i < m; ++i) {
    double z = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double pp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p1 = 1.0, p2 = 0.0;
      for (int j = 1; j <= n; ++j) {
        const double p3 = p2;
        p2 = p1;
        p1 = ((2.0 * j - 1.0) * z * p2 - (j - 1.0) * p3) / j;
      }
      pp = n * (z * p1 - p2) / (z * z - 1.0);
      const double dz = p1 / pp;
      z -= dz;
      if (std::abs(dz) < 1e-16) break;
    }
    const double w = 2.0 / ((1.0 - z * z) * pp * pp);
    r.nodes[i] = -z;
    r.nodes[n - 1 - i] = z;
    r.weights[i] = w;
    r.weights[n - 1 - i] = w;
  }
  return r;
}

}  // namespace

const GaussRule& gauss_legendre(int n) {
  if (n < 1) throw std::invalid_argument("gauss_legendre: n must be positive");
  static std::mutex mu;
  static std::map<int, std::unique_ptr<GaussRule>> cache;
  std::lock_guard lock(mu);
  auto& slot = cache[n];
  if (!slot) slot = std::make_unique<GaussRule>(compute_rule(n));
  return *slot;
}

GaussRule mapped_rule(const Interval& iv, int n) {
  const auto& base = gauss_legendre(n);
  const double half = 0.5 * (iv.hi - iv.lo);
  const double mid = 0.5 * (iv.hi + iv.lo);
  GaussRule r;
  r.nodes.resize(n);
  r.weights.resize(n);
  for (int i = 0; i < n; ++i) {
    r.nodes[i] = mid + half * base.nodes[i];
    r.weights[i] = half * base.weights[i];
  }
  return r;
}

cplx integrate_box(const Box& box, int nodes_per_dim,
                   const std::function<cplx(std::span<const double>)>& f) {
  if (nodes_per_dim < 2) throw std::invalid_argument("integrate_box: node count < 2");
  if (box.empty() || empty(box)) return {0.0, 0.0};
  const std::size_t dims = box.size();
  std::vector<GaussRule> rules;
  rules.reserve(dims);
  for (const auto& iv : box) rules.push_back(mapped_rule(iv, nodes_per_dim));

  std::vector<int> idx(dims, 0);
  std::vector<double> pt(dims);
  cplx total{0.0, 0.0};
  while (true) {
    double w = 1.0;
    for (std::size_t d = 0; d < dims; ++d) {
      pt[d] = rules[d].nodes[idx[d]];
      w *= rules[d].weights[idx[d]];
    }
    total += w * f(pt);
    std::size_t d = dims;
    while (d > 0) {
      --d;
      if (++idx[d] < nodes_per_dim) break;
      idx[d] = 0;
      if (d == 0) return total;
    }
  }
}

double integrate_interval(const Interval& iv, int nodes, const std::function<double(double)>& f) {
  if (nodes < 2) throw std::invalid_argument("integrate_interval: node count < 2");
  if (iv.empty()) return 0.0;
  const auto r = mapped_rule(iv, nodes);
  double s = 0.0;
  for (int i = 0; i < nodes; ++i) s += r.weights[i] * f(r.nodes[i]);
  return s;
}

}  // namespace halfdens
