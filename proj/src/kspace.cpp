#include "halfdens/kspace.hpp"

#include <cmath>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace halfdens {

SparseSection::SparseSection(FiberSpace fiber) : fiber_(fiber) {}

void SparseSection::add(const PointSet& y, const BumpExpansion& value) {
  if (y.size() != fiber_.block_count) throw std::invalid_argument("SparseSection: configuration size does not match N");
  if (value.is_zero()) return;
  require_in_fiber(value, fiber_);
  auto it = entries_.find(y);
  if (it == entries_.end())
    entries_.emplace(y, value);
  else
    it->second = it->second + value;
}

SparseSection SparseSection::operator+(const SparseSection& o) const {
  if (!(o.fiber_ == fiber_)) throw std::invalid_argument("SparseSection: fiber mismatch");
  SparseSection out = *this;
  for (const auto& [y, f] : o.entries_) out.add(y, f);
  return out;
}

SparseSection SparseSection::operator-(const SparseSection& o) const { return *this + o * cplx{-1.0, 0.0}; }

SparseSection SparseSection::operator*(cplx z) const {
  SparseSection out(fiber_);
  for (const auto& [y, f] : entries_) out.entries_.emplace(y, f * z);
  return out;
}

std::string SparseSection::to_json() const {
  using nlohmann::json;
  json j;
  j["N"] = fiber_.block_count;
  j["c"] = fiber_.measure.scale_c;
  j["signature"] = {fiber_.measure.spec.p, fiber_.measure.spec.p_prime};
  j["entries"] = json::array();
  for (const auto& [y, f] : entries_)
    j["entries"].push_back({{"point", json::parse(y.to_json())}, {"value", json::parse(f.to_json())}});
  return j.dump();
}

SparseSection SparseSection::from_json(const std::string& text) {
  const auto j = nlohmann::json::parse(text);
  const auto sig = j.at("signature").get<std::vector<int>>();
  if (sig.size() != 2) throw std::invalid_argument("SparseSection::from_json: signature must have two entries");
  SparseSection s(FiberSpace(InvariantMeasure(SignatureSpec(sig[0], sig[1]), j.at("c").get<double>()),
                             j.at("N").get<int>()));
  for (const auto& e : j.at("entries"))
    s.add(PointSet::from_json(e.at("point").dump()), BumpExpansion::from_json(e.at("value").dump()));
  return s;
}

namespace {

void require_compatible(const SparseSection& s1, const SparseSection& s2) {
  if (s1.blocks() != s2.blocks()) throw std::invalid_argument("k_inner: block count mismatch");
  if (!(s1.fiber() == s2.fiber())) throw std::invalid_argument("k_inner: fiber mismatch");
}

}  // namespace

cplx k_inner_ordered(const SparseSection& s1, const SparseSection& s2, const QuadConfig& quad,
                     const std::vector<std::size_t>& order) {
  require_compatible(s1, s2);
  std::vector<const std::pair<const PointSet, BumpExpansion>*> items;
  for (const auto& e : s1.entries()) items.push_back(&e);
  if (order.size() != items.size()) throw std::invalid_argument("k_inner_ordered: order is not a permutation of the support");
  cplx total{0.0, 0.0};
  for (std::size_t i : order) {
    const auto& [y, f] = *items.at(i);
    auto it = s2.entries().find(y);
    if (it != s2.entries().end()) total += fiber_inner(f, it->second, s1.fiber(), quad);
  }
  return total;
}

cplx k_inner(const SparseSection& s1, const SparseSection& s2, const QuadConfig& quad) {
  require_compatible(s1, s2);
  cplx total{0.0, 0.0};
  for (const auto& [y, f] : s1.entries()) {
    auto it = s2.entries().find(y);
    if (it != s2.entries().end()) total += fiber_inner(f, it->second, s1.fiber(), quad);
  }
  return total;
}

double k_norm(const SparseSection& s, const QuadConfig& quad) {
  return std::sqrt(std::max(0.0, k_inner(s, s, quad).real()));
}

SparseSection k_pullback(const Diffeo1D& theta, const SparseSection& s) {
  if (s.fiber().block_dim() != 1) throw std::invalid_argument("k_pullback: base manifold is R, fibers must be 1-dimensional per block");
  const Diffeo1D inv = Diffeo1D::inverse_of(theta);
  SparseSection out(s.fiber());
  for (const auto& [y, f] : s.entries()) {
    if (y.d() != 1) throw std::invalid_argument("k_pullback: configurations must lie in R");
    const PointSet pre = induced_diffeo(inv, y);
    std::vector<double> scale(pre.size());
    for (int k = 0; k < pre.size(); ++k) {
      const double d = theta.derivative(pre.point(k)[0]);
      if (!(d > 0.0)) throw std::domain_error("k_pullback: theta' vanishes at a support point");
      scale[k] = d * d;
    }
    BumpExpansion g(f.dims());
    for (const auto& t : f.terms()) {
      BumpExpansion::Term nt{t.coeff, {}};
      for (int k = 0; k < f.dims(); ++k) nt.bumps.push_back(t.bumps[k].rescaled(scale[k]));
      g.add_term(std::move(nt));
    }
    out.add(pre, g);
  }
  return out;
}

std::vector<BumpExpansion> orthonormalize(const std::vector<BumpExpansion>& family, const FiberSpace& fiber,
                                          const QuadConfig& quad) {
  std::vector<BumpExpansion> basis;
  for (const auto& f : family) {
    BumpExpansion v = f;
    // Two passes of modified Gram-Schmidt.
    for (int pass = 0; pass < 2; ++pass)
      for (const auto& e : basis) v = v - e * fiber_inner(e, v, fiber, quad);
    const double nv = fiber_norm(v, fiber, quad);
    if (nv < 1e-10 * std::max(1.0, fiber_norm(f, fiber, quad))) throw std::invalid_argument("orthonormalize: family is linearly dependent");
    basis.push_back(v * cplx{1.0 / nv, 0.0});
  }
  return basis;
}

SparseSection basis_element(const PointSet& y, const std::vector<BumpExpansion>& orthonormal_basis, int index,
                            const FiberSpace& fiber) {
  if (index < 0 || index >= static_cast<int>(orthonormal_basis.size()))
    throw std::out_of_range("basis_element: fiber basis index out of range");
  SparseSection s(fiber);
  s.add(y, orthonormal_basis[index]);
  return s;
}

SparseSection finite_approximant(const SparseSection& target, const std::vector<PointSet>& support_order, int m,
                                 const QuadConfig& quad) {
  if (m < 1) throw std::invalid_argument("finite_approximant: m must be >= 1");
  if (support_order.size() != target.entries().size())
    throw std::invalid_argument("finite_approximant: support order must list every support point");
  SparseSection out(target.fiber());
  for (std::size_t i = 0; i < support_order.size(); ++i) {
    const auto it = target.entries().find(support_order[i]);
    if (it == target.entries().end()) throw std::invalid_argument("finite_approximant: unknown support point");
    const BumpExpansion& value = it->second;
    const double budget = 1.0 / (std::sqrt(std::pow(2.0, static_cast<double>(i + 1))) * m);
    for (std::size_t len = 0; len <= value.terms().size(); ++len) {
      const BumpExpansion head = value.prefix(len);
      BumpExpansion tail(value.dims());
      for (std::size_t k = len; k < value.terms().size(); ++k) tail.add_term(value.terms()[k]);
      if (fiber_norm(tail, target.fiber(), quad) < budget) {
        if (!head.is_zero()) out.add(support_order[i], head);
        break;
      }
    }
  }
  return out;
}

cplx graded_k_inner(const GradedSection& g1, const GradedSection& g2, const QuadConfig& quad) {
  cplx total{0.0, 0.0};
  for (const auto& [n, s1] : g1) {
    auto it = g2.find(n);
    if (it != g2.end()) total += k_inner(s1, it->second, quad);
  }
  return total;
}

}  // namespace halfdens
