#include "halfdens/bump.hpp"

#include <cmath>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace halfdens {

double standard_bump(double t) {
  const double a = 1.0 - t * t;
  if (!(a > 0.0)) return 0.0;
  return std::exp(-1.0 / a);
}

Box BumpExpansion::Term::support() const {
  Box b;
  b.reserve(bumps.size());
  for (const auto& f : bumps) b.push_back(f.support());
  return b;
}

cplx BumpExpansion::Term::operator()(std::span<const double> v) const {
  double p = 1.0;
  for (std::size_t d = 0; d < bumps.size() && p != 0.0; ++d) p *= bumps[d](v[d]);
  return coeff * p;
}

BumpExpansion::BumpExpansion(int dims, std::vector<Term> terms) : dims_(dims) {
  for (auto& t : terms) add_term(std::move(t));
}

BumpExpansion BumpExpansion::product(cplx coeff, std::vector<BumpFunction> bumps) {
  BumpExpansion e(static_cast<int>(bumps.size()));
  e.add_term({coeff, std::move(bumps)});
  return e;
}

void BumpExpansion::add_term(Term t) {
  if (static_cast<int>(t.bumps.size()) != dims_)
    throw std::invalid_argument("BumpExpansion: term dimension mismatch");
  for (const auto& b : t.bumps)
    if (!(b.width > 0.0) || !std::isfinite(b.center))
      throw std::invalid_argument("BumpExpansion: bump width must be positive and center finite");
  terms_.push_back(std::move(t));
}

cplx BumpExpansion::operator()(std::span<const double> v) const {
  if (static_cast<int>(v.size()) != dims_) throw std::invalid_argument("BumpExpansion: point dimension mismatch");
  cplx s{0.0, 0.0};
  for (const auto& t : terms_) s += t(v);
  return s;
}

Box BumpExpansion::support_box() const {
  if (terms_.empty()) return {};
  Box box = terms_.front().support();
  for (const auto& t : terms_) {
    const Box tb = t.support();
    for (int d = 0; d < dims_; ++d) {
      box[d].lo = std::min(box[d].lo, tb[d].lo);
      box[d].hi = std::max(box[d].hi, tb[d].hi);
    }
  }
  return box;
}

BumpExpansion BumpExpansion::operator+(const BumpExpansion& other) const {
  if (other.dims_ != dims_) throw std::invalid_argument("BumpExpansion: dimension mismatch");
  BumpExpansion out = *this;
  for (const auto& t : other.terms_) out.terms_.push_back(t);
  return out;
}

BumpExpansion BumpExpansion::operator-(const BumpExpansion& other) const { return *this + other * cplx{-1.0, 0.0}; }

BumpExpansion BumpExpansion::operator*(cplx z) const {
  BumpExpansion out = *this;
  for (auto& t : out.terms_) t.coeff *= z;
  return out;
}

BumpExpansion BumpExpansion::prefix(std::size_t count) const {
  BumpExpansion out(dims_);
  for (std::size_t i = 0; i < std::min(count, terms_.size()); ++i) out.terms_.push_back(terms_[i]);
  return out;
}

BumpExpansion BumpExpansion::permuted(std::span<const int> perm) const {
  if (static_cast<int>(perm.size()) != dims_) throw std::invalid_argument("permuted: bad permutation size");
  BumpExpansion out(dims_);
  for (const auto& t : terms_) {
    Term nt{t.coeff, std::vector<BumpFunction>(dims_)};
    for (int i = 0; i < dims_; ++i) nt.bumps[i] = t.bumps.at(perm[i]);
    out.terms_.push_back(std::move(nt));
  }
  return out;
}

std::string BumpExpansion::to_json() const {
  nlohmann::json j;
  j["dims"] = dims_;
  j["terms"] = nlohmann::json::array();
  for (const auto& t : terms_) {
    nlohmann::json jt;
    jt["coeff_re"] = t.coeff.real();
    jt["coeff_im"] = t.coeff.imag();
    jt["bumps"] = nlohmann::json::array();
    for (const auto& b : t.bumps) jt["bumps"].push_back({{"center", b.center}, {"width", b.width}});
    j["terms"].push_back(std::move(jt));
  }
  return j.dump();
}

BumpExpansion BumpExpansion::from_json(const std::string& text) {
  const auto j = nlohmann::json::parse(text);
  BumpExpansion e(j.at("dims").get<int>());
  for (const auto& jt : j.at("terms")) {
    Term t{{jt.at("coeff_re").get<double>(), jt.at("coeff_im").get<double>()}, {}};
    for (const auto& jb : jt.at("bumps")) t.bumps.push_back({jb.at("center").get<double>(), jb.at("width").get<double>()});
    e.add_term(std::move(t));
  }
  return e;
}

}  // namespace halfdens
