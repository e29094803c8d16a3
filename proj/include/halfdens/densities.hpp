#pragma once

#include <cmath>
#include <stdexcept>

#include "halfdens/fibers.hpp"
#include "halfdens/gamma.hpp"

namespace halfdens {

/// Basis of an n-dimensional space; columns are the basis vectors in the
/// reference frame, so the reference basis is the identity.
class Basis {
 public:
  explicit Basis(Mat vectors);
  static Basis reference(int n) { return Basis(Mat::Identity(n, n)); }

  int n() const { return static_cast<int>(v_.rows()); }
  const Mat& vectors() const { return v_; }
  double det() const { return det_; }

  /// The basis Lambda e.
  Basis transformed(const Mat& lambda) const { return Basis(lambda * v_); }

 private:
  Mat v_;
  double det_ = 0.0;
};

/// Element of a fiber Hilbert space, tagged with the space it lives in.
struct FiberVector {
  BumpExpansion rep;
  FiberSpace fiber;

  FiberVector operator+(const FiberVector& o) const {
    if (!(fiber == o.fiber)) throw std::invalid_argument("FiberVector: fiber mismatch");
    return {rep + o.rep, fiber};
  }
  FiberVector operator*(cplx z) const { return {rep * z, fiber}; }
};

/// alpha-density valued in V: w(Lambda e) = |det Lambda|^alpha w(e). Stored by
/// its value at the reference basis.
template <class V>
class AlphaDensity {
 public:
  AlphaDensity(double alpha, int n, V ref_value) : alpha_(alpha), n_(n), ref_(std::move(ref_value)) {
    if (n < 1) throw std::invalid_argument("AlphaDensity: dimension must be >= 1");
  }

  double alpha() const { return alpha_; }
  int n() const { return n_; }
  const V& ref_value() const { return ref_; }

  V evaluate(const Basis& e) const {
    if (e.n() != n_) throw std::invalid_argument("AlphaDensity: basis of the wrong dimension");
    return ref_ * cplx{std::pow(std::abs(e.det()), alpha_), 0.0};
  }

 private:
  double alpha_;
  int n_;
  V ref_;
};

using ScalarDensity = AlphaDensity<cplx>;
using HilbertHalfDensity = AlphaDensity<FiberVector>;

template <class V>
AlphaDensity<V> lin_comb(cplx z1, const AlphaDensity<V>& w1, cplx z2, const AlphaDensity<V>& w2) {
  if (w1.alpha() != w2.alpha()) throw std::invalid_argument("lin_comb: alpha mismatch");
  if (w1.n() != w2.n()) throw std::invalid_argument("lin_comb: densities over different spaces");
  return AlphaDensity<V>(w1.alpha(), w1.n(), w1.ref_value() * z1 + w2.ref_value() * z2);
}

/// Density product of two Hilbert half-densities: a complex one-density.
ScalarDensity density_product(const HilbertHalfDensity& w1, const HilbertHalfDensity& w2, const QuadConfig& quad);

ScalarDensity conj(const ScalarDensity& w);

/// True when the real one-density w1 - w2 is >= 0 at the reference basis
/// (hence at every basis). Throws if either density is not real.
bool greater_equal(const ScalarDensity& w1, const ScalarDensity& w2, double tol = 0.0);

}  // namespace halfdens
