#include "halfdens/densities.hpp"

namespace halfdens {

Basis::Basis(Mat vectors) : v_(std::move(vectors)) {
  if (v_.rows() != v_.cols() || v_.rows() < 1) throw std::invalid_argument("Basis: matrix must be square");
  det_ = v_.determinant();
  const double scale = std::pow(std::max(1.0, v_.cwiseAbs().maxCoeff()), static_cast<double>(v_.rows()));
  if (!(std::abs(det_) >= 1e-12 * scale)) throw std::invalid_argument("Basis: vectors are linearly dependent");
}

ScalarDensity density_product(const HilbertHalfDensity& w1, const HilbertHalfDensity& w2, const QuadConfig& quad) {
  if (w1.alpha() != 0.5 || w2.alpha() != 0.5) throw std::invalid_argument("density_product: arguments must be half-densities");
  if (w1.n() != w2.n()) throw std::invalid_argument("density_product: densities over different spaces");
  if (!(w1.ref_value().fiber == w2.ref_value().fiber)) throw std::invalid_argument("density_product: fiber mismatch");
  const auto& f = w1.ref_value();
  return ScalarDensity(1.0, w1.n(), fiber_inner(f.rep, w2.ref_value().rep, f.fiber, quad));
}

ScalarDensity conj(const ScalarDensity& w) { return ScalarDensity(w.alpha(), w.n(), std::conj(w.ref_value())); }

bool greater_equal(const ScalarDensity& w1, const ScalarDensity& w2, double tol) {
  if (w1.alpha() != 1.0 || w2.alpha() != 1.0) throw std::invalid_argument("greater_equal: needs one-densities");
  if (w1.ref_value().imag() != 0.0 || w2.ref_value().imag() != 0.0)
    throw std::invalid_argument("greater_equal: densities must be real");
  return w1.ref_value().real() - w2.ref_value().real() >= -tol;
}

}  // namespace halfdens
