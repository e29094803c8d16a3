#include "halfdens/gamma.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace halfdens {

SignatureSpec::SignatureSpec(int p_, int p_prime_) : p(p_), p_prime(p_prime_) {
  if (p < 0 || p_prime < 0 || p + p_prime < 1)
    throw std::invalid_argument("SignatureSpec: need p, p' >= 0 and p + p' >= 1");
}

SymMatrix::SymMatrix(Mat m) : m_(std::move(m)) {
  if (m_.rows() != m_.cols() || m_.rows() < 1) throw std::invalid_argument("SymMatrix: matrix must be square");
  for (Eigen::Index i = 0; i < m_.rows(); ++i)
    for (Eigen::Index j = i + 1; j < m_.cols(); ++j)
      if (m_(i, j) != m_(j, i)) throw std::invalid_argument("SymMatrix: matrix is not symmetric");
}

SymMatrix SymMatrix::from_coords(int n, std::span<const double> coords) {
  if (static_cast<int>(coords.size()) != n * (n + 1) / 2)
    throw std::invalid_argument("SymMatrix::from_coords: wrong coordinate count");
  Mat m(n, n);
  std::size_t k = 0;
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) {
      m(i, j) = coords[k];
      m(j, i) = coords[k];
      ++k;
    }
  return SymMatrix(std::move(m));
}

std::vector<double> SymMatrix::coords() const {
  std::vector<double> c;
  c.reserve(n() * (n() + 1) / 2);
  for (int i = 0; i < n(); ++i)
    for (int j = i; j < n(); ++j) c.push_back(m_(i, j));
  return c;
}

SymMatrix symmetrize(const Mat& t) {
  if (t.rows() != t.cols()) throw std::invalid_argument("symmetrize: matrix must be square");
  Mat s = 0.5 * (t + t.transpose());
  // Force bitwise symmetry; (a+b) and (b+a) agree in IEEE arithmetic but be explicit.
  for (Eigen::Index i = 0; i < s.rows(); ++i)
    for (Eigen::Index j = i + 1; j < s.cols(); ++j) s(j, i) = s(i, j);
  return SymMatrix(std::move(s));
}

SignatureCount signature(const SymMatrix& m) {
  Eigen::SelfAdjointEigenSolver<Mat> es(m.matrix(), Eigen::EigenvaluesOnly);
  const auto& ev = es.eigenvalues();
  const double scale = std::max(1.0, ev.cwiseAbs().maxCoeff());
  const double tol = 1e-10 * scale;
  SignatureCount s;
  for (Eigen::Index i = 0; i < ev.size(); ++i) {
    if (ev[i] > tol)
      ++s.pos;
    else if (ev[i] < -tol)
      ++s.neg;
    else
      ++s.zero;
  }
  return s;
}

bool in_gamma(const SymMatrix& m, const SignatureSpec& spec) {
  if (m.n() != spec.n()) throw std::invalid_argument("in_gamma: matrix size does not match signature");
  return signature(m) == SignatureCount{spec.p, spec.p_prime, 0};
}

GlElement::GlElement(Mat g) : g_(std::move(g)) {
  if (g_.rows() != g_.cols() || g_.rows() < 1) throw std::invalid_argument("GlElement: matrix must be square");
  Eigen::FullPivLU<Mat> lu(g_);
  if (!lu.isInvertible() || std::abs(lu.determinant()) < 1e-14 * std::pow(std::max(1.0, g_.norm()), g_.rows()))
    throw std::invalid_argument("GlElement: matrix is singular");
  inv_ = lu.inverse();
  const double err = (g_ * inv_ - Mat::Identity(g_.rows(), g_.rows())).norm();
  if (err > 1e-12 * std::sqrt(static_cast<double>(g_.rows())) * std::max(1.0, g_.norm() * inv_.norm()))
    throw std::invalid_argument("GlElement: matrix is too ill-conditioned");
}

SymMatrix gl_action(const GlElement& g, const SymMatrix& m) {
  if (g.n() != m.n()) throw std::invalid_argument("gl_action: size mismatch");
  return symmetrize(g.inverse().transpose() * m.matrix() * g.inverse());
}

SymMatrix pullback_linear(const GlElement& l, const SymMatrix& m) {
  if (l.n() != m.n()) throw std::invalid_argument("pullback_linear: size mismatch");
  return symmetrize(l.matrix().transpose() * m.matrix() * l.matrix());
}

Mat congruence_coordinate_matrix(const Mat& a) {
  const int n = static_cast<int>(a.rows());
  const int dim = n * (n + 1) / 2;
  Mat out(dim, dim);
  std::vector<double> e(dim, 0.0);
  for (int k = 0; k < dim; ++k) {
    std::fill(e.begin(), e.end(), 0.0);
    e[k] = 1.0;
    const SymMatrix basis = SymMatrix::from_coords(n, e);
    const std::vector<double> img = symmetrize(a.transpose() * basis.matrix() * a).coords();
    for (int r = 0; r < dim; ++r) out(r, k) = img[r];
  }
  return out;
}

InvariantMeasure::InvariantMeasure(SignatureSpec s, double c) : spec(s), scale_c(c) {
  if (!(c > 0.0) || !std::isfinite(c)) throw std::invalid_argument("InvariantMeasure: scale_c must be positive");
}

namespace {

double det_coords(int n, std::span<const double> c) {
  switch (n) {
    case 1:
      return c[0];
    case 2:
      return c[0] * c[2] - c[1] * c[1];
    case 3: {
      // (00 01 02 11 12 22)
      const double a = c[0], b = c[1], d = c[2], e = c[3], f = c[4], g = c[5];
      return a * (e * g - f * f) - b * (b * g - f * d) + d * (b * f - e * d);
    }
    default:
      return SymMatrix::from_coords(n, c).matrix().determinant();
  }
}

double density_from_det(double det, int n, double c) {
  const double a = std::abs(det);
  if (!(a >= 1e-14)) throw std::domain_error("natural_density: degenerate scalar product (|det| < 1e-14)");
  if (n == 1) return c / a;
  return c * std::pow(a, -0.5 * (n + 1));
}

}  // namespace

double natural_density(const SymMatrix& m, const InvariantMeasure& measure) {
  if (m.n() != measure.spec.n()) throw std::invalid_argument("natural_density: size mismatch");
  return density_from_det(m.matrix().determinant(), m.n(), measure.scale_c);
}

double natural_density_coords(std::span<const double> coords, const InvariantMeasure& measure) {
  const int n = measure.spec.n();
  return density_from_det(det_coords(n, coords), n, measure.scale_c);
}

void require_box_in_cone(const Box& box, const SignatureSpec& spec) {
  const int dim = spec.dim();
  if (static_cast<int>(box.size()) != dim) throw std::invalid_argument("support box dimension does not match Gamma");
  if (empty(box)) return;
  std::vector<double> center(dim);
  for (int d = 0; d < dim; ++d) center[d] = 0.5 * (box[d].lo + box[d].hi);
  if (!in_gamma(SymMatrix::from_coords(spec.n(), center), spec))
    throw std::domain_error("support box is not inside the signature cone");
  const int per_axis = dim <= 6 ? 5 : 3;
  const double sign = det_coords(spec.n(), center) > 0 ? 1.0 : -1.0;
  std::vector<int> idx(dim, 0);
  std::vector<double> pt(dim);
  while (true) {
    for (int d = 0; d < dim; ++d)
      pt[d] = box[d].lo + (box[d].hi - box[d].lo) * idx[d] / static_cast<double>(per_axis - 1);
    if (sign * det_coords(spec.n(), pt) < 1e-8) throw std::domain_error("support box is not inside the signature cone");
    int d = dim - 1;
    while (d >= 0 && ++idx[d] == per_axis) idx[d--] = 0;
    if (d < 0) break;
  }
}

cplx integrate_gamma(const BumpExpansion& f, const InvariantMeasure& measure, const QuadConfig& quad) {
  quad.validate();
  if (f.is_zero()) return {0.0, 0.0};
  if (f.dims() != measure.spec.dim()) throw std::invalid_argument("integrate_gamma: expansion dimension mismatch");
  cplx total{0.0, 0.0};
  for (const auto& t : f.terms()) {
    const Box box = t.support();
    require_box_in_cone(box, measure.spec);
    total += integrate_box(box, quad.nodes_per_dim,
                           [&](std::span<const double> v) { return t(v) * natural_density_coords(v, measure); });
  }
  return total;
}

InvarianceReport verify_invariance(const BumpExpansion& f, const GlElement& g, const InvariantMeasure& measure,
                                   const QuadConfig& quad) {
  if (g.n() != measure.spec.n()) throw std::invalid_argument("verify_invariance: size mismatch");
  InvarianceReport r;
  r.lhs = integrate_gamma(f, measure, quad);

  // gamma' = g-bar(gamma)  <=>  gamma = g^T gamma' g.  Parametrize g-bar^{-1}(box)
  // by the box itself; the constant Jacobian comes from the coordinate matrix.
  const int n = measure.spec.n();
  const Mat& gm = g.matrix();
  const double jac = std::abs(congruence_coordinate_matrix(gm).determinant());
  cplx rhs{0.0, 0.0};
  for (const auto& t : f.terms()) {
    const Box box = t.support();
    require_box_in_cone(box, measure.spec);
    rhs += integrate_box(box, quad.nodes_per_dim, [&](std::span<const double> v) {
      const SymMatrix image = SymMatrix::from_coords(n, v);
      const SymMatrix pre = pullback_linear(g, image);
      const std::vector<double> back = gl_action(g, pre).coords();
      return t(back) * natural_density(pre, measure) * jac;
    });
  }
  r.rhs = rhs;
  r.rel_err = rel_err(r.lhs, r.rhs);
  return r;
}

SymMatrix sample_gamma(const SignatureSpec& spec, std::mt19937_64& rng, double spread) {
  const int n = spec.n();
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Mat d = Mat::Zero(n, n);
  for (int i = 0; i < n; ++i) d(i, i) = i < spec.p ? 1.0 : -1.0;
  while (true) {
    Mat a = Mat::Identity(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) a(i, j) += spread * u(rng);
    if (std::abs(a.determinant()) < 0.2) continue;
    SymMatrix m = symmetrize(a.transpose() * d * a);
    if (in_gamma(m, spec)) return m;
  }
}

GlElement sample_gl(int n, std::mt19937_64& rng, double spread) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  while (true) {
    Mat a = Mat::Identity(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) a(i, j) += spread * u(rng);
    if (std::abs(a.determinant()) > 0.25) return GlElement(a);
  }
}

double rel_err(cplx lhs, cplx rhs) { return std::abs(lhs - rhs) / std::max(std::abs(lhs), 1e-300); }

}  // namespace halfdens
