#pragma once

#include <random>
#include <tuple>

#include <Eigen/Dense>

#include "halfdens/bump.hpp"
#include "halfdens/quadrature.hpp"

namespace halfdens {

using Mat = Eigen::MatrixXd;

/// Signature (p, p') of the scalar products; n = p + p'.
struct SignatureSpec {
  int p = 1;
  int p_prime = 0;

  SignatureSpec() = default;
  SignatureSpec(int p, int p_prime);

  int n() const { return p + p_prime; }
  /// Number of linear coordinates gamma_{i<=j}.
  int dim() const { return n() * (n() + 1) / 2; }
  bool operator==(const SignatureSpec&) const = default;
};

/// Symmetric n x n matrix, always stored in exactly symmetric form.
class SymMatrix {
 public:
  SymMatrix() = default;
  /// Throws unless `m` is square and exactly symmetric.
  explicit SymMatrix(Mat m);

  static SymMatrix identity(int n) { return SymMatrix(Mat::Identity(n, n)); }
  /// Builds from the coordinates gamma_{i<=j}, row-major over the upper triangle.
  static SymMatrix from_coords(int n, std::span<const double> coords);

  int n() const { return static_cast<int>(m_.rows()); }
  const Mat& matrix() const { return m_; }
  double operator()(int i, int j) const { return m_(i, j); }
  std::vector<double> coords() const;

  bool operator==(const SymMatrix& o) const { return m_ == o.m_; }

 private:
  Mat m_;
};

/// ((t_ij + t_ji) / 2).
SymMatrix symmetrize(const Mat& t);

struct SignatureCount {
  int pos = 0;
  int neg = 0;
  int zero = 0;
  bool operator==(const SignatureCount&) const = default;
};

SignatureCount signature(const SymMatrix& m);
bool in_gamma(const SymMatrix& m, const SignatureSpec& spec);

/// Invertible linear map with its inverse cached.
class GlElement {
 public:
  explicit GlElement(Mat g);

  const Mat& matrix() const { return g_; }
  const Mat& inverse() const { return inv_; }
  int n() const { return static_cast<int>(g_.rows()); }

  GlElement operator*(const GlElement& o) const { return GlElement(g_ * o.g_); }
  GlElement inverted() const { return GlElement(inv_); }

 private:
  Mat g_;
  Mat inv_;
};

/// gamma -> (g^-1)^T gamma g^-1, a left action of GL(V) on Gamma.
SymMatrix gl_action(const GlElement& g, const SymMatrix& m);

/// Pull-back l^T m l of a scalar product under a linear isomorphism l.
SymMatrix pullback_linear(const GlElement& l, const SymMatrix& m);

/// Matrix of the linear map gamma -> A^T gamma A on the coordinates gamma_{i<=j}.
Mat congruence_coordinate_matrix(const Mat& a);

struct InvariantMeasure {
  SignatureSpec spec;
  double scale_c = 1.0;

  InvariantMeasure() = default;
  InvariantMeasure(SignatureSpec spec, double scale_c);
  bool operator==(const InvariantMeasure&) const = default;
};

/// Density of the invariant measure with respect to Lebesgue measure on the
/// coordinates: c * |det gamma|^{-(n+1)/2}.
double natural_density(const SymMatrix& m, const InvariantMeasure& measure);

/// Same, evaluated directly from coordinates.
double natural_density_coords(std::span<const double> coords, const InvariantMeasure& measure);

/// Throws unless every sampled point of the box (5 per axis, corners
/// included) lies in the cone with |det| >= 1e-8.
void require_box_in_cone(const Box& box, const SignatureSpec& spec);

/// Integral of f * Delta over Gamma_R; term by term over each term's support box.
cplx integrate_gamma(const BumpExpansion& f, const InvariantMeasure& measure, const QuadConfig& quad);

struct InvarianceReport {
  cplx lhs;
  cplx rhs;
  double rel_err = 0.0;
};

/// Compares the integral of f with that of f o g-bar. The right-hand side
/// is evaluated by quadrature over the transformed support g-bar^{-1}(box).
InvarianceReport verify_invariance(const BumpExpansion& f, const GlElement& g, const InvariantMeasure& measure,
                                   const QuadConfig& quad);

/// Random element of Gamma_R: A^T diag(+1..,-1..) A with A near the identity.
SymMatrix sample_gamma(const SignatureSpec& spec, std::mt19937_64& rng, double spread = 0.4);

/// Random GL element with |det| bounded away from zero.
GlElement sample_gl(int n, std::mt19937_64& rng, double spread = 0.5);

double rel_err(cplx lhs, cplx rhs);

}  // namespace halfdens
