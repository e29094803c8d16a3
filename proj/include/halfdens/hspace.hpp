#pragma once

#include <functional>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "halfdens/bump.hpp"
#include "halfdens/diffeo.hpp"
#include "halfdens/gamma.hpp"

namespace halfdens {

/// One separable summand of a half-density on N_N x Gamma^N for M = R, in
/// the global sorted chart. Its coordinate representation is the base
/// product  coeff * prod_K a_K(x_K) b_K(gamma_K)  pulled back through
/// `layers` (layers[0] applied first, so the last entry is the outermost).
struct StateTerm {
  cplx coeff{1.0, 0.0};
  std::vector<BumpFunction> x_bumps;
  std::vector<BumpFunction> gamma_bumps;
  std::vector<Diffeo1D> layers;

  int blocks() const { return static_cast<int>(x_bumps.size()); }

  /// Value of block K at (x_K, gamma_K), without the coefficient.
  double block_value(int k, double x, double gamma) const;
  /// Half-density weight, base x and gamma scale S for block K at x:
  /// block_value = weight * a_K(base_x) * b_K(gamma / S).
  struct BlockTransport {
    double weight;
    double base_x;
    double gamma_scale;
  };
  BlockTransport transport(double x) const;

  /// x-support of block K (image of a_K's support under the inverse layers).
  Interval x_support(int k) const;
  /// gamma-section support of block K at the point x.
  Interval gamma_section(int k, double x) const;

  cplx operator()(std::span<const double> x, std::span<const double> gamma) const;
};

/// Element of the dense subspace H^c_N for M = R: a finite sum of StateTerms
/// with x-supports inside R^N_> and gamma-supports inside Gamma^N_R.
class HalfDensityState {
 public:
  HalfDensityState(int n_blocks, InvariantMeasure measure);

  /// Single unlayered product term; validates supports.
  static HalfDensityState product(InvariantMeasure measure, cplx coeff, std::vector<BumpFunction> x_bumps,
                                  std::vector<BumpFunction> gamma_bumps);

  int blocks() const { return n_; }
  const InvariantMeasure& measure() const { return measure_; }
  const std::vector<StateTerm>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }

  void add_term(StateTerm t);

  /// Coordinate representation psi(x, gamma) on R^N_> x Gamma^N_R.
  cplx operator()(std::span<const double> x, std::span<const double> gamma) const;

  /// Bounding box of the x-supports.
  Box x_support_box() const;

  HalfDensityState operator+(const HalfDensityState& o) const;
  HalfDensityState operator-(const HalfDensityState& o) const;
  HalfDensityState operator*(cplx z) const;

  std::string to_json() const;
  static HalfDensityState from_json(const std::string& text);

 private:
  int n_;
  InvariantMeasure measure_;
  std::vector<StateTerm> terms_;
};

inline HalfDensityState operator*(cplx z, const HalfDensityState& s) { return s * z; }

/// Continuous compactly supported scalar density on R^N_> in the sorted
/// chart, stored as pieces with their own support boxes.
class ScalarDensityField {
 public:
  struct Piece {
    Box box;
    std::function<cplx(std::span<const double>)> f;
  };

  void add(Piece p) { pieces_.push_back(std::move(p)); }
  const std::vector<Piece>& pieces() const { return pieces_; }
  bool is_zero() const { return pieces_.empty(); }

  cplx operator()(std::span<const double> x) const;
  Box support_box() const;
  /// Tensor Gauss-Legendre over each piece's box.
  cplx integrate(int nodes_per_dim) const;

 private:
  std::vector<Piece> pieces_;
};

/// x -> c^N int conj(psi1(x,.)) psi2(x,.) prod Delta d(gamma), gamma-integrals by
/// Gauss-Legendre over each section's support.
ScalarDensityField pair_to_density(const HalfDensityState& s1, const HalfDensityState& s2, const QuadConfig& quad);

/// <s1|s2>: the pairing density integrated over R^N_>.
cplx inner(const HalfDensityState& s1, const HalfDensityState& s2, const QuadConfig& quad);
double norm(const HalfDensityState& s, const QuadConfig& quad);

/// Same inner product by a single tensor quadrature over R^N_> x Gamma^N_R,
/// evaluating psi pointwise. Term pairs with equal layers are integrated in
/// t = gamma / S(x); otherwise over the hull of the gamma-sections.
cplx inner_joint(const HalfDensityState& s1, const HalfDensityState& s2, const QuadConfig& quad);

/// theta^* s: (theta^* psi)(x, gamma) = prod_K theta'(x_K)^{1/2} psi(theta(x), gamma_K / theta'(x_K)^2).
HalfDensityState pullback(const Diffeo1D& theta, const HalfDensityState& s);

/// Unitary map to the space built on c_new: psi -> (c_new / c_old)^{-N/2} psi.
HalfDensityState rescale_iso(const HalfDensityState& s, double c_old, double c_new);

/// Orthogonal projection onto span(dictionary) with the residual L^2 norm.
struct Reapproximation {
  HalfDensityState state;
  double l2_error;
};
Reapproximation reapproximate(const HalfDensityState& s, const std::vector<HalfDensityState>& dictionary,
                              const QuadConfig& quad);

/// Finitely many nonzero grades of the orthogonal sum over N.
class GradedState {
 public:
  GradedState() = default;
  explicit GradedState(HalfDensityState s) { add(std::move(s)); }

  void add(HalfDensityState s);
  const std::map<int, HalfDensityState>& components() const { return comps_; }

  GradedState operator+(const GradedState& o) const;
  GradedState operator*(cplx z) const;

 private:
  std::map<int, HalfDensityState> comps_;
};

cplx graded_inner(const GradedState& g1, const GradedState& g2, const QuadConfig& quad);

/// psi(x, gamma) = sqrt(x) (gamma - 1)(1 - x gamma) on x >= 0, gamma >= 1, x gamma <= 1.
double counterexample_psi(double x, double gamma);
/// Support [1, 1/x] of the gamma-section at x > 0.
Interval counterexample_section(double x);
/// Pairing density <psi|psi>(x) for signature (1,0), c = 1; x in (0, 1).
double counterexample_density(double x, int nodes = 64);

struct ProfileRow {
  double x;
  double f;
};
std::vector<ProfileRow> counterexample_profile(const std::vector<double>& xs, int nodes = 64);

/// Ordinary least-squares slope of log f against log x.
double loglog_slope(const std::vector<ProfileRow>& rows);
/// Leading exponent s of the fit log f = s log x + a + b x.
double loglog_slope_with_linear_correction(const std::vector<ProfileRow>& rows);

}  // namespace halfdens
