#pragma once

#include <complex>
#include <span>
#include <string>
#include <vector>

#include "halfdens/quadrature.hpp"

namespace halfdens {

/// Standard smooth bump b(t) = exp(-1/(1-t^2)) on |t| < 1, zero elsewhere.
double standard_bump(double t);

/// Integral of the standard bump over [-1, 1].
inline constexpr double kStandardBumpIntegral = 0.44399381616807943;

/// b((x - center) / width); support [center - width, center + width].
struct BumpFunction {
  double center = 0.0;
  double width = 1.0;

  double operator()(double x) const { return standard_bump((x - center) / width); }
  Interval support() const { return {center - width, center + width}; }
  /// x -> this(x / s) for s > 0, which is again a bump.
  BumpFunction rescaled(double s) const { return {center * s, width * s}; }
  bool operator==(const BumpFunction&) const = default;
};

/// Finite sum of separable bump products in `dims` variables:
///   f(v) = sum_k coeff_k * prod_d bumps_k[d](v_d).
class BumpExpansion {
 public:
  struct Term {
    cplx coeff;
    std::vector<BumpFunction> bumps;
    bool operator==(const Term&) const = default;

    Box support() const;
    cplx operator()(std::span<const double> v) const;
  };

  BumpExpansion() = default;
  explicit BumpExpansion(int dims) : dims_(dims) {}
  BumpExpansion(int dims, std::vector<Term> terms);

  /// Single product term.
  static BumpExpansion product(cplx coeff, std::vector<BumpFunction> bumps);

  int dims() const { return dims_; }
  const std::vector<Term>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }

  void add_term(Term t);
  cplx operator()(std::span<const double> v) const;

  /// Bounding box of all term supports (empty vector for the zero expansion).
  Box support_box() const;

  BumpExpansion operator+(const BumpExpansion& other) const;
  BumpExpansion operator-(const BumpExpansion& other) const;
  BumpExpansion operator*(cplx z) const;

  /// First `count` terms.
  BumpExpansion prefix(std::size_t count) const;
  /// Reorders variables: new variable i is old variable perm[i].
  BumpExpansion permuted(std::span<const int> perm) const;

  bool operator==(const BumpExpansion&) const = default;

  std::string to_json() const;
  static BumpExpansion from_json(const std::string& text);

 private:
  int dims_ = 0;
  std::vector<Term> terms_;
};

inline BumpExpansion operator*(cplx z, const BumpExpansion& f) { return f * z; }

}  // namespace halfdens
