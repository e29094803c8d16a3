#pragma once

#include <memory>
#include <string>

namespace halfdens {

/// Increasing diffeomorphism of the real line from a closed-form catalog:
///   affine(a, b):  x -> a x + b,            a > 0
///   soft(a, k):    x -> x + a tanh(k x),    a k > -1
///   sine(a):       x -> x + a sin x,        |a| < 1
/// plus compositions of these. The inverse of soft and sine is computed by
/// safeguarded Newton iteration to full double precision.
class Diffeo1D {
 public:
  Diffeo1D();  // identity

  static Diffeo1D identity() { return {}; }
  static Diffeo1D affine(double a, double b);
  static Diffeo1D soft(double a, double k);
  static Diffeo1D sine(double a);
  /// (outer o inner)(x) = outer(inner(x)).
  static Diffeo1D compose(const Diffeo1D& outer, const Diffeo1D& inner);
  static Diffeo1D inverse_of(const Diffeo1D& theta);

  double operator()(double x) const;
  double derivative(double x) const;
  double inverse(double y) const;

  bool is_identity() const;
  std::string name() const;
  std::string to_json() const;
  static Diffeo1D from_json(const std::string& text);

  struct Node;

 private:
  explicit Diffeo1D(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  std::shared_ptr<const Node> node_;
};

}  // namespace halfdens
