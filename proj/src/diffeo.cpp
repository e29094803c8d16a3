#include "halfdens/diffeo.hpp"

#include <cmath>
#include <stdexcept>
#include <variant>

#include <nlohmann/json.hpp>

namespace halfdens {

namespace {

struct Affine {
  double a, b;
};
struct Soft {
  double a, k;
};
struct Sine {
  double a;
};
struct Compose {
  Diffeo1D outer, inner;
};
struct Inverse {
  Diffeo1D base;
};

// Root of theta(x) = y for theta(x) = x + r(x) with |r| <= bound.
template <class F, class DF>
double newton_inverse(double y, double bound, F f, DF df) {
  double lo = y - bound - 1.0;
  double hi = y + bound + 1.0;
  double x = y;
  for (int it = 0; it < 200; ++it) {
    const double fx = f(x) - y;
    if (fx == 0.0) return x;
    if (fx > 0.0)
      hi = x;
    else
      lo = x;
    double next = x - fx / df(x);
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    if (std::abs(next - x) <= 1e-16 * std::max(1.0, std::abs(x))) return next;
    x = next;
  }
  return x;
}

}  // namespace

struct Diffeo1D::Node {
  std::variant<Affine, Soft, Sine, Compose, Inverse> v;
};

Diffeo1D::Diffeo1D() : node_(std::make_shared<Node>(Node{Affine{1.0, 0.0}})) {}

Diffeo1D Diffeo1D::affine(double a, double b) {
  if (!(a > 0.0) || !std::isfinite(b)) throw std::invalid_argument("Diffeo1D::affine: need a > 0");
  return Diffeo1D(std::make_shared<Node>(Node{Affine{a, b}}));
}

Diffeo1D Diffeo1D::soft(double a, double k) {
  if (!(a * k > -1.0) || !std::isfinite(a) || !std::isfinite(k))
    throw std::invalid_argument("Diffeo1D::soft: need a k > -1");
  return Diffeo1D(std::make_shared<Node>(Node{Soft{a, k}}));
}

Diffeo1D Diffeo1D::sine(double a) {
  if (!(std::abs(a) < 1.0)) throw std::invalid_argument("Diffeo1D::sine: need |a| < 1");
  return Diffeo1D(std::make_shared<Node>(Node{Sine{a}}));
}

Diffeo1D Diffeo1D::compose(const Diffeo1D& outer, const Diffeo1D& inner) {
  return Diffeo1D(std::make_shared<Node>(Node{Compose{outer, inner}}));
}

Diffeo1D Diffeo1D::inverse_of(const Diffeo1D& theta) {
  return Diffeo1D(std::make_shared<Node>(Node{Inverse{theta}}));
}

double Diffeo1D::operator()(double x) const {
  return std::visit(
      [x](const auto& m) -> double {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, Affine>)
          return m.a * x + m.b;
        else if constexpr (std::is_same_v<T, Soft>)
          return x + m.a * std::tanh(m.k * x);
        else if constexpr (std::is_same_v<T, Sine>)
          return x + m.a * std::sin(x);
        else if constexpr (std::is_same_v<T, Compose>)
          return m.outer(m.inner(x));
        else
          return m.base.inverse(x);
      },
      node_->v);
}

double Diffeo1D::derivative(double x) const {
  return std::visit(
      [x](const auto& m) -> double {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, Affine>) {
          return m.a;
        } else if constexpr (std::is_same_v<T, Soft>) {
          const double c = std::cosh(m.k * x);
          return 1.0 + m.a * m.k / (c * c);
        } else if constexpr (std::is_same_v<T, Sine>) {
          return 1.0 + m.a * std::cos(x);
        } else if constexpr (std::is_same_v<T, Compose>) {
          return m.outer.derivative(m.inner(x)) * m.inner.derivative(x);
        } else {
          return 1.0 / m.base.derivative(m.base.inverse(x));
        }
      },
      node_->v);
}

double Diffeo1D::inverse(double y) const {
  return std::visit(
      [y, this](const auto& m) -> double {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, Affine>)
          return (y - m.b) / m.a;
        else if constexpr (std::is_same_v<T, Compose>)
          return m.inner.inverse(m.outer.inverse(y));
        else if constexpr (std::is_same_v<T, Inverse>)
          return m.base(y);
        else
          return newton_inverse(y, std::abs(m.a), *this, [this](double x) { return derivative(x); });
      },
      node_->v);
}

bool Diffeo1D::is_identity() const {
  const auto* a = std::get_if<Affine>(&node_->v);
  return a && a->a == 1.0 && a->b == 0.0;
}

std::string Diffeo1D::name() const {
  return std::visit(
      [](const auto& m) -> std::string {
        using T = std::decay_t<decltype(m)>;
        auto num = [](double v) { return nlohmann::json(v).dump(); };
        if constexpr (std::is_same_v<T, Affine>)
          return "affine(" + num(m.a) + "," + num(m.b) + ")";
        else if constexpr (std::is_same_v<T, Soft>)
          return "soft(" + num(m.a) + "," + num(m.k) + ")";
        else if constexpr (std::is_same_v<T, Sine>)
          return "sine(" + num(m.a) + ")";
        else if constexpr (std::is_same_v<T, Compose>)
          return m.outer.name() + "o" + m.inner.name();
        else
          return "inv(" + m.base.name() + ")";
      },
      node_->v);
}

std::string Diffeo1D::to_json() const {
  const Node& n = *node_;
  nlohmann::json j;
  if (const auto* a = std::get_if<Affine>(&n.v))
    j = {{"kind", "affine"}, {"a", a->a}, {"b", a->b}};
  else if (const auto* s = std::get_if<Soft>(&n.v))
    j = {{"kind", "soft"}, {"a", s->a}, {"k", s->k}};
  else if (const auto* s2 = std::get_if<Sine>(&n.v))
    j = {{"kind", "sine"}, {"a", s2->a}};
  else if (const auto* inv = std::get_if<Inverse>(&n.v))
    j = {{"kind", "inverse"}, {"base", nlohmann::json::parse(inv->base.to_json())}};
  else {
    const auto& c = std::get<Compose>(n.v);
    j = {{"kind", "compose"},
         {"outer", nlohmann::json::parse(c.outer.to_json())},
         {"inner", nlohmann::json::parse(c.inner.to_json())}};
  }
  return j.dump();
}

Diffeo1D Diffeo1D::from_json(const std::string& text) {
  const auto j = nlohmann::json::parse(text);
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "affine") return affine(j.at("a").get<double>(), j.at("b").get<double>());
  if (kind == "soft") return soft(j.at("a").get<double>(), j.at("k").get<double>());
  if (kind == "sine") return sine(j.at("a").get<double>());
  if (kind == "inverse") return inverse_of(from_json(j.at("base").dump()));
  if (kind == "compose") return compose(from_json(j.at("outer").dump()), from_json(j.at("inner").dump()));
  throw std::invalid_argument("Diffeo1D::from_json: unknown kind '" + kind + "'");
}

}  // namespace halfdens
