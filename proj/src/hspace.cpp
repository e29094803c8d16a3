#include "halfdens/hspace.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include <Eigen/Dense>
#include <nlohmann/json.hpp>

namespace halfdens {

// --- StateTerm ---------------------------------------------------------------

StateTerm::BlockTransport StateTerm::transport(double x) const {
  BlockTransport t{1.0, x, 1.0};
  for (auto it = layers.rbegin(); it != layers.rend(); ++it) {
    const double d = it->derivative(t.base_x);
    t.weight *= std::sqrt(d);
    t.gamma_scale *= d * d;
    t.base_x = (*it)(t.base_x);
  }
  return t;
}

double StateTerm::block_value(int k, double x, double gamma) const {
  const BlockTransport t = transport(x);
  const double a = x_bumps[k](t.base_x);
  if (a == 0.0) return 0.0;
  return t.weight * a * gamma_bumps[k](gamma / t.gamma_scale);
}

Interval StateTerm::x_support(int k) const {
  Interval iv = x_bumps[k].support();
  for (const auto& layer : layers) iv = {layer.inverse(iv.lo), layer.inverse(iv.hi)};
  return iv;
}

Interval StateTerm::gamma_section(int k, double x) const {
  const double s = transport(x).gamma_scale;
  const Interval b = gamma_bumps[k].support();
  return {b.lo * s, b.hi * s};
}

cplx StateTerm::operator()(std::span<const double> x, std::span<const double> gamma) const {
  double p = 1.0;
  for (int k = 0; k < blocks() && p != 0.0; ++k) p *= block_value(k, x[k], gamma[k]);
  return coeff * p;
}

// --- HalfDensityState --------------------------------------------------------

HalfDensityState::HalfDensityState(int n_blocks, InvariantMeasure measure) : n_(n_blocks), measure_(measure) {
  if (n_ < 1) throw std::invalid_argument("HalfDensityState: need N >= 1");
  if (measure_.spec.n() != 1) throw std::invalid_argument("HalfDensityState: base manifold is R, so Gamma must be 1-dimensional");
}

HalfDensityState HalfDensityState::product(InvariantMeasure measure, cplx coeff, std::vector<BumpFunction> x_bumps,
                                           std::vector<BumpFunction> gamma_bumps) {
  HalfDensityState s(static_cast<int>(x_bumps.size()), measure);
  s.add_term({coeff, std::move(x_bumps), std::move(gamma_bumps), {}});
  return s;
}

void HalfDensityState::add_term(StateTerm t) {
  if (t.blocks() != n_ || static_cast<int>(t.gamma_bumps.size()) != n_)
    throw std::invalid_argument("HalfDensityState: term has the wrong number of blocks");
  for (int k = 0; k < n_; ++k) {
    if (!(t.x_bumps[k].width > 0.0) || !(t.gamma_bumps[k].width > 0.0))
      throw std::invalid_argument("HalfDensityState: bump widths must be positive");
    require_box_in_cone({t.gamma_bumps[k].support()}, measure_.spec);
  }
  for (int k = 0; k + 1 < n_; ++k)
    if (!(t.x_support(k).lo > t.x_support(k + 1).hi))
      throw std::domain_error("HalfDensityState: x-support must lie inside R^N_> (decreasing blocks)");
  terms_.push_back(std::move(t));
}

cplx HalfDensityState::operator()(std::span<const double> x, std::span<const double> gamma) const {
  if (static_cast<int>(x.size()) != n_ || static_cast<int>(gamma.size()) != n_)
    throw std::invalid_argument("HalfDensityState: point has the wrong dimension");
  cplx s{0.0, 0.0};
  for (const auto& t : terms_) s += t(x, gamma);
  return s;
}

Box HalfDensityState::x_support_box() const {
  if (terms_.empty()) return {};
  Box box(n_, Interval{std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity()});
  for (const auto& t : terms_)
    for (int k = 0; k < n_; ++k) {
      const Interval iv = t.x_support(k);
      box[k].lo = std::min(box[k].lo, iv.lo);
      box[k].hi = std::max(box[k].hi, iv.hi);
    }
  return box;
}

HalfDensityState HalfDensityState::operator+(const HalfDensityState& o) const {
  if (o.n_ != n_) throw std::invalid_argument("HalfDensityState: block count mismatch");
  if (!(o.measure_ == measure_)) throw std::invalid_argument("HalfDensityState: measure mismatch");
  HalfDensityState out = *this;
  for (const auto& t : o.terms_) out.terms_.push_back(t);
  return out;
}

HalfDensityState HalfDensityState::operator-(const HalfDensityState& o) const { return *this + o * cplx{-1.0, 0.0}; }

HalfDensityState HalfDensityState::operator*(cplx z) const {
  HalfDensityState out = *this;
  for (auto& t : out.terms_) t.coeff *= z;
  return out;
}

std::string HalfDensityState::to_json() const {
  using nlohmann::json;
  auto bumps = [](const std::vector<BumpFunction>& v) {
    json a = json::array();
    for (const auto& b : v) a.push_back({{"center", b.center}, {"width", b.width}});
    return a;
  };
  json j;
  j["N"] = n_;
  j["c"] = measure_.scale_c;
  j["signature"] = {measure_.spec.p, measure_.spec.p_prime};
  j["terms"] = json::array();
  for (const auto& t : terms_) {
    json jt{{"coeff_re", t.coeff.real()}, {"coeff_im", t.coeff.imag()}, {"x", bumps(t.x_bumps)},
            {"gamma", bumps(t.gamma_bumps)}, {"layers", json::array()}};
    for (const auto& l : t.layers) jt["layers"].push_back(json::parse(l.to_json()));
    j["terms"].push_back(std::move(jt));
  }
  return j.dump();
}

HalfDensityState HalfDensityState::from_json(const std::string& text) {
  const auto j = nlohmann::json::parse(text);
  const auto sig = j.at("signature").get<std::vector<int>>();
  if (sig.size() != 2) throw std::invalid_argument("HalfDensityState::from_json: signature must have two entries");
  HalfDensityState s(j.at("N").get<int>(), InvariantMeasure(SignatureSpec(sig[0], sig[1]), j.at("c").get<double>()));
  auto bumps = [](const nlohmann::json& a) {
    std::vector<BumpFunction> v;
    for (const auto& b : a) v.push_back({b.at("center").get<double>(), b.at("width").get<double>()});
    return v;
  };
  for (const auto& jt : j.at("terms")) {
    StateTerm t{{jt.at("coeff_re").get<double>(), jt.at("coeff_im").get<double>()}, bumps(jt.at("x")),
                bumps(jt.at("gamma")), {}};
    for (const auto& l : jt.at("layers")) t.layers.push_back(Diffeo1D::from_json(l.dump()));
    s.add_term(std::move(t));
  }
  return s;
}

// --- ScalarDensityField ------------------------------------------------------

cplx ScalarDensityField::operator()(std::span<const double> x) const {
  cplx s{0.0, 0.0};
  for (const auto& p : pieces_) {
    bool inside = true;
    for (std::size_t k = 0; k < p.box.size(); ++k) inside = inside && p.box[k].contains(x[k]);
    if (inside) s += p.f(x);
  }
  return s;
}

Box ScalarDensityField::support_box() const {
  if (pieces_.empty()) return {};
  Box box = pieces_.front().box;
  for (const auto& p : pieces_)
    for (std::size_t k = 0; k < box.size(); ++k) {
      box[k].lo = std::min(box[k].lo, p.box[k].lo);
      box[k].hi = std::max(box[k].hi, p.box[k].hi);
    }
  return box;
}

cplx ScalarDensityField::integrate(int nodes_per_dim) const {
  cplx total{0.0, 0.0};
  for (const auto& p : pieces_) total += integrate_box(p.box, nodes_per_dim, p.f);
  return total;
}

// --- pairing and inner products ---------------------------------------------

namespace {

void require_compatible(const HalfDensityState& s1, const HalfDensityState& s2) {
  if (s1.blocks() != s2.blocks()) throw std::invalid_argument("block count mismatch between states");
  if (!(s1.measure() == s2.measure())) throw std::invalid_argument("states use different measures");
}

Box pair_x_box(const StateTerm& a, const StateTerm& b) {
  Box box(a.blocks());
  for (int k = 0; k < a.blocks(); ++k) box[k] = intersect(a.x_support(k), b.x_support(k));
  return box;
}

}  // namespace

ScalarDensityField pair_to_density(const HalfDensityState& s1, const HalfDensityState& s2, const QuadConfig& quad) {
  quad.validate();
  require_compatible(s1, s2);
  ScalarDensityField field;
  const int n_blocks = s1.blocks();
  const int nodes = quad.nodes_per_dim;
  const InvariantMeasure mu = s1.measure();
  for (const auto& a : s1.terms()) {
    for (const auto& b : s2.terms()) {
      Box box = pair_x_box(a, b);
      if (empty(box)) continue;
      const cplx coeff = std::conj(a.coeff) * b.coeff;
      field.add({std::move(box), [a, b, coeff, n_blocks, nodes, mu](std::span<const double> x) -> cplx {
                   double value = 1.0;
                   for (int k = 0; k < n_blocks && value != 0.0; ++k) {
                     const auto ta = a.transport(x[k]);
                     const auto tb = b.transport(x[k]);
                     const double wa = ta.weight * a.x_bumps[k](ta.base_x);
                     const double wb = tb.weight * b.x_bumps[k](tb.base_x);
                     if (wa == 0.0 || wb == 0.0) return {0.0, 0.0};
                     const Interval ga = a.gamma_bumps[k].support();
                     const Interval gb = b.gamma_bumps[k].support();
                     const Interval sec = intersect({ga.lo * ta.gamma_scale, ga.hi * ta.gamma_scale},
                                                    {gb.lo * tb.gamma_scale, gb.hi * tb.gamma_scale});
                     if (sec.empty()) return {0.0, 0.0};
                     const double g = integrate_interval(sec, nodes, [&](double gamma) {
                       const double v[1] = {gamma};
                       return a.gamma_bumps[k](gamma / ta.gamma_scale) * b.gamma_bumps[k](gamma / tb.gamma_scale) *
                              natural_density_coords(v, mu);
                     });
                     value *= wa * wb * g;
                   }
                   return coeff * value;
                 }});
    }
  }
  return field;
}

cplx inner(const HalfDensityState& s1, const HalfDensityState& s2, const QuadConfig& quad) {
  return pair_to_density(s1, s2, quad).integrate(quad.nodes_per_dim);
}

double norm(const HalfDensityState& s, const QuadConfig& quad) {
  return std::sqrt(std::max(0.0, inner(s, s, quad).real()));
}

namespace {

bool same_layers(const StateTerm& a, const StateTerm& b) {
  if (a.layers.size() != b.layers.size()) return false;
  for (std::size_t i = 0; i < a.layers.size(); ++i)
    if (a.layers[i].to_json() != b.layers[i].to_json()) return false;
  return true;
}

}  // namespace

cplx inner_joint(const HalfDensityState& s1, const HalfDensityState& s2, const QuadConfig& quad) {
  quad.validate();
  require_compatible(s1, s2);
  const int n_blocks = s1.blocks();
  const InvariantMeasure mu = s1.measure();
  cplx total{0.0, 0.0};
  for (const auto& a : s1.terms()) {
    for (const auto& b : s2.terms()) {
      const Box xbox = pair_x_box(a, b);
      if (empty(xbox)) continue;
      Box box = xbox;
      // Shared layers: integrate in t = gamma / S(x), whose support is a fixed box.
      const bool scaled = same_layers(a, b);
      for (int k = 0; k < n_blocks; ++k) {
        if (scaled) {
          box.push_back(intersect(a.gamma_bumps[k].support(), b.gamma_bumps[k].support()));
          continue;
        }
        Interval hull{std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity()};
        constexpr int samples = 257;
        for (int i = 0; i < samples; ++i) {
          const double x = xbox[k].lo + (xbox[k].hi - xbox[k].lo) * i / (samples - 1.0);
          const Interval sec = intersect(a.gamma_section(k, x), b.gamma_section(k, x));
          if (sec.empty()) continue;
          hull.lo = std::min(hull.lo, sec.lo);
          hull.hi = std::max(hull.hi, sec.hi);
        }
        box.push_back(hull);
      }
      if (empty(box)) continue;
      total += integrate_box(box, quad.nodes_per_dim, [&](std::span<const double> v) {
        const auto x = v.subspan(0, n_blocks);
        std::vector<double> g(v.begin() + n_blocks, v.end());
        double jac = 1.0;
        if (scaled)
          for (int k = 0; k < n_blocks; ++k) {
            const double sk = a.transport(x[k]).gamma_scale;
            g[k] *= sk;
            jac *= std::abs(sk);
          }
        const cplx pa = a(x, g);
        if (pa == 0.0) return cplx{0.0, 0.0};
        double w = jac;
        for (int k = 0; k < n_blocks; ++k) w *= natural_density_coords(std::span<const double>(&g[k], 1), mu);
        return std::conj(pa) * b(x, g) * w;
      });
    }
  }
  return total;
}

HalfDensityState pullback(const Diffeo1D& theta, const HalfDensityState& s) {
  HalfDensityState out(s.blocks(), s.measure());
  for (auto t : s.terms()) {
    t.layers.push_back(theta);
    for (int k = 0; k < t.blocks(); ++k) {
      const Interval iv = t.x_support(k);
      for (int i = 0; i <= 32; ++i) {
        const double x = iv.lo + (iv.hi - iv.lo) * i / 32.0;
        if (!(theta.derivative(x) > 0.0)) throw std::domain_error("pullback: theta' vanishes on the support");
      }
    }
    out.add_term(std::move(t));
  }
  return out;
}

HalfDensityState rescale_iso(const HalfDensityState& s, double c_old, double c_new) {
  if (!(c_old > 0.0) || !(c_new > 0.0)) throw std::invalid_argument("rescale_iso: constants must be positive");
  if (s.measure().scale_c != c_old) throw std::invalid_argument("rescale_iso: state is not built on c_old");
  const double factor = std::pow(c_new / c_old, -0.5 * s.blocks());
  HalfDensityState out(s.blocks(), InvariantMeasure(s.measure().spec, c_new));
  for (auto t : s.terms()) {
    t.coeff *= factor;
    out.add_term(std::move(t));
  }
  return out;
}

Reapproximation reapproximate(const HalfDensityState& s, const std::vector<HalfDensityState>& dictionary,
                              const QuadConfig& quad) {
  const auto m = static_cast<Eigen::Index>(dictionary.size());
  if (m == 0) return {HalfDensityState(s.blocks(), s.measure()), norm(s, quad)};
  Eigen::MatrixXcd gram(m, m);
  Eigen::VectorXcd rhs(m);
  for (Eigen::Index i = 0; i < m; ++i) {
    rhs[i] = inner(dictionary[i], s, quad);
    for (Eigen::Index j = i; j < m; ++j) {
      gram(i, j) = inner(dictionary[i], dictionary[j], quad);
      gram(j, i) = std::conj(gram(i, j));
    }
  }
  const Eigen::VectorXcd coef = gram.ldlt().solve(rhs);
  HalfDensityState p(s.blocks(), s.measure());
  for (Eigen::Index i = 0; i < m; ++i) p = p + dictionary[i] * coef[i];
  const double err2 = inner(s, s, quad).real() - rhs.dot(coef).real();
  return {std::move(p), std::sqrt(std::max(0.0, err2))};
}

// --- graded sum ----------------------------------------------------------------

void GradedState::add(HalfDensityState s) {
  const int n = s.blocks();
  auto it = comps_.find(n);
  if (it == comps_.end())
    comps_.emplace(n, std::move(s));
  else
    it->second = it->second + s;
}

GradedState GradedState::operator+(const GradedState& o) const {
  GradedState out = *this;
  for (const auto& [n, s] : o.comps_) out.add(s);
  return out;
}

GradedState GradedState::operator*(cplx z) const {
  GradedState out;
  for (const auto& [n, s] : comps_) out.comps_.emplace(n, s * z);
  return out;
}

cplx graded_inner(const GradedState& g1, const GradedState& g2, const QuadConfig& quad) {
  cplx total{0.0, 0.0};
  for (const auto& [n, s1] : g1.components()) {
    auto it = g2.components().find(n);
    if (it != g2.components().end()) total += inner(s1, it->second, quad);
  }
  return total;
}

// --- the non-slowly-changing example ------------------------------------------

double counterexample_psi(double x, double gamma) {
  if (x < 0.0 || gamma < 1.0 || x * gamma > 1.0) return 0.0;
  return std::sqrt(x) * (gamma - 1.0) * (1.0 - x * gamma);
}

Interval counterexample_section(double x) {
  if (!(x > 0.0)) throw std::domain_error("counterexample_section: x must be positive");
  return {1.0, 1.0 / x};
}

double counterexample_density(double x, int nodes) {
  if (!(x > 0.0 && x < 1.0)) throw std::domain_error("counterexample_density: x must lie in (0, 1)");
  const InvariantMeasure mu(SignatureSpec(1, 0), 1.0);
  const Interval sec = counterexample_section(x);
  // gamma = e^t, d(gamma) = e^t dt; the integrand is entire in t.
  return integrate_interval({std::log(sec.lo), std::log(sec.hi)}, nodes, [&](double t) {
    const double g = std::exp(t);
    const double v[1] = {g};
    const double p = counterexample_psi(x, g);
    return p * p * natural_density_coords(v, mu) * g;
  });
}

std::vector<ProfileRow> counterexample_profile(const std::vector<double>& xs, int nodes) {
  std::vector<ProfileRow> rows;
  rows.reserve(xs.size());
  for (double x : xs) rows.push_back({x, counterexample_density(x, nodes)});
  return rows;
}

double loglog_slope(const std::vector<ProfileRow>& rows) {
  if (rows.size() < 2) throw std::invalid_argument("loglog_slope: need at least two rows");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double n = static_cast<double>(rows.size());
  for (const auto& r : rows) {
    const double lx = std::log(r.x), ly = std::log(r.f);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

double loglog_slope_with_linear_correction(const std::vector<ProfileRow>& rows) {
  if (rows.size() < 3) throw std::invalid_argument("loglog_slope_with_linear_correction: need at least three rows");
  Eigen::MatrixXd a(rows.size(), 3);
  Eigen::VectorXd y(rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    a(i, 0) = std::log(rows[i].x);
    a(i, 1) = 1.0;
    a(i, 2) = rows[i].x;
    y[i] = std::log(rows[i].f);
  }
  return a.colPivHouseholderQr().solve(y)[0];
}

}  // namespace halfdens
