#include "halfdens/harness.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numeric>
#include <stdexcept>
#include <thread>

#include <nlohmann/json.hpp>

#include "halfdens/config.hpp"
#include "halfdens/densities.hpp"
#include "halfdens/fibers.hpp"
#include "halfdens/hspace.hpp"
#include "halfdens/kspace.hpp"

namespace halfdens {

using nlohmann::json;

// --- configuration -------------------------------------------------------------

std::vector<Diffeo1D> SuiteConfig::default_catalog() {
  return {Diffeo1D::affine(1.5, 0.25), Diffeo1D::soft(0.5, 1.2), Diffeo1D::sine(0.3),
          Diffeo1D::compose(Diffeo1D::sine(0.3), Diffeo1D::soft(-0.4, 0.8))};
}

void SuiteConfig::validate() const {
  if (trials < 1) throw std::invalid_argument("SuiteConfig: trials must be >= 1");
  if (nodes_per_dim && *nodes_per_dim < 8) throw std::invalid_argument("SuiteConfig: nodes_per_dim must be >= 8");
  if (n_max < 1 || n_max > 4) throw std::invalid_argument("SuiteConfig: N_max must lie in [1, 4]");
  if (diffeo_catalog.empty()) throw std::invalid_argument("SuiteConfig: diffeo catalog is empty");
  if (threads < 0) throw std::invalid_argument("SuiteConfig: threads must be >= 0");
}

std::string SuiteConfig::to_json() const {
  json j;
  j["seed"] = seed;
  j["nodes_per_dim"] = nodes_per_dim ? json(*nodes_per_dim) : json(nullptr);
  j["trials"] = trials;
  j["signature"] = {signature.p, signature.p_prime};
  j["N_max"] = n_max;
  j["diffeo_catalog"] = json::array();
  for (const auto& d : diffeo_catalog) j["diffeo_catalog"].push_back(json::parse(d.to_json()));
  j["output_path"] = output_path;
  j["threads"] = threads;
  return j.dump(2);
}

SuiteConfig SuiteConfig::from_json(const std::string& text) {
  const auto j = json::parse(text);
  SuiteConfig c;
  c.seed = j.value("seed", c.seed);
  if (j.contains("nodes_per_dim") && !j.at("nodes_per_dim").is_null()) c.nodes_per_dim = j.at("nodes_per_dim").get<int>();
  c.trials = j.value("trials", c.trials);
  if (j.contains("signature")) {
    const auto s = j.at("signature").get<std::vector<int>>();
    if (s.size() != 2) throw std::invalid_argument("SuiteConfig: signature must have two entries");
    c.signature = SignatureSpec(s[0], s[1]);
  }
  c.n_max = j.value("N_max", c.n_max);
  if (j.contains("diffeo_catalog")) {
    c.diffeo_catalog.clear();
    for (const auto& d : j.at("diffeo_catalog")) c.diffeo_catalog.push_back(Diffeo1D::from_json(d.dump()));
  }
  c.output_path = j.value("output_path", c.output_path);
  c.threads = j.value("threads", c.threads);
  c.validate();
  return c;
}

// --- reports -------------------------------------------------------------------

bool SuiteReport::all_pass() const { return failures() == 0; }

std::size_t SuiteReport::failures() const {
  return static_cast<std::size_t>(std::count_if(rows.begin(), rows.end(), [](const ReportRow& r) { return !r.pass; }));
}

std::string SuiteReport::body() const {
  std::string out;
  for (const auto& r : rows) {
    nlohmann::ordered_json j{{"suite", r.suite},         {"case_id", r.case_id},     {"lhs_re", r.lhs.real()},
           {"lhs_im", r.lhs.imag()},   {"rhs_re", r.rhs.real()},   {"rhs_im", r.rhs.imag()},
           {"rel_err", r.rel_err},     {"tol", r.tol},             {"nodes", r.nodes},
           {"verdict", r.pass ? "pass" : "fail"}};
    out += j.dump() + "\n";
  }
  nlohmann::ordered_json summary{{"summary", {{"suite", suite}, {"rows", rows.size()}, {"failed", failures()}, {"pass", all_pass()}}}};
  out += summary.dump() + "\n";
  return out;
}

std::string SuiteReport::timing() const {
  std::string out;
  for (const auto& r : rows) out += json{{"case_id", r.case_id}, {"elapsed_ms", r.elapsed_ms}}.dump() + "\n";
  return out;
}

void write_report(const SuiteReport& report, const std::string& path) {
  const std::filesystem::path p(path);
  if (p.has_parent_path()) {
    std::error_code ec;
    std::filesystem::create_directories(p.parent_path(), ec);
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write report to '" + path + "'");
  f << report.body();
  if (!f) throw std::runtime_error("cannot write report to '" + path + "'");
  std::ofstream t(path + ".timing.jsonl", std::ios::binary);
  if (t) t << report.timing();
}

std::string default_report_path(const std::string& suite) {
  const char* dir = std::getenv("HALFDENS_OUT_DIR");
  const std::filesystem::path base = dir && *dir ? std::filesystem::path(dir) : std::filesystem::current_path();
  return (base / (suite + ".jsonl")).string();
}

std::mt19937_64 case_rng(std::uint64_t seed, const std::string& suite, std::uint64_t index) {
  std::uint64_t h = 1469598103934665603ull;  // FNV-1a
  for (unsigned char c : suite) {
    h ^= c;
    h *= 1099511628211ull;
  }
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(h), static_cast<std::uint32_t>(h >> 32),
                    static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32)};
  return std::mt19937_64(seq);
}

namespace {

using Clock = std::chrono::steady_clock;

struct Case {
  std::string id;
  std::function<std::vector<ReportRow>()> run;
};

ReportRow row(const std::string& suite, const std::string& id, cplx lhs, cplx rhs, double err, double tol, int nodes) {
  ReportRow r;
  r.suite = suite;
  r.case_id = id;
  r.lhs = lhs;
  r.rhs = rhs;
  r.rel_err = err;
  r.tol = tol;
  r.nodes = nodes;
  r.pass = std::isfinite(err) && err < tol;
  return r;
}

// Runs cases on a small thread pool; rows come back in case order.
std::vector<ReportRow> run_cases(const std::vector<Case>& cases, int threads) {
  std::vector<std::vector<ReportRow>> results(cases.size());
  std::vector<double> elapsed(cases.size(), 0.0);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < cases.size(); i = next++) {
      const auto t0 = Clock::now();
      results[i] = cases[i].run();
      elapsed[i] = std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
    }
  };
  int n = threads > 0 ? threads : static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  n = std::min<int>(n, static_cast<int>(std::max<std::size_t>(1, cases.size())));
  if (n <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (int i = 0; i < n; ++i) pool.emplace_back(worker);
  }
  std::vector<ReportRow> rows;
  for (std::size_t i = 0; i < cases.size(); ++i)
    for (auto& r : results[i]) {
      r.elapsed_ms = elapsed[i] / std::max<std::size_t>(1, results[i].size());
      rows.push_back(std::move(r));
    }
  return rows;
}

double uniform(std::mt19937_64& rng, double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); }

cplx random_coeff(std::mt19937_64& rng) { return {uniform(rng, -1.0, 1.0), uniform(rng, -1.0, 1.0)}; }

// --- generators ------------------------------------------------------------------

// Bump expansion over Gamma_R (one block) whose term boxes sit inside the cone.
BumpExpansion random_gamma_expansion(const SignatureSpec& spec, std::mt19937_64& rng, int terms) {
  BumpExpansion f(spec.dim());
  for (int t = 0; t < terms; ++t) {
    const SymMatrix g0 = sample_gamma(spec, rng, 0.35);
    Eigen::SelfAdjointEigenSolver<Mat> es(g0.matrix(), Eigen::EigenvaluesOnly);
    const double lam = es.eigenvalues().cwiseAbs().minCoeff();
    const auto c = g0.coords();
    double w = 0.25 * lam;
    while (true) {
      std::vector<BumpFunction> bumps;
      Box box;
      for (double ci : c) {
        const double wi = w * uniform(rng, 0.6, 1.0);
        bumps.push_back({ci, wi});
        box.push_back({ci - wi, ci + wi});
      }
      try {
        require_box_in_cone(box, spec);
        f.add_term({random_coeff(rng), std::move(bumps)});
        break;
      } catch (const std::domain_error&) {
        w *= 0.5;
      }
    }
  }
  return f;
}

double gamma_sign(const SignatureSpec& spec) { return spec.p == 1 ? 1.0 : -1.0; }

// Half-density state for M = R with N blocks; term boxes overlap partially.
HalfDensityState random_state(int n_blocks, const InvariantMeasure& mu, std::mt19937_64& rng, int terms) {
  HalfDensityState s(n_blocks, mu);
  const double sign = gamma_sign(mu.spec);
  const double top = uniform(rng, -0.3, 0.3) + 3.0 * n_blocks;
  for (int t = 0; t < terms; ++t) {
    StateTerm term;
    term.coeff = random_coeff(rng);
    for (int k = 0; k < n_blocks; ++k) {
      term.x_bumps.push_back({top - 3.0 * k + uniform(rng, -0.3, 0.3), uniform(rng, 0.5, 1.0)});
      term.gamma_bumps.push_back({sign * uniform(rng, 2.0, 3.5), uniform(rng, 0.4, 1.2)});
    }
    s.add_term(std::move(term));
  }
  return s;
}

// Fiber element over Gamma^N for n = 1.
BumpExpansion random_fiber_value(int n_blocks, const SignatureSpec& spec, std::mt19937_64& rng, int terms) {
  BumpExpansion f(n_blocks);
  const double sign = gamma_sign(spec);
  for (int t = 0; t < terms; ++t) {
    std::vector<BumpFunction> b;
    for (int k = 0; k < n_blocks; ++k) b.push_back({sign * uniform(rng, 2.0, 3.5), uniform(rng, 0.4, 1.2)});
    f.add_term({random_coeff(rng), std::move(b)});
  }
  return f;
}

PointSet random_point_set(int n_points, int d, std::mt19937_64& rng, double spread = 10.0) {
  while (true) {
    std::vector<double> flat(n_points * d);
    for (double& v : flat) v = uniform(rng, -spread, spread);
    PointTuple t(d, flat);
    if (t.min_distance() > 0.05) return project(t);
  }
}

SparseSection random_section(int n_blocks, const FiberSpace& fiber, std::mt19937_64& rng, int points) {
  SparseSection s(fiber);
  for (int i = 0; i < points; ++i)
    s.add(random_point_set(n_blocks, 1, rng), random_fiber_value(n_blocks, fiber.measure.spec, rng,
                                                                  1 + static_cast<int>(rng() % 3)));
  return s;
}

int nodes_or(const SuiteConfig& c, int fallback) { return c.nodes_per_dim.value_or(fallback); }

SignatureSpec base_signature(const SuiteConfig& c) {
  // M = R: one-dimensional tangent spaces.
  return c.signature.n() == 1 ? c.signature : SignatureSpec(1, 0);
}

// --- suites ------------------------------------------------------------------------

std::vector<Case> measure_invariance_cases(const SuiteConfig& cfg) {
  const std::string suite = "measure-invariance";
  const int nodes = nodes_or(cfg, 32);
  std::vector<Case> cases;
  for (int i = 0; i < cfg.trials; ++i) {
    const std::string id = "mi-" + std::to_string(i);
    cases.push_back({id, [=] {
                       auto rng = case_rng(cfg.seed, suite, i);
                       const SignatureSpec spec = (i % 3 == 0) ? SignatureSpec(1, 0)
                                                  : (i % 3 == 1) ? SignatureSpec(2, 0)
                                                                 : SignatureSpec(1, 1);
                       const InvariantMeasure mu(spec, 1.0);
                       const GlElement g = sample_gl(spec.n(), rng, 0.6);
                       const BumpExpansion f = random_gamma_expansion(spec, rng, 1 + i % 2);
                       const auto r1 = verify_invariance(f, g, mu, QuadConfig{nodes, 1e-5});
                       const auto r2 = verify_invariance(f, g, mu, QuadConfig{2 * nodes, 1e-5});
                       std::vector<ReportRow> rows;
                       rows.push_back(row(suite, id + "-n" + std::to_string(spec.n()), r1.lhs, r1.rhs, r1.rel_err, 1e-5, nodes));
                       // Doubling must not make things worse beyond round-off.
                       const double excess = std::max(0.0, r2.rel_err - std::max(r1.rel_err, kRoundoffFloor));
                       rows.push_back(row(suite, id + "-doubling", r1.rel_err, r2.rel_err, excess, 1e-300, 2 * nodes));
                       rows.back().pass = excess == 0.0;
                       return rows;
                     }});
  }
  return cases;
}

std::vector<Case> pushforward_cases(const SuiteConfig& cfg) {
  const std::string suite = "pushforward-product";
  const int nodes = nodes_or(cfg, 48);
  std::vector<Case> cases;
  auto inv_x = [](double x) { return 1.0 / x; };
  for (int i = 0; i < cfg.trials; ++i) {
    const std::string id = "pf-" + std::to_string(i);
    cases.push_back({id, [=] {
                       auto rng = case_rng(cfg.seed, suite, i);
                       auto pick = [&](int which) {
                         switch (which) {
                           case 0:
                             return Homeo1D::affine(uniform(rng, 0.5, 2.5), 0.0);
                           case 1:
                             return Homeo1D::square();
                           default:
                             return Homeo1D::identity();
                         }
                       };
                       const Homeo1D alpha = pick(i % 3);
                       const Homeo1D beta = pick((i / 3) % 3);
                       BumpExpansion h(2);
                       for (int t = 0; t < 1 + i % 2; ++t)
                         h.add_term({random_coeff(rng),
                                     {{uniform(rng, 2.0, 4.0), uniform(rng, 0.5, 1.5)},
                                      {uniform(rng, 2.0, 4.0), uniform(rng, 0.5, 1.5)}}});
                       const auto r = pushforward_product_check(alpha, beta, h, inv_x, inv_x, QuadConfig{nodes, 1e-7});
                       return std::vector<ReportRow>{
                           row(suite, id + "-" + alpha.name + "x" + beta.name, r.lhs, r.rhs, r.rel_err, 1e-7, nodes)};
                     }});
  }
  return cases;
}

std::vector<Case> density_axiom_cases(const SuiteConfig& cfg) {
  const std::string suite = "density-axioms";
  const int nodes = nodes_or(cfg, 32);
  std::vector<Case> cases;
  for (int i = 0; i < cfg.trials; ++i) {
    const std::string id = "da-" + std::to_string(i);
    cases.push_back({id, [=] {
                       auto rng = case_rng(cfg.seed, suite, i);
                       const QuadConfig quad{nodes, 1e-10};
                       const int n_base = 1 + i % 3;
                       const FiberSpace fiber(InvariantMeasure(cfg.signature, 1.0), 1);
                       auto rand_mat = [&] {
                         while (true) {
                           Mat m(n_base, n_base);
                           for (int r = 0; r < n_base; ++r)
                             for (int c = 0; c < n_base; ++c) m(r, c) = uniform(rng, -1.5, 1.5);
                           if (std::abs(m.determinant()) > 0.1) return m;
                         }
                       };
                       auto half = [&] {
                         return HilbertHalfDensity(0.5, n_base,
                                                   FiberVector{random_gamma_expansion(cfg.signature, rng, 2), fiber});
                       };
                       const auto w = half(), w1 = half(), w2 = half();
                       const cplx z1 = random_coeff(rng), z2 = random_coeff(rng);
                       std::vector<ReportRow> rows;

                       const Basis e = Basis::reference(n_base).transformed(rand_mat());
                       const Mat l1 = rand_mat(), l2 = rand_mat();
                       const ScalarDensity s(1.0, n_base, random_coeff(rng));
                       const cplx chain = s.evaluate(e.transformed(l1).transformed(l2));
                       const cplx step = std::abs(l2.determinant()) * s.evaluate(e.transformed(l1));
                       rows.push_back(row(suite, id + "-two-basis", chain, step, rel_err(step, chain), 1e-12, 0));

                       const ScalarDensity lhs = density_product(w, lin_comb(z1, w1, z2, w2), quad);
                       const cplx rhs = z1 * density_product(w, w1, quad).ref_value() + z2 * density_product(w, w2, quad).ref_value();
                       rows.push_back(row(suite, id + "-sesquilinear", lhs.ref_value(), rhs, rel_err(rhs, lhs.ref_value()), 1e-10, nodes));

                       const cplx a = density_product(w1, w2, quad).ref_value();
                       const cplx b = std::conj(density_product(w2, w1, quad).ref_value());
                       rows.push_back(row(suite, id + "-hermitian", a, b, rel_err(a, b), 1e-12, nodes));

                       // The product evaluated at Lambda e from the fiber values there.
                       const Basis f = e.transformed(l1);
                       const cplx direct = fiber_inner(w1.evaluate(f).rep, w2.evaluate(f).rep, fiber, quad);
                       const cplx law = density_product(w1, w2, quad).evaluate(f);
                       rows.push_back(row(suite, id + "-one-density-law", direct, law, rel_err(law, direct), 1e-12, nodes));

                       const ScalarDensity ww = density_product(w, w, quad);
                       const double pos = ww.evaluate(f).real();
                       auto r = row(suite, id + "-positivity", pos, 0.0, pos > 0.0 ? 0.0 : 1.0, 0.5, nodes);
                       rows.push_back(r);
                       return rows;
                     }});
  }
  return cases;
}

std::vector<Case> pairing_cases(const SuiteConfig& cfg) {
  const std::string suite = "pairing-continuity";
  std::vector<Case> cases;
  for (int i = 0; i < cfg.trials; ++i) {
    const std::string id = "pc-" + std::to_string(i);
    cases.push_back({id, [=] {
                       auto rng = case_rng(cfg.seed, suite, i);
                       const int n_blocks = 1 + i % std::min(3, cfg.n_max);
                       const int nodes = nodes_or(cfg, n_blocks == 3 ? 14 : 24);
                       const QuadConfig quad{nodes, 1e-8};
                       const InvariantMeasure mu(base_signature(cfg), 1.0);
                       const int terms = n_blocks == 3 ? 1 : 2;
                       auto s1 = random_state(n_blocks, mu, rng, terms);
                       auto s2 = random_state(n_blocks, mu, rng, terms);
                       if (i % 2 == 1) {
                         // Transported states: gamma-sections now move with x.
                         const auto& theta = cfg.diffeo_catalog[(i / 2) % cfg.diffeo_catalog.size()];
                         s1 = pullback(theta, s1);
                         s2 = pullback(theta, s2);
                       }
                       const cplx iterated = inner(s1, s2, quad);
                       const cplx joint = inner_joint(s1, s2, quad);
                       std::vector<ReportRow> rows;
                       rows.push_back(row(suite, id + "-fubini-N" + std::to_string(n_blocks), iterated, joint,
                                          rel_err(iterated, joint), 1e-8, nodes));
                       // Continuity of the pairing density at the centre of its support.
                       const auto field = pair_to_density(s1, s2, quad);
                       if (field.is_zero()) return rows;
                       const Box box = field.support_box();
                       std::vector<double> x(n_blocks), xh(n_blocks);
                       double scale = 0.0;
                       for (int k = 0; k < n_blocks; ++k) x[k] = 0.5 * (box[k].lo + box[k].hi);
                       for (int k = 0; k < n_blocks; ++k) xh[k] = x[k] + 1e-7;
                       scale = std::max(std::abs(field(x)), 1e-300);
                       const double jump = std::abs(field(xh) - field(x)) / scale;
                       rows.push_back(row(suite, id + "-continuity", field(x), field(xh), jump, 1e-4, nodes));
                       return rows;
                     }});
  }
  return cases;
}

std::vector<Case> unitarity_cases(const SuiteConfig& cfg) {
  const std::string suite = "unitarity";
  const int nodes = nodes_or(cfg, 48);
  std::vector<Case> cases;
  for (int i = 0; i < cfg.trials; ++i) {
    const std::string id = "u-" + std::to_string(i);
    cases.push_back({id, [=] {
                       auto rng = case_rng(cfg.seed, suite, i);
                       const int n_blocks = 1 + i % std::min(2, cfg.n_max);
                       const QuadConfig quad{nodes, 1e-5};
                       const InvariantMeasure mu(base_signature(cfg), 1.0);
                       const auto s1 = random_state(n_blocks, mu, rng, 2);
                       const auto s2 = random_state(n_blocks, mu, rng, 2);
                       const cplx before = inner(s1, s2, quad);
                       const double scale = norm(s1, quad) * norm(s2, quad);
                       std::vector<ReportRow> rows;
                       for (const auto& theta : cfg.diffeo_catalog) {
                         const cplx after = inner(pullback(theta, s1), pullback(theta, s2), quad);
                         rows.push_back(row(suite, id + "-N" + std::to_string(n_blocks) + "-" + theta.name(), after, before,
                                            std::abs(after - before) / scale, 1e-5, nodes));
                       }
                       return rows;
                     }});
  }
  return cases;
}

std::vector<Case> representation_cases(const SuiteConfig& cfg) {
  const std::string suite = "representation-law";
  std::vector<Case> cases;
  const auto& cat = cfg.diffeo_catalog;
  for (std::size_t a = 0; a < cat.size(); ++a)
    for (std::size_t b = 0; b < cat.size(); ++b) {
      const std::string id = "rl-" + std::to_string(a) + "-" + std::to_string(b);
      cases.push_back({id, [=] {
                         auto rng = case_rng(cfg.seed, suite, a * 64 + b);
                         const int n_blocks = 1 + static_cast<int>((a + b) % std::min(2, cfg.n_max));
                         const InvariantMeasure mu(base_signature(cfg), 1.0);
                         const auto s = random_state(n_blocks, mu, rng, 2);
                         const auto& t1 = cat[a];
                         const auto& t2 = cat[b];
                         const auto nested = pullback(t2, pullback(t1, s));
                         const auto composed = pullback(Diffeo1D::compose(t1, t2), s);
                         // Sample inside the support of the transported state.
                         const Box xb = composed.x_support_box();
                         double worst = 0.0, peak = 0.0;
                         cplx lhs_at_worst, rhs_at_worst;
                         for (int p = 0; p < std::max(200, cfg.trials * 10); ++p) {
                           std::vector<double> x(n_blocks), g(n_blocks);
                           const auto& term = composed.terms()[p % composed.terms().size()];
                           for (int k = 0; k < n_blocks; ++k) {
                             const Interval xi = term.x_support(k);
                             x[k] = uniform(rng, xi.lo, xi.hi);
                             const Interval gi = term.gamma_section(k, x[k]);
                             g[k] = uniform(rng, gi.lo, gi.hi);
                           }
                           const cplx u = nested(x, g), v = composed(x, g);
                           peak = std::max(peak, std::abs(v));
                           if (std::abs(u - v) >= worst) {
                             worst = std::abs(u - v);
                             lhs_at_worst = u;
                             rhs_at_worst = v;
                           }
                         }
                         (void)xb;
                         return std::vector<ReportRow>{row(suite, id + "-" + t1.name() + "|" + t2.name(), lhs_at_worst,
                                                           rhs_at_worst, worst / std::max(peak, 1e-300), 1e-10, 0)};
                       }});
    }
  return cases;
}

std::vector<Case> rescaling_cases(const SuiteConfig& cfg) {
  const std::string suite = "rescaling";
  const int nodes = nodes_or(cfg, 16);
  std::vector<Case> cases;
  int idx = 0;
  for (double c : {0.1, 2.0, 10.0})
    for (int n_blocks = 1; n_blocks <= std::min(3, cfg.n_max); ++n_blocks) {
      const std::string id = "rs-c" + json(c).dump() + "-N" + std::to_string(n_blocks);
      const int my = idx++;
      cases.push_back({id, [=] {
                         auto rng = case_rng(cfg.seed, suite, my);
                         const QuadConfig quad{nodes, 1e-14};
                         const InvariantMeasure mu(base_signature(cfg), 1.0);
                         const auto s1 = random_state(n_blocks, mu, rng, 1);
                         const auto s2 = random_state(n_blocks, mu, rng, 1);
                         const auto r1 = rescale_iso(s1, 1.0, c);
                         const auto r2 = rescale_iso(s2, 1.0, c);
                         const cplx n_old = inner(s1, s1, quad), n_new = inner(r1, r1, quad);
                         const cplx p_old = inner(s1, s2, quad), p_new = inner(r1, r2, quad);
                         return std::vector<ReportRow>{row(suite, id + "-norm", n_new, n_old, rel_err(n_old, n_new), 1e-14, nodes),
                                                       row(suite, id + "-inner", p_new, p_old, rel_err(p_old, p_new), 1e-14, nodes)};
                       }});
    }
  return cases;
}

std::vector<Case> counterexample_cases(const SuiteConfig& cfg) {
  const std::string suite = "counterexample";
  const int nodes = nodes_or(cfg, 64);
  std::vector<Case> cases;
  cases.push_back({"ce-slope", [=] {
                     std::vector<double> xs;
                     for (int k = 4; k <= 12; ++k) xs.push_back(std::ldexp(1.0, -k));
                     const auto rows = counterexample_profile(xs, nodes);
                     const double s = loglog_slope(rows);
                     const double sc = loglog_slope_with_linear_correction(rows);
                     std::vector<ReportRow> out;
                     out.push_back(row(suite, "ce-slope-ols", s, -1.0, std::abs(s + 1.0), 0.05, nodes));
                     auto diag = row(suite, "ce-slope-with-linear-correction(diagnostic)", sc, -1.0, std::abs(sc + 1.0), 0.05, nodes);
                     out.push_back(diag);
                     return out;
                   }});
  cases.push_back({"ce-half", [=] {
                     const double f = counterexample_density(0.5, nodes);
                     const bool ok = std::isfinite(f) && f > 0.0;
                     return std::vector<ReportRow>{row(suite, "ce-f(0.5)-finite-positive", f, 0.0, ok ? 0.0 : 1.0, 0.5, nodes)};
                   }});
  cases.push_back({"ce-support", [=] {
                     // Sections near x = 0 reach arbitrarily far: sup supp psi_(x) = 1/x.
                     double worst = 0.0;
                     for (int k = 1; k <= 20; ++k) {
                       const double x = std::ldexp(1.0, -k);
                       const Interval sec = counterexample_section(x);
                       const double inside = counterexample_psi(x, 0.5 * (sec.lo + sec.hi));
                       const double beyond = counterexample_psi(x, sec.hi * 1.01);
                       if (!(inside > 0.0) || beyond != 0.0 || sec.lo != 1.0) worst = 1.0;
                     }
                     const double reach = counterexample_section(std::ldexp(1.0, -20)).hi;
                     return std::vector<ReportRow>{row(suite, "ce-section-union-unbounded", reach, std::ldexp(1.0, 20), worst, 0.5, 0)};
                   }});
  return cases;
}

std::vector<Case> kspace_axiom_cases(const SuiteConfig& cfg) {
  const std::string suite = "kspace-axioms";
  const int nodes = nodes_or(cfg, 32);
  std::vector<Case> cases;
  for (int i = 0; i < cfg.trials; ++i) {
    const std::string id = "ka-" + std::to_string(i);
    cases.push_back({id, [=] {
                       auto rng = case_rng(cfg.seed, suite, i);
                       const int n_blocks = 1 + i % std::min(3, cfg.n_max);
                       const QuadConfig quad{nodes, 1e-9};
                       const FiberSpace fiber(InvariantMeasure(base_signature(cfg), 1.0), n_blocks);
                       const auto s = random_section(n_blocks, fiber, rng, 4);
                       const auto s1 = random_section(n_blocks, fiber, rng, 3) + s;  // shares support with s2
                       const auto s2 = random_section(n_blocks, fiber, rng, 3) + s * cplx{0.5, -0.25};
                       const cplx z1 = random_coeff(rng), z2 = random_coeff(rng);
                       std::vector<ReportRow> rows;
                       const std::string tag = id + "-N" + std::to_string(n_blocks);

                       const cplx lin = k_inner(s, s1 * z1 + s2 * z2, quad);
                       const cplx sep = z1 * k_inner(s, s1, quad) + z2 * k_inner(s, s2, quad);
                       rows.push_back(row(suite, tag + "-sesquilinear", lin, sep, rel_err(sep, lin), 1e-9, nodes));

                       const cplx a = k_inner(s1, s2, quad), b = std::conj(k_inner(s2, s1, quad));
                       rows.push_back(row(suite, tag + "-hermitian", a, b, rel_err(a, b), 1e-9, nodes));

                       const double nn = k_inner(s1, s1, quad).real();
                       rows.push_back(row(suite, tag + "-positivity", nn, 0.0, nn > 0.0 ? 0.0 : 1.0, 0.5, nodes));

                       std::vector<std::size_t> order(s1.entries().size());
                       std::iota(order.begin(), order.end(), 0);
                       std::shuffle(order.begin(), order.end(), rng);
                       const cplx shuffled = k_inner_ordered(s1, s2, quad, order);
                       rows.push_back(row(suite, tag + "-order-independent", shuffled, a, rel_err(a, shuffled), 1e-12, nodes));

                       const double n1 = k_norm(s1, quad);
                       for (const auto& theta : cfg.diffeo_catalog) {
                         const auto p = k_pullback(theta, s1);
                         const cplx after = k_inner(p, k_pullback(theta, s2), quad);
                         rows.push_back(row(suite, tag + "-unitary-" + theta.name(), after, a,
                                            std::abs(after - a) / (n1 * k_norm(s2, quad)), 1e-9, nodes));
                       }
                       const auto& t1 = cfg.diffeo_catalog[i % cfg.diffeo_catalog.size()];
                       const auto& t2 = cfg.diffeo_catalog[(i + 1) % cfg.diffeo_catalog.size()];
                       const auto nested = k_pullback(t2, k_pullback(t1, s1));
                       const auto composed = k_pullback(Diffeo1D::compose(t1, t2), s1);
                       // Weak form: ||A - B|| itself loses half the digits to cancellation.
                       const double na = k_norm(nested, quad), nb = k_norm(composed, quad);
                       const cplx ab = k_inner(nested, composed, quad);
                       const double weak = std::max(std::abs(na * na - ab), std::abs(nb * nb - ab)) / (na * nb);
                       auto hom = row(suite, tag + "-homomorphism", ab, na * nb, weak, 1e-9, nodes);
                       if (nested.entries().size() != composed.entries().size()) hom.pass = false;
                       for (auto it = nested.entries().begin(), jt = composed.entries().begin();
                            hom.pass && it != nested.entries().end(); ++it, ++jt) {
                         const auto &a = it->first.flat(), &b = jt->first.flat();
                         for (std::size_t k = 0; k < a.size(); ++k)
                           if (std::abs(a[k] - b[k]) > 1e-12 * std::max(1.0, std::abs(a[k]))) hom.pass = false;
                       }
                       rows.push_back(hom);

                       // Orthonormal family at one configuration, and its copy at another.
                       const PointSet y = random_point_set(n_blocks, 1, rng);
                       PointSet y2 = random_point_set(n_blocks, 1, rng);
                       while (y2 == y) y2 = random_point_set(n_blocks, 1, rng);
                       std::vector<BumpExpansion> family;
                       for (int j = 0; j < 4; ++j) family.push_back(random_fiber_value(n_blocks, fiber.measure.spec, rng, 1));
                       const auto onb = orthonormalize(family, fiber, quad);
                       double worst = 0.0;
                       for (int p = 0; p < 4; ++p)
                         for (int q = 0; q < 4; ++q) {
                           const cplx v = k_inner(basis_element(y, onb, p, fiber), basis_element(y, onb, q, fiber), quad);
                           worst = std::max(worst, std::abs(v - (p == q ? 1.0 : 0.0)));
                         }
                       rows.push_back(row(suite, tag + "-orthonormal", worst, 0.0, worst, 1e-9, nodes));
                       const cplx cross = k_inner(basis_element(y, onb, 0, fiber), basis_element(y2, onb, 0, fiber), quad);
                       auto r = row(suite, tag + "-distinct-points-orthogonal", cross, 0.0, std::abs(cross), 1e-300, nodes);
                       r.pass = cross == cplx{0.0, 0.0};
                       rows.push_back(r);
                       return rows;
                     }});
  }
  return cases;
}

std::vector<Case> kspace_density_cases(const SuiteConfig& cfg) {
  const std::string suite = "kspace-density";
  const int nodes = nodes_or(cfg, 24);
  std::vector<Case> cases;
  for (int m : {2, 4, 8}) {
    const std::string id = "kd-m" + std::to_string(m);
    cases.push_back({id, [=] {
                       // Same target for every m.
                       auto rng = case_rng(cfg.seed, suite, 0);
                       const QuadConfig quad{nodes, 1e-9};
                       const int n_blocks = std::min(2, cfg.n_max);
                       const FiberSpace fiber(InvariantMeasure(base_signature(cfg), 1.0), n_blocks);
                       const double sign = gamma_sign(fiber.measure.spec);
                       SparseSection target(fiber);
                       std::vector<PointSet> order;
                       for (int n = 1; n <= 48; ++n) {
                         std::vector<double> pts;
                         for (int k = 0; k < n_blocks; ++k) pts.push_back(0.37 * n - 40.0 * k);
                         const PointSet y = PointSet::from_canonical(1, pts);
                         // Truncated series: term j carries weight 2^{-(n+j)/2}.
                         BumpExpansion value(n_blocks);
                         for (int j = 0; j < 10; ++j) {
                           std::vector<BumpFunction> b;
                           for (int k = 0; k < n_blocks; ++k)
                             b.push_back({sign * uniform(rng, 1.5, 4.0), uniform(rng, 0.3, 1.0)});
                           value.add_term({random_coeff(rng) * std::pow(2.0, -0.5 * (n + j)) * 4.0, std::move(b)});
                         }
                         target.add(y, value);
                         order.push_back(y);
                       }
                       const auto approx = finite_approximant(target, order, m, quad);
                       const double err = k_norm(approx - target, quad);
                       auto r = row(suite, id + "-error-below-1/m", err, 1.0 / m, err * m, 1.0, nodes);
                       std::size_t kept_terms = 0;
                       for (const auto& [y, f] : approx.entries()) kept_terms += f.terms().size();
                       auto finite = row(suite, id + "-finite-support", static_cast<double>(approx.entries().size()),
                                         static_cast<double>(kept_terms), approx.entries().size() <= order.size() ? 0.0 : 1.0,
                                         0.5, nodes);
                       return std::vector<ReportRow>{r, finite};
                     }});
  }
  return cases;
}

std::vector<Case> graded_cases(const SuiteConfig& cfg) {
  const std::string suite = "graded-orthogonality";
  const int nodes = nodes_or(cfg, 24);
  std::vector<Case> cases;
  for (int i = 0; i < std::max(1, cfg.trials / 4); ++i) {
    const std::string id = "go-" + std::to_string(i);
    cases.push_back({id, [=] {
                       auto rng = case_rng(cfg.seed, suite, i);
                       const QuadConfig quad{nodes, 1e-12};
                       const InvariantMeasure mu(base_signature(cfg), 1.0);
                       std::vector<ReportRow> rows;
                       const GradedState g1(random_state(1, mu, rng, 2));
                       const GradedState g2(random_state(2, mu, rng, 2));
                       const cplx cross = graded_inner(g1, g2, quad);
                       auto r = row(suite, id + "-h-distinct-grades", cross, 0.0, std::abs(cross), 1e-300, nodes);
                       r.pass = cross == cplx{0.0, 0.0};
                       rows.push_back(r);
                       const cplx single = graded_inner(g1, g1, quad);
                       const cplx direct = inner(g1.components().at(1), g1.components().at(1), quad);
                       rows.push_back(row(suite, id + "-h-single-grade", single, direct, rel_err(direct, single), 1e-15, nodes));
                       const GradedState sum = g1 + g2;
                       const cplx lhs = graded_inner(sum, sum, quad);
                       const cplx rhs = graded_inner(g1, g1, quad) + graded_inner(g2, g2, quad);
                       rows.push_back(row(suite, id + "-h-pythagoras", lhs, rhs, rel_err(rhs, lhs), 1e-12, nodes));

                       const FiberSpace f1(mu, 1), f2(mu, 2);
                       GradedSection k1{{1, random_section(1, f1, rng, 3)}};
                       GradedSection k2{{2, random_section(2, f2, rng, 3)}};
                       const cplx kc = graded_k_inner(k1, k2, quad);
                       auto kr = row(suite, id + "-k-distinct-grades", kc, 0.0, std::abs(kc), 1e-300, nodes);
                       kr.pass = kc == cplx{0.0, 0.0};
                       rows.push_back(kr);
                       const cplx ks = graded_k_inner(k1, k1, quad);
                       const cplx kd = k_inner(k1.at(1), k1.at(1), quad);
                       rows.push_back(row(suite, id + "-k-single-grade", ks, kd, rel_err(kd, ks), 1e-15, nodes));
                       GradedSection ksum = k1;
                       ksum.emplace(2, k2.at(2));
                       const cplx kl = graded_k_inner(ksum, ksum, quad);
                       const cplx kr2 = graded_k_inner(k1, k1, quad) + graded_k_inner(k2, k2, quad);
                       rows.push_back(row(suite, id + "-k-pythagoras", kl, kr2, rel_err(kr2, kl), 1e-12, nodes));
                       return rows;
                     }});
  }
  return cases;
}

std::vector<Case> chart_atlas_cases(const SuiteConfig& cfg) {
  const std::string suite = "chart-atlas";
  constexpr int kCases = 10000;
  constexpr int kBatches = 20;
  std::vector<Case> cases;
  for (int batch = 0; batch < kBatches; ++batch) {
    const std::string id = "ca-" + std::to_string(batch);
    cases.push_back({id, [=] {
                       auto rng = case_rng(cfg.seed, suite, batch);
                       // Worst error per law over the batch.
                       double perm = 0, iota = 0, roundtrip = 0, transition = 0, homo = 0, atlas = 0, bb = 0;
                       double injective = 0;
                       const auto& cat = cfg.diffeo_catalog;
                       for (int c = 0; c < kCases / kBatches; ++c) {
                         const int n_points = 1 + static_cast<int>(rng() % 4);
                         const int d = (c % 5 == 4) ? 2 : 1;
                         const PointSet y = random_point_set(n_points, d, rng, 6.0);
                         // pi is permutation invariant.
                         std::vector<int> p(n_points);
                         std::iota(p.begin(), p.end(), 0);
                         std::shuffle(p.begin(), p.end(), rng);
                         std::vector<double> shuffled;
                         for (int k : p) shuffled.insert(shuffled.end(), y.point(k).begin(), y.point(k).end());
                         if (!(project(PointTuple(d, shuffled)) == y)) perm = 1.0;
                         if (d == 1) {
                           const auto coords = sorted_chart(y);
                           if (!(from_sorted_chart(coords) == y) || !std::is_sorted(coords.rbegin(), coords.rend()))
                             iota = 1.0;
                         }
                         // Local chart, a point of its domain, round trips.
                         double min_dist = std::numeric_limits<double>::infinity();
                         for (int a = 0; a < n_points; ++a)
                           for (int b = a + 1; b < n_points; ++b) {
                             double m = 0;
                             for (int k = 0; k < d; ++k) m = std::max(m, std::abs(y.point(a)[k] - y.point(b)[k]));
                             min_dist = std::min(min_dist, m);
                           }
                         const double r = std::isfinite(min_dist) ? 0.45 * min_dist : 1.0;
                         const Chart chart = local_chart(y, r);
                         auto perturb = [&](const PointSet& base) {
                           std::vector<double> f = base.flat();
                           for (double& v : f) v += uniform(rng, -0.9 * r, 0.9 * r);
                           return project(PointTuple(d, f));
                         };
                         const PointSet yp = perturb(y);
                         const auto cy = chart.map(yp);
                         if (!(chart.inverse(cy) == yp)) roundtrip = std::max(roundtrip, 1.0);
                         const PointSet yq = perturb(y);
                         if (chart.map(yq) == cy && !(yq == yp)) injective = 1.0;
                         // Reordered chart: transition is the block permutation.
                         std::vector<int> q(n_points);
                         std::iota(q.begin(), q.end(), 0);
                         std::shuffle(q.begin(), q.end(), rng);
                         const Chart other = local_chart(y, r * uniform(rng, 0.95, 1.0)).reordered(q);
                         if (other.contains(yp)) {
                           const auto moved = chart_transition(chart, other, cy);
                           const auto sigma = transition_permutation(chart, other, yp);
                           for (int s = 0; s < n_points; ++s)
                             for (int k = 0; k < d; ++k)
                               if (moved[sigma[s] * d + k] != cy[s * d + k]) transition = 1.0;
                           const auto back = chart_transition(other, chart, moved);
                           for (std::size_t k = 0; k < back.size(); ++k)
                             transition = std::max(transition, std::abs(back[k] - cy[k]) / std::max(1.0, std::abs(cy[k])));
                         }
                         // Induced diffeomorphisms.
                         const auto& t1 = cat[rng() % cat.size()];
                         const auto& t2 = cat[rng() % cat.size()];
                         const PointSet lhs = induced_diffeo(t1, induced_diffeo(t2, yp));
                         const PointSet rhs = induced_diffeo(Diffeo1D::compose(t1, t2), yp);
                         for (std::size_t k = 0; k < lhs.flat().size(); ++k)
                           homo = std::max(homo, std::abs(lhs.flat()[k] - rhs.flat()[k]) / std::max(1.0, std::abs(rhs.flat()[k])));
                         // Phi' o Theta o Phi^{-1} = id for the transported chart.
                         const Chart moved_chart = chart.transported(t1);
                         const auto again = moved_chart.map(induced_diffeo(t1, chart.inverse(cy)));
                         for (std::size_t k = 0; k < cy.size(); ++k)
                           atlas = std::max(atlas, std::abs(again[k] - cy[k]) / std::max(1.0, std::abs(cy[k])));
                         // Gamma-plus preservation: b_y o Theta'^* = (x theta'^*) o b_{Theta(y)}.
                         const PointSet ty = induced_diffeo(t1, y);
                         const Chart to = local_chart(ty, 0.45 * r * 0.5);
                         std::vector<SymMatrix> blocks;
                         for (int k = 0; k < n_points; ++k) blocks.push_back(sample_gamma(SignatureSpec(d, 0), rng, 0.3));
                         const auto pulled = split_blocks(
                             pullback_block_scalar_product(t1, y, chart, to, assemble_blocks(blocks)), n_points);
                         const auto blocks_at = tangent_blocks(y, chart);
                         const auto blocks_to = tangent_blocks(ty, to);
                         for (int k = 0; k < n_points; ++k) {
                           const auto& x = blocks_at[k].point;
                           Mat dmat = Mat::Zero(d, d);
                           for (int j = 0; j < d; ++j) dmat(j, j) = t1.derivative(x[j]);
                           // Slot k of `chart` moves x; its image sits in the slot of `to` containing theta(x).
                           int target = -1;
                           for (const auto& tb : blocks_to) {
                             bool same = true;
                             for (int j = 0; j < d; ++j) same = same && tb.point[j] == t1(x[j]);
                             if (same) target = tb.slot;
                           }
                           if (target < 0) {
                             bb = 1.0;
                             continue;
                           }
                           const Mat expect = dmat * blocks[target].matrix() * dmat;
                           const double e = (pulled[k].matrix() - expect).cwiseAbs().maxCoeff() / expect.cwiseAbs().maxCoeff();
                           bb = std::max(bb, e);
                         }
                       }
                       const int nodes = 0;
                       std::vector<ReportRow> rows;
                       auto exact = [&](const std::string& law, double v) {
                         auto r = row(suite, id + "-" + law, v, 0.0, v, 1e-300, nodes);
                         r.pass = v == 0.0;
                         rows.push_back(r);
                       };
                       exact("projection-permutation-invariant", perm);
                       exact("iota-pi-identity", iota);
                       exact("chart-round-trip", roundtrip);
                       exact("chart-injective", injective);
                       rows.push_back(row(suite, id + "-transition-block-permutation", transition, 0.0, transition, 1e-12, nodes));
                       rows.push_back(row(suite, id + "-induced-homomorphism", homo, 0.0, homo, 1e-12, nodes));
                       rows.push_back(row(suite, id + "-atlas-preserved", atlas, 0.0, atlas, 1e-12, nodes));
                       rows.push_back(row(suite, id + "-gamma-plus-preserved", bb, 0.0, bb, 1e-10, nodes));
                       return rows;
                     }});
  }
  return cases;
}

using Builder = std::vector<Case> (*)(const SuiteConfig&);

const std::vector<std::pair<std::string, Builder>>& registry() {
  static const std::vector<std::pair<std::string, Builder>> r{
      {"measure-invariance", measure_invariance_cases},
      {"pushforward-product", pushforward_cases},
      {"density-axioms", density_axiom_cases},
      {"pairing-continuity", pairing_cases},
      {"unitarity", unitarity_cases},
      {"representation-law", representation_cases},
      {"rescaling", rescaling_cases},
      {"counterexample", counterexample_cases},
      {"kspace-axioms", kspace_axiom_cases},
      {"kspace-density", kspace_density_cases},
      {"graded-orthogonality", graded_cases},
      {"chart-atlas", chart_atlas_cases},
  };
  return r;
}

}  // namespace

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> n;
    for (const auto& [name, b] : registry()) n.push_back(name);
    return n;
  }();
  return names;
}

SuiteReport run_suite(const std::string& name, const SuiteConfig& config) {
  config.validate();
  for (const auto& [n, build] : registry())
    if (n == name) return {name, run_cases(build(config), config.threads)};
  throw std::invalid_argument("unknown suite '" + name + "'");
}

// --- convergence studies ----------------------------------------------------------

const std::vector<std::string>& study_ops() {
  static const std::vector<std::string> ops{"unitarity", "measure-invariance", "pushforward-product", "identity"};
  return ops;
}

std::string StudyResult::to_json() const {
  json j{{"op_id", op_id}, {"strictly_decreasing", strictly_decreasing}, {"decays", decays}, {"rows", json::array()}};
  for (const auto& r : rows) j["rows"].push_back({{"nodes", r.nodes}, {"rel_err", r.rel_err}});
  return j.dump();
}

StudyResult convergence_study(const std::string& op_id, const std::vector<int>& ladder, const SuiteConfig& config) {
  if (std::find(study_ops().begin(), study_ops().end(), op_id) == study_ops().end())
    throw std::invalid_argument("unknown study op '" + op_id + "'");
  if (ladder.empty()) throw std::invalid_argument("convergence_study: empty ladder");
  for (std::size_t i = 1; i < ladder.size(); ++i)
    if (!(ladder[i] > ladder[i - 1])) throw std::invalid_argument("convergence_study: ladder must be increasing");

  std::function<double(int)> run;
  auto rng = case_rng(config.seed, "study-" + op_id, 0);
  if (op_id == "unitarity" || op_id == "identity") {
    const InvariantMeasure mu(SignatureSpec(1, 0), 1.0);
    const auto s1 = random_state(1, mu, rng, 2);
    const auto s2 = random_state(1, mu, rng, 2);
    const Diffeo1D theta = op_id == "identity" ? Diffeo1D::identity() : Diffeo1D::sine(0.3);
    run = [=](int nodes) {
      const QuadConfig q{nodes, 1e-5};
      const cplx before = inner(s1, s2, q);
      const cplx after = inner(pullback(theta, s1), pullback(theta, s2), q);
      return std::abs(after - before) / (norm(s1, q) * norm(s2, q));
    };
  } else if (op_id == "measure-invariance") {
    const SignatureSpec spec(2, 0);
    const InvariantMeasure mu(spec, 1.0);
    const BumpExpansion f = random_gamma_expansion(spec, rng, 1);
    const GlElement g((Mat(2, 2) << 2.0, 1.0, 0.0, 1.0).finished());
    run = [=](int nodes) { return verify_invariance(f, g, mu, QuadConfig{nodes, 1e-5}).rel_err; };
  } else {
    BumpExpansion h = BumpExpansion::product({1.0, 0.0}, {{3.0, 1.0}, {3.0, 1.0}});
    auto inv_x = [](double x) { return 1.0 / x; };
    run = [=](int nodes) {
      return pushforward_product_check(Homeo1D::affine(2.0, 0.0), Homeo1D::square(), h, inv_x, inv_x, QuadConfig{nodes, 1e-7})
          .rel_err;
    };
  }

  StudyResult res;
  res.op_id = op_id;
  for (int n : ladder) res.rows.push_back({n, run(n)});
  res.strictly_decreasing = true;
  for (std::size_t i = 1; i < res.rows.size(); ++i)
    if (!(res.rows[i].rel_err < res.rows[i - 1].rel_err)) res.strictly_decreasing = false;
  const bool floor = std::all_of(res.rows.begin(), res.rows.end(), [](const StudyRow& r) { return r.rel_err <= kRoundoffFloor; });
  res.decays = floor || res.rows.back().rel_err <= res.rows.front().rel_err;
  return res;
}

}  // namespace halfdens
