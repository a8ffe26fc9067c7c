#include "ugmt/heat_semigroup.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "json.hpp"
#include "ugmt/parallel.hpp"
#include "ugmt/rng.hpp"

namespace ugmt {

LiftedHeatOperator::LiftedHeatOperator(BoxDomain window, std::size_t quad_order, double tolerance)
    : window_(std::move(window)), quad_order_(quad_order) {
  if (window_.dim() == 0) throw std::invalid_argument("LiftedHeatOperator: empty window");
  if (window_.dim() > 3) throw std::invalid_argument("LiftedHeatOperator: window dimension above 3");
  k_max_ = poisson_truncation(window_.volume());
  for (std::size_t d = 0; d < window_.dim(); ++d) {
    kernels_.emplace_back(window_.length(d), tolerance, window_.lower(d));
    nodes_.push_back(heat_grid(window_.lower(d), window_.upper(d), quad_order));
  }
}

void LiftedHeatOperator::check_k(std::size_t k) const {
  if (k > k_max_) throw std::invalid_argument("LiftedHeatOperator: k exceeds the Poisson truncation");
  if (k > grid_k_max()) throw std::invalid_argument("LiftedHeatOperator: grid path limited to n k <= 3");
}

KGrid LiftedHeatOperator::tabulate(const std::function<double(std::span<const double>)>& G, std::size_t k) const {
  check_k(k);
  const std::size_t n = window_.dim(), D = n * k;
  std::vector<std::size_t> sizes(D);
  std::size_t total = 1;
  for (std::size_t a = 0; a < D; ++a) {
    sizes[a] = nodes_[a % n].size();
    total *= sizes[a];
  }
  KGrid out{k, n, std::vector<double>(total)};
  parallel_for(total, [&](std::size_t idx) {
    std::vector<double> x(D);
    std::size_t rem = idx;
    for (std::size_t a = D; a-- > 0;) {
      x[a] = nodes_[a % n].nodes[rem % sizes[a]];
      rem /= sizes[a];
    }
    out.values[idx] = G(x);
  });
  return out;
}

KGrid LiftedHeatOperator::tabulate(const CylinderFunction& F, std::size_t k) const {
  return tabulate([&F](std::span<const double> x) { return F.value(x); }, k);
}

std::vector<double> LiftedHeatOperator::axis_vector(std::size_t axis, double x, double t, AxisKernel kind) const {
  const std::size_t d = axis % window_.dim();
  const QuadratureRule& rule = nodes_[d];
  if (grid_resolution_ratio(rule, t) > 8.0) {
    throw std::domain_error("LiftedHeatOperator: grid too coarse for the kernel width at this t");
  }
  std::vector<double> v(rule.size());
  for (std::size_t j = 0; j < rule.size(); ++j) {
    double kv = 0.0;
    switch (kind) {
      case AxisKernel::neumann: kv = kernels_[d].neumann(x, rule.nodes[j], t, 0); break;
      case AxisKernel::neumann_derivative: kv = kernels_[d].neumann(x, rule.nodes[j], t, 1); break;
      case AxisKernel::dirichlet: kv = kernels_[d].dirichlet(x, rule.nodes[j], t, 0); break;
    }
    v[j] = kv * rule.weights[j];
  }
  return v;
}

KGrid LiftedHeatOperator::apply(const KGrid& G, double t) const {
  if (!(t > 0.0)) throw std::invalid_argument("LiftedHeatOperator::apply: t must be positive");
  check_k(G.k);
  const std::size_t n = window_.dim(), D = n * G.k;
  KGrid cur = G;
  std::size_t total = cur.values.size();
  for (std::size_t a = 0; a < D; ++a) {
    const QuadratureRule& rule = nodes_[a % n];
    const std::size_t q = rule.size();
    std::vector<double> K(q * q);
    for (std::size_t i = 0; i < q; ++i) {
      const std::vector<double> row = axis_vector(a, rule.nodes[i], t, AxisKernel::neumann);
      std::copy(row.begin(), row.end(), K.begin() + static_cast<std::ptrdiff_t>(i * q));
    }
    std::size_t stride = 1;
    for (std::size_t b = a + 1; b < D; ++b) stride *= nodes_[b % n].size();
    const std::size_t block = q * stride, blocks = total / block;
    std::vector<double> next(total, 0.0);
    parallel_for(blocks, [&](std::size_t o) {
      const double* in = cur.values.data() + o * block;
      double* out = next.data() + o * block;
      for (std::size_t i = 0; i < q; ++i) {
        for (std::size_t j = 0; j < q; ++j) {
          const double kij = K[i * q + j];
          for (std::size_t s = 0; s < stride; ++s) out[i * stride + s] += kij * in[j * stride + s];
        }
      }
    });
    cur.values = std::move(next);
  }
  return cur;
}

double LiftedHeatOperator::contract(const KGrid& G, std::span<const double> x, double t,
                                    std::span<const AxisKernel> kinds) const {
  if (!(t > 0.0)) throw std::invalid_argument("LiftedHeatOperator: t must be positive");
  const std::size_t D = G.n * G.k;
  if (x.size() != D || kinds.size() != D) throw std::invalid_argument("LiftedHeatOperator: dimension mismatch");
  if (D == 0) return G.values.at(0);
  std::vector<double> arr = G.values;
  for (std::size_t a = D; a-- > 0;) {
    const std::vector<double> v = axis_vector(a, x[a], t, kinds[a]);
    const std::size_t q = v.size(), m = arr.size() / q;
    std::vector<double> next(m);
    for (std::size_t j = 0; j < m; ++j) {
      const double* row = arr.data() + j * q;
      double s = 0.0;
      for (std::size_t i = 0; i < q; ++i) s += row[i] * v[i];
      next[j] = s;
    }
    arr = std::move(next);
  }
  return arr[0];
}

double LiftedHeatOperator::evaluate(const KGrid& G, std::span<const double> x, double t, int diff_axis) const {
  std::vector<AxisKernel> kinds(G.n * G.k, AxisKernel::neumann);
  if (diff_axis >= 0) kinds.at(static_cast<std::size_t>(diff_axis)) = AxisKernel::neumann_derivative;
  return contract(G, x, t, kinds);
}

std::vector<double> LiftedHeatOperator::gradient(const KGrid& G, std::span<const double> x, double t) const {
  std::vector<double> g(G.n * G.k);
  for (std::size_t a = 0; a < g.size(); ++a) g[a] = evaluate(G, x, t, static_cast<int>(a));
  return g;
}

namespace {

double eigenvalue(const FunctionTerm& term) {
  double lambda = 0.0;
  for (std::size_t d = 0; d < term.modes.size(); ++d) {
    const double kd = std::numbers::pi * term.modes[d] / term.box.length(d);
    lambda += kd * kd;
  }
  return lambda;
}

bool constant_term_on(const FunctionTerm& term, const BoxDomain& window) {
  if (term.kind == FunctionKind::constant_on_box) return term.box.contains_box(window);
  if (term.kind == FunctionKind::cosine_mode && term.box == window) {
    return std::all_of(term.modes.begin(), term.modes.end(), [](int m) { return m == 0; });
  }
  return false;
}

// Terms with an exact lift regardless of dimension.
bool closed_term(const FunctionTerm& term, const BoxDomain& window) {
  switch (term.kind) {
    case FunctionKind::cosine_mode:
    case FunctionKind::heat_smoothed: return term.box == window;
    case FunctionKind::constant_on_box: return term.box.contains_box(window);
    default: return false;
  }
}

bool inner_liftable(const SmoothFunction& f, const BoxDomain& window) {
  if (f.dim() == 1) return true;
  return std::all_of(f.terms().begin(), f.terms().end(),
                     [&](const FunctionTerm& term) { return closed_term(term, window); });
}

bool inner_count_only(const SmoothFunction& f, const BoxDomain& window) {
  return std::all_of(f.terms().begin(), f.terms().end(),
                     [&](const FunctionTerm& term) { return constant_term_on(term, window); });
}

}  // namespace

SmoothFunction lift_inner(const SmoothFunction& f, double t, const BoxDomain& window) {
  if (!(t > 0.0)) throw std::invalid_argument("lift_inner: t must be positive");
  if (f.empty()) return f;
  if (f.dim() != window.dim()) throw std::invalid_argument("lift_inner: dimension mismatch");
  SmoothFunction out;
  std::vector<FunctionTerm> rest;
  for (const FunctionTerm& term : f.terms()) {
    if (!closed_term(term, window)) {
      rest.push_back(term);
      continue;
    }
    SmoothFunction piece;
    switch (term.kind) {
      case FunctionKind::cosine_mode:
        piece = SmoothFunction::cosine_mode(term.box, term.modes, term.amplitude * std::exp(-eigenvalue(term) * t));
        break;
      case FunctionKind::heat_smoothed:
        piece = SmoothFunction::heat_smoothed(*term.base, term.time + t, window).scaled(term.amplitude);
        break;
      default:
        piece = SmoothFunction::from_terms(f.dim(), {term});
        break;
    }
    out = out + piece;
  }
  if (!rest.empty()) {
    if (f.dim() != 1) throw std::invalid_argument("lift_inner: no closed form for this function in dimension >= 2");
    out = out + SmoothFunction::heat_smoothed(SmoothFunction::from_terms(1, std::move(rest)), t, window);
  }
  return out;
}

bool has_closed_form_lift(const CylinderFunction& F, const BoxDomain& window) {
  for (const CompositeComponent& c : F.composites()) {
    const bool count_only = std::all_of(c.inners.begin(), c.inners.end(),
                                        [&](const SmoothFunction& f) { return inner_count_only(f, window); });
    if (count_only) continue;
    if (!c.outer.is_affine()) return false;
    for (const SmoothFunction& f : c.inners) {
      if (!inner_liftable(f, window)) return false;
    }
  }
  for (const ProductComponent& p : F.products()) {
    if (!inner_liftable(p.f, window)) return false;
  }
  return true;
}

CylinderFunction lift_semigroup(const CylinderFunction& F, double t, const LiftedHeatOperator& op) {
  if (!(t > 0.0)) throw std::invalid_argument("lift_semigroup: t must be positive");
  const BoxDomain& window = op.window();
  if (!has_closed_form_lift(F, window)) {
    throw std::invalid_argument("lift_semigroup: no closed form; use the grid path");
  }
  const std::size_t n = window.dim();
  CylinderFunction out = CylinderFunction::constant(F.constant_term(), n);
  for (const CompositeComponent& c : F.composites()) {
    const bool count_only = std::all_of(c.inners.begin(), c.inners.end(),
                                        [&](const SmoothFunction& f) { return inner_count_only(f, window); });
    if (count_only) {
      out = out + CylinderFunction::composite(c.outer, c.inners);
      continue;
    }
    const std::vector<double> zeros(c.inners.size(), 0.0);
    out = out + CylinderFunction::constant(c.outer.eval(zeros), n);
    for (std::size_t i = 0; i < c.inners.size(); ++i) {
      const double a = c.d1[i].eval(zeros);
      if (a == 0.0) continue;
      out = out + CylinderFunction::star(lift_inner(c.inners[i], t, window)).scaled(a);
    }
  }
  for (const ProductComponent& p : F.products()) {
    out = out + CylinderFunction::exponential(lift_inner(p.f, t, window), p.coef);
  }
  return out;
}

KGrid lift_semigroup(const KGrid& G, double t, const LiftedHeatOperator& op) { return op.apply(G, t); }

double exponential_identity_error(const SmoothFunction& f, double t, const LiftedHeatOperator& op) {
  const CylinderFunction F = CylinderFunction::exponential(f);
  const CylinderFunction TF = lift_semigroup(F, t, op);
  double err = 0.0;
  for (std::size_t k = 1; k <= std::min(op.grid_k_max(), op.k_truncation()); ++k) {
    const KGrid lhs = op.apply(op.tabulate(F, k), t);
    const KGrid rhs = op.tabulate(TF, k);
    for (std::size_t i = 0; i < lhs.values.size(); ++i) err = std::max(err, std::abs(lhs.values[i] - rhs.values[i]));
  }
  return err;
}

std::string IntertwiningReport::to_json() const {
  nlohmann::ordered_json j;
  j["t"] = t;
  j["k"] = k;
  j["max_residual"] = max_residual;
  j["quadrature_error"] = quadrature_error;
  j["points"] = points;
  return j.dump();
}

IntertwiningReport check_intertwining(const SmoothFunction& f, double t, const LiftedHeatOperator& op, std::size_t k,
                                      std::size_t points_per_axis) {
  if (k == 0 || k > 2) throw std::invalid_argument("check_intertwining: k must be 1 or 2");
  if (!(t > 0.0)) throw std::invalid_argument("check_intertwining: t must be positive");
  if (points_per_axis == 0) throw std::invalid_argument("check_intertwining: need at least one point per axis");
  const BoxDomain& w = op.window();
  const std::size_t n = w.dim(), D = n * k;
  const CylinderFunction F = CylinderFunction::star(f);
  const LiftedHeatOperator dense(w, 2 * op.quad_order(), op.kernel(0).tolerance());
  const KGrid G = op.tabulate(F, k);
  const KGrid Gd = dense.tabulate(F, k);
  std::vector<KGrid> partials;
  for (std::size_t a = 0; a < D; ++a) {
    partials.push_back(op.tabulate(
        [&f, a, n](std::span<const double> x) {
          std::vector<double> g(n);
          f.gradient(x.subspan((a / n) * n, n), g);
          return g[a % n];
        },
        k));
  }

  std::size_t points = 1;
  for (std::size_t a = 0; a < D; ++a) points *= points_per_axis;
  std::vector<double> residual(points), qerr(points);
  parallel_for(points, [&](std::size_t idx) {
    std::vector<double> x(D);
    std::size_t rem = idx;
    for (std::size_t a = 0; a < D; ++a) {
      const std::size_t d = a % n;
      x[a] = w.lower(d) + w.length(d) * (static_cast<double>(rem % points_per_axis) + 0.5) /
                              static_cast<double>(points_per_axis);
      rem /= points_per_axis;
    }
    double r = 0.0, q = 0.0;
    std::vector<LiftedHeatOperator::AxisKernel> kinds(D);
    for (std::size_t a = 0; a < D; ++a) {
      const double lhs = op.evaluate(G, x, t, static_cast<int>(a));
      std::fill(kinds.begin(), kinds.end(), LiftedHeatOperator::AxisKernel::neumann);
      kinds[a] = LiftedHeatOperator::AxisKernel::dirichlet;
      const double rhs = op.contract(partials[a], x, t, kinds);
      r = std::max(r, std::abs(lhs - rhs));
      q = std::max(q, std::abs(lhs - dense.evaluate(Gd, x, t, static_cast<int>(a))));
    }
    residual[idx] = r;
    qerr[idx] = q;
  });
  IntertwiningReport rep;
  rep.t = t;
  rep.k = k;
  rep.points = points;
  rep.max_residual = *std::max_element(residual.begin(), residual.end());
  rep.quadrature_error = *std::max_element(qerr.begin(), qerr.end());
  if (rep.quadrature_error > 1e-6) {
    throw std::domain_error("check_intertwining: grid too coarse, quadrature error estimate " +
                            std::to_string(rep.quadrature_error) + " exceeds 1e-6");
  }
  return rep;
}

std::string BakryEmeryReport::to_json() const {
  nlohmann::ordered_json j;
  j["p"] = p;
  j["t"] = t;
  j["tolerance"] = tolerance;
  j["max_excess"] = max_excess;
  j["violations"] = violations;
  j["n_samples"] = n_samples;
  j["violation_fraction"] = violation_fraction();
  return j.dump();
}

std::vector<BakryEmeryReport> check_bakry_emery(const CylinderFunction& F, const std::vector<double>& ps, double t,
                                                const LiftedHeatOperator& op, const MCPlan& plan, double tolerance) {
  plan.validate();
  if (ps.empty()) throw std::invalid_argument("check_bakry_emery: no exponent given");
  for (double p : ps) {
    if (!(p >= 1.0)) throw std::invalid_argument("check_bakry_emery: p must be at least 1");
  }
  const std::size_t K = std::min(op.grid_k_max(), op.k_truncation());
  const std::size_t P = ps.size();
  std::vector<KGrid> grids(K + 1);
  std::vector<std::vector<KGrid>> rhs_grids(K + 1, std::vector<KGrid>(P));
  for (std::size_t k = 1; k <= K; ++k) {
    grids[k] = op.tabulate(F, k);
    for (std::size_t j = 0; j < P; ++j) {
      const double p = ps[j];
      rhs_grids[k][j] = op.tabulate(
          [&F, p](std::span<const double> x) { return std::pow(gradient_norm_sq(F, x), 0.5 * p); }, k);
    }
  }
  std::vector<double> excess(plan.n_samples * P, 0.0);
  parallel_for(plan.n_samples, [&](std::size_t i) {
    RandomStream rng(plan.seed, i);
    Configuration gamma = sample_poisson(op.window(), rng);
    while (gamma.count() > K) gamma = sample_poisson(op.window(), rng);
    const std::size_t k = gamma.count();
    if (k == 0) return;
    const std::vector<double> g = op.gradient(grids[k], gamma.coords(), t);
    double g2 = 0.0;
    for (double v : g) g2 += v * v;
    for (std::size_t j = 0; j < P; ++j) {
      const double lhs = std::pow(g2, 0.5 * ps[j]);
      const double rhs = op.evaluate(rhs_grids[k][j], gamma.coords(), t);
      excess[i * P + j] = lhs - rhs;
    }
  });
  std::vector<BakryEmeryReport> out(P);
  for (std::size_t j = 0; j < P; ++j) {
    BakryEmeryReport& r = out[j];
    r.p = ps[j];
    r.t = t;
    r.tolerance = tolerance;
    r.n_samples = plan.n_samples;
    r.max_excess = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < plan.n_samples; ++i) {
      const double e = excess[i * P + j];
      r.max_excess = std::max(r.max_excess, e);
      r.violations += e > tolerance;
    }
  }
  return out;
}

BakryEmeryReport check_bakry_emery(const CylinderFunction& F, double p, double t, const LiftedHeatOperator& op,
                                   const MCPlan& plan, double tolerance) {
  return check_bakry_emery(F, std::vector<double>{p}, t, op, plan, tolerance).front();
}

SlopeReport regularization_slope(const CylinderFunction& F, double p, const std::vector<double>& times,
                                 const LiftedHeatOperator& op, const MCPlan& plan) {
  plan.validate();
  if (times.size() < 2) throw std::invalid_argument("regularization_slope: need at least two times");
  if (!(p >= 1.0)) throw std::invalid_argument("regularization_slope: p must be at least 1");
  std::vector<CylinderFunction> lifted;
  for (double t : times) lifted.push_back(lift_semigroup(F, t, op));
  const std::size_t J = times.size();
  std::vector<double> v(plan.n_samples * J);
  parallel_for(plan.n_samples, [&](std::size_t i) {
    RandomStream rng(plan.seed, i);
    const Configuration gamma = sample_poisson(op.window(), rng);
    for (std::size_t j = 0; j < J; ++j) {
      v[j * plan.n_samples + i] = std::pow(gradient_norm_sq(lifted[j], gamma.coords()), 0.5 * p);
    }
  });
  SlopeReport rep;
  rep.t = times;
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  for (std::size_t j = 0; j < J; ++j) {
    const std::span<const double> col(v.data() + j * plan.n_samples, plan.n_samples);
    const double norm = std::pow(pairwise_sum(col) / static_cast<double>(plan.n_samples), 1.0 / p);
    rep.norms.push_back(norm);
    const double x = std::log(times[j]), y = std::log(norm);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double m = static_cast<double>(J);
  rep.slope = (m * sxy - sx * sy) / (m * sxx - sx * sx);
  rep.intercept = (sy - rep.slope * sx) / m;
  return rep;
}

BesselOperator::BesselOperator(double alpha, double p, std::size_t nodes) : alpha_(alpha), p_(p) {
  if (!(alpha > 0.0)) throw std::invalid_argument("BesselOperator: alpha must be positive");
  if (!(p > 1.0)) throw std::invalid_argument("BesselOperator: p must exceed 1");
  const QuadratureRule rule = gauss_laguerre(nodes, 0.5 * alpha - 1.0);
  times_ = rule.nodes;
  const double total = pairwise_sum(rule.weights);
  for (double w : rule.weights) weights_.push_back(w / total);
}

BesselFunction::BesselFunction(std::vector<CylinderFunction> lifted, std::vector<double> weights)
    : lifted_(std::move(lifted)), weights_(std::move(weights)) {
  if (lifted_.size() != weights_.size()) throw std::invalid_argument("BesselFunction: size mismatch");
}

double BesselFunction::value(const Configuration& gamma) const { return value(gamma.coords()); }

double BesselFunction::value(std::span<const double> coords) const {
  std::vector<double> terms(lifted_.size());
  for (std::size_t j = 0; j < lifted_.size(); ++j) terms[j] = weights_[j] * lifted_[j].value(coords);
  return pairwise_sum(terms);
}

BesselFunction bessel_apply(const CylinderFunction& F, const BesselOperator& B, const LiftedHeatOperator& op) {
  if (!std::isfinite(F.sup_abs())) throw std::invalid_argument("bessel_apply: F must be bounded");
  if (is_count_only(F, op.window())) return BesselFunction({F}, {1.0});
  std::vector<CylinderFunction> lifted;
  for (double t : B.times()) lifted.push_back(lift_semigroup(F, t, op));
  return BesselFunction(std::move(lifted), B.weights());
}

bool is_count_only(const CylinderFunction& F, const BoxDomain& window) {
  for (const CompositeComponent& c : F.composites()) {
    for (const SmoothFunction& f : c.inners) {
      if (!inner_count_only(f, window)) return false;
    }
  }
  for (const ProductComponent& p : F.products()) {
    if (!inner_count_only(p.f, window)) return false;
  }
  return true;
}

double lp_norm_pow(const CylinderFunction& F, double p, const BoxDomain& window, const MCPlan& plan) {
  if (!(p >= 1.0)) throw std::invalid_argument("lp_norm_pow: p must be at least 1");
  if (is_count_only(F, window)) {
    const double vol = window.volume();
    const std::size_t n = window.dim();
    const std::size_t K = poisson_truncation(vol, 1e-17) + 1;
    std::vector<double> terms;
    for (std::size_t k = 0; k <= K; ++k) {
      std::vector<double> c(k * n);
      for (std::size_t i = 0; i < k; ++i) {
        for (std::size_t d = 0; d < n; ++d) {
          c[i * n + d] = d == 0 ? window.lower(0) + window.length(0) * (static_cast<double>(i) + 1.0) /
                                                        (static_cast<double>(k) + 1.0)
                                : window.lower(d) + 0.5 * window.length(d);
        }
      }
      terms.push_back(poisson_pmf(vol, k) * std::pow(std::abs(F.value(c)), p));
    }
    return pairwise_sum(terms);
  }
  MCPlan q = plan;
  q.window = window;
  return integrate([&F, p](const Configuration& g) { return std::pow(std::abs(F.value(g)), p); }, q).mean;
}

CapacityBound capacity_upper_bound(const SetSpec& E, const std::vector<Configuration>& sieve,
                                   const std::vector<CylinderFunction>& candidates, const BesselOperator& B,
                                   const LiftedHeatOperator& op, const MCPlan& plan) {
  CapacityBound out;
  if (E.kind() == SetSpec::Kind::empty) return out;
  if (candidates.empty()) throw std::invalid_argument("capacity_upper_bound: no candidates");
  if (sieve.empty()) throw std::invalid_argument("capacity_upper_bound: empty sieve for a nonempty set");
  if (B.under_resolved()) out.flags.push_back("bessel_quadrature_under_resolved");
  out.value = std::numeric_limits<double>::infinity();
  for (std::size_t c = 0; c < candidates.size(); ++c) {
    const BesselFunction BF = bessel_apply(candidates[c], B, op);
    double m = std::numeric_limits<double>::infinity();
    for (const Configuration& gamma : sieve) m = std::min(m, BF.value(gamma));
    if (!(m > 0.0)) continue;
    const double v = lp_norm_pow(candidates[c], B.p(), op.window(), plan) / std::pow(m, B.p());
    if (v < out.value) {
      out.value = v;
      out.best = static_cast<long>(c);
    }
  }
  if (out.best < 0) out.flags.push_back("no_candidate_dominates_the_sieve");
  return out;
}

std::vector<Configuration> level_set_sieve(const SetSpec& A, const BoxDomain& window,
                                           const std::vector<std::size_t>& counts, std::size_t per_k,
                                           std::uint64_t seed) {
  if (A.kind() != SetSpec::Kind::level_set) throw std::invalid_argument("level_set_sieve: A must be a level set");
  if (window.dim() != 1) throw std::invalid_argument("level_set_sieve: one-dimensional windows only");
  const CylinderFunction& F = A.function();
  const double t = A.level(), lo = window.lower(0), hi = window.upper(0);
  const auto& filter = A.count_filter();
  std::vector<Configuration> out;
  for (std::size_t k : counts) {
    if (k == 0) continue;
    if (filter && filter->region.contains_box(window) && !filter->accepts(k)) continue;
    for (std::size_t r = 0; r < per_k; ++r) {
      RandomStream rng(seed, (static_cast<std::uint64_t>(k) << 32) + r);
      for (int attempt = 0; attempt < 100; ++attempt) {
        std::vector<double> c(k);
        for (std::size_t i = 0; i + 1 < k; ++i) c[i] = rng.uniform(lo, hi);
        auto h = [&](double y) {
          c[k - 1] = y;
          return F.value(c) - t;
        };
        const std::size_t scan = 256;
        double y0 = lo, h0 = h(lo), root = std::numeric_limits<double>::quiet_NaN();
        for (std::size_t j = 1; j <= scan && std::isnan(root); ++j) {
          const double y1 = lo + (hi - lo) * static_cast<double>(j) / static_cast<double>(scan);
          const double h1 = h(y1);
          if ((h0 > 0.0) != (h1 > 0.0)) {
            double a = y0, b = y1, ha = h0;
            for (int it = 0; it < 100 && b - a > 1e-15; ++it) {
              const double mid = 0.5 * (a + b);
              const double hm = h(mid);
              if ((hm > 0.0) == (ha > 0.0)) {
                a = mid;
                ha = hm;
              } else {
                b = mid;
              }
            }
            root = 0.5 * (a + b);
          }
          y0 = y1;
          h0 = h1;
        }
        if (std::isnan(root)) continue;
        c[k - 1] = root;
        try {
          Configuration gamma(window, c);
          if (filter && !filter->accepts(gamma.count_in(filter->region))) continue;
          out.push_back(std::move(gamma));
          break;
        } catch (const std::invalid_argument&) {
          continue;  // coincident points
        }
      }
    }
  }
  return out;
}

}  // namespace ugmt
