#include "suites.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "json.hpp"
#include "ugmt/bv.hpp"
#include "ugmt/descriptors.hpp"
#include "ugmt/hausdorff.hpp"
#include "ugmt/heat_semigroup.hpp"
#include "ugmt/parallel.hpp"
#include "ugmt/poisson_mc.hpp"
#include "ugmt/quadrature.hpp"
#include "ugmt/rng.hpp"

namespace ugmt {

namespace {

std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

CheckRecord make(const std::string& name, const std::string& anchor, int criterion, double value, double target,
                 double sigma, const std::string& rule, bool pass, const std::string& note = {}) {
  return {name, anchor, criterion, value, target, sigma, rule, pass, note};
}

CheckRecord within_sigma(const std::string& name, const std::string& anchor, int criterion, double value,
                         double target, double sigma, double k = 3.0) {
  const bool pass = std::isfinite(value) && std::abs(value - target) <= k * sigma;
  return make(name, anchor, criterion, value, target, sigma, "|value - target| <= 3 sigma", pass);
}

CheckRecord relative(const std::string& name, const std::string& anchor, int criterion, double value, double target,
                     double sigma, double tol, const std::string& rule) {
  const bool pass = std::isfinite(value) && std::abs(value - target) <= tol * std::abs(target);
  return make(name, anchor, criterion, value, target, sigma, rule, pass);
}

MCPlan plan_for(const BoxDomain& window, std::size_t n, std::uint64_t seed) {
  MCPlan p;
  p.window = window;
  p.n_samples = n;
  p.seed = seed;
  return p;
}

SmoothFunction inner_of(const BatteryEntry& e) { return function_from_descriptor(e.descriptor); }
CylinderFunction cylinder_of(const BatteryEntry& e) { return cylinder_from_descriptor(e.descriptor); }
SetSpec set_of(const BatteryEntry& e) { return set_from_descriptor(e.descriptor); }
CylinderVectorField field_of(const BatteryEntry& e) { return vector_field_from_descriptor(e.descriptor); }

// int_W (e^f - 1) dx by tensor Gauss-Legendre (n <= 2).
double laplace_exponent(const SmoothFunction& f, const BoxDomain& W) {
  const std::size_t n = W.dim();
  std::vector<QuadratureRule> rules;
  for (std::size_t d = 0; d < n; ++d) rules.push_back(composite_gauss_legendre(W.lower(d), W.upper(d), 256));
  if (n == 1) {
    std::vector<double> vals(rules[0].size());
    for (std::size_t i = 0; i < vals.size(); ++i) {
      const double x = rules[0].nodes[i];
      vals[i] = rules[0].weights[i] * std::expm1(f.value(std::span<const double>(&x, 1)));
    }
    return pairwise_sum(vals);
  }
  if (n != 2) throw std::invalid_argument("laplace functional check: n <= 2");
  std::vector<double> vals(rules[0].size() * rules[1].size());
  for (std::size_t i = 0; i < rules[0].size(); ++i) {
    for (std::size_t j = 0; j < rules[1].size(); ++j) {
      const double x[2] = {rules[0].nodes[i], rules[1].nodes[j]};
      vals[i * rules[1].size() + j] = rules[0].weights[i] * rules[1].weights[j] * std::expm1(f.value(x));
    }
  }
  return pairwise_sum(vals);
}

double brute_force_distance(const Configuration& a, const Configuration& b) {
  const std::size_t k = a.count(), n = a.dim();
  std::vector<double> cost(k * k);
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = 0; j < k; ++j) {
      double s = 0.0;
      for (std::size_t d = 0; d < n; ++d) {
        const double z = a.point(i)[d] - b.point(j)[d];
        s += z * z;
      }
      cost[i * k + j] = s;
    }
  }
  std::vector<std::size_t> perm(k);
  std::iota(perm.begin(), perm.end(), 0);
  double best = std::numeric_limits<double>::infinity();
  do {
    double total = 0.0;
    for (std::size_t i = 0; i < k; ++i) total += cost[i * k + perm[i]];
    best = std::min(best, total);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return std::sqrt(best);
}

// ---------------------------------------------------------------- campbell

std::vector<CylinderFunction> disintegration_family() {
  using SF = SmoothFunction;
  using CF = CylinderFunction;
  using O = OuterFunction;
  const BoxDomain W({0.0}, {2.0});
  const O u0 = O::variable(0), u1 = O::variable(1), u2 = O::variable(2);
  return {
      CF::composite(O::tanh(u0), {SF::bump({0.9}, 0.5)}),
      CF::composite(O::exp_neg_sq(u0), {SF::bump({1.2}, 0.6, 0.8)}),
      CF::composite(O::tanh(u0 * u1), {SF::bump({0.5}, 0.3), SF::bump({1.5}, 0.3)}),
      CF::composite(O::exp_neg_sq(u0 + O::constant(-1.0) * u1), {SF::bump({0.4}, 0.35), SF::bump({1.4}, 0.45)}),
      CF::composite(O::tanh(u0 + u1 + u2), {SF::bump({0.3}, 0.25), SF::bump({1.0}, 0.4, -0.6), SF::bump({1.7}, 0.3)}),
      CF::composite(O::poly(O::tanh(u0), {0.2, 1.0, 0.5}), {SF::bump({1.0}, 0.8, 0.7)}),
      CF::composite(O::tanh(u0), {SF::cosine_mode(W, {1}, 1.0)}),
      CF::composite(O::exp_neg_sq(O::constant(0.5) * u0), {SF::constant_on_box(BoxDomain({0.5}, {1.5}), 1.0)}),
      CF::constant(0.3, 1) + CF::composite(O::constant(0.5) * O::tanh(u0 * u0), {SF::bump({1.1}, 0.9, 0.9)}),
      CF::composite(O::exp_neg_sq(u0) * O::tanh(u1),
                    {SF::cosine_mode(W, {2}, 0.6), SF::bump({0.7}, 0.5, 1.2)}),
  };
}

void suite_campbell(SuiteContext& ctx) {
  // Laplace functional.
  for (const auto& e :
       ctx.batteries("inner", {"bump_a_1d", "bump_b_1d", "bump_c_1d", "bump_a_2d", "bump_b_2d", "bump_c_2d"})) {
    const std::string name = "laplace_functional/" + e.name;
    ctx.guarded(name, "laplace_functional", 1, [&] {
      const SmoothFunction f = inner_of(e);
      const MCPlan plan = plan_for(e.window, ctx.samples(100000), ctx.seed(name));
      const MCEstimate mc = integrate([&f](const Configuration& g) { return std::exp(eval_star(f, g)); }, plan);
      const double target = std::exp(laplace_exponent(f, e.window));
      ctx.add(within_sigma(name, "laplace_functional", 1, mc.mean, target, mc.std_err));
    });
  }

  // Quotient metric against brute force.
  for (std::size_t k = 1; k <= 6; ++k) {
    const std::string name = "quotient_metric/k=" + std::to_string(k);
    ctx.guarded(name, "transportation_distance", 2, [&] {
      const BoxDomain W = BoxDomain::unit(2);
      const std::uint64_t seed = ctx.seed(name);
      const std::size_t pairs = 1000;
      const auto mismatch = parallel_map(pairs, [&](std::size_t i) {
        RandomStream rng(seed, i);
        const Configuration a = sample_uniform(W, k, rng);
        const Configuration b = sample_uniform(W, k, rng);
        return quotient_distance(a, b) == brute_force_distance(a, b) ? 0.0 : 1.0;
      });
      const double bad = pairwise_sum(mismatch);
      ctx.add(make(name, "transportation_distance", 2, bad, 0.0, 0.0, "mismatches == 0 over 1000 pairs", bad == 0.0));
    });
  }

  // Disintegration over the split [0,2] = [0,1] + [1,2].
  {
    const BoxDomain W({0.0}, {2.0}), M({0.0}, {1.0}), N({1.0}, {2.0});
    const auto family = disintegration_family();
    for (std::size_t i = 0; i < family.size(); ++i) {
      const std::string name = "disintegration/F" + std::to_string(i + 1);
      ctx.guarded(name, "disintegration", 3, [&] {
        const CylinderFunction& F = family[i];
        auto G = [&F](const Configuration& g) { return F.value(g); };
        const MCEstimate direct = integrate(G, plan_for(W, ctx.samples(50000), ctx.seed(name + "/direct")));
        MCPlan nested_plan = plan_for(W, ctx.samples(50000), ctx.seed(name + "/nested"));
        nested_plan.inner_samples = 16;
        const MCEstimate nested = integrate_disintegrated(G, M, N, nested_plan);
        ctx.add(within_sigma(name, "disintegration", 3, nested.mean, direct.mean,
                             std::hypot(nested.std_err, direct.std_err)));
      });
    }
  }

  // rho^0 equals the Poisson measure.
  for (const auto& e :
       ctx.batteries("set", {"half_space", "cosine_level_k3", "bump_disc_2d", "count_two_left", "local_bump_a"})) {
    const std::string name = "rho0_equals_pi/" + e.name;
    ctx.guarded(name, "poisson_measure", 4, [&] {
      const SetSpec A = set_of(e);
      const CodimMeasureResult rho =
          rho_m_on_box(A, 0, e.window, plan_for(e.window, ctx.samples(20000), ctx.seed(name + "/rho")));
      const MCEstimate pi = measure_of_set(A, plan_for(e.window, ctx.samples(100000), ctx.seed(name + "/pi")));
      ctx.add(within_sigma(name, "poisson_measure", 4, rho.total, pi.mean, std::hypot(rho.total_err, pi.std_err)));
    });
  }
}

// ------------------------------------------------------------ monotonicity

double locality_scale(const SetSpec& A) {
  const auto loc = A.function().locality();
  if (!loc) return 0.0;
  double s = 0.0;
  for (std::size_t d = 0; d < loc->dim(); ++d) s = std::max({s, std::abs(loc->lower(d)), std::abs(loc->upper(d))});
  return s;
}

void suite_monotonicity(SuiteContext& ctx) {
  const std::vector<double> rs = ctx.config().r_schedule.empty() ? std::vector<double>{1.0, 1.5, 2.0, 3.0}
                                                                 : ctx.config().r_schedule;
  const double R = 3.0;
  const auto sets = ctx.batteries(
      "set", {"local_bump_a", "local_bump_b", "local_two_bumps", "local_product", "local_bump_2d"});
  Series series{"rho_vs_r", {"set", "r", "rho1", "sigma", "monotone"}, {}};
  for (std::size_t s = 0; s < sets.size(); ++s) {
    const auto& e = sets[s];
    const std::string name = "monotonicity/" + e.name;
    ctx.guarded(name, "monotonicity_of_localized_measures", 6, [&] {
      const SetSpec A = set_of(e);
      const std::size_t n = A.function().dim();
      const MCPlan plan = plan_for(BoxDomain::centered(n, R), ctx.samples(200000), ctx.seed(name));
      std::vector<MCEstimate> vals;
      for (double r : rs) vals.push_back(rho_m_localized(A, 1, r, R, plan));
      double worst = 0.0, worst_sigma = 0.0;
      bool ok = true;
      for (std::size_t j = 1; j < vals.size(); ++j) {
        const double drop = vals[j - 1].mean - vals[j].mean;
        const double sigma = std::hypot(vals[j - 1].std_err, vals[j].std_err);
        if (drop > worst) {
          worst = drop;
          worst_sigma = sigma;
        }
        if (drop > 3.0 * sigma) ok = false;
      }
      for (std::size_t j = 0; j < vals.size(); ++j) {
        const bool mono = j == 0 || vals[j].mean >= vals[j - 1].mean;
        series.rows.push_back({static_cast<double>(s), rs[j], vals[j].mean, vals[j].std_err, mono ? 1.0 : 0.0});
      }
      ctx.add(make(name, "monotonicity_of_localized_measures", 6, worst, 0.0, worst_sigma,
                   "largest decrease along r <= 3 sigma", ok));
      // Beyond the locality scale every further enlargement leaves rho unchanged.
      const double ell = locality_scale(A);
      const auto it = std::find_if(rs.begin(), rs.end(), [ell](double r) { return r >= ell; });
      if (it != rs.end()) {
        const std::size_t j = static_cast<std::size_t>(it - rs.begin());
        const MCEstimate& a = vals[j];
        const MCEstimate& b = vals.back();
        CheckRecord rec = within_sigma("saturation/" + e.name, "monotonicity_of_localized_measures", 6, a.mean, b.mean,
                                       std::hypot(a.std_err, b.std_err));
        rec.note = "r = " + std::to_string(rs[j]) + " against r = " + std::to_string(rs.back());
        ctx.add(rec);
      }
    });
  }
  ctx.add(series);

  const auto ie_sets = ctx.batteries("set", {"local_bump_a", "local_two_bumps", "local_bump_2d"});
  for (std::size_t s = 0; s < std::min<std::size_t>(ie_sets.size(), 3); ++s) {
    const auto& e = ie_sets[s];
    const std::string name = "exhaustion_independence/" + e.name;
    ctx.guarded(name, "exhaustion_independence", 7, [&] {
      const SetSpec A = set_of(e);
      const std::size_t n = A.function().dim();
      const BoxDomain W = BoxDomain::centered(n, R);
      const MCPlan plan = plan_for(W, ctx.samples(200000), ctx.seed(name));
      const BoxDomain Q = n == 1 ? BoxDomain({-1.2}, {1.7}) : BoxDomain({-1.2, -1.0}, {1.7, 1.3});
      const MCEstimate lo = rho_m_localized(A, 1, BoxDomain::centered(n, 1.0), W, plan);
      const MCEstimate mid = rho_m_localized(A, 1, Q, W, plan);
      const MCEstimate hi = rho_m_localized(A, 1, BoxDomain::centered(n, 2.0), W, plan);
      const double s_lo = std::hypot(lo.std_err, mid.std_err);
      const double s_hi = std::hypot(hi.std_err, mid.std_err);
      ctx.add(make(name + "/lower", "exhaustion_independence", 7, mid.mean, lo.mean, s_lo,
                   "rho(Q) >= rho(Q_1) - 3 sigma", mid.mean >= lo.mean - 3.0 * s_lo));
      ctx.add(make(name + "/upper", "exhaustion_independence", 7, mid.mean, hi.mean, s_hi,
                   "rho(Q) <= rho(Q_2) + 3 sigma", mid.mean <= hi.mean + 3.0 * s_hi));
    });
  }
}

// -------------------------------------------------------------- intertwine

void suite_intertwine(SuiteContext& ctx) {
  const BoxDomain I = BoxDomain::unit(1);
  {
    const LiftedHeatOperator op(I, 128);
    for (const auto& e : ctx.batteries("inner", {"bump_a_1d", "cosine_mode_1d", "constant_window_1d"})) {
      for (double t : {0.01, 0.1, 1.0}) {
        const std::string name = "exponential_identity/" + e.name + "/t=" + std::to_string(t);
        ctx.guarded(name, "exponential_semigroup_identity", 8, [&] {
          if (!(e.window == I)) throw std::invalid_argument("exponential identity runs on the unit interval");
          const double err = exponential_identity_error(inner_of(e), t, op);
          ctx.add(make(name, "exponential_semigroup_identity", 8, err, 1e-6, 0.0, "max grid error < 1e-6",
                       err < 1e-6));
        });
      }
    }
  }
  const LiftedHeatOperator op(I, 256);
  for (const auto& e : ctx.batteries("inner", {"bump_a_1d", "bump_b_1d", "bump_c_1d"})) {
    for (std::size_t k : {1, 2}) {
      for (double t : {0.01, 0.05, 0.1}) {
        const std::string name =
            "intertwining/" + e.name + "/k=" + std::to_string(k) + "/t=" + std::to_string(t);
        ctx.guarded(name, "intertwining", 9, [&] {
          if (!(e.window == I)) throw std::invalid_argument("intertwining runs on the unit interval");
          const IntertwiningReport r = check_intertwining(inner_of(e), t, op, k);
          CheckRecord rec = make(name, "intertwining", 9, r.max_residual, 1e-4, 0.0, "max residual < 1e-4",
                                 r.max_residual < 1e-4);
          rec.note = "quadrature error " + std::to_string(r.quadrature_error);
          ctx.add(rec);
        });
      }
    }
  }
}

// ------------------------------------------------------------- bakry-emery

void suite_bakry_emery(SuiteContext& ctx) {
  const BoxDomain I = BoxDomain::unit(1);
  const LiftedHeatOperator op(I, 64);
  for (const auto& e : ctx.batteries("cylinder", {"bump_star", "tanh_cosine", "bump_product"})) {
    for (double t : {0.01, 0.1}) {
      const std::string base = "bakry_emery/" + e.name + "/t=" + std::to_string(t);
      ctx.guarded(base, "bakry_emery_gradient_bound", 10, [&] {
        const auto reports =
            check_bakry_emery(cylinder_of(e), {1.0, 2.0, 4.0}, t, op, plan_for(I, ctx.samples(10000), ctx.seed(base)));
        for (const auto& r : reports) {
          CheckRecord rec = make(base + "/p=" + std::to_string(static_cast<int>(r.p)), "bakry_emery_gradient_bound",
                                 10, static_cast<double>(r.violations), 0.0, 0.0,
                                 "no sample exceeds the bound by more than 1e-8", r.violations == 0);
          rec.note = "max excess " + std::to_string(r.max_excess) + " over " + std::to_string(r.n_samples) + " samples";
          ctx.add(rec);
        }
      });
    }
  }
  const std::string name = "regularization_slope/multiscale_cosine";
  ctx.guarded(name, "heat_regularization", 10, [&] {
    const BatteryEntry e = ctx.config().resolve("multiscale_cosine");
    const std::vector<double> times{1e-3, 2e-3, 5e-3, 1e-2, 2e-2, 5e-2, 1e-1};
    const SlopeReport r = regularization_slope(cylinder_of(e), 2.0, times, op,
                                               plan_for(I, ctx.samples(10000), ctx.seed(name)));
    ctx.add(make(name, "heat_regularization", 10, r.slope, -0.55, 0.0, "slope in [-0.65, -0.45]",
                 r.slope >= -0.65 && r.slope <= -0.45));
    Series s{"gradient_norm_vs_t", {"t", "norm"}, {}};
    for (std::size_t j = 0; j < r.t.size(); ++j) s.rows.push_back({r.t[j], r.norms[j]});
    ctx.add(s);
  });
}

// ---------------------------------------------------------- tv-equivalence

std::vector<double> tv_schedule(const SuiteContext& ctx) {
  return ctx.config().t_schedule.empty() ? default_tv_schedule() : ctx.config().t_schedule;
}

void add_tv_series(SuiteContext& ctx, const std::string& name, const SemigroupTV& s) {
  Series ser{"tv_semigroup_" + name, {"t", "sqrt_t", "value", "sigma"}, {}};
  for (std::size_t j = 0; j < s.t.size(); ++j) {
    ser.rows.push_back({s.t[j], std::sqrt(s.t[j]), s.norms[j].mean, s.norms[j].std_err});
  }
  ctx.add(ser);
}

void suite_tv_equivalence(SuiteContext& ctx) {
  const BoxDomain I = BoxDomain::unit(1);
  const LiftedHeatOperator op(I, 64);
  const double expected = std::exp(-1.0);
  const auto ts = tv_schedule(ctx);

  const BatteryEntry half = ctx.config().resolve("half_space");
  const SetSpec E = set_of(half);
  ctx.guarded("half_space/perimeter_oracle", "perimeter_measure", 5, [&] {
    const double p = perimeter_measure(E, I).total_mass();
    ctx.add(make("half_space/perimeter_oracle", "perimeter_measure", 5, p, expected, 0.0,
                 "|value - e^{-1}| <= 1e-3", std::abs(p - expected) <= 1e-3));
  });
  ctx.guarded("half_space/semigroup_tv", "perimeter_measure", 5, [&] {
    const SemigroupTV s =
        tv_semigroup(TVTarget::from_indicator(E, op, "half_space"), ts, plan_for(I, ctx.samples(20000), ctx.seed("half")));
    ctx.add(make("half_space/semigroup_tv", "perimeter_measure", 5, s.value, expected, s.std_err,
                 "|value - e^{-1}| <= 5e-3", std::abs(s.value - expected) <= 5e-3));
    add_tv_series(ctx, "half_space", s);
  });

  auto bracket_record = [&](const std::string& label, const TVTarget& T,
                            const std::vector<CylinderVectorField>& family) {
    const std::string name = "tv_bracket/" + label;
    const MCPlan plan = plan_for(I, ctx.samples(20000), ctx.seed(name));
    const TVBracket b = tv_bracket(T, family, plan, ts);
    const double width = b.relative_width();
    CheckRecord rec = make(name, "total_variation_equivalence", 11, width, 0.15, b.semigroup_err,
                           "lower - 3 sigma <= semigroup <= upper + 3 sigma and (upper - lower) / value <= 0.15",
                           b.brackets() && width <= 0.15);
    rec.note = b.to_json();
    ctx.add(rec);
    if (T.gradient_norm) add_tv_series(ctx, label, tv_semigroup(T, ts, plan));
  };
  ctx.guarded("tv_bracket/half_space", "total_variation_equivalence", 11, [&] {
    bracket_record("half_space", TVTarget::from_indicator(E, op, "half_space"),
                   bump_family(0.5, {0.1, 0.2, 0.3, 0.45}, {1e-4, 1e-3, 1e-2}));
  });
  for (const auto& e : ctx.batteries("cylinder", {"cosine_star", "cosine_product", "mixed_cosine"})) {
    ctx.guarded("tv_bracket/" + e.name, "total_variation_equivalence", 11, [&] {
      const CylinderFunction F = cylinder_of(e);
      bracket_record(e.name, TVTarget::from_cylinder(F, op, e.name), gradient_family(F, {1e-4, 1e-3, 1e-2}));
    });
  }
}

// --------------------------------------------------------------- de-giorgi

void suite_de_giorgi(SuiteContext& ctx) {
  for (const auto& e : ctx.batteries("set", {"half_space", "cosine_level_k3", "bump_disc_2d"})) {
    const std::string name = "de_giorgi/" + e.name;
    ctx.guarded(name, "de_giorgi_identity", 12, [&] {
      const SetSpec E = set_of(e);
      const double perim = perimeter_measure(E, e.window).total_mass();
      const CodimMeasureResult rho = rho_m_on_box(E, 1, e.window, plan_for(e.window, ctx.samples(200000), ctx.seed(name)));
      // Both sides can be deterministic; a relative floor of 1e-6 covers rounding.
      const double sigma = std::hypot(rho.total_err, 1e-6 * std::max(1.0, perim));
      CheckRecord rec = within_sigma(name, "de_giorgi_identity", 12, perim, rho.total, sigma);
      rec.note = rho.to_json();
      ctx.add(rec);
    });
  }
}

// ------------------------------------------------------------- gauss-green

void suite_gauss_green(SuiteContext& ctx) {
  const auto sets = ctx.batteries("set", {"half_space", "cosine_level_k3", "bump_disc_2d"});
  const auto fields = ctx.batteries("field", {"field_bump_1d", "field_coef_1d", "field_bump_2d", "field_coef_2d"});
  for (const auto& s : sets) {
    for (const auto& f : fields) {
      if (s.window.dim() != f.window.dim()) continue;
      const std::string name = "gauss_green/" + s.name + "/" + f.name;
      ctx.guarded(name, "gauss_green_formula", 13, [&] {
        const SetSpec E = set_of(s);
        const PerimeterMeasure P = perimeter_measure(E, s.window);
        const GaussGreenResult g =
            gauss_green_residual(E, field_of(f), P, plan_for(s.window, ctx.samples(100000), ctx.seed(name)));
        CheckRecord rec = within_sigma(name, "gauss_green_formula", 13, g.lhs, g.rhs, g.lhs_err);
        rec.note = g.to_json();
        ctx.add(rec);
      });
    }
  }
}

// ------------------------------------------------------------------ coarea

// Range of F over configurations of at most k_max points, padded by 5%.
std::pair<double, double> value_range(const CylinderFunction& F, const BoxDomain& W, std::size_t k_max,
                                      std::uint64_t seed) {
  double lo = F.value(std::span<const double>()), hi = lo;
  RandomStream rng(seed, 0);
  for (std::size_t k = 1; k <= k_max; ++k) {
    for (std::size_t i = 0; i < 4096; ++i) {
      const Configuration g = sample_uniform(W, k, rng);
      const double v = F.value(g);
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
  }
  const double pad = 0.05 * (hi - lo) + 1e-9;
  return {lo - pad, hi + pad};
}

void suite_coarea(SuiteContext& ctx) {
  const BoxDomain I = BoxDomain::unit(1);
  const CylinderFunction weight = cylinder_of(ctx.config().resolve("weight_bump"));
  for (const auto& e : ctx.batteries("cylinder", {"cosine_star", "cosine_product", "two_mode_star"})) {
    for (const bool weighted : {false, true}) {
      const std::string name = "coarea/" + e.name + (weighted ? "/G=weight_bump" : "/G=1");
      ctx.guarded(name, "coarea_formula", 14, [&] {
        const CylinderFunction F = cylinder_of(e);
        const auto [lo, hi] = value_range(F, e.window, 3, ctx.seed(name + "/range"));
        const PointFunction G = weighted ? PointFunction([&weight](std::span<const double> x) { return weight.value(x); })
                                         : PointFunction([](std::span<const double>) { return 1.0; });
        const CoareaResult c = coarea_check(F, G, level_grid(lo, hi, 128), e.window,
                                            plan_for(e.window, ctx.samples(20000), ctx.seed(name)));
        CheckRecord rec = relative(name, "coarea_formula", 14, c.level_integral, c.direct, c.direct_err, 0.05,
                                   "|value - target| <= 5% of target");
        rec.note = c.to_json();
        ctx.add(rec);
      });
    }
  }
  (void)I;
}

// ----------------------------------------------------------------- sobolev

void suite_sobolev(SuiteContext& ctx) {
  const CylinderFunction weight = cylinder_of(ctx.config().resolve("weight_bump"));
  for (const auto& e : ctx.batteries("cylinder", {"cosine_star", "cosine_product", "two_mode_star"})) {
    const std::string name = "sobolev/" + e.name;
    ctx.guarded(name, "sobolev_consistency", 15, [&] {
      const LiftedHeatOperator op(e.window, 64);
      const TVTarget T = TVTarget::from_cylinder(cylinder_of(e), op, e.name);
      const std::vector<PointFunction> weights{[](std::span<const double>) { return 1.0; },
                                               [&weight](std::span<const double> x) { return weight.value(x); }};
      const auto entries = sobolev_consistency(T, weights, {"1", "weight_bump"},
                                               plan_for(e.window, ctx.samples(20000), ctx.seed(name)), tv_schedule(ctx));
      for (const auto& s : entries) {
        ctx.add(relative(name + "/G=" + s.g_name, "sobolev_consistency", 15, s.semigroup, s.direct, 0.0, 0.05,
                         "|value - target| <= 5% of target"));
      }
    });
  }
}

// ---------------------------------------------------------------- capacity

void suite_capacity(SuiteContext& ctx) {
  const std::string name = "capacity_family";
  ctx.guarded(name, "capacity_controls_measure", 16, [&] {
    using O = OuterFunction;
    const BoxDomain I = BoxDomain::unit(1);
    const LiftedHeatOperator op(I, 64);
    const BesselOperator B(1.0, 2.0);
    const CylinderFunction g = CylinderFunction::star(SmoothFunction::cosine_mode(I, {1}, 1.0));
    const SmoothFunction count = SmoothFunction::constant_on_box(I, 1.0);
    const MCPlan plan = plan_for(I, ctx.samples(20000), ctx.seed(name));
    Series s{"capacity_vs_rho", {"j", "capacity_bound", "rho1", "sigma"}, {}};
    std::vector<double> caps, rhos, errs;
    for (std::size_t j = 1; j <= 10; ++j) {
      // E_j: the level surface {sum cos(pi x) = 0.3} restricted to at least j points.
      const SetSpec E = SetSpec::level_set(g, 0.3).with_count_filter(I, j, 1000);
      const auto sieve = level_set_sieve(E, I, {j, j + 1, j + 2}, 16, ctx.seed(name + "/sieve"));
      const double shift = 0.5 - static_cast<double>(j);
      const CylinderFunction F = CylinderFunction::composite(
          O::constant(0.5) * (O::constant(1.0) + O::tanh(O::constant(20.0) * (O::variable(0) + O::constant(shift)))),
          {count});
      const CapacityBound cap = capacity_upper_bound(E, sieve, {F}, B, op, plan);
      const CodimMeasureResult rho = rho_m_on_box(E, 1, I, plan);
      caps.push_back(cap.value);
      rhos.push_back(rho.total);
      errs.push_back(rho.total_err);
      s.rows.push_back({static_cast<double>(j), cap.value, rho.total, rho.total_err});
    }
    std::size_t cap_bad = 0, rho_bad = 0;
    for (std::size_t j = 1; j < caps.size(); ++j) {
      if (!(caps[j] < caps[j - 1])) ++cap_bad;
      if (rhos[j] > rhos[j - 1] + 3.0 * std::hypot(errs[j], errs[j - 1])) ++rho_bad;
    }
    ctx.add(make(name + "/capacity_decreasing", "capacity_controls_measure", 16, static_cast<double>(cap_bad), 0.0, 0.0,
                 "capacity bound strictly decreasing in j", cap_bad == 0));
    ctx.add(make(name + "/rho_decreasing", "capacity_controls_measure", 16, static_cast<double>(rho_bad), 0.0, 0.0,
                 "rho1 nonincreasing in j within 3 sigma", rho_bad == 0));
    double worst = -1.0;
    for (std::size_t j = 0; j < caps.size(); ++j) {
      if (caps[j] < 1e-6) worst = std::max(worst, rhos[j]);
    }
    ctx.add(make(name + "/small_capacity_small_rho", "capacity_controls_measure", 16, worst, 1e-4, 0.0,
                 "rho1 < 1e-4 wherever the capacity bound is below 1e-6 (and such j exist)",
                 worst >= 0.0 && worst < 1e-4));
    ctx.add(s);
  });
}

}  // namespace

std::uint64_t SuiteContext::seed(const std::string& label) const { return mix64(config_.seed ^ fnv1a(label)); }

std::vector<BatteryEntry> SuiteContext::batteries(const std::string& kind,
                                                  const std::vector<std::string>& defaults) const {
  std::vector<BatteryEntry> out;
  for (const auto& name : config_.batteries) {
    BatteryEntry e = config_.resolve(name);
    if (e.kind == kind) out.push_back(std::move(e));
  }
  if (!out.empty()) return out;
  for (const auto& name : defaults) out.push_back(config_.resolve(name));
  return out;
}

void SuiteContext::guarded(const std::string& name, const std::string& anchor, int criterion,
                           const std::function<void()>& body) {
  try {
    body();
  } catch (const std::exception& e) {
    add(make(name, anchor, criterion, std::numeric_limits<double>::quiet_NaN(), 0.0, 0.0, "completes without error",
             false, e.what()));
  }
}

void run_named_suite(SuiteContext& ctx) {
  const std::string& s = ctx.config().suite;
  if (s == "campbell") return suite_campbell(ctx);
  if (s == "monotonicity") return suite_monotonicity(ctx);
  if (s == "intertwine") return suite_intertwine(ctx);
  if (s == "bakry-emery") return suite_bakry_emery(ctx);
  if (s == "tv-equivalence") return suite_tv_equivalence(ctx);
  if (s == "de-giorgi") return suite_de_giorgi(ctx);
  if (s == "gauss-green") return suite_gauss_green(ctx);
  if (s == "coarea") return suite_coarea(ctx);
  if (s == "sobolev") return suite_sobolev(ctx);
  if (s == "capacity") return suite_capacity(ctx);
  throw ConfigError("unknown suite '" + s + "'");
}

}  // namespace ugmt
