#include "ugmt/poisson_mc.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "json.hpp"
#include "ugmt/parallel.hpp"
#include "ugmt/quadrature.hpp"

namespace ugmt {

namespace {

void check_finite(double v) {
  if (!std::isfinite(v)) throw std::runtime_error("Monte Carlo: non-finite integrand value");
}

Configuration reflected(const Configuration& gamma) {
  const BoxDomain& w = gamma.window();
  std::vector<double> c = gamma.coords();
  const std::size_t n = w.dim();
  for (std::size_t i = 0; i < c.size(); ++i) c[i] = w.lower(i % n) + w.upper(i % n) - c[i];
  return Configuration(w, std::move(c));
}

}  // namespace

std::string MCEstimate::to_json(const std::string& name) const {
  nlohmann::ordered_json j;
  j["name"] = name;
  j["mean"] = mean;
  j["std_err"] = std_err;
  j["n"] = n_samples;
  j["seed"] = seed;
  return j.dump();
}

MCEstimate estimate_from_samples(std::span<const double> values, std::uint64_t seed) {
  MCEstimate e;
  e.n_samples = values.size();
  e.seed = seed;
  if (values.empty()) return e;
  e.mean = pairwise_sum(values) / static_cast<double>(values.size());
  if (values.size() > 1) {
    std::vector<double> sq(values.size());
    for (std::size_t i = 0; i < values.size(); ++i) sq[i] = (values[i] - e.mean) * (values[i] - e.mean);
    const double var = pairwise_sum(sq) / static_cast<double>(values.size() - 1);
    e.std_err = std::sqrt(var / static_cast<double>(values.size()));
  }
  return e;
}

void MCPlan::validate() const {
  if (n_samples < 100) throw std::invalid_argument("MCPlan: n_samples must be at least 100");
  if (window.dim() == 0) throw std::invalid_argument("MCPlan: window not set");
  if (inner_samples == 0) throw std::invalid_argument("MCPlan: inner_samples must be positive");
}

double poisson_pmf(double lambda, std::size_t k) {
  if (lambda == 0.0) return k == 0 ? 1.0 : 0.0;
  const double kd = static_cast<double>(k);
  return std::exp(kd * std::log(lambda) - lambda - std::lgamma(kd + 1.0));
}

std::size_t poisson_truncation(double lambda, double tail) {
  double cdf = 0.0;
  for (std::size_t k = 0;; ++k) {
    cdf += poisson_pmf(lambda, k);
    if (1.0 - cdf < tail || k > 10000) return k;
  }
}

MCEstimate integrate(const ConfigurationFunctional& G, const MCPlan& plan) {
  plan.validate();
  const auto values = parallel_map(plan.n_samples, [&](std::size_t i) {
    RandomStream rng(plan.seed, i);
    const Configuration gamma = sample_poisson(plan.window, rng);
    double v = G(gamma);
    if (plan.antithetic) v = 0.5 * (v + G(reflected(gamma)));
    check_finite(v);
    return v;
  });
  return estimate_from_samples(values, plan.seed);
}

MCEstimate integrate_disintegrated(const ConfigurationFunctional& G, const BoxDomain& M, const BoxDomain& N,
                                   const MCPlan& plan) {
  plan.validate();
  if (!M.interiors_disjoint(N)) throw std::invalid_argument("integrate_disintegrated: M and N overlap");
  if (!plan.window.contains_box(M) || !plan.window.contains_box(N) ||
      std::abs(M.volume() + N.volume() - plan.window.volume()) > 1e-12 * plan.window.volume()) {
    throw std::invalid_argument("integrate_disintegrated: M and N must partition the window");
  }
  const std::size_t outer = std::max<std::size_t>(plan.n_samples / plan.inner_samples, 2);
  const auto values = parallel_map(outer, [&](std::size_t i) {
    RandomStream rng(plan.seed, i);
    const Configuration zeta = sample_poisson(N, rng);
    std::vector<double> inner(plan.inner_samples);
    for (std::size_t j = 0; j < plan.inner_samples; ++j) {
      RandomStream child = rng.split(j + 1);
      const Configuration xi = sample_poisson(M, child);
      std::vector<double> c = zeta.coords();
      c.insert(c.end(), xi.coords().begin(), xi.coords().end());
      inner[j] = G(Configuration(plan.window, std::move(c)));
      check_finite(inner[j]);
    }
    return pairwise_sum(inner) / static_cast<double>(plan.inner_samples);
  });
  MCEstimate e = estimate_from_samples(values, plan.seed);
  e.n_samples = outer * plan.inner_samples;
  return e;
}

MCEstimate measure_of_set(const SetSpec& A, const MCPlan& plan) {
  return integrate([&A](const Configuration& g) { return A.contains(g) ? 1.0 : 0.0; }, plan);
}

MCEstimate integrate_stratified(const ConfigurationFunctional& G, const MCPlan& plan, std::size_t k_max) {
  plan.validate();
  const double lambda = plan.window.volume();
  if (k_max == 0) k_max = poisson_truncation(lambda);
  const std::size_t per = std::max<std::size_t>(plan.n_samples / (k_max + 1), 2);
  double mean = 0.0, var = 0.0;
  for (std::size_t k = 0; k <= k_max; ++k) {
    const auto values = parallel_map(per, [&](std::size_t i) {
      RandomStream rng(plan.seed, k * per + i);
      const double v = G(sample_uniform(plan.window, k, rng));
      check_finite(v);
      return v;
    });
    const MCEstimate s = estimate_from_samples(values, plan.seed);
    const double w = poisson_pmf(lambda, k);
    mean += w * s.mean;
    var += w * w * s.std_err * s.std_err;
  }
  return MCEstimate{mean, std::sqrt(var), per * (k_max + 1), plan.seed};
}

MCEstimate integrate_strata(const std::function<double(std::span<const double>)>& h, const MCPlan& plan,
                            std::size_t k_lo, std::size_t k_hi, std::size_t quad_dim_max, std::size_t nodes_per_unit) {
  plan.validate();
  const BoxDomain& w = plan.window;
  const std::size_t n = w.dim();
  const double lambda = w.volume();
  const std::size_t K = std::min(k_hi, poisson_truncation(lambda));
  std::vector<QuadratureRule> rules;
  for (std::size_t d = 0; d < n; ++d) rules.push_back(composite_gauss_legendre(w.lower(d), w.upper(d), nodes_per_unit));
  double mean = 0.0, var = 0.0;
  for (std::size_t k = k_lo; k <= K; ++k) {
    const double pk = poisson_pmf(lambda, k);
    const std::size_t D = n * k;
    if (D == 0) {
      mean += pk * h(std::span<const double>());
      continue;
    }
    if (D <= quad_dim_max) {
      std::vector<std::size_t> sizes(D);
      std::size_t total = 1;
      for (std::size_t a = 0; a < D; ++a) total *= (sizes[a] = rules[a % n].size());
      const auto v = parallel_map(total, [&](std::size_t idx) {
        std::vector<double> x(D);
        double wt = 1.0;
        std::size_t rem = idx;
        for (std::size_t a = D; a-- > 0;) {
          const QuadratureRule& r = rules[a % n];
          x[a] = r.nodes[rem % sizes[a]];
          wt *= r.weights[rem % sizes[a]];
          rem /= sizes[a];
        }
        const double y = h(x);
        check_finite(y);
        return wt * y;
      });
      mean += pk * pairwise_sum(v) / std::pow(lambda, static_cast<double>(k));
      continue;
    }
    const auto v = parallel_map(plan.n_samples, [&](std::size_t i) {
      RandomStream rng(plan.seed, (static_cast<std::uint64_t>(k) << 40) + i);
      std::vector<double> x(D);
      for (std::size_t a = 0; a < D; ++a) x[a] = rng.uniform(w.lower(a % n), w.upper(a % n));
      const double y = h(x);
      check_finite(y);
      return y;
    });
    const MCEstimate s = estimate_from_samples(v, plan.seed);
    mean += pk * s.mean;
    var += pk * pk * s.std_err * s.std_err;
  }
  return MCEstimate{mean, std::sqrt(var), plan.n_samples, plan.seed};
}

}  // namespace ugmt
