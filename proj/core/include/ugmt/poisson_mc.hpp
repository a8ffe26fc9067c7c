#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "ugmt/box.hpp"
#include "ugmt/configuration.hpp"
#include "ugmt/set_spec.hpp"

namespace ugmt {

/// Monte Carlo estimate with its standard error and provenance.
struct MCEstimate {
  double mean = 0.0;
  double std_err = 0.0;
  std::size_t n_samples = 0;
  std::uint64_t seed = 0;

  /// {"name":..., "mean":..., "std_err":..., "n":..., "seed":...}
  std::string to_json(const std::string& name) const;
};

/// Sample mean and standard error of per-sample values, summed pairwise so
/// that the result does not depend on how the values were produced.
MCEstimate estimate_from_samples(std::span<const double> values, std::uint64_t seed);

/// Sampling plan. Sample i is drawn from the random stream (seed, i), which
/// makes every estimate a pure function of the plan.
struct MCPlan {
  std::size_t n_samples = 10000;
  std::uint64_t seed = 1;
  BoxDomain window;
  /// Pair each sample with its reflection x -> lower + upper - x (same count);
  /// each pair contributes one averaged value.
  bool antithetic = false;
  /// Inner sample count per outer sample in nested estimates.
  std::size_t inner_samples = 16;

  /// Throws std::invalid_argument unless n_samples >= 100 and the window is set.
  void validate() const;
};

using ConfigurationFunctional = std::function<double(const Configuration&)>;

/// Poisson probability e^{-lambda} lambda^k / k!.
double poisson_pmf(double lambda, std::size_t k);
/// Smallest K with P(N > K) < tail for N ~ Poisson(lambda).
std::size_t poisson_truncation(double lambda, double tail = 1e-10);

/// E_pi[G] over Poisson configurations on plan.window.
MCEstimate integrate(const ConfigurationFunctional& G, const MCPlan& plan);

/// Nested estimate int int G(zeta + xi) d pi_M(xi) d pi_N(zeta) for a split
/// of the window into boxes M and N with disjoint interiors.
MCEstimate integrate_disintegrated(const ConfigurationFunctional& G, const BoxDomain& M, const BoxDomain& N,
                                   const MCPlan& plan);

/// pi(A) on plan.window.
MCEstimate measure_of_set(const SetSpec& A, const MCPlan& plan);

/// Count-stratified estimate sum_k P(N = k) E[G | N = k] for k <= k_max
/// (0 selects the Poisson truncation), with n_samples / (k_max + 1) uniform
/// samples per stratum.
MCEstimate integrate_stratified(const ConfigurationFunctional& G, const MCPlan& plan, std::size_t k_max = 0);

/// Count-stratified expectation sum_k P(N = k) E[h | k uniform points] for
/// k in [k_lo, min(k_hi, Poisson truncation)]. Strata with n k <= quad_dim_max
/// use a tensor Gauss-Legendre rule with nodes_per_unit nodes per unit length
/// per axis (zero variance); the others use plan.n_samples uniform samples.
/// h receives flat coordinates of the k points, unsorted.
MCEstimate integrate_strata(const std::function<double(std::span<const double>)>& h, const MCPlan& plan,
                            std::size_t k_lo = 0, std::size_t k_hi = static_cast<std::size_t>(-1),
                            std::size_t quad_dim_max = 2, std::size_t nodes_per_unit = 128);

}  // namespace ugmt
