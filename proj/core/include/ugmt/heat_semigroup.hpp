#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "ugmt/box.hpp"
#include "ugmt/configuration.hpp"
#include "ugmt/cylinder.hpp"
#include "ugmt/heat_kernel.hpp"
#include "ugmt/poisson_mc.hpp"
#include "ugmt/quadrature.hpp"
#include "ugmt/set_spec.hpp"

namespace ugmt {

/// Values of a function of k particles on the tensor quadrature grid of a
/// LiftedHeatOperator. Axis a = i * n + d is coordinate d of particle i; the
/// layout is row-major with the last axis fastest.
struct KGrid {
  std::size_t k = 0;
  std::size_t n = 0;
  std::vector<double> values;
};

/// The lifted Neumann heat semigroup on Upsilon(window), acting stratum by
/// stratum as the tensor semigroup on window^k.
///
/// Grid operations are limited to n k <= 3 axes; per-axis grids are
/// composite Gauss-Legendre rules with `quad_order` nodes per unit length.
class LiftedHeatOperator {
 public:
  explicit LiftedHeatOperator(BoxDomain window, std::size_t quad_order = 64, double tolerance = 1e-12);

  const BoxDomain& window() const { return window_; }
  std::size_t quad_order() const { return quad_order_; }
  /// Poisson truncation of the particle count for the window volume.
  std::size_t k_truncation() const { return k_max_; }
  /// Largest k for which the grid path is available.
  std::size_t grid_k_max() const { return 3 / window_.dim(); }
  const HeatKernel1D& kernel(std::size_t axis) const { return kernels_[axis]; }
  const QuadratureRule& nodes(std::size_t axis) const { return nodes_[axis]; }

  KGrid tabulate(const std::function<double(std::span<const double>)>& G, std::size_t k) const;
  KGrid tabulate(const CylinderFunction& F, std::size_t k) const;

  /// T_t G on the grid nodes.
  KGrid apply(const KGrid& G, double t) const;

  /// (T_t G)(x) at a point of window^k, or its partial derivative along
  /// `diff_axis` when that is nonnegative.
  double evaluate(const KGrid& G, std::span<const double> x, double t, int diff_axis = -1) const;
  std::vector<double> gradient(const KGrid& G, std::span<const double> x, double t) const;

  /// Per-axis kernel choice for a general tensor contraction.
  enum class AxisKernel { neumann, neumann_derivative, dirichlet };
  double contract(const KGrid& G, std::span<const double> x, double t, std::span<const AxisKernel> kinds) const;

 private:
  void check_k(std::size_t k) const;
  std::vector<double> axis_vector(std::size_t axis, double x, double t, AxisKernel kind) const;

  BoxDomain window_;
  std::size_t quad_order_;
  std::size_t k_max_;
  std::vector<HeatKernel1D> kernels_;
  std::vector<QuadratureRule> nodes_;
};

/// T_t f on the window for a single-particle function: cosine modes of the
/// window decay by e^{-lambda t}, functions constant on the window are
/// fixed, heat-smoothed functions advance their time, and any other
/// one-dimensional function is heat-smoothed. Throws std::invalid_argument
/// when no closed form applies (n >= 2 with non-eigenfunction terms).
SmoothFunction lift_inner(const SmoothFunction& f, double t, const BoxDomain& window);

/// True when lift_semigroup(F, t, op) has a closed form.
bool has_closed_form_lift(const CylinderFunction& F, const BoxDomain& window);

/// Closed-form lift: T_t (c + sum a_i f_i*) = c + sum a_i (T_t f_i)*,
/// T_t prod (1 + f) = prod (1 + T_t f), and functions of the particle count
/// alone are invariant. Throws std::invalid_argument otherwise.
CylinderFunction lift_semigroup(const CylinderFunction& F, double t, const LiftedHeatOperator& op);

/// Grid lift of a k-particle function; equals apply(G, t).
KGrid lift_semigroup(const KGrid& G, double t, const LiftedHeatOperator& op);

/// Max over window^k grid nodes (k = 1..grid_k_max) of
/// |T_t^{(k)} prod(1 + f) - prod(1 + T_t f)|, the left side by tensor
/// quadrature and the right side by the closed-form lift.
double exponential_identity_error(const SmoothFunction& f, double t, const LiftedHeatOperator& op);

struct IntertwiningReport {
  double t = 0.0;
  std::size_t k = 0;
  double max_residual = 0.0;
  /// Difference between the gradient on this grid and on a grid of twice
  /// the quadrature order.
  double quadrature_error = 0.0;
  std::size_t points = 0;
  std::string to_json() const;
};

/// Compares d/dx (T_t F) for F = f* on window^k (Neumann kernel derivative)
/// with the semigroup applied to grad F, which for the differentiated axis
/// is the Dirichlet semigroup. Evaluated on a uniform grid of
/// points_per_axis^{nk} cell centers. Throws std::domain_error when the
/// quadrature error estimate exceeds 1e-6.
IntertwiningReport check_intertwining(const SmoothFunction& f, double t, const LiftedHeatOperator& op, std::size_t k,
                                      std::size_t points_per_axis = 9);

struct BakryEmeryReport {
  double p = 1.0;
  double t = 0.0;
  double tolerance = 1e-8;
  /// max over samples of |grad T_t F|^p - T_t |grad F|^p.
  double max_excess = 0.0;
  std::size_t violations = 0;
  std::size_t n_samples = 0;
  double violation_fraction() const {
    return n_samples ? static_cast<double>(violations) / static_cast<double>(n_samples) : 0.0;
  }
  std::string to_json() const;
};

/// Samples Poisson configurations on the window conditioned on at most
/// grid_k_max() particles and compares both sides of the p-Bakry-Emery
/// inequality through the per-stratum tensor grids.
std::vector<BakryEmeryReport> check_bakry_emery(const CylinderFunction& F, const std::vector<double>& ps, double t,
                                                const LiftedHeatOperator& op, const MCPlan& plan,
                                                double tolerance = 1e-8);
BakryEmeryReport check_bakry_emery(const CylinderFunction& F, double p, double t, const LiftedHeatOperator& op,
                                   const MCPlan& plan, double tolerance = 1e-8);

struct SlopeReport {
  std::vector<double> t;
  std::vector<double> norms;
  double slope = 0.0;
  double intercept = 0.0;
};

/// ||grad T_t F||_{L^p(pi)} over the given times (closed-form lift, common
/// samples) and the least-squares slope of log norm against log t.
SlopeReport regularization_slope(const CylinderFunction& F, double p, const std::vector<double>& times,
                                 const LiftedHeatOperator& op, const MCPlan& plan);

/// B_{alpha,p} = Gamma(alpha/2)^{-1} int_0^inf e^{-t} t^{alpha/2 - 1} T_t dt
/// discretized by generalized Gauss-Laguerre quadrature.
// TODO: switch to a double-exponential rule in t; 48 Laguerre nodes lose
// about 2% at eigenvalue 4 pi^2 and more beyond.
class BesselOperator {
 public:
  BesselOperator(double alpha, double p, std::size_t nodes = 48);

  double alpha() const { return alpha_; }
  double p() const { return p_; }
  const std::vector<double>& times() const { return times_; }
  /// Normalized weights; they sum to one.
  const std::vector<double>& weights() const { return weights_; }
  /// True for alpha < 0.2, where the t^{alpha/2 - 1} singularity is poorly resolved.
  bool under_resolved() const { return alpha_ < 0.2; }

 private:
  double alpha_, p_;
  std::vector<double> times_, weights_;
};

/// B F as a weighted sum of closed-form lifts.
class BesselFunction {
 public:
  BesselFunction(std::vector<CylinderFunction> lifted, std::vector<double> weights);
  double value(const Configuration& gamma) const;
  double value(std::span<const double> coords) const;

 private:
  std::vector<CylinderFunction> lifted_;
  std::vector<double> weights_;
};

BesselFunction bessel_apply(const CylinderFunction& F, const BesselOperator& B, const LiftedHeatOperator& op);

/// True when F depends on the configuration only through the number of
/// points in the window.
bool is_count_only(const CylinderFunction& F, const BoxDomain& window);

/// E_pi |F|^p on the window: exact through the Poisson law for count-only F,
/// Monte Carlo otherwise.
double lp_norm_pow(const CylinderFunction& F, double p, const BoxDomain& window, const MCPlan& plan);

struct CapacityBound {
  double value = 0.0;
  /// Index of the best candidate, or -1 when none applies.
  long best = -1;
  std::vector<std::string> flags;
};

/// Upper bound for Cap_{alpha,p}(E): the minimum over nonnegative candidates
/// F of ||F||_p^p / (min over the sieve of B F)^p. The sieve is a finite set
/// of configurations in E. Returns 0 for the empty set and +infinity with a
/// flag when no candidate has B F > 0 on the whole sieve.
CapacityBound capacity_upper_bound(const SetSpec& E, const std::vector<Configuration>& sieve,
                                   const std::vector<CylinderFunction>& candidates, const BesselOperator& B,
                                   const LiftedHeatOperator& op, const MCPlan& plan);

/// Configurations on the level surface {F = t} of a level set (n = 1): for
/// each count k, `per_k` draws of k - 1 uniform points with the last point
/// solved for by bisection along the window. Counts outside the count
/// filter of A are skipped.
std::vector<Configuration> level_set_sieve(const SetSpec& A, const BoxDomain& window,
                                           const std::vector<std::size_t>& counts, std::size_t per_k,
                                           std::uint64_t seed);

}  // namespace ugmt
