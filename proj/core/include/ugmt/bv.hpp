#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ugmt/box.hpp"
#include "ugmt/cylinder.hpp"
#include "ugmt/hausdorff.hpp"
#include "ugmt/heat_semigroup.hpp"
#include "ugmt/poisson_mc.hpp"
#include "ugmt/set_spec.hpp"

namespace ugmt {

using PointFunction = std::function<double(std::span<const double>)>;

/// A function on configurations of a window together with what the total
/// variation estimators need: its values, the smoothed gradient norm
/// |grad T_t F| for t > 0 and, for smooth F, |grad F| itself.
struct TVTarget {
  std::string name;
  BoxDomain window;
  PointFunction value;
  /// t -> (coords -> |grad T_t F|); the outer call may do setup work.
  std::function<PointFunction(double)> smoothed_gradient_norm;
  /// |grad F| for smooth F; empty for indicators.
  PointFunction gradient_norm;
  /// Strata outside [k_lo, k_hi] carry no variation.
  std::size_t k_lo = 0;
  std::size_t k_hi = static_cast<std::size_t>(-1);

  /// A smooth cylinder function with a closed-form lift.
  static TVTarget from_cylinder(const CylinderFunction& F, const LiftedHeatOperator& op, std::string name = "F");
  /// The indicator of a level set {F > t} on one-particle configurations of
  /// a one-dimensional window (count filter fixing exactly one point).
  static TVTarget from_indicator(const SetSpec& E, const LiftedHeatOperator& op, std::string name = "indicator");
};

struct SemigroupTV {
  double value = 0.0;
  double std_err = 0.0;
  /// Root-mean-square residual of the extrapolation fit.
  double fit_residual = 0.0;
  std::vector<double> t;
  std::vector<MCEstimate> norms;
};

/// Default small-time schedule for the extrapolation fit.
std::vector<double> default_tv_schedule();

/// ||grad T_t F||_{L^1(pi)} (optionally weighted by G >= 0) for each t,
/// extrapolated to t = 0 by least squares in a + b t + c t^2 for smooth F and
/// in a + b sqrt(t) + c t for indicators. Strata are
/// integrated with common samples across t. Throws std::logic_error when the
/// sequence increases in t by more than 3 standard errors of the difference.
SemigroupTV tv_semigroup(const TVTarget& F, const std::vector<double>& t_schedule, const MCPlan& plan,
                         const PointFunction& weight = {});

struct RelaxationUpper {
  double value = 0.0;
  double std_err = 0.0;
  /// "smoothing_limit" or "unsmoothed".
  std::string member;
  std::vector<double> eps;
  std::vector<MCEstimate> norms;
};

/// Upper bound for the relaxed variation over the sequences F_eps = T_eps F:
/// the extrapolated limit of ||grad T_eps F||_{L^1} as eps -> 0 and, for
/// smooth F, the unsmoothed member ||grad F||_{L^1}, whichever is smaller.
RelaxationUpper tv_relaxation(const TVTarget& F, const std::vector<double>& eps_schedule, const MCPlan& plan);

struct VariationalLower {
  double value = 0.0;
  double std_err = 0.0;
  std::size_t best = 0;
  std::vector<double> training;
};

/// max over a family of fields with |V| <= 1 of int F div*(V) d pi. The best
/// member is chosen on the plan's seed and re-estimated on an independent
/// seed so that value - 3 std_err remains a lower bound.
VariationalLower tv_variational(const TVTarget& F, const std::vector<CylinderVectorField>& family,
                                const MCPlan& plan);

/// -grad F / sqrt(delta + |grad F|^2) for each delta.
std::vector<CylinderVectorField> gradient_family(const CylinderFunction& F, const std::vector<double>& deltas);

/// Fields -b / sqrt(delta + |b|^2) for one-dimensional bump fields b of the
/// given widths centred at `center`, for every (width, delta) pair.
std::vector<CylinderVectorField> bump_family(double center, const std::vector<double>& widths,
                                             const std::vector<double>& deltas);

struct TVBracket {
  double variational_lower = 0.0;
  double variational_err = 0.0;
  double semigroup_value = 0.0;
  double semigroup_err = 0.0;
  double relaxation_upper = 0.0;
  double relaxation_err = 0.0;

  /// lower - 3 sigma <= semigroup <= upper + 3 sigma.
  bool brackets() const;
  /// (upper - lower) / semigroup.
  double relative_width() const;
  std::string to_json() const;
};

TVBracket tv_bracket(const TVTarget& F, const std::vector<CylinderVectorField>& family, const MCPlan& plan,
                     const std::vector<double>& t_schedule = default_tv_schedule());

/// One count stratum of a perimeter measure.
struct SurfaceStratum {
  std::size_t k = 0;
  /// e^{-vol} / k!
  double weight = 0.0;
  std::vector<SurfaceElement> elements;
};

/// The perimeter measure of a level set, stored as weighted surface meshes
/// of {F = t} in window^k for each stratum.
class PerimeterMeasure {
 public:
  PerimeterMeasure() = default;
  PerimeterMeasure(BoxDomain window, std::size_t n, std::vector<SurfaceStratum> strata, bool negated,
                   std::vector<std::string> flags);

  const BoxDomain& window() const { return window_; }
  const std::vector<SurfaceStratum>& strata() const { return strata_; }
  const std::vector<std::string>& flags() const { return flags_; }

  /// int G d||E||, or with Q the localized measure whose surface elements
  /// are weighted by the share |n_Q| of the unit normal carried by the
  /// points inside Q.
  double integrate(const PointFunction& G, const std::optional<BoxDomain>& Q = std::nullopt) const;
  double integrate(const CylinderFunction& G, const std::optional<BoxDomain>& Q = std::nullopt) const;
  double total_mass() const;
  std::vector<double> per_k_mass() const;
  /// int <V, n_out> d||E|| with the outward unit normal of E.
  double flux(const CylinderVectorField& V) const;

 private:
  BoxDomain window_;
  std::size_t n_ = 0;
  std::vector<SurfaceStratum> strata_;
  bool negated_ = false;
  std::vector<std::string> flags_;
};

/// Surface-mesh resolution used by perimeter_measure for a stratum of
/// dimension D (0 selects 4096, 256 and 48 cells per axis for D = 1, 2, 3).
std::size_t surface_resolution(std::size_t D, std::size_t requested = 0);

/// Perimeter measure of a level set on window^k for the strata admitted by
/// its count filter, k <= 3 / n. Empty and full sets have zero perimeter.
/// Strata that cannot be meshed are skipped with a flag. Throws
/// std::domain_error when a surface element has |grad F| < 1e-3 (critical
/// level; perturb t).
PerimeterMeasure perimeter_measure(const SetSpec& E, const BoxDomain& window, std::size_t resolution = 0);

struct GaussGreenResult {
  double lhs = 0.0;
  double lhs_err = 0.0;
  double rhs = 0.0;
  double residual = 0.0;
  std::string to_json() const;
};

/// int chi_E div*(V) d pi by Monte Carlo against the boundary flux
/// int <V, n_out> d||E|| from the surface meshes.
GaussGreenResult gauss_green_residual(const SetSpec& E, const CylinderVectorField& V, const PerimeterMeasure& perim,
                                      const MCPlan& plan);

struct CoareaResult {
  double level_integral = 0.0;
  double direct = 0.0;
  double direct_err = 0.0;
  double relative_deviation = 0.0;
  std::size_t levels_used = 0;
  std::vector<double> skipped_levels;
  std::vector<std::string> flags;
  std::string to_json() const;
};

/// Equally spaced levels over [lo, hi] shifted by `offset` cells, which keeps
/// them away from integer critical values.
std::vector<double> level_grid(double lo, double hi, std::size_t count, double offset = 0.37);

/// int_t int G d||{F > t}|| dt by the trapezoid rule over t_grid, against
/// int G |grad F| d pi; both restricted to the strata 1 <= k <= k_max.
/// Critical levels are skipped; gaps above 10% of the level range are flagged.
CoareaResult coarea_check(const CylinderFunction& F, const PointFunction& G, const std::vector<double>& t_grid,
                          const BoxDomain& window, const MCPlan& plan, std::size_t k_max = 3,
                          std::size_t resolution = 0);

struct SobolevEntry {
  std::string g_name;
  double semigroup = 0.0;
  double direct = 0.0;
  double relative_deviation = 0.0;
};

/// For each weight G: int G d|DF| as the t -> 0 limit of int G |grad T_t F|
/// against int G |grad F| d pi.
std::vector<SobolevEntry> sobolev_consistency(const TVTarget& F, const std::vector<PointFunction>& weights,
                                              const std::vector<std::string>& names, const MCPlan& plan,
                                              const std::vector<double>& t_schedule = default_tv_schedule());

}  // namespace ugmt
