#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ugmt/box.hpp"
#include "ugmt/cylinder.hpp"
#include "ugmt/poisson_mc.hpp"
#include "ugmt/set_spec.hpp"

namespace ugmt {

enum class HausdorffMethod { level_set_oracle, covering_upper_bound, counting, surface_mesh };

std::string to_string(HausdorffMethod m);

struct HausdorffEstimate {
  double value = 0.0;
  HausdorffMethod method = HausdorffMethod::level_set_oracle;
  double error_bar = 0.0;
  /// Band half-width actually used by the level-set oracle.
  double band = 0.0;
  std::vector<std::string> flags;
};

/// A scalar function on R^D with its gradient and an optional mask; the
/// level surface is {g = t} intersected with {mask}.
struct LevelFunction {
  std::size_t dim = 0;
  std::function<double(std::span<const double>)> value;
  std::function<void(std::span<const double>, std::span<double>)> gradient;
  std::function<bool(std::span<const double>)> mask;
};

/// The level function x -> F(x) of a cylinder function restricted to k
/// particles (D = n k), masked by the count filter of `A` when present.
LevelFunction level_function(const CylinderFunction& F, std::size_t k);
LevelFunction level_function(const SetSpec& A, std::size_t k);

/// Omega^k as a box in R^{nk}.
BoxDomain power_box(const BoxDomain& omega, std::size_t k);

/// Band estimator (1/2 eps) int_box chi(|g - t| < eps) |grad g| dx of the
/// (D-1)-dimensional measure of {g = t}. With band <= 0 the band starts at
/// 1e-2 times the box diameter and is halved until the estimate moves by less
/// than one standard error. Throws std::domain_error when more than 1% of the
/// band samples have |grad g| < 1e-3 (critical level).
HausdorffEstimate hausdorff_level_set(const LevelFunction& g, const BoxDomain& box, double t, double band,
                                      std::size_t n_samples, std::uint64_t seed);

/// Exact count of the points of {g = t} in a one-dimensional interval, by
/// sign changes on a fine scan refined by bisection.
HausdorffEstimate hausdorff_count_1d(const LevelFunction& g, const BoxDomain& interval, double t,
                                     std::size_t scan = 4096);

/// Greedy covering upper bound c(s) sum diam^s for a sampled set in R^D:
/// balls of diameter eps' are placed by mean shift over uncovered samples,
/// and the bound is the minimum over the dyadic ladder eps' = eps / 2^j
/// with eps' >= floor (floor <= 0 uses eps only).
HausdorffEstimate hausdorff_covering_upper(std::span<const double> points, std::size_t D, double s, double eps,
                                           double floor = 0.0);

/// A piece of a level surface: centroid, (D-1)-dimensional measure and the
/// unit vector grad g / |grad g| at the centroid.
struct SurfaceElement {
  std::vector<double> centroid;
  double measure = 0.0;
  std::vector<double> normal;
};

/// Deterministic level-surface mesh of {g = t} in a box of dimension D <= 3:
/// roots for D = 1, marching squares for D = 2, marching tetrahedra for D = 3.
/// Centroids are projected onto the surface by one Newton step; elements
/// outside the mask are dropped.
std::vector<SurfaceElement> level_surface(const LevelFunction& g, const BoxDomain& box, double t,
                                          std::size_t resolution);

/// rho^m on Upsilon(Omega) with per-stratum contributions.
struct CodimMeasureResult {
  int m = 0;
  std::vector<double> per_k;
  std::vector<double> per_k_err;
  std::vector<std::string> per_k_method;
  double total = 0.0;
  double total_err = 0.0;
  std::size_t k_truncation = 0;
  BoxDomain window;
  std::vector<std::string> flags;

  std::string to_json() const;
};

/// m = 0: per_k = vol^k / k! P_unif(A on Omega^k), so total = pi_Omega(A).
/// m = 1: A must be a level set; per_k = H^{nk-1}({F = t} in Omega^k) / k!,
/// by exact counting when nk = 1 and by the band estimator otherwise.
/// total = e^{-vol} sum_k per_k. Empty and full sets have no boundary.
CodimMeasureResult rho_m_on_box(const SetSpec& A, int m, const BoxDomain& omega, const MCPlan& plan,
                                std::size_t k_max = 0, double band = 0.0);

/// Localized measure rho^m restricted to the box Q inside the outer window W:
/// for m = 1 the band estimator under pi_W with the gradient norm taken over
/// the points inside Q only; for m = 0 simply pi(A). Uses the same samples for
/// every Q, so Q -> value is monotone sample by sample.
MCEstimate rho_m_localized(const SetSpec& A, int m, const BoxDomain& Q, const BoxDomain& W, const MCPlan& plan,
                           double band = 5e-3);
MCEstimate rho_m_localized(const SetSpec& A, int m, double r, double R_outer, const MCPlan& plan,
                           double band = 5e-3);

struct LimitResult {
  std::vector<double> r;
  std::vector<MCEstimate> values;
  MCEstimate limit;
  bool monotone = true;
  bool saturated = false;
};

/// rho^m_r along an increasing schedule; the last value is the limit proxy.
/// Throws std::logic_error if the sequence decreases by more than 3 sigma.
LimitResult rho_m_limit(const SetSpec& A, int m, const std::vector<double>& r_schedule, double R_outer,
                        const MCPlan& plan, double band = 5e-3);

}  // namespace ugmt
