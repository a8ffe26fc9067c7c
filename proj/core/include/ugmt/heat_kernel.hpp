#pragma once

#include <cstddef>
#include <functional>
#include <vector>

#include "ugmt/quadrature.hpp"

namespace ugmt {

/// One-dimensional Gaussian heat kernel g_t(z) = exp(-z^2/4t)/sqrt(4 pi t)
/// for the generator d^2/dz^2.
double gaussian_kernel(double z, double t);

/// Truncation bound 2 exp(-(2ML - 2L)^2 / 4t) / sqrt(4 pi t) for an image
/// sum over |m| <= M.
double image_tail_bound(std::size_t M, double t, double L);

/// Neumann heat kernel on [0, L] by the method of images,
/// sum_{|m|<=M} g_t(a-b-2mL) + g_t(a+b-2mL).
double neumann_kernel(double a, double b, double t, double L, std::size_t M);

/// Neumann (and companion Dirichlet) heat kernel on an interval [lo, hi]
/// with the image order chosen from the tail bound.
class HeatKernel1D {
 public:
  explicit HeatKernel1D(double L, double tolerance = 1e-12, double lower = 0.0);

  double length() const { return L_; }
  double lower() const { return lo_; }
  double upper() const { return lo_ + L_; }
  double tolerance() const { return tol_; }

  /// Smallest M >= 2 whose image tail bound is below the tolerance.
  std::size_t image_order(double t) const;
  double tail_bound(double t) const { return image_tail_bound(image_order(t), t, L_); }

  /// d^j/da^j k_t(a, b) for j = 0..3 (Neumann).
  double neumann(double a, double b, double t, int derivative = 0) const;
  /// Dirichlet kernel sum g_t(a-b-2mL) - g_t(a+b-2mL), derivative in a.
  double dirichlet(double a, double b, double t, int derivative = 0) const;

  /// int_alpha^beta k_t(a, y) dy in closed form (Neumann), and its a-derivative.
  double interval_mass(double a, double alpha, double beta, double t) const;
  double interval_mass_derivative(double a, double alpha, double beta, double t) const;

 private:
  void check_point(double a) const;
  double L_;
  double tol_;
  double lo_;
};

/// Values of a function on a one-dimensional quadrature grid.
struct GridFunction1D {
  QuadratureRule grid;
  std::vector<double> values;
};

/// Composite Gauss-Legendre grid on [lo, hi] with `quad_order` nodes per
/// unit length (at least 16).
QuadratureRule heat_grid(double lo, double hi, std::size_t quad_order);

/// T_t f on the nodes of a Gauss-Legendre grid. Throws std::domain_error
/// when the grid cannot resolve the kernel width sqrt(2t).
GridFunction1D semigroup_apply_1d(const std::function<double(double)>& f, double t,
                                  const HeatKernel1D& kernel, std::size_t quad_order = 64);
GridFunction1D semigroup_apply_1d(const GridFunction1D& f, double t, const HeatKernel1D& kernel);

/// Largest panel width of a composite grid relative to the kernel width;
/// grids with ratio above 8 are refused by the semigroup operations.
double grid_resolution_ratio(const QuadratureRule& grid, double t);

/// T_t f tabulated with derivatives on a uniform table and evaluated by
/// cubic Hermite interpolation. Used for closed-form lifts of linear and
/// exponential cylinder functions.
class SmoothedTable1D {
 public:
  SmoothedTable1D(const std::function<double(double)>& f, double t, const HeatKernel1D& kernel,
                  std::size_t quad_order = 128, std::size_t table_size = 2048);

  double value(double x) const { return eval(x, 0); }
  double derivative(double x) const { return eval(x, 1); }
  double second_derivative(double x) const { return eval(x, 2); }
  double time() const { return t_; }
  double lower() const { return lo_; }
  double upper() const { return hi_; }
  double sup_abs(int derivative) const { return sup_[static_cast<std::size_t>(derivative)]; }

 private:
  double eval(double x, int derivative) const;
  double lo_, hi_, h_, t_;
  std::vector<double> d_[4];
  double sup_[3] = {0.0, 0.0, 0.0};
};

}  // namespace ugmt
