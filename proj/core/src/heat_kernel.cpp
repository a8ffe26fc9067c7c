#include "ugmt/heat_kernel.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace ugmt {

namespace {

// d^j/dz^j of the Gaussian heat kernel.
double gaussian_derivative(double z, double t, int j) {
  const double g = gaussian_kernel(z, t);
  switch (j) {
    case 0:
      return g;
    case 1:
      return -z / (2.0 * t) * g;
    case 2:
      return (z * z / (4.0 * t * t) - 1.0 / (2.0 * t)) * g;
    case 3:
      return (-z * z * z / (8.0 * t * t * t) + 3.0 * z / (4.0 * t * t)) * g;
    default:
      throw std::invalid_argument("gaussian_derivative: order must be 0..3");
  }
}

double gaussian_cdf(double z, double t) { return 0.5 * std::erfc(-z / std::sqrt(4.0 * t)); }

}  // namespace

double gaussian_kernel(double z, double t) {
  return std::exp(-z * z / (4.0 * t)) / std::sqrt(4.0 * std::numbers::pi * t);
}

double image_tail_bound(std::size_t M, double t, double L) {
  const double d = 2.0 * static_cast<double>(M) * L - 2.0 * L;
  return 2.0 * std::exp(-d * d / (4.0 * t)) / std::sqrt(4.0 * std::numbers::pi * t);
}

double neumann_kernel(double a, double b, double t, double L, std::size_t M) {
  if (!(t > 0.0)) throw std::invalid_argument("neumann_kernel: t must be positive");
  if (a < 0.0 || a > L || b < 0.0 || b > L) throw std::domain_error("neumann_kernel: a, b must lie in [0, L]");
  double s = 0.0;
  const auto m_max = static_cast<long>(M);
  for (long m = -m_max; m <= m_max; ++m) {
    const double shift = 2.0 * static_cast<double>(m) * L;
    s += gaussian_kernel(a - b - shift, t) + gaussian_kernel(a + b - shift, t);
  }
  return s;
}

HeatKernel1D::HeatKernel1D(double L, double tolerance, double lower) : L_(L), tol_(tolerance), lo_(lower) {
  if (!(L > 0.0)) throw std::invalid_argument("HeatKernel1D: length must be positive");
  if (!(tolerance > 0.0)) throw std::invalid_argument("HeatKernel1D: tolerance must be positive");
}

std::size_t HeatKernel1D::image_order(double t) const {
  if (!(t > 0.0)) throw std::invalid_argument("HeatKernel1D: t must be positive");
  std::size_t M = 2;
  while (image_tail_bound(M, t, L_) > tol_) ++M;
  return M;
}

void HeatKernel1D::check_point(double a) const {
  const double slack = 1e-12 * std::max(1.0, L_);
  if (a < lo_ - slack || a > lo_ + L_ + slack) throw std::domain_error("HeatKernel1D: point outside [lower, upper]");
}

double HeatKernel1D::neumann(double a, double b, double t, int derivative) const {
  check_point(a);
  check_point(b);
  a -= lo_;
  b -= lo_;
  const auto M = static_cast<long>(image_order(t));
  double s = 0.0;
  for (long m = -M; m <= M; ++m) {
    const double shift = 2.0 * static_cast<double>(m) * L_;
    s += gaussian_derivative(a - b - shift, t, derivative) + gaussian_derivative(a + b - shift, t, derivative);
  }
  return s;
}

double HeatKernel1D::dirichlet(double a, double b, double t, int derivative) const {
  check_point(a);
  check_point(b);
  a -= lo_;
  b -= lo_;
  const auto M = static_cast<long>(image_order(t));
  double s = 0.0;
  for (long m = -M; m <= M; ++m) {
    const double shift = 2.0 * static_cast<double>(m) * L_;
    s += gaussian_derivative(a - b - shift, t, derivative) - gaussian_derivative(a + b - shift, t, derivative);
  }
  return s;
}

double HeatKernel1D::interval_mass(double a, double alpha, double beta, double t) const {
  check_point(a);
  a -= lo_;
  alpha -= lo_;
  beta -= lo_;
  const auto M = static_cast<long>(image_order(t));
  double s = 0.0;
  for (long m = -M; m <= M; ++m) {
    const double shift = 2.0 * static_cast<double>(m) * L_;
    s += gaussian_cdf(a - alpha - shift, t) - gaussian_cdf(a - beta - shift, t);
    s += gaussian_cdf(a + beta - shift, t) - gaussian_cdf(a + alpha - shift, t);
  }
  return s;
}

double HeatKernel1D::interval_mass_derivative(double a, double alpha, double beta, double t) const {
  check_point(a);
  a -= lo_;
  alpha -= lo_;
  beta -= lo_;
  const auto M = static_cast<long>(image_order(t));
  double s = 0.0;
  for (long m = -M; m <= M; ++m) {
    const double shift = 2.0 * static_cast<double>(m) * L_;
    s += gaussian_kernel(a - alpha - shift, t) - gaussian_kernel(a - beta - shift, t);
    s += gaussian_kernel(a + beta - shift, t) - gaussian_kernel(a + alpha - shift, t);
  }
  return s;
}

QuadratureRule heat_grid(double lo, double hi, std::size_t quad_order) {
  if (quad_order < 16) throw std::invalid_argument("heat_grid: quadrature order must be at least 16");
  return composite_gauss_legendre(lo, hi, quad_order, 16);
}

double grid_resolution_ratio(const QuadratureRule& grid, double t) {
  // Panels hold 16 nodes; the widest panel spans nodes [16p, 16p+15].
  double widest = 0.0;
  for (std::size_t p = 0; p + 15 < grid.size(); p += 16) {
    widest = std::max(widest, grid.nodes[p + 15] - grid.nodes[p]);
  }
  if (grid.size() < 16) widest = grid.nodes.back() - grid.nodes.front();
  return widest / std::sqrt(2.0 * t);
}

GridFunction1D semigroup_apply_1d(const GridFunction1D& f, double t, const HeatKernel1D& kernel) {
  if (!(t > 0.0)) throw std::invalid_argument("semigroup_apply_1d: t must be positive");
  if (grid_resolution_ratio(f.grid, t) > 8.0) {
    throw std::domain_error("semigroup_apply_1d: quadrature order too small for the kernel width at this t");
  }
  GridFunction1D out{f.grid, std::vector<double>(f.grid.size(), 0.0)};
  const std::size_t n = f.grid.size();
  for (std::size_t i = 0; i < n; ++i) {
    double s = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      s += kernel.neumann(f.grid.nodes[i], f.grid.nodes[j], t) * f.grid.weights[j] * f.values[j];
    }
    out.values[i] = s;
  }
  return out;
}

GridFunction1D semigroup_apply_1d(const std::function<double(double)>& f, double t, const HeatKernel1D& kernel,
                                  std::size_t quad_order) {
  GridFunction1D in{heat_grid(kernel.lower(), kernel.upper(), quad_order), {}};
  in.values.reserve(in.grid.size());
  for (double x : in.grid.nodes) in.values.push_back(f(x));
  return semigroup_apply_1d(in, t, kernel);
}

SmoothedTable1D::SmoothedTable1D(const std::function<double(double)>& f, double t, const HeatKernel1D& kernel,
                                 std::size_t quad_order, std::size_t table_size)
    : lo_(kernel.lower()), hi_(kernel.upper()), t_(t) {
  if (table_size < 8) throw std::invalid_argument("SmoothedTable1D: table too small");
  const QuadratureRule grid = heat_grid(lo_, hi_, quad_order);
  if (grid_resolution_ratio(grid, t) > 8.0) {
    throw std::domain_error("SmoothedTable1D: quadrature order too small for the kernel width at this t");
  }
  std::vector<double> fw(grid.size());
  for (std::size_t q = 0; q < grid.size(); ++q) fw[q] = grid.weights[q] * f(grid.nodes[q]);
  h_ = (hi_ - lo_) / static_cast<double>(table_size);
  for (auto& d : d_) d.assign(table_size + 1, 0.0);
  const auto M = static_cast<long>(kernel.image_order(t));
  const double L = kernel.length();
  for (std::size_t i = 0; i <= table_size; ++i) {
    const double a = std::min(hi_, lo_ + h_ * static_cast<double>(i)) - lo_;
    double acc[4] = {0.0, 0.0, 0.0, 0.0};
    for (std::size_t q = 0; q < grid.size(); ++q) {
      const double b = grid.nodes[q] - lo_;
      for (long m = -M; m <= M; ++m) {
        const double shift = 2.0 * static_cast<double>(m) * L;
        for (const double z : {a - b - shift, a + b - shift}) {
          const double g = gaussian_kernel(z, t) * fw[q];
          if (g == 0.0) continue;
          const double zt = z / (2.0 * t);
          acc[0] += g;
          acc[1] += -zt * g;
          acc[2] += (zt * zt - 1.0 / (2.0 * t)) * g;
          acc[3] += (-zt * zt * zt + 3.0 * z / (4.0 * t * t)) * g;
        }
      }
    }
    for (int j = 0; j < 4; ++j) d_[j][i] = acc[j];
  }
  for (int j = 0; j < 3; ++j) {
    double m = 0.0;
    for (double v : d_[j]) m = std::max(m, std::abs(v));
    sup_[j] = m * 1.001 + 1e-300;
  }
}

double SmoothedTable1D::eval(double x, int derivative) const {
  if (derivative < 0 || derivative > 2) throw std::invalid_argument("SmoothedTable1D: derivative order 0..2");
  const double slack = 1e-12 * std::max(1.0, hi_ - lo_);
  if (x < lo_ - slack || x > hi_ + slack) throw std::domain_error("SmoothedTable1D: point outside window");
  const auto& y = d_[derivative];
  const auto& m = d_[derivative + 1];
  const double u = std::clamp((x - lo_) / h_, 0.0, static_cast<double>(y.size() - 1));
  std::size_t i = static_cast<std::size_t>(u);
  if (i >= y.size() - 1) i = y.size() - 2;
  const double s = u - static_cast<double>(i);
  const double s2 = s * s, s3 = s2 * s;
  const double h00 = 2 * s3 - 3 * s2 + 1, h10 = s3 - 2 * s2 + s, h01 = -2 * s3 + 3 * s2, h11 = s3 - s2;
  return h00 * y[i] + h10 * h_ * m[i] + h01 * y[i + 1] + h11 * h_ * m[i + 1];
}

}  // namespace ugmt
