#include "ugmt/quadrature.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace ugmt {

QuadratureRule gauss_legendre(std::size_t order, double a, double b) {
  if (order == 0) throw std::invalid_argument("gauss_legendre: order must be positive");
  QuadratureRule rule;
  rule.nodes.resize(order);
  rule.weights.resize(order);
  const std::size_t n = order;
  const std::size_t m = (n + 1) / 2;
  const double half = 0.5 * (b - a);
  const double mid = 0.5 * (b + a);
  for (std::size_t i = 0; i < m; ++i) {
    double x = std::cos(std::numbers::pi * (static_cast<double>(i) + 0.75) / (static_cast<double>(n) + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = 0.0;
      for (std::size_t j = 1; j <= n; ++j) {
        const double p2 = p1;
        p1 = p0;
        p0 = ((2.0 * j - 1.0) * x * p1 - (j - 1.0) * p2) / static_cast<double>(j);
      }
      dp = static_cast<double>(n) * (x * p0 - p1) / (x * x - 1.0);
      const double dx = p0 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    // Recompute the derivative at the converged node for the weight.
    double p0 = 1.0, p1 = 0.0;
    for (std::size_t j = 1; j <= n; ++j) {
      const double p2 = p1;
      p1 = p0;
      p0 = ((2.0 * j - 1.0) * x * p1 - (j - 1.0) * p2) / static_cast<double>(j);
    }
    dp = static_cast<double>(n) * (x * p0 - p1) / (x * x - 1.0);
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule.nodes[i] = mid - half * x;
    rule.nodes[n - 1 - i] = mid + half * x;
    rule.weights[i] = half * w;
    rule.weights[n - 1 - i] = half * w;
  }
  return rule;
}

QuadratureRule composite_gauss_legendre(double a, double b, std::size_t nodes_per_unit,
                                        std::size_t panel_order) {
  if (!(b > a)) throw std::invalid_argument("composite_gauss_legendre: require a < b");
  if (panel_order == 0 || nodes_per_unit == 0) {
    throw std::invalid_argument("composite_gauss_legendre: orders must be positive");
  }
  const double needed = static_cast<double>(nodes_per_unit) * (b - a);
  std::size_t panels = static_cast<std::size_t>(std::ceil(needed / static_cast<double>(panel_order) - 1e-12));
  if (panels == 0) panels = 1;
  const QuadratureRule ref = gauss_legendre(panel_order, 0.0, 1.0);
  QuadratureRule rule;
  rule.nodes.reserve(panels * panel_order);
  rule.weights.reserve(panels * panel_order);
  const double h = (b - a) / static_cast<double>(panels);
  for (std::size_t p = 0; p < panels; ++p) {
    const double left = a + h * static_cast<double>(p);
    for (std::size_t q = 0; q < panel_order; ++q) {
      rule.nodes.push_back(left + h * ref.nodes[q]);
      rule.weights.push_back(h * ref.weights[q]);
    }
  }
  return rule;
}

QuadratureRule gauss_laguerre(std::size_t order, double alpha) {
  if (order == 0) throw std::invalid_argument("gauss_laguerre: order must be positive");
  if (!(alpha > -1.0)) throw std::invalid_argument("gauss_laguerre: alpha must exceed -1");
  const auto n = static_cast<Eigen::Index>(order);
  Eigen::VectorXd diag(n);
  Eigen::VectorXd sub(n > 1 ? n - 1 : 1);
  for (Eigen::Index i = 0; i < n; ++i) {
    diag(i) = 2.0 * static_cast<double>(i) + alpha + 1.0;
    if (i + 1 < n) {
      const double k = static_cast<double>(i + 1);
      sub(i) = std::sqrt(k * (k + alpha));
    }
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver;
  solver.computeFromTridiagonal(diag, sub.head(n > 1 ? n - 1 : 0), Eigen::ComputeEigenvectors);
  if (solver.info() != Eigen::Success) throw std::runtime_error("gauss_laguerre: eigen solver failed");
  const double mu0 = std::tgamma(alpha + 1.0);
  QuadratureRule rule;
  rule.nodes.resize(order);
  rule.weights.resize(order);
  for (Eigen::Index i = 0; i < n; ++i) {
    rule.nodes[static_cast<std::size_t>(i)] = solver.eigenvalues()(i);
    const double v0 = solver.eigenvectors()(0, i);
    rule.weights[static_cast<std::size_t>(i)] = mu0 * v0 * v0;
  }
  return rule;
}

}  // namespace ugmt
