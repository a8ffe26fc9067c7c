#pragma once

#include <cstddef>
#include <vector>

namespace ugmt {

struct QuadratureRule {
  std::vector<double> nodes;
  std::vector<double> weights;
  std::size_t size() const { return nodes.size(); }
};

/// Gauss-Legendre rule with `order` nodes on [a, b].
QuadratureRule gauss_legendre(std::size_t order, double a = -1.0, double b = 1.0);

/// Composite Gauss-Legendre rule on [a, b]: equal panels of `panel_order`
/// nodes, with enough panels that the total node count is at least
/// nodes_per_unit * (b - a).
QuadratureRule composite_gauss_legendre(double a, double b, std::size_t nodes_per_unit,
                                        std::size_t panel_order = 16);

/// Generalized Gauss-Laguerre rule for the weight t^alpha e^{-t} on
/// (0, inf), alpha > -1, computed by the Golub-Welsch eigenvalue method.
/// The weights sum to Gamma(alpha + 1).
QuadratureRule gauss_laguerre(std::size_t order, double alpha);

}  // namespace ugmt
