#pragma once

#include <cstddef>
#include <memory>
#include <span>
#include <string>
#include <vector>

namespace ugmt {

/// Closed interval used for range bounds; endpoints may be infinite.
struct Interval {
  double lo = 0.0;
  double hi = 0.0;
};

/// Smooth outer function Phi(u_1, ..., u_l) represented as an expression tree.
///
/// Nodes are constants, coordinates u_i, sums, products, tanh, exp(-a^2) and
/// polynomials p(a). Partial derivatives are again expression trees, so first
/// and second partials are exact. Range bounds use interval arithmetic; a
/// tree whose range is unbounded (for example the identity) reports an
/// infinite sup bound.
class OuterFunction {
 public:
  enum class Op { constant, variable, add, mul, tanh, exp_neg_sq, poly };

  struct Node;

  OuterFunction();  // the constant 0

  static OuterFunction constant(double c);
  static OuterFunction variable(std::size_t index);
  static OuterFunction tanh(const OuterFunction& a);
  /// exp(-a^2).
  static OuterFunction exp_neg_sq(const OuterFunction& a);
  /// coeffs[0] + coeffs[1] a + coeffs[2] a^2 + ...
  static OuterFunction poly(const OuterFunction& a, std::vector<double> coeffs);

  friend OuterFunction operator+(const OuterFunction& a, const OuterFunction& b);
  friend OuterFunction operator*(const OuterFunction& a, const OuterFunction& b);
  friend OuterFunction operator*(double c, const OuterFunction& a) { return constant(c) * a; }

  Op op() const;
  /// Value for constant nodes (0 otherwise).
  double constant_value() const;
  bool is_constant() const { return op() == Op::constant; }
  /// True when the tree is affine in its variables (built only from
  /// constants, variables, sums and constant multiples).
  bool is_affine() const;
  /// 1 + largest variable index appearing in the tree (0 for constants).
  std::size_t arity() const;

  double eval(std::span<const double> u) const;
  /// Symbolic partial derivative with respect to u_index, simplified.
  OuterFunction derivative(std::size_t index) const;
  /// Range of the tree for arguments in the given intervals.
  Interval range(std::span<const Interval> args) const;
  /// sup |Phi| over all of R^l (may be infinite).
  double sup_abs() const;

  /// JSON descriptor, e.g. {"op":"tanh","args":[{"op":"var","index":0}]}.
  std::string to_json() const;
  static OuterFunction from_json(const std::string& text);

  const std::shared_ptr<const Node>& node() const { return node_; }

 private:
  explicit OuterFunction(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  std::shared_ptr<const Node> node_;
};

struct OuterFunction::Node {
  Op op = Op::constant;
  double value = 0.0;
  std::size_t index = 0;
  std::vector<OuterFunction> args;
  std::vector<double> coeffs;
};

}  // namespace ugmt
