#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ugmt/box.hpp"
#include "ugmt/configuration.hpp"
#include "ugmt/outer_function.hpp"
#include "ugmt/smooth_function.hpp"

namespace ugmt {

/// f*(gamma) = sum over points of f.
double eval_star(const SmoothFunction& f, const Configuration& gamma);
double eval_star(const SmoothFunction& f, std::span<const double> coords);

/// Phi(f_1*, ..., f_l*) together with the symbolic partials of Phi.
struct CompositeComponent {
  OuterFunction outer;
  std::vector<SmoothFunction> inners;
  std::vector<OuterFunction> d1;  // d Phi / d u_i
};

/// coef * prod over points of (1 + f(x)), the exponential cylinder class.
struct ProductComponent {
  double coef = 1.0;
  SmoothFunction f;
};

/// A finite sum of composite and product components on configurations in R^n.
///
/// Evaluators accept either a Configuration or a flat coordinate array
/// (k * n values), the latter being what the k-particle grid code uses.
class CylinderFunction {
 public:
  CylinderFunction() = default;

  static CylinderFunction constant(double c, std::size_t dim);
  static CylinderFunction composite(OuterFunction outer, std::vector<SmoothFunction> inners);
  /// F = f*.
  static CylinderFunction star(const SmoothFunction& f);
  /// F = coef * prod (1 + f(x)); requires -1 < f, checked through sup |f| < 1.
  static CylinderFunction exponential(const SmoothFunction& f, double coef = 1.0);

  CylinderFunction operator+(const CylinderFunction& other) const;
  CylinderFunction scaled(double factor) const;

  std::size_t dim() const { return dim_; }
  const std::vector<CompositeComponent>& composites() const { return composites_; }
  const std::vector<ProductComponent>& products() const { return products_; }
  /// True when F has no composite or product components.
  bool is_constant() const { return composites_.empty() && products_.empty(); }

  double value(const Configuration& gamma) const { return value(gamma.coords()); }
  double value(std::span<const double> coords) const;
  /// Gradient at every point: out[i*n + d] = d F / d x_i^d.
  void gradient(std::span<const double> coords, std::span<double> out) const;
  std::vector<double> gradient(const Configuration& gamma) const;

  /// Upper bound for sup |F| (infinite for unbounded outer functions).
  double sup_abs() const;
  /// Hull of the supports on which F depends; empty for constants.
  std::optional<BoxDomain> locality() const;

  double constant_term() const { return constant_; }

 private:
  std::size_t dim_ = 0;
  double constant_ = 0.0;
  std::vector<CompositeComponent> composites_;
  std::vector<ProductComponent> products_;
};

/// Squared tangent norm of the gradient, sum over points of |grad_x F|^2.
double gradient_norm_sq(const CylinderFunction& F, std::span<const double> coords);

struct FieldTerm {
  CylinderFunction coef;
  SmoothVectorField field;
};

/// V(gamma, x) = psi(|U|^2) U(gamma, x) with U = sum_i F_i(gamma) v_i(x).
/// psi = 1 (none), 1/(1 + eps s) (soft) or 1/sqrt(delta + s) (hard).
class CylinderVectorField {
 public:
  enum class Normalization { none, soft, hard };

  CylinderVectorField() = default;
  explicit CylinderVectorField(std::vector<FieldTerm> terms);
  static CylinderVectorField single(const SmoothVectorField& v);
  /// scale * grad F written as a cylinder vector field. Composite
  /// components contribute (d_i Phi)(f*) grad f_i; exponential components
  /// contribute F_j grad log(1 + f_j).
  static CylinderVectorField gradient_field(const CylinderFunction& F, double scale = 1.0);

  std::size_t dim() const { return dim_; }
  const std::vector<FieldTerm>& terms() const { return terms_; }
  Normalization normalization() const { return norm_; }
  double normalization_parameter() const { return param_; }

  CylinderVectorField with_soft_normalization(double eps) const;
  CylinderVectorField with_hard_normalization(double delta) const;

  /// Values at the points of gamma: out[i*n + d].
  void at_points(std::span<const double> coords, std::span<double> out) const;
  std::vector<double> at_points(const Configuration& gamma) const;
  /// V(gamma, x) at an arbitrary location x.
  void value(std::span<const double> coords, std::span<const double> x, std::span<double> out) const;

  /// Gram-form evaluation psi^2 sum_ij F_i F_j int <v_i, v_j> d gamma.
  double gram_norm_sq(std::span<const double> coords) const;
  /// Divergence sum_i <grad F_i, v_i> + F_i (div v_i)*, with the product
  /// rule applied to the normalization factor. Requires every v_i to be
  /// tangential on `window` (see SmoothVectorField::tangential_on).
  double divergence(std::span<const double> coords, const BoxDomain& window) const;

  BoxDomain support() const;
  bool tangential_on(const BoxDomain& window) const;

 private:
  // Unnormalized quantities shared by the evaluators.
  void coefficients(std::span<const double> coords, std::vector<double>& F) const;
  double psi(double s) const;
  double psi_prime(double s) const;

  std::size_t dim_ = 0;
  std::vector<FieldTerm> terms_;
  Normalization norm_ = Normalization::none;
  double param_ = 0.0;
};

/// Gradient of F at the points of gamma (tangent vector).
std::vector<double> gradient(const CylinderFunction& F, const Configuration& gamma);
/// Divergence of V at gamma; throws std::domain_error when a field does not
/// vanish (or is not tangential) at the boundary of gamma's window.
double divergence(const CylinderVectorField& V, const Configuration& gamma);
/// Squared tangent norm |V|^2(gamma) = sum over points of |V(gamma, x)|^2.
double tangent_norm(const CylinderVectorField& V, const Configuration& gamma);
/// <V, W>(gamma) = sum over points of <V(gamma, x), W(gamma, x)>.
double tangent_inner(const CylinderVectorField& V, const CylinderVectorField& W, const Configuration& gamma);
/// <grad F, V>(gamma).
double directional_derivative(const CylinderFunction& F, const CylinderVectorField& V, const Configuration& gamma);
/// V / (1 + eps |V|^2).
CylinderVectorField normalize_field(const CylinderVectorField& V, double eps);

}  // namespace ugmt
