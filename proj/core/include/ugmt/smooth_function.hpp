#pragma once

#include <cstddef>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "ugmt/box.hpp"

namespace ugmt {

class SmoothedTable1D;

/// Upper bounds for sup |f|, sup |grad f| and sup |Laplacian f|.
struct SupBounds {
  double value = 0.0;
  double gradient = 0.0;
  double laplacian = 0.0;
};

enum class FunctionKind { bump, coordinate_bump, constant_on_box, cosine_mode, heat_smoothed, log_one_plus };

class SmoothFunction;

/// One closed-form building block of a SmoothFunction.
struct FunctionTerm {
  FunctionKind kind = FunctionKind::bump;
  std::vector<double> center;  // bump kinds
  double radius = 1.0;         // bump kinds
  double amplitude = 1.0;
  std::size_t axis = 0;        // coordinate_bump
  BoxDomain box;               // constant_on_box, cosine_mode, heat_smoothed (window)
  std::vector<int> modes;      // cosine_mode
  double time = 0.0;           // heat_smoothed
  std::size_t quad_order = 0;  // heat_smoothed tabulation
  std::shared_ptr<const SmoothFunction> base;      // heat_smoothed source, log_one_plus argument
  std::shared_ptr<const SmoothedTable1D> table;    // heat_smoothed values
};

/// A finite sum of closed-form smooth functions on R^n:
///  - bump:            a exp(1 - 1/(1 - |x-c|^2/w^2)) on |x-c| < w, zero outside;
///  - coordinate_bump: a (x_j - c_j) times the unit bump;
///  - constant_on_box: a on the box, zero outside;
///  - cosine_mode:     a prod_d cos(pi m_d (x_d - lo_d)/L_d) on the box, a Neumann
///                     eigenfunction of the box;
///  - heat_smoothed:   T_t g for a one-dimensional window (tabulated);
///  - log_one_plus:    a log(1 + g) for a SmoothFunction g with sup |g| < 1.
/// Gradients, Hessians and Laplacians are exact (tabulated for heat_smoothed).
class SmoothFunction {
 public:
  SmoothFunction() = default;

  static SmoothFunction bump(std::vector<double> center, double radius, double amplitude = 1.0);
  static SmoothFunction coordinate_bump(std::vector<double> center, double radius, std::size_t axis,
                                        double amplitude = 1.0);
  static SmoothFunction constant_on_box(BoxDomain box, double value);
  static SmoothFunction cosine_mode(BoxDomain box, std::vector<int> modes, double amplitude = 1.0);
  /// T_t g on a one-dimensional window with Neumann boundary conditions.
  static SmoothFunction heat_smoothed(const SmoothFunction& g, double t, const BoxDomain& window,
                                      std::size_t quad_order = 128);
  /// log(1 + g); requires sup |g| < 1 so that the logarithm stays smooth.
  static SmoothFunction log_one_plus(const SmoothFunction& g, double amplitude = 1.0);
  /// Reassembles a function from terms taken from other functions of the same dimension.
  static SmoothFunction from_terms(std::size_t dim, std::vector<FunctionTerm> terms);

  SmoothFunction operator+(const SmoothFunction& other) const;
  SmoothFunction scaled(double factor) const;

  std::size_t dim() const { return dim_; }
  bool empty() const { return terms_.empty(); }
  const std::vector<FunctionTerm>& terms() const { return terms_; }

  double value(std::span<const double> x) const;
  void gradient(std::span<const double> x, std::span<double> out) const;
  /// Row-major n x n Hessian.
  void hessian(std::span<const double> x, std::span<double> out) const;
  double laplacian(std::span<const double> x) const;

  /// Bounding box of the support (union over terms).
  BoxDomain support() const;
  /// True when every term is compactly supported inside the open interior of `window`.
  bool supported_in_interior(const BoxDomain& window) const;
  /// True when the normal derivative vanishes on the boundary of `window`:
  /// every term is either compactly supported in the interior or a Neumann
  /// type term (cosine mode, heat-smoothed, constant) living on `window`.
  bool neumann_on(const BoxDomain& window) const;
  SupBounds sup_bounds() const;

 private:
  std::size_t dim_ = 0;
  std::vector<FunctionTerm> terms_;
};

/// A vector field v: R^n -> R^n, either given componentwise or as
/// c * grad f for a SmoothFunction f.
class SmoothVectorField {
 public:
  SmoothVectorField() = default;
  static SmoothVectorField from_components(std::vector<SmoothFunction> components);
  static SmoothVectorField gradient_of(const SmoothFunction& f, double scale = 1.0);

  std::size_t dim() const { return dim_; }
  bool is_gradient() const { return is_gradient_; }
  const std::vector<SmoothFunction>& components() const { return components_; }
  const SmoothFunction& potential() const { return potential_; }
  double scale() const { return scale_; }

  void value(std::span<const double> x, std::span<double> out) const;
  /// Row-major Jacobian J[a*n + b] = d v_a / d x_b.
  void jacobian(std::span<const double> x, std::span<double> out) const;
  /// Euclidean divergence sum_a d v_a / d x_a.
  double divergence(std::span<const double> x) const;

  BoxDomain support() const;
  bool supported_in_interior(const BoxDomain& window) const;
  /// True when v vanishes near the boundary of `window` or is the gradient
  /// of a potential with zero normal derivative there; either way the
  /// boundary term of the divergence theorem on `window` vanishes.
  bool tangential_on(const BoxDomain& window) const;

 private:
  std::size_t dim_ = 0;
  bool is_gradient_ = false;
  std::vector<SmoothFunction> components_;
  SmoothFunction potential_;
  double scale_ = 1.0;
};

}  // namespace ugmt
