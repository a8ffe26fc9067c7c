#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace ugmt {

/// Axis-aligned closed box [lower, upper] in R^n, used both as base domain
/// and as the exhaustion element Q_r.
class BoxDomain {
 public:
  BoxDomain() = default;
  BoxDomain(std::vector<double> lower, std::vector<double> upper);

  /// The unit cube [0,1]^n.
  static BoxDomain unit(std::size_t dim);
  /// The centered cube [-r, r]^n.
  static BoxDomain centered(std::size_t dim, double r);

  std::size_t dim() const { return lower_.size(); }
  const std::vector<double>& lower() const { return lower_; }
  const std::vector<double>& upper() const { return upper_; }
  double lower(std::size_t i) const { return lower_[i]; }
  double upper(std::size_t i) const { return upper_[i]; }
  double length(std::size_t i) const { return upper_[i] - lower_[i]; }
  double volume() const { return volume_; }
  double diameter() const;

  bool contains(std::span<const double> x) const;
  /// True when x lies in the open interior.
  bool contains_interior(std::span<const double> x) const;
  /// True when `other` is a subset of this box.
  bool contains_box(const BoxDomain& other) const;
  bool interiors_disjoint(const BoxDomain& other) const;
  /// Intersection; returns false through `ok` when the interiors do not meet.
  BoxDomain intersect(const BoxDomain& other, bool* ok = nullptr) const;
  BoxDomain hull(const BoxDomain& other) const;

  bool operator==(const BoxDomain& other) const = default;

  std::string to_string() const;

 private:
  std::vector<double> lower_;
  std::vector<double> upper_;
  double volume_ = 0.0;
};

/// Volume of the unit ball in R^m, alpha(m) = pi^{m/2} / Gamma(m/2 + 1).
double unit_ball_volume(double m);

/// Spherical Hausdorff normalization c(m) = alpha(m) / 2^m, so that the
/// m-dimensional measure of a unit m-cube is 1 and c(0) = 1.
double hausdorff_constant(double m);

}  // namespace ugmt
