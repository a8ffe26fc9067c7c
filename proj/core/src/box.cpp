#include "ugmt/box.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace ugmt {

BoxDomain::BoxDomain(std::vector<double> lower, std::vector<double> upper)
    : lower_(std::move(lower)), upper_(std::move(upper)) {
  if (lower_.empty() || lower_.size() != upper_.size()) {
    throw std::invalid_argument("BoxDomain: lower/upper must be nonempty and of equal length");
  }
  volume_ = 1.0;
  for (std::size_t i = 0; i < lower_.size(); ++i) {
    if (!(lower_[i] < upper_[i]) || !std::isfinite(lower_[i]) || !std::isfinite(upper_[i])) {
      throw std::invalid_argument("BoxDomain: require finite lower[i] < upper[i]");
    }
    volume_ *= upper_[i] - lower_[i];
  }
}

BoxDomain BoxDomain::unit(std::size_t dim) {
  return BoxDomain(std::vector<double>(dim, 0.0), std::vector<double>(dim, 1.0));
}

BoxDomain BoxDomain::centered(std::size_t dim, double r) {
  return BoxDomain(std::vector<double>(dim, -r), std::vector<double>(dim, r));
}

double BoxDomain::diameter() const {
  double s = 0.0;
  for (std::size_t i = 0; i < dim(); ++i) s += length(i) * length(i);
  return std::sqrt(s);
}

bool BoxDomain::contains(std::span<const double> x) const {
  for (std::size_t i = 0; i < dim(); ++i) {
    if (x[i] < lower_[i] || x[i] > upper_[i]) return false;
  }
  return true;
}

bool BoxDomain::contains_interior(std::span<const double> x) const {
  for (std::size_t i = 0; i < dim(); ++i) {
    if (x[i] <= lower_[i] || x[i] >= upper_[i]) return false;
  }
  return true;
}

bool BoxDomain::contains_box(const BoxDomain& other) const {
  if (other.dim() != dim()) return false;
  for (std::size_t i = 0; i < dim(); ++i) {
    if (other.lower_[i] < lower_[i] || other.upper_[i] > upper_[i]) return false;
  }
  return true;
}

bool BoxDomain::interiors_disjoint(const BoxDomain& other) const {
  for (std::size_t i = 0; i < dim(); ++i) {
    if (std::min(upper_[i], other.upper_[i]) <= std::max(lower_[i], other.lower_[i])) return true;
  }
  return false;
}

BoxDomain BoxDomain::intersect(const BoxDomain& other, bool* ok) const {
  if (other.dim() != dim()) throw std::invalid_argument("BoxDomain::intersect: dimension mismatch");
  if (interiors_disjoint(other)) {
    if (ok != nullptr) {
      *ok = false;
      return *this;
    }
    throw std::invalid_argument("BoxDomain::intersect: empty intersection");
  }
  std::vector<double> lo(dim()), hi(dim());
  for (std::size_t i = 0; i < dim(); ++i) {
    lo[i] = std::max(lower_[i], other.lower_[i]);
    hi[i] = std::min(upper_[i], other.upper_[i]);
  }
  if (ok != nullptr) *ok = true;
  return BoxDomain(std::move(lo), std::move(hi));
}

BoxDomain BoxDomain::hull(const BoxDomain& other) const {
  if (other.dim() != dim()) throw std::invalid_argument("BoxDomain::hull: dimension mismatch");
  std::vector<double> lo(dim()), hi(dim());
  for (std::size_t i = 0; i < dim(); ++i) {
    lo[i] = std::min(lower_[i], other.lower_[i]);
    hi[i] = std::max(upper_[i], other.upper_[i]);
  }
  return BoxDomain(std::move(lo), std::move(hi));
}

std::string BoxDomain::to_string() const {
  std::ostringstream os;
  os.precision(17);
  for (std::size_t i = 0; i < dim(); ++i) {
    if (i) os << " x ";
    os << '[' << lower_[i] << ", " << upper_[i] << ']';
  }
  return os.str();
}

double unit_ball_volume(double m) {
  return std::pow(std::numbers::pi, m / 2.0) / std::tgamma(m / 2.0 + 1.0);
}

double hausdorff_constant(double m) { return unit_ball_volume(m) / std::pow(2.0, m); }

}  // namespace ugmt
