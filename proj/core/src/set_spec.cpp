#include "ugmt/set_spec.hpp"

#include <sstream>
#include <stdexcept>

namespace ugmt {

SetSpec SetSpec::empty() { return SetSpec(); }

SetSpec SetSpec::full() {
  SetSpec s;
  s.kind_ = Kind::full;
  s.name_ = "full";
  return s;
}

SetSpec SetSpec::predicate(Membership membership, std::optional<BoxDomain> locality, std::string name) {
  if (!membership) throw std::invalid_argument("SetSpec::predicate: empty membership oracle");
  SetSpec s;
  s.kind_ = Kind::predicate;
  s.membership_ = std::move(membership);
  s.locality_ = std::move(locality);
  s.name_ = std::move(name);
  return s;
}

SetSpec SetSpec::count_at_least(BoxDomain region, std::size_t threshold) {
  if (threshold == 0) return full();
  SetSpec s;
  s.kind_ = Kind::count_at_least;
  s.locality_ = region;
  s.region_ = std::move(region);
  s.threshold_ = threshold;
  s.name_ = "count_at_least";
  return s;
}

SetSpec SetSpec::level_set(CylinderFunction F, double t, bool strict) {
  SetSpec s;
  s.kind_ = Kind::level_set;
  s.locality_ = F.locality();
  s.F_ = std::move(F);
  s.t_ = t;
  s.strict_ = strict;
  s.name_ = "level_set";
  if (!s.locality_) {
    // A constant function: the set is empty or full.
    const bool in = strict ? s.F_.constant_term() > t : s.F_.constant_term() >= t;
    return in ? full() : empty();
  }
  return s;
}

SetSpec SetSpec::with_count_filter(BoxDomain region, std::size_t k_min, std::size_t k_max) const {
  if (kind_ != Kind::level_set) throw std::logic_error("SetSpec: count filters apply to level sets only");
  if (k_min > k_max) throw std::invalid_argument("SetSpec: count filter requires k_min <= k_max");
  SetSpec s = *this;
  s.locality_ = s.locality_ ? s.locality_->hull(region) : region;
  s.filter_ = CountFilter{std::move(region), k_min, k_max};
  return s;
}

SetSpec SetSpec::complement() const {
  SetSpec s = *this;
  if (kind_ == Kind::empty) return full();
  if (kind_ == Kind::full) return empty();
  s.negated_ = !negated_;
  return s;
}

bool SetSpec::contains_positive(const Configuration& gamma) const {
  switch (kind_) {
    case Kind::empty:
      return false;
    case Kind::full:
      return true;
    case Kind::predicate:
      return membership_(gamma);
    case Kind::count_at_least:
      return gamma.count_in(region_) >= threshold_;
    case Kind::level_set: {
      if (filter_ && !filter_->accepts(gamma.count_in(filter_->region))) return false;
      const double v = F_.value(gamma);
      return strict_ ? v > t_ : v >= t_;
    }
  }
  return false;
}

bool SetSpec::contains(const Configuration& gamma) const { return contains_positive(gamma) != negated_; }

bool SetSpec::contains(std::span<const double> coords, const BoxDomain& window) const {
  if (kind_ == Kind::level_set) {
    bool in = true;
    if (filter_) {
      const std::size_t n = window.dim();
      std::size_t c = 0;
      for (std::size_t i = 0; i * n < coords.size(); ++i) c += filter_->region.contains(coords.subspan(i * n, n));
      in = filter_->accepts(c);
    }
    if (in) {
      const double v = F_.value(coords);
      in = strict_ ? v > t_ : v >= t_;
    }
    return in != negated_;
  }
  return contains(Configuration(window, std::vector<double>(coords.begin(), coords.end())));
}

std::string SetSpec::describe() const {
  std::ostringstream os;
  if (negated_) os << "not ";
  switch (kind_) {
    case Kind::empty: os << "empty"; break;
    case Kind::full: os << "full"; break;
    case Kind::predicate: os << name_; break;
    case Kind::count_at_least: os << "count(" << region_.to_string() << ") >= " << threshold_; break;
    case Kind::level_set:
      os << "F " << (strict_ ? ">" : ">=") << ' ' << t_;
      if (filter_) os << " with " << filter_->k_min << " <= count(" << filter_->region.to_string() << ") <= " << filter_->k_max;
      break;
  }
  return os.str();
}

namespace {

// gamma -> A(gamma + eta) as a predicate with the given locality.
SetSpec shifted_predicate(const SetSpec& A, const Configuration& eta, const BoxDomain& locality) {
  return SetSpec::predicate(
      [A, eta](const Configuration& gamma) {
        std::vector<double> c = gamma.coords();
        c.insert(c.end(), eta.coords().begin(), eta.coords().end());
        return A.contains(Configuration(gamma.window().hull(eta.window()), std::move(c)));
      },
      locality, "section of " + A.describe());
}

}  // namespace

SetSpec section_set(const SetSpec& A, const Configuration& eta, const BoxDomain& B) {
  if (eta.count_in(B) != 0) throw std::invalid_argument("section_set: eta must have no point in B");
  if (A.kind() == SetSpec::Kind::empty || A.kind() == SetSpec::Kind::full) return A;
  if (A.locality() && B.contains_box(*A.locality())) return A;

  if (A.locality()) {
    bool meets = false;
    const BoxDomain inner = A.locality()->intersect(B, &meets);
    if (!meets) return A.contains(eta) ? SetSpec::full() : SetSpec::empty();
    if (A.kind() == SetSpec::Kind::count_at_least) {
      const std::size_t outside = eta.count_in(A.region());
      SetSpec s = outside >= A.threshold() ? SetSpec::full()
                                           : SetSpec::count_at_least(A.region().intersect(B), A.threshold() - outside);
      return A.negated() ? s.complement() : s;
    }
    return shifted_predicate(A, eta, inner);
  }
  return shifted_predicate(A, eta, B);
}

std::size_t locality_violations(const SetSpec& A, const BoxDomain& window, std::size_t pairs, std::uint64_t seed) {
  if (!A.locality()) return 0;
  const BoxDomain& L = *A.locality();
  std::size_t bad = 0;
  for (std::size_t i = 0; i < pairs; ++i) {
    RandomStream rng(seed, i);
    const Configuration a = sample_poisson(window, rng);
    const Configuration b = sample_poisson(window, rng);
    // Keep the points of a inside L and the points of b outside L.
    std::vector<double> c;
    for (std::size_t p = 0; p < a.count(); ++p) {
      if (L.contains(a.point(p))) c.insert(c.end(), a.point(p).begin(), a.point(p).end());
    }
    for (std::size_t p = 0; p < b.count(); ++p) {
      if (!L.contains(b.point(p))) c.insert(c.end(), b.point(p).begin(), b.point(p).end());
    }
    const Configuration mixed(window, std::move(c));
    if (A.contains(a) != A.contains(mixed)) ++bad;
  }
  return bad;
}

}  // namespace ugmt
