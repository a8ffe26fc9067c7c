#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>

#include "ugmt/box.hpp"
#include "ugmt/configuration.hpp"
#include "ugmt/cylinder.hpp"

namespace ugmt {

/// Count filter k_min <= gamma(region) <= k_max attached to a level set.
struct CountFilter {
  BoxDomain region;
  std::size_t k_min = 0;
  std::size_t k_max = 0;
  bool accepts(std::size_t count) const { return count >= k_min && count <= k_max; }
};

/// Membership description of a subset of configuration space.
///
/// Kinds:
///  - empty / full;
///  - predicate: an arbitrary membership oracle;
///  - count_at_least: {gamma(region) >= threshold};
///  - level_set: {F > t} (strict) or {F >= t}, optionally intersected with a
///    count filter.
/// Any kind may be complemented. The optional locality box is a declared
/// region outside of which membership does not depend on the configuration.
class SetSpec {
 public:
  enum class Kind { empty, full, predicate, count_at_least, level_set };
  using Membership = std::function<bool(const Configuration&)>;

  SetSpec() = default;

  static SetSpec empty();
  static SetSpec full();
  static SetSpec predicate(Membership membership, std::optional<BoxDomain> locality, std::string name = "predicate");
  static SetSpec count_at_least(BoxDomain region, std::size_t threshold);
  static SetSpec level_set(CylinderFunction F, double t, bool strict = true);

  SetSpec with_count_filter(BoxDomain region, std::size_t k_min, std::size_t k_max) const;
  SetSpec complement() const;

  Kind kind() const { return kind_; }
  bool negated() const { return negated_; }
  const std::optional<BoxDomain>& locality() const { return locality_; }
  const std::string& name() const { return name_; }

  // Level-set accessors.
  const CylinderFunction& function() const { return F_; }
  double level() const { return t_; }
  bool strict() const { return strict_; }
  const std::optional<CountFilter>& count_filter() const { return filter_; }
  // Count accessors.
  const BoxDomain& region() const { return region_; }
  std::size_t threshold() const { return threshold_; }

  bool contains(const Configuration& gamma) const;
  /// Membership of the configuration with the given flat coordinates.
  bool contains(std::span<const double> coords, const BoxDomain& window) const;

  std::string describe() const;

 private:
  bool contains_positive(const Configuration& gamma) const;

  Kind kind_ = Kind::empty;
  bool negated_ = false;
  std::optional<BoxDomain> locality_;
  std::string name_ = "empty";
  Membership membership_;
  BoxDomain region_;
  std::size_t threshold_ = 0;
  CylinderFunction F_;
  double t_ = 0.0;
  bool strict_ = true;
  std::optional<CountFilter> filter_;
};

/// Section A_{eta,B} = {gamma in Upsilon(B): gamma + eta in A}. Requires eta
/// to have no point in B. When the locality of A lies inside B the section
/// does not depend on eta and A itself (with its locality) is returned.
SetSpec section_set(const SetSpec& A, const Configuration& eta, const BoxDomain& B);

/// Spot check of the declared locality: draws `pairs` Poisson configurations
/// on `window`, resamples the part outside the locality box, and returns the
/// number of pairs whose membership differs.
std::size_t locality_violations(const SetSpec& A, const BoxDomain& window, std::size_t pairs, std::uint64_t seed);

}  // namespace ugmt
