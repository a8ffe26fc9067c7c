#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "ugmt/box.hpp"
#include "ugmt/rng.hpp"

namespace ugmt {

/// A finite point pattern with multiplicity one inside a box window.
///
/// Points are stored as a flat coordinate array (k * n entries) in
/// lexicographic order, so two configurations holding the same points
/// compare equal regardless of how they were built.
class Configuration {
 public:
  Configuration() = default;
  /// Empty configuration on `window`.
  explicit Configuration(BoxDomain window);
  /// Validates that every point lies in the window and that no point is
  /// repeated; throws std::invalid_argument otherwise.
  Configuration(BoxDomain window, std::vector<double> coords);

  static Configuration from_points(BoxDomain window, const std::vector<std::vector<double>>& points);

  const BoxDomain& window() const { return window_; }
  std::size_t dim() const { return window_.dim(); }
  std::size_t count() const { return dim() == 0 ? 0 : coords_.size() / dim(); }
  bool empty() const { return coords_.empty(); }
  std::span<const double> point(std::size_t i) const { return {coords_.data() + i * dim(), dim()}; }
  const std::vector<double>& coords() const { return coords_; }

  /// Number of points inside `region`.
  std::size_t count_in(const BoxDomain& region) const;

  bool operator==(const Configuration& other) const = default;

  /// One-line record `n k x1_1 .. x1_n | x2_1 .. x2_n | ...`.
  std::string to_record() const;
  /// Parses a record produced by to_record; the window is not part of the
  /// record and must be supplied.
  static Configuration from_record(const std::string& record, const BoxDomain& window);

 private:
  BoxDomain window_;
  std::vector<double> coords_;
};

/// Poisson configuration with Lebesgue intensity on `window`, drawn from
/// the stream (seed, stream).
Configuration sample_poisson(const BoxDomain& window, std::uint64_t seed, std::uint64_t stream = 0);
Configuration sample_poisson(const BoxDomain& window, RandomStream& rng);
/// k i.i.d. uniform points on `window` (the k-th stratum of the Poisson law).
Configuration sample_uniform(const BoxDomain& window, std::size_t k, RandomStream& rng);

/// gamma restricted to B, with window B.
Configuration restrict(const Configuration& gamma, const BoxDomain& B);
/// Superposition of configurations on boxes with disjoint interiors; the
/// window of the result is the hull of both windows.
Configuration add(const Configuration& gamma, const Configuration& eta);

/// L2-transportation distance within a k-particle stratum: the minimum over
/// relabelings of the Euclidean distance in R^{nk}. Infinite when counts
/// differ. Solved by the Hungarian algorithm; at most 12 points.
double quotient_distance(const Configuration& gamma, const Configuration& eta);

/// Minimum-cost perfect matching of a square cost matrix (row-major);
/// returns the column assigned to each row.
std::vector<std::size_t> hungarian_assignment(std::span<const double> cost, std::size_t k);

}  // namespace ugmt
