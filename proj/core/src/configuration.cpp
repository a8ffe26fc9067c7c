#include "ugmt/configuration.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace ugmt {

namespace {

constexpr std::size_t kMaxAssignment = 12;
constexpr int kCollisionRetries = 10;

// Sorts points lexicographically; returns false if two points coincide.
bool canonicalize(std::vector<double>& coords, std::size_t n) {
  const std::size_t k = coords.size() / n;
  std::vector<std::size_t> order(k);
  std::iota(order.begin(), order.end(), 0);
  auto less = [&](std::size_t a, std::size_t b) {
    return std::lexicographical_compare(coords.begin() + a * n, coords.begin() + (a + 1) * n, coords.begin() + b * n,
                                        coords.begin() + (b + 1) * n);
  };
  std::sort(order.begin(), order.end(), less);
  std::vector<double> sorted;
  sorted.reserve(coords.size());
  for (std::size_t i : order) sorted.insert(sorted.end(), coords.begin() + i * n, coords.begin() + (i + 1) * n);
  coords = std::move(sorted);
  for (std::size_t i = 1; i < k; ++i) {
    if (std::equal(coords.begin() + (i - 1) * n, coords.begin() + i * n, coords.begin() + i * n)) return false;
  }
  return true;
}

}  // namespace

Configuration::Configuration(BoxDomain window) : window_(std::move(window)) {}

Configuration::Configuration(BoxDomain window, std::vector<double> coords)
    : window_(std::move(window)), coords_(std::move(coords)) {
  const std::size_t n = window_.dim();
  if (n == 0) throw std::invalid_argument("Configuration: window has no dimension");
  if (coords_.size() % n != 0) throw std::invalid_argument("Configuration: coordinate count not a multiple of dim");
  for (std::size_t i = 0; i < count(); ++i) {
    if (!window_.contains(point(i))) throw std::invalid_argument("Configuration: point outside window");
  }
  if (!canonicalize(coords_, n)) throw std::invalid_argument("Configuration: repeated point");
}

Configuration Configuration::from_points(BoxDomain window, const std::vector<std::vector<double>>& points) {
  std::vector<double> c;
  for (const auto& p : points) {
    if (p.size() != window.dim()) throw std::invalid_argument("Configuration: point dimension mismatch");
    c.insert(c.end(), p.begin(), p.end());
  }
  return Configuration(std::move(window), std::move(c));
}

std::size_t Configuration::count_in(const BoxDomain& region) const {
  std::size_t c = 0;
  for (std::size_t i = 0; i < count(); ++i) c += region.contains(point(i)) ? 1 : 0;
  return c;
}

std::string Configuration::to_record() const {
  std::ostringstream os;
  os << std::setprecision(17) << dim() << ' ' << count();
  for (std::size_t i = 0; i < count(); ++i) {
    if (i > 0) os << " |";
    for (double v : point(i)) os << ' ' << v;
  }
  return os.str();
}

Configuration Configuration::from_record(const std::string& record, const BoxDomain& window) {
  std::istringstream is(record);
  std::size_t n = 0, k = 0;
  if (!(is >> n >> k)) throw std::invalid_argument("Configuration record: missing header");
  if (n != window.dim()) throw std::invalid_argument("Configuration record: dimension does not match window");
  std::vector<double> c;
  c.reserve(n * k);
  for (std::size_t i = 0; i < k; ++i) {
    if (i > 0) {
      std::string bar;
      if (!(is >> bar) || bar != "|") throw std::invalid_argument("Configuration record: expected '|'");
    }
    for (std::size_t d = 0; d < n; ++d) {
      double v;
      if (!(is >> v)) throw std::invalid_argument("Configuration record: truncated coordinates");
      c.push_back(v);
    }
  }
  std::string extra;
  if (is >> extra) throw std::invalid_argument("Configuration record: trailing data");
  return Configuration(window, std::move(c));
}

Configuration sample_uniform(const BoxDomain& window, std::size_t k, RandomStream& rng) {
  const std::size_t n = window.dim();
  for (int attempt = 0; attempt <= kCollisionRetries; ++attempt) {
    std::vector<double> c(n * k);
    for (std::size_t i = 0; i < k; ++i) {
      for (std::size_t d = 0; d < n; ++d) c[i * n + d] = rng.uniform(window.lower(d), window.upper(d));
    }
    if (canonicalize(c, n)) {
      return Configuration(window, std::move(c));
    }
  }
  throw std::runtime_error("sample_uniform: repeated exact collisions");
}

Configuration sample_poisson(const BoxDomain& window, RandomStream& rng) {
  const auto k = static_cast<std::size_t>(rng.poisson(window.volume()));
  return sample_uniform(window, k, rng);
}

Configuration sample_poisson(const BoxDomain& window, std::uint64_t seed, std::uint64_t stream) {
  RandomStream rng(seed, stream);
  return sample_poisson(window, rng);
}

Configuration restrict(const Configuration& gamma, const BoxDomain& B) {
  if (B.dim() != gamma.dim()) throw std::invalid_argument("restrict: dimension mismatch");
  std::vector<double> c;
  for (std::size_t i = 0; i < gamma.count(); ++i) {
    const auto p = gamma.point(i);
    if (B.contains(p)) c.insert(c.end(), p.begin(), p.end());
  }
  return Configuration(B, std::move(c));
}

Configuration add(const Configuration& gamma, const Configuration& eta) {
  if (gamma.dim() != eta.dim()) throw std::invalid_argument("add: dimension mismatch");
  if (!gamma.window().interiors_disjoint(eta.window())) {
    throw std::invalid_argument("add: windows must have disjoint interiors");
  }
  std::vector<double> c = gamma.coords();
  c.insert(c.end(), eta.coords().begin(), eta.coords().end());
  try {
    return Configuration(gamma.window().hull(eta.window()), std::move(c));
  } catch (const std::invalid_argument&) {
    throw std::invalid_argument("add: point collision violates multiplicity one");
  }
}

std::vector<std::size_t> hungarian_assignment(std::span<const double> cost, std::size_t k) {
  if (cost.size() != k * k) throw std::invalid_argument("hungarian_assignment: cost matrix must be k x k");
  // Potentials formulation (rows 1..k, columns 1..k, index 0 is a sentinel).
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> u(k + 1, 0.0), v(k + 1, 0.0);
  std::vector<std::size_t> p(k + 1, 0), way(k + 1, 0);
  for (std::size_t i = 1; i <= k; ++i) {
    p[0] = i;
    std::size_t j0 = 0;
    std::vector<double> minv(k + 1, inf);
    std::vector<char> used(k + 1, 0);
    do {
      used[j0] = 1;
      const std::size_t i0 = p[j0];
      double delta = inf;
      std::size_t j1 = 0;
      for (std::size_t j = 1; j <= k; ++j) {
        if (used[j]) continue;
        const double cur = cost[(i0 - 1) * k + (j - 1)] - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (std::size_t j = 0; j <= k; ++j) {
        if (used[j]) {
          u[p[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (p[j0] != 0);
    do {
      const std::size_t j1 = way[j0];
      p[j0] = p[j1];
      j0 = j1;
    } while (j0 != 0);
  }
  std::vector<std::size_t> assignment(k);
  for (std::size_t j = 1; j <= k; ++j) assignment[p[j] - 1] = j - 1;
  return assignment;
}

double quotient_distance(const Configuration& gamma, const Configuration& eta) {
  if (gamma.dim() != eta.dim()) throw std::invalid_argument("quotient_distance: dimension mismatch");
  const std::size_t k = gamma.count();
  if (k != eta.count()) return std::numeric_limits<double>::infinity();
  if (k == 0) return 0.0;
  if (k > kMaxAssignment) throw std::invalid_argument("quotient_distance: at most 12 points supported");
  const std::size_t n = gamma.dim();
  std::vector<double> cost(k * k);
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = 0; j < k; ++j) {
      double s = 0.0;
      for (std::size_t d = 0; d < n; ++d) {
        const double z = gamma.point(i)[d] - eta.point(j)[d];
        s += z * z;
      }
      cost[i * k + j] = s;
    }
  }
  const auto assignment = hungarian_assignment(cost, k);
  // Sum the chosen entries in row order so equal matchings give equal sums.
  double total = 0.0;
  for (std::size_t i = 0; i < k; ++i) total += cost[i * k + assignment[i]];
  return std::sqrt(total);
}

}  // namespace ugmt
