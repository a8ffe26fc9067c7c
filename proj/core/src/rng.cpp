#include "ugmt/rng.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace ugmt {

std::uint64_t RandomStream::poisson(double mean) {
  if (!(mean >= 0.0) || !std::isfinite(mean)) throw std::invalid_argument("poisson: mean must be finite and >= 0");
  std::uint64_t total = 0;
  while (mean > 0.0) {
    const double chunk = std::min(mean, 32.0);
    mean -= chunk;
    const double u = uniform();
    double p = std::exp(-chunk);
    double cdf = p;
    std::uint64_t k = 0;
    while (u >= cdf && k < 100000) {
      ++k;
      p *= chunk / static_cast<double>(k);
      cdf += p;
      if (p == 0.0) break;
    }
    total += k;
  }
  return total;
}

}  // namespace ugmt
