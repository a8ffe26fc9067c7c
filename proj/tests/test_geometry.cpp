#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numeric>

#include "ugmt/box.hpp"
#include "ugmt/configuration.hpp"
#include "ugmt/parallel.hpp"
#include "ugmt/rng.hpp"

using namespace ugmt;

TEST(Box, VolumeContainmentAndHull) {
  const BoxDomain a({0.0, 0.0}, {1.0, 2.0});
  const BoxDomain b({0.5, -1.0}, {3.0, 1.0});
  EXPECT_DOUBLE_EQ(a.volume(), 2.0);
  EXPECT_TRUE(a.hull(b).contains_box(a));
  EXPECT_TRUE(a.hull(b).contains_box(b));
  bool ok = false;
  const BoxDomain c = a.intersect(b, &ok);
  EXPECT_TRUE(ok);
  EXPECT_DOUBLE_EQ(c.volume(), 0.5);
  EXPECT_FALSE(a.interiors_disjoint(b));
  EXPECT_TRUE(BoxDomain::centered(2, 1.0).contains_box(BoxDomain::unit(2)));
}

TEST(Box, RejectsDegenerateBounds) { EXPECT_THROW(BoxDomain({1.0}, {0.0}), std::invalid_argument); }

TEST(Box, HausdorffConstantMatchesBallVolume) {
  EXPECT_NEAR(unit_ball_volume(1.0), 2.0, 1e-14);
  EXPECT_NEAR(unit_ball_volume(2.0), M_PI, 1e-14);
  EXPECT_NEAR(unit_ball_volume(0.0), 1.0, 1e-14);
}

TEST(Rng, StreamsAreReproducibleAndIndependentOfOrder) {
  RandomStream a(42, 7), b(42, 7), c(42, 8);
  for (int i = 0; i < 100; ++i) {
    const double x = a.uniform();
    EXPECT_EQ(x, b.uniform());
    EXPECT_GE(x, 0.0);
    EXPECT_LT(x, 1.0);
  }
  EXPECT_NE(RandomStream(42, 7).next_u64(), c.next_u64());
}

TEST(Rng, Mix64FrozenValues) {
  // Reference outputs of the SplitMix64 finalizer.
  EXPECT_EQ(mix64(0), 0xe220a8397b1dcdafULL);
  EXPECT_EQ(mix64(1), 0x910a2dec89025cc1ULL);
}

TEST(Rng, UniformMeanAndVariance) {
  RandomStream r(3, 0);
  const int n = 200000;
  double s = 0.0, s2 = 0.0;
  for (int i = 0; i < n; ++i) {
    const double x = r.uniform();
    s += x;
    s2 += x * x;
  }
  EXPECT_NEAR(s / n, 0.5, 4.0 * std::sqrt(1.0 / 12.0 / n));
  EXPECT_NEAR(s2 / n - (s / n) * (s / n), 1.0 / 12.0, 2e-3);
}

TEST(Parallel, PairwiseSumIsOrderFixedAndAccurate) {
  std::vector<double> v(100001);
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = 1.0 / static_cast<double>(i + 1);
  double ref = 0.0;
  for (std::size_t i = v.size(); i-- > 0;) ref += v[i];
  EXPECT_NEAR(pairwise_sum(v), ref, 1e-12);
  const auto m = parallel_map(1000, [](std::size_t i) { return static_cast<double>(i); });
  EXPECT_DOUBLE_EQ(pairwise_sum(m), 999.0 * 1000.0 / 2.0);
}

TEST(Configuration, CanonicalOrderAndRecordRoundTrip) {
  const BoxDomain W = BoxDomain::unit(2);
  const auto a = Configuration::from_points(W, {{0.7, 0.1}, {0.2, 0.9}});
  const auto b = Configuration::from_points(W, {{0.2, 0.9}, {0.7, 0.1}});
  EXPECT_EQ(a, b);
  EXPECT_EQ(Configuration::from_record(a.to_record(), W), a);
  EXPECT_EQ(a.count_in(BoxDomain({0.0, 0.0}, {0.5, 1.0})), 1u);
}

TEST(Configuration, RejectsPointsOutsideTheWindowAndDuplicates) {
  const BoxDomain W = BoxDomain::unit(1);
  EXPECT_THROW(Configuration(W, {1.5}), std::invalid_argument);
  EXPECT_THROW(Configuration(W, {0.3, 0.3}), std::invalid_argument);
}

TEST(Configuration, SectionInvertsSum) {
  RandomStream rng(12, 0);
  const Configuration g = sample_uniform(BoxDomain({0.0}, {1.0}), 3, rng);
  const Configuration h = sample_uniform(BoxDomain({1.0}, {2.0}), 2, rng);
  EXPECT_EQ(restrict(add(g, h), g.window()).coords(), g.coords());
  EXPECT_EQ(add(g, Configuration(BoxDomain({1.0}, {2.0}))).coords(), g.coords());
}

TEST(Configuration, RestrictAndAddAreInverse) {
  const BoxDomain W({0.0}, {2.0});
  RandomStream rng(11, 0);
  const Configuration g = sample_uniform(W, 9, rng);
  const BoxDomain L({0.0}, {1.0}), R({1.0}, {2.0});
  EXPECT_EQ(add(restrict(g, L), restrict(g, R)), g);
}

TEST(Configuration, PoissonCountHasMeanVolume) {
  const BoxDomain W({0.0, 0.0}, {2.0, 1.5});
  const int n = 20000;
  double s = 0.0;
  for (int i = 0; i < n; ++i) s += static_cast<double>(sample_poisson(W, 5, i).count());
  EXPECT_NEAR(s / n, 3.0, 4.0 * std::sqrt(3.0 / n));
}

TEST(QuotientDistance, TwoPointExample) {
  const BoxDomain W({0.0}, {2.0});
  const auto g = Configuration::from_points(W, {{0.0}, {1.0}});
  const auto e = Configuration::from_points(W, {{0.5}, {1.5}});
  EXPECT_NEAR(quotient_distance(g, e), std::sqrt(0.5), 1e-15);
}

TEST(QuotientDistance, MatchesBruteForceOverPermutations) {
  const BoxDomain W = BoxDomain::unit(2);
  RandomStream rng(5, 0);
  for (std::size_t k = 1; k <= 6; ++k) {
    for (int rep = 0; rep < 50; ++rep) {
      const Configuration a = sample_uniform(W, k, rng), b = sample_uniform(W, k, rng);
      std::vector<std::size_t> p(k);
      std::iota(p.begin(), p.end(), 0);
      double best = 1e300;
      do {
        double s = 0.0;
        for (std::size_t i = 0; i < k; ++i)
          for (std::size_t d = 0; d < 2; ++d) s += std::pow(a.point(i)[d] - b.point(p[i])[d], 2);
        best = std::min(best, s);
      } while (std::next_permutation(p.begin(), p.end()));
      EXPECT_NEAR(quotient_distance(a, b), std::sqrt(best), 1e-12);
    }
  }
}

TEST(QuotientDistance, MetricProperties) {
  const BoxDomain W = BoxDomain::unit(1);
  RandomStream rng(9, 0);
  for (int rep = 0; rep < 200; ++rep) {
    const auto a = sample_uniform(W, 4, rng), b = sample_uniform(W, 4, rng), c = sample_uniform(W, 4, rng);
    EXPECT_EQ(quotient_distance(a, a), 0.0);
    EXPECT_NEAR(quotient_distance(a, b), quotient_distance(b, a), 1e-14);
    EXPECT_LE(quotient_distance(a, c), quotient_distance(a, b) + quotient_distance(b, c) + 1e-12);
  }
}

TEST(QuotientDistance, DifferentCountsAreInfinitelyFar) {
  const BoxDomain W = BoxDomain::unit(1);
  const auto a = Configuration::from_points(W, {{0.1}});
  const auto b = Configuration::from_points(W, {{0.1}, {0.2}});
  EXPECT_TRUE(std::isinf(quotient_distance(a, b)));
}
