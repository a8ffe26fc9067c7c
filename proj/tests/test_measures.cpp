#include <gtest/gtest.h>

#include <cmath>

#include "ugmt/bv.hpp"
#include "ugmt/configuration.hpp"
#include "ugmt/hausdorff.hpp"
#include "ugmt/poisson_mc.hpp"
#include "ugmt/quadrature.hpp"
#include "ugmt/set_spec.hpp"

using namespace ugmt;

namespace {

const BoxDomain I = BoxDomain::unit(1);
const BoxDomain I2 = BoxDomain::unit(2);

MCPlan plan(const BoxDomain& W, std::size_t n, std::uint64_t seed) {
  MCPlan p;
  p.window = W;
  p.n_samples = n;
  p.seed = seed;
  return p;
}

SetSpec half_space() {
  return SetSpec::level_set(CylinderFunction::star(SmoothFunction::cosine_mode(I, {1}, -1.0)), 0.0)
      .with_count_filter(I, 1, 1);
}

double poisson_tail(double lambda, std::size_t k) {
  double s = 0.0;
  for (std::size_t j = 0; j < k; ++j) s += poisson_pmf(lambda, j);
  return 1.0 - s;
}

}  // namespace

TEST(PoissonLaw, PmfSumsToOneAndTruncationCoversTail) {
  double s = 0.0;
  for (std::size_t k = 0; k <= poisson_truncation(4.0); ++k) s += poisson_pmf(4.0, k);
  EXPECT_NEAR(s, 1.0, 1e-10);
  EXPECT_NEAR(poisson_pmf(2.0, 3), std::exp(-2.0) * 8.0 / 6.0, 1e-15);
}

TEST(MonteCarlo, CampbellMeanOfLinearStatistic) {
  const auto f = SmoothFunction::bump({0.5, 0.5}, 0.4, 0.8);
  const auto est = integrate([&f](const Configuration& g) { return eval_star(f, g); }, plan(I2, 40000, 3));
  const auto rx = composite_gauss_legendre(0.0, 1.0, 64);
  double exact = 0.0;
  for (std::size_t i = 0; i < rx.size(); ++i)
    for (std::size_t j = 0; j < rx.size(); ++j) {
      const double x[2] = {rx.nodes[i], rx.nodes[j]};
      exact += rx.weights[i] * rx.weights[j] * f.value(x);
    }
  EXPECT_NEAR(est.mean, exact, 4.0 * est.std_err);
}

TEST(MonteCarlo, MeasureOfCountSetMatchesPoissonTail) {
  const auto A = SetSpec::count_at_least(BoxDomain({0.0}, {0.5}), 2);
  const auto est = measure_of_set(A, plan(I, 40000, 4));
  EXPECT_NEAR(est.mean, poisson_tail(0.5, 2), 4.0 * est.std_err);
}

TEST(MonteCarlo, DisintegrationMatchesDirectEstimate) {
  const BoxDomain W({0.0}, {2.0});
  const auto F = CylinderFunction::composite(OuterFunction::tanh(OuterFunction::variable(0)),
                                             {SmoothFunction::bump({1.0}, 0.8, 1.3)});
  auto G = [&F](const Configuration& g) { return F.value(g.coords()); };
  const auto direct = integrate(G, plan(W, 40000, 5));
  const auto nested = integrate_disintegrated(G, BoxDomain({0.0}, {1.0}), BoxDomain({1.0}, {2.0}), plan(W, 40000, 6));
  EXPECT_NEAR(nested.mean, direct.mean, 4.0 * std::hypot(direct.std_err, nested.std_err));
}

TEST(MonteCarlo, StratifiedLevelSetMatchesPlainEstimate) {
  const auto A = SetSpec::level_set(CylinderFunction::star(SmoothFunction::cosine_mode(I, {1})), 0.3);
  auto chi = [&A](const Configuration& g) { return A.contains(g) ? 1.0 : 0.0; };
  const auto strat = integrate_stratified(chi, plan(I, 40000, 7), 6);
  const auto plain = measure_of_set(A, plan(I, 40000, 8));
  EXPECT_NEAR(strat.mean, plain.mean, 4.0 * std::hypot(strat.std_err, plain.std_err));
}

TEST(MonteCarlo, EstimatesAreReproducible) {
  const auto A = SetSpec::count_at_least(I, 1);
  EXPECT_EQ(measure_of_set(A, plan(I, 1000, 11)).mean, measure_of_set(A, plan(I, 1000, 11)).mean);
  EXPECT_NE(measure_of_set(A, plan(I, 1000, 11)).mean, measure_of_set(A, plan(I, 1000, 12)).mean);
}

TEST(Hausdorff, SegmentInUnitSquare) {
  auto g = level_function(CylinderFunction::star(SmoothFunction::cosine_mode(I2, {1, 0}, -1.0)), 1);
  // {-cos(pi x1) = 0} is the segment x1 = 1/2.
  const auto est = hausdorff_level_set(g, I2, 0.0, 0.0, 200000, 3);
  EXPECT_NEAR(est.value, 1.0, 3.0 * est.error_bar + 1e-3);
}

TEST(Hausdorff, AntiDiagonalInUnitSquare) {
  LevelFunction g;
  g.dim = 2;
  g.value = [](std::span<const double> x) { return x[0] + x[1]; };
  g.gradient = [](std::span<const double>, std::span<double> out) { out[0] = out[1] = 1.0; };
  const auto est = hausdorff_level_set(g, I2, 1.0, 0.0, 200000, 4);
  EXPECT_NEAR(est.value, std::sqrt(2.0), 3.0 * est.error_bar + 2e-3);
}

TEST(Hausdorff, CountingInOneDimension) {
  auto g = level_function(CylinderFunction::star(SmoothFunction::cosine_mode(I, {3})), 1);
  EXPECT_EQ(hausdorff_count_1d(g, I, 0.0).value, 3.0);
}

TEST(Hausdorff, CoveringBoundOfSegment) {
  std::vector<double> pts;
  for (int i = 0; i <= 20000; ++i) {
    pts.push_back(0.5);
    pts.push_back(i / 20000.0);
  }
  const auto est = hausdorff_covering_upper(pts, 2, 1.0, 0.01);
  EXPECT_GE(est.value, 1.0 - 1e-9);
  EXPECT_LE(est.value, 1.2);
}

TEST(CodimensionMeasure, HalfSpaceBoundaryPoint) {
  const auto r = rho_m_on_box(half_space(), 1, I, plan(I, 1000, 1));
  ASSERT_GE(r.per_k.size(), 2u);
  EXPECT_EQ(r.per_k[1], 1.0);
  EXPECT_NEAR(r.total, std::exp(-1.0), 1e-12);
}

TEST(CodimensionMeasure, ZeroCodimensionIsPoissonMeasure) {
  const auto A = SetSpec::count_at_least(BoxDomain({0.0}, {0.5}), 2);
  const auto r = rho_m_on_box(A, 0, I, plan(I, 20000, 2));
  EXPECT_NEAR(r.total, poisson_tail(0.5, 2), 4.0 * r.total_err + 1e-12);
}

TEST(CodimensionMeasure, FatSetsHaveInfiniteMeasure) {
  const auto A = SetSpec::count_at_least(BoxDomain({0.0}, {0.5}), 1);
  const auto r = rho_m_on_box(A, 1, I, plan(I, 1000, 3));
  EXPECT_TRUE(std::isinf(r.total));
  EXPECT_FALSE(r.flags.empty());
}

TEST(CodimensionMeasure, LocalizedValuesGrowWithTheWindow) {
  const auto A = SetSpec::level_set(CylinderFunction::star(SmoothFunction::bump({0.5}, 1.2)), 0.3);
  const auto p = plan(BoxDomain::centered(1, 3.0), 20000, 4);
  double prev = 0.0;
  for (double r : {0.5, 1.0, 1.5, 2.0, 3.0}) {
    const double v = rho_m_localized(A, 1, r, 3.0, p).mean;
    EXPECT_GE(v, prev);
    prev = v;
  }
}

TEST(Perimeter, HalfSpaceMassAndFlux) {
  const auto P = perimeter_measure(half_space(), I);
  EXPECT_NEAR(P.total_mass(), std::exp(-1.0), 1e-12);
  const auto V = CylinderVectorField::single(SmoothVectorField::from_components({SmoothFunction::bump({0.45}, 0.3)}));
  const auto g = gauss_green_residual(half_space(), V, P, plan(I, 40000, 5));
  EXPECT_LE(std::abs(g.residual), 4.0 * g.lhs_err);
}

TEST(Perimeter, LevelGridAvoidsEndpoints) {
  const auto grid = level_grid(-1.0, 1.0, 10);
  ASSERT_EQ(grid.size(), 10u);
  for (std::size_t i = 1; i < grid.size(); ++i) EXPECT_GT(grid[i], grid[i - 1]);
  EXPECT_GT(grid.front(), -1.0);
  EXPECT_LT(grid.back(), 1.0);
}

TEST(TotalVariation, HalfSpaceSemigroupLimit) {
  const LiftedHeatOperator op(I, 64);
  const auto s = tv_semigroup(TVTarget::from_indicator(half_space(), op), default_tv_schedule(), plan(I, 5000, 6));
  EXPECT_NEAR(s.value, std::exp(-1.0), 5e-3);
}

TEST(TotalVariation, SmoothUpperBoundDoesNotExceedDirectNorm) {
  const LiftedHeatOperator op(I, 64);
  const auto F = CylinderFunction::star(SmoothFunction::cosine_mode(I, {1}));
  const auto T = TVTarget::from_cylinder(F, op);
  const auto p = plan(I, 20000, 7);
  const auto up = tv_relaxation(T, {1e-3, 2e-3, 5e-3, 1e-2}, p);
  const auto direct = integrate_strata(T.gradient_norm, p);
  EXPECT_LE(up.value, direct.mean * (1.0 + 1e-3) + 3.0 * direct.std_err);
}
