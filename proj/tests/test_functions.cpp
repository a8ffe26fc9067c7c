#include <gtest/gtest.h>

#include <cmath>

#include "ugmt/configuration.hpp"
#include "ugmt/cylinder.hpp"
#include "ugmt/descriptors.hpp"
#include "ugmt/outer_function.hpp"
#include "ugmt/rng.hpp"
#include "ugmt/set_spec.hpp"
#include "ugmt/smooth_function.hpp"

using namespace ugmt;

namespace {

const BoxDomain I = BoxDomain::unit(1);
const BoxDomain I2 = BoxDomain::unit(2);

CylinderFunction sample_cylinder() {
  using O = OuterFunction;
  return CylinderFunction::composite(O::tanh(O::variable(0) * O::variable(1)),
                                     {SmoothFunction::bump({0.4}, 0.3, 1.2), SmoothFunction::cosine_mode(I, {2}, 0.7)}) +
         CylinderFunction::exponential(SmoothFunction::bump({0.6}, 0.2, 0.5)).scaled(0.3);
}

}  // namespace

TEST(SmoothFunction, BumpIsSupportedInItsBall) {
  const auto f = SmoothFunction::bump({0.5, 0.5}, 0.2);
  const double inside[2] = {0.55, 0.5}, outside[2] = {0.75, 0.5};
  EXPECT_GT(f.value(inside), 0.0);
  EXPECT_EQ(f.value(outside), 0.0);
  EXPECT_TRUE(f.supported_in_interior(I2));
}

TEST(SmoothFunction, GradientMatchesFiniteDifferences) {
  const auto f = SmoothFunction::bump({0.4, 0.6}, 0.35, 0.8) + SmoothFunction::cosine_mode(I2, {1, 2}, 0.3);
  RandomStream rng(1, 0);
  for (int rep = 0; rep < 50; ++rep) {
    double x[2] = {rng.uniform(), rng.uniform()}, g[2];
    f.gradient(x, g);
    for (int d = 0; d < 2; ++d) {
      double xp[2] = {x[0], x[1]}, xm[2] = {x[0], x[1]};
      xp[d] += 1e-6;
      xm[d] -= 1e-6;
      EXPECT_NEAR(g[d], (f.value(xp) - f.value(xm)) / 2e-6, 1e-6);
    }
  }
}

TEST(SmoothFunction, CosineModeSatisfiesNeumann) {
  EXPECT_TRUE(SmoothFunction::cosine_mode(I, {3}).neumann_on(I));
  const double x[1] = {0.37};
  EXPECT_NEAR(SmoothFunction::cosine_mode(I, {1}).laplacian(x), -M_PI * M_PI * std::cos(0.37 * M_PI), 1e-10);
}

TEST(OuterFunction, DerivativeMatchesFiniteDifferences) {
  using O = OuterFunction;
  const O f = O::poly(O::tanh(O::variable(0)), {0.2, 1.0, 0.5}) * O::exp_neg_sq(O::variable(1));
  const double u[2] = {0.3, -0.4};
  for (std::size_t i = 0; i < 2; ++i) {
    double up[2] = {u[0], u[1]}, um[2] = {u[0], u[1]};
    up[i] += 1e-6;
    um[i] -= 1e-6;
    EXPECT_NEAR(f.derivative(i).eval(u), (f.eval(up) - f.eval(um)) / 2e-6, 1e-7);
  }
  EXPECT_EQ(O::from_json(f.to_json()).eval(u), f.eval(u));
}

TEST(Cylinder, LinearStatisticSumsOverPoints) {
  const auto f = SmoothFunction::cosine_mode(I, {1});
  const auto g = Configuration::from_points(I, {{0.1}, {0.5}, {0.9}});
  EXPECT_NEAR(eval_star(f, g), std::cos(0.1 * M_PI) + std::cos(0.5 * M_PI) + std::cos(0.9 * M_PI), 1e-14);
  EXPECT_NEAR(CylinderFunction::star(f).value(g.coords()), eval_star(f, g), 1e-14);
}

TEST(Cylinder, ExponentialIsProductOfOnePlusF) {
  const auto f = SmoothFunction::bump({0.5}, 0.4, 0.6);
  const auto g = Configuration::from_points(I, {{0.3}, {0.6}});
  const double a = 0.3, b = 0.6;
  const double expected = (1.0 + f.value(std::span<const double>(&a, 1))) * (1.0 + f.value(std::span<const double>(&b, 1)));
  EXPECT_NEAR(CylinderFunction::exponential(f).value(g.coords()), expected, 1e-14);
}

TEST(Cylinder, GradientMatchesPointPerturbation) {
  const auto F = sample_cylinder();
  RandomStream rng(2, 0);
  for (int rep = 0; rep < 30; ++rep) {
    const auto g = sample_uniform(I, 4, rng);
    const auto grad = F.gradient(g);
    std::vector<double> c = g.coords();
    for (std::size_t i = 0; i < c.size(); ++i) {
      auto cp = c, cm = c;
      cp[i] += 1e-6;
      cm[i] -= 1e-6;
      EXPECT_NEAR(grad[i], (F.value(cp) - F.value(cm)) / 2e-6, 1e-6);
    }
  }
}

TEST(Cylinder, GradientIsPermutationEquivariant) {
  const auto F = sample_cylinder();
  const std::vector<double> a{0.2, 0.7, 0.45}, b{0.7, 0.45, 0.2};
  std::vector<double> ga(3), gb(3);
  F.gradient(a, ga);
  F.gradient(b, gb);
  EXPECT_NEAR(F.value(a), F.value(b), 1e-14);
  EXPECT_NEAR(ga[0], gb[2], 1e-14);
  EXPECT_NEAR(ga[1], gb[0], 1e-14);
}

TEST(Cylinder, DirectionalDerivativeAlongFlow) {
  // d/ds F(x + s v(x)) at s = 0 equals <grad F, V>.
  const auto F = sample_cylinder();
  const auto V = CylinderVectorField::single(SmoothVectorField::from_components({SmoothFunction::bump({0.5}, 0.4)}));
  RandomStream rng(3, 0);
  for (int rep = 0; rep < 20; ++rep) {
    const auto g = sample_uniform(I, 3, rng);
    const auto v = V.at_points(g);
    auto cp = g.coords(), cm = g.coords();
    for (std::size_t i = 0; i < cp.size(); ++i) {
      cp[i] += 1e-5 * v[i];
      cm[i] -= 1e-5 * v[i];
    }
    EXPECT_NEAR(directional_derivative(F, V, g), (F.value(cp) - F.value(cm)) / 2e-5, 1e-4);
  }
}

TEST(Cylinder, LocalityOfBumpStatistic) {
  const auto loc = CylinderFunction::star(SmoothFunction::bump({0.0}, 1.0)).locality();
  ASSERT_TRUE(loc.has_value());
  EXPECT_TRUE(BoxDomain::centered(1, 1.0).contains_box(*loc));
}

TEST(SetSpec, CountAndLevelMembership) {
  const auto A = SetSpec::count_at_least(BoxDomain({0.0}, {0.5}), 2);
  EXPECT_TRUE(A.contains(Configuration::from_points(I, {{0.1}, {0.2}, {0.9}})));
  EXPECT_FALSE(A.contains(Configuration::from_points(I, {{0.1}, {0.9}})));
  EXPECT_TRUE(A.complement().contains(Configuration::from_points(I, {{0.1}, {0.9}})));

  const auto half = SetSpec::level_set(CylinderFunction::star(SmoothFunction::cosine_mode(I, {1}, -1.0)), 0.0)
                        .with_count_filter(I, 1, 1);
  EXPECT_TRUE(half.contains(Configuration::from_points(I, {{0.7}})));
  EXPECT_FALSE(half.contains(Configuration::from_points(I, {{0.3}})));
  EXPECT_FALSE(half.contains(Configuration::from_points(I, {{0.7}, {0.8}})));
}

TEST(SetSpec, SectionOfCountSetWithOutsidePoint) {
  const BoxDomain W({0.0}, {2.0});
  const auto A = SetSpec::count_at_least(BoxDomain({0.5}, {1.5}), 1);
  const auto eta = Configuration::from_points(W, {{1.2}});
  const auto S = section_set(A, eta, BoxDomain({0.0}, {1.0}));
  EXPECT_TRUE(S.contains(Configuration(W)));
}

TEST(SetSpec, LocalityIsRespected) {
  const auto A = SetSpec::level_set(CylinderFunction::star(SmoothFunction::bump({0.0}, 1.0)), 0.5);
  EXPECT_EQ(locality_violations(A, BoxDomain::centered(1, 3.0), 2000, 4), 0u);
}

TEST(Descriptors, RoundTripPreservesValues) {
  const auto F = sample_cylinder();
  const auto G = cylinder_from_descriptor(to_descriptor(F));
  EXPECT_EQ(to_descriptor(G), to_descriptor(F));
  const std::vector<double> x{0.13, 0.52, 0.77};
  EXPECT_EQ(G.value(x), F.value(x));

  const auto f = SmoothFunction::heat_smoothed(SmoothFunction::bump({0.5}, 0.3), 0.01, I);
  const double y[1] = {0.41};
  EXPECT_EQ(function_from_descriptor(to_descriptor(f)).value(y), f.value(y));

  const auto A = SetSpec::level_set(F, 0.2).with_count_filter(I, 1, 3).complement();
  EXPECT_EQ(to_descriptor(set_from_descriptor(to_descriptor(A))), to_descriptor(A));
  EXPECT_EQ(box_from_descriptor(to_descriptor(I2)), I2);
}

TEST(Descriptors, PredicateSetsAreNotSerializable) {
  const auto P = SetSpec::predicate([](const Configuration&) { return true; }, std::nullopt);
  EXPECT_THROW(to_descriptor(P), std::invalid_argument);
}

TEST(Descriptors, MalformedTextIsRejected) {
  EXPECT_THROW(cylinder_from_descriptor("{\"dim\": 1"), std::invalid_argument);
  EXPECT_THROW(set_from_descriptor("{\"kind\": \"nonsense\"}"), std::invalid_argument);
}
