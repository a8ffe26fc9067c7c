#include <cmath>

#include "ugmt/descriptors.hpp"
#include "ugmt/harness.hpp"

namespace ugmt {

namespace {

using SF = SmoothFunction;
using CF = CylinderFunction;

BatteryEntry entry(std::string name, std::string kind, std::string anchor, BoxDomain window, std::string descriptor,
                   std::string note) {
  return {std::move(name), std::move(kind), std::move(anchor), std::move(window), std::move(descriptor),
          std::move(note)};
}

std::vector<BatteryEntry> build_catalog() {
  const BoxDomain I = BoxDomain::unit(1);
  const BoxDomain I2 = BoxDomain::unit(2);
  const BoxDomain R1 = BoxDomain::centered(1, 3.0);
  const BoxDomain R2 = BoxDomain::centered(2, 3.0);
  const SF cos1 = SF::cosine_mode(I, {1}, 1.0);
  std::vector<BatteryEntry> c;

  // Inner functions.
  c.push_back(entry("bump_a_1d", "inner", "laplace_functional", I, to_descriptor(SF::bump({0.4}, 0.3, 0.6)),
                    "bump at 0.4, radius 0.3, height 0.6"));
  c.push_back(entry("bump_b_1d", "inner", "intertwining", I, to_descriptor(SF::bump({0.6}, 0.25, 1.0)),
                    "bump at 0.6, radius 0.25, height 1"));
  c.push_back(entry("bump_c_1d", "inner", "intertwining", I, to_descriptor(SF::bump({0.5}, 0.45, -0.8)),
                    "negative bump at 0.5, radius 0.45"));
  c.push_back(entry("bump_a_2d", "inner", "laplace_functional", I2, to_descriptor(SF::bump({0.5, 0.5}, 0.35, 0.7)),
                    "bump at the centre of the unit square"));
  c.push_back(entry("bump_b_2d", "inner", "laplace_functional", I2, to_descriptor(SF::bump({0.3, 0.6}, 0.25, -0.5)),
                    "negative off-centre bump"));
  c.push_back(entry("bump_c_2d", "inner", "laplace_functional", I2, to_descriptor(SF::bump({0.6, 0.4}, 0.4, 0.9)),
                    "wide off-centre bump"));
  c.push_back(entry("cosine_mode_1d", "inner", "exponential_semigroup_identity", I,
                    to_descriptor(SF::cosine_mode(I, {2}, 0.5)), "Neumann eigenfunction cos(2 pi x) / 2"));
  c.push_back(entry("constant_window_1d", "inner", "exponential_semigroup_identity", I,
                    to_descriptor(SF::constant_on_box(I, 0.3)), "0.3 on the whole window"));

  // Cylinder functions.
  c.push_back(entry("cosine_star", "cylinder", "total_variation_equivalence", I, to_descriptor(CF::star(cos1)),
                    "sum of cos(pi x) over the points"));
  c.push_back(entry("cosine_product", "cylinder", "total_variation_equivalence", I,
                    to_descriptor(CF::exponential(cos1.scaled(0.5))), "product of 1 + cos(pi x) / 2"));
  c.push_back(entry("mixed_cosine", "cylinder", "total_variation_equivalence", I,
                    to_descriptor(CF::star(cos1.scaled(0.7)) +
                                  CF::exponential(SF::cosine_mode(I, {2}, 0.4)).scaled(0.5)),
                    "linear statistic plus an exponential cylinder term"));
  c.push_back(entry("two_mode_star", "cylinder", "coarea_formula", I,
                    to_descriptor(CF::star(cos1.scaled(0.7)) + CF::star(SF::cosine_mode(I, {2}, 0.4))),
                    "inner function with an interior critical point"));
  c.push_back(entry("bump_star", "cylinder", "bakry_emery_gradient_bound", I,
                    to_descriptor(CF::star(SF::bump({0.4}, 0.3, 0.6))), "linear statistic of a bump"));
  c.push_back(entry("tanh_cosine", "cylinder", "bakry_emery_gradient_bound", I,
                    to_descriptor(CF::composite(OuterFunction::tanh(OuterFunction::variable(0)), {cos1})),
                    "tanh of the cosine statistic"));
  c.push_back(entry("bump_product", "cylinder", "bakry_emery_gradient_bound", I,
                    to_descriptor(CF::exponential(SF::bump({0.6}, 0.25, 0.5))), "product of 1 + bump"));
  {
    SF f = cos1;
    for (int j = 2; j <= 24; ++j) f = f + SF::cosine_mode(I, {j}, 1.0 / std::sqrt(static_cast<double>(j)));
    c.push_back(entry("multiscale_cosine", "cylinder", "heat_regularization", I, to_descriptor(CF::star(f)),
                      "sum over j <= 24 of j^{-1/2} cos(pi j x); gradient norms decay like t^{-1/2}"));
  }
  c.push_back(entry("weight_bump", "cylinder", "coarea_formula", I,
                    to_descriptor(CF::exponential(SF::bump({0.4}, 0.3, 0.5))), "positive weight G for localized checks"));

  // Sets.
  c.push_back(entry("half_space", "set", "de_giorgi_identity", I,
                    to_descriptor(SetSpec::level_set(CF::star(cos1.scaled(-1.0)), 0.0).with_count_filter(I, 1, 1)),
                    "one point in [0,1] lying right of 1/2; perimeter e^{-1}"));
  c.push_back(entry("cosine_level_k3", "set", "de_giorgi_identity", I,
                    to_descriptor(SetSpec::level_set(CF::star(cos1), 0.3).with_count_filter(I, 1, 3)),
                    "cosine statistic above 0.3 with one to three points"));
  c.push_back(entry("bump_disc_2d", "set", "de_giorgi_identity", I2,
                    to_descriptor(SetSpec::level_set(CF::star(SF::bump({0.5, 0.5}, 0.35)), 0.4)
                                      .with_count_filter(I2, 1, 1)),
                    "one point inside a disc-like level set"));
  c.push_back(entry("count_two_left", "set", "poisson_measure", I,
                    to_descriptor(SetSpec::count_at_least(BoxDomain({0.0}, {0.5}), 2)),
                    "at least two points in [0, 1/2]"));
  c.push_back(entry("local_bump_a", "set", "monotonicity_of_localized_measures", R1,
                    to_descriptor(SetSpec::level_set(CF::star(SF::bump({0.0}, 1.0)), 0.5)), "locality scale 1"));
  c.push_back(entry("local_bump_b", "set", "monotonicity_of_localized_measures", R1,
                    to_descriptor(SetSpec::level_set(CF::star(SF::bump({0.5}, 1.2)), 0.3)), "locality scale 1.7"));
  c.push_back(entry("local_two_bumps", "set", "monotonicity_of_localized_measures", R1,
                    to_descriptor(SetSpec::level_set(CF::star(SF::bump({-0.5}, 0.8)) + CF::star(SF::bump({1.0}, 0.7)),
                                                     0.7)),
                    "locality scale 1.7"));
  c.push_back(entry("local_product", "set", "monotonicity_of_localized_measures", R1,
                    to_descriptor(SetSpec::level_set(CF::exponential(SF::bump({0.0}, 1.5, 0.8)), 1.3)),
                    "locality scale 1.5"));
  c.push_back(entry("local_bump_2d", "set", "monotonicity_of_localized_measures", R2,
                    to_descriptor(SetSpec::level_set(CF::star(SF::bump({0.0, 0.0}, 1.2)), 0.4)),
                    "locality scale 1.2"));

  // Vector fields.
  auto single = [](std::vector<SF> comps) {
    return CylinderVectorField::single(SmoothVectorField::from_components(std::move(comps)));
  };
  auto weighted = [](const CF& coef, std::vector<SF> comps) {
    return CylinderVectorField(std::vector<FieldTerm>{{coef, SmoothVectorField::from_components(std::move(comps))}});
  };
  c.push_back(entry("field_bump_1d", "field", "gauss_green_formula", I, to_descriptor(single({SF::bump({0.45}, 0.3)})),
                    "bump vector field"));
  c.push_back(entry("field_coef_1d", "field", "gauss_green_formula", I,
                    to_descriptor(weighted(CF::star(SF::bump({0.6}, 0.3)), {SF::bump({0.5}, 0.4, -0.7)})),
                    "bump field with a cylinder coefficient"));
  c.push_back(entry("field_bump_2d", "field", "gauss_green_formula", I2,
                    to_descriptor(single({SF::bump({0.45, 0.45}, 0.3), SF::bump({0.45, 0.45}, 0.3)})),
                    "diagonal bump vector field"));
  c.push_back(entry("field_coef_2d", "field", "gauss_green_formula", I2,
                    to_descriptor(weighted(CF::star(SF::bump({0.6, 0.6}, 0.3)),
                                           {SF::bump({0.5, 0.5}, 0.4, -0.7), SF::bump({0.5, 0.5}, 0.4, -0.7)})),
                    "diagonal bump field with a cylinder coefficient"));
  return c;
}

}  // namespace

const std::vector<BatteryEntry>& list_batteries() {
  static const std::vector<BatteryEntry> catalog = build_catalog();
  return catalog;
}

}  // namespace ugmt
