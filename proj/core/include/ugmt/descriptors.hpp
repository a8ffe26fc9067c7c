#pragma once

#include <string>

#include "ugmt/box.hpp"
#include "ugmt/cylinder.hpp"
#include "ugmt/set_spec.hpp"
#include "ugmt/smooth_function.hpp"

namespace ugmt {

// Structured-text (JSON) descriptors for the objects referenced by suite
// configurations. Every descriptor round-trips: parsing the output of
// to_descriptor rebuilds an object that evaluates identically.
//
// Shapes:
//   box       {"lower":[..],"upper":[..]}
//   function  {"dim":n,"terms":[{"kind":"bump","center":[..],"radius":r,"amplitude":a}, ...]}
//   field     {"gradient_of":function,"scale":c} or {"components":[function, ...]}
//   cylinder  {"dim":n,"constant":c,"composites":[{"outer":tree,"inners":[..]}],
//              "products":[{"coef":c,"f":function}]}
//   vfield    {"terms":[{"coef":cylinder,"field":field}],"normalization":"hard","parameter":d}
//   set       {"kind":"level_set","function":cylinder,"level":t,"strict":true,
//              "negated":false,"count_filter":{"region":box,"k_min":1,"k_max":3}}
// Predicate sets carry an opaque oracle and have no descriptor.

std::string to_descriptor(const BoxDomain& box);
std::string to_descriptor(const SmoothFunction& f);
std::string to_descriptor(const SmoothVectorField& v);
std::string to_descriptor(const CylinderFunction& F);
std::string to_descriptor(const CylinderVectorField& V);
std::string to_descriptor(const SetSpec& A);

/// Each parser throws std::invalid_argument on malformed or unknown input.
BoxDomain box_from_descriptor(const std::string& text);
SmoothFunction function_from_descriptor(const std::string& text);
SmoothVectorField field_from_descriptor(const std::string& text);
CylinderFunction cylinder_from_descriptor(const std::string& text);
CylinderVectorField vector_field_from_descriptor(const std::string& text);
SetSpec set_from_descriptor(const std::string& text);

}  // namespace ugmt
