#include "ugmt/descriptors.hpp"

#include <stdexcept>

#include "json.hpp"

namespace ugmt {

using nlohmann::json;

namespace {

json parse(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("descriptor: ") + e.what());
  }
}

template <class T>
T field_of(const json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) throw std::invalid_argument(std::string("descriptor: missing key '") + key + "'");
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("descriptor: bad value for '") + key + "': " + e.what());
  }
}

const json& child(const json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) throw std::invalid_argument(std::string("descriptor: missing key '") + key + "'");
  return j.at(key);
}

const char* kind_name(FunctionKind k) {
  switch (k) {
    case FunctionKind::bump: return "bump";
    case FunctionKind::coordinate_bump: return "coordinate_bump";
    case FunctionKind::constant_on_box: return "constant_on_box";
    case FunctionKind::cosine_mode: return "cosine_mode";
    case FunctionKind::heat_smoothed: return "heat_smoothed";
    case FunctionKind::log_one_plus: return "log_one_plus";
  }
  return "?";
}

json box_json(const BoxDomain& b) { return {{"lower", b.lower()}, {"upper", b.upper()}}; }

BoxDomain box_parse(const json& j) {
  return BoxDomain(field_of<std::vector<double>>(j, "lower"), field_of<std::vector<double>>(j, "upper"));
}

json function_json(const SmoothFunction& f) {
  json terms = json::array();
  for (const auto& t : f.terms()) {
    json e = {{"kind", kind_name(t.kind)}, {"amplitude", t.amplitude}};
    switch (t.kind) {
      case FunctionKind::bump:
        e["center"] = t.center;
        e["radius"] = t.radius;
        break;
      case FunctionKind::coordinate_bump:
        e["center"] = t.center;
        e["radius"] = t.radius;
        e["axis"] = t.axis;
        break;
      case FunctionKind::constant_on_box:
        e["box"] = box_json(t.box);
        break;
      case FunctionKind::cosine_mode:
        e["box"] = box_json(t.box);
        e["modes"] = t.modes;
        break;
      case FunctionKind::heat_smoothed:
        e["window"] = box_json(t.box);
        e["time"] = t.time;
        e["quad_order"] = t.quad_order;
        e["base"] = function_json(*t.base);
        break;
      case FunctionKind::log_one_plus:
        e["base"] = function_json(*t.base);
        break;
    }
    terms.push_back(std::move(e));
  }
  return {{"dim", f.dim()}, {"terms", std::move(terms)}};
}

SmoothFunction function_parse(const json& j) {
  const auto dim = field_of<std::size_t>(j, "dim");
  SmoothFunction f = SmoothFunction::from_terms(dim, {});
  for (const json& e : child(j, "terms")) {
    const auto kind = field_of<std::string>(e, "kind");
    const auto a = field_of<double>(e, "amplitude");
    SmoothFunction g;
    if (kind == "bump") {
      g = SmoothFunction::bump(field_of<std::vector<double>>(e, "center"), field_of<double>(e, "radius"), a);
    } else if (kind == "coordinate_bump") {
      g = SmoothFunction::coordinate_bump(field_of<std::vector<double>>(e, "center"), field_of<double>(e, "radius"),
                                          field_of<std::size_t>(e, "axis"), a);
    } else if (kind == "constant_on_box") {
      g = SmoothFunction::constant_on_box(box_parse(child(e, "box")), a);
    } else if (kind == "cosine_mode") {
      g = SmoothFunction::cosine_mode(box_parse(child(e, "box")), field_of<std::vector<int>>(e, "modes"), a);
    } else if (kind == "heat_smoothed") {
      const auto order = e.contains("quad_order") ? e.at("quad_order").get<std::size_t>() : std::size_t{128};
      g = SmoothFunction::heat_smoothed(function_parse(child(e, "base")), field_of<double>(e, "time"),
                                        box_parse(child(e, "window")), order ? order : 128)
              .scaled(a);
    } else if (kind == "log_one_plus") {
      g = SmoothFunction::log_one_plus(function_parse(child(e, "base")), a);
    } else {
      throw std::invalid_argument("descriptor: unknown function kind '" + kind + "'");
    }
    if (g.dim() != dim) throw std::invalid_argument("descriptor: term dimension does not match 'dim'");
    f = f + g;
  }
  return f;
}

json field_json(const SmoothVectorField& v) {
  if (v.is_gradient()) return {{"gradient_of", function_json(v.potential())}, {"scale", v.scale()}};
  json comps = json::array();
  for (const auto& c : v.components()) comps.push_back(function_json(c));
  return {{"components", std::move(comps)}};
}

SmoothVectorField field_parse(const json& j) {
  if (j.is_object() && j.contains("gradient_of")) {
    return SmoothVectorField::gradient_of(function_parse(j.at("gradient_of")), field_of<double>(j, "scale"));
  }
  std::vector<SmoothFunction> comps;
  for (const json& c : child(j, "components")) comps.push_back(function_parse(c));
  return SmoothVectorField::from_components(std::move(comps));
}

json cylinder_json(const CylinderFunction& F) {
  json comps = json::array();
  for (const auto& c : F.composites()) {
    json inners = json::array();
    for (const auto& f : c.inners) inners.push_back(function_json(f));
    comps.push_back({{"outer", json::parse(c.outer.to_json())}, {"inners", std::move(inners)}});
  }
  json prods = json::array();
  for (const auto& p : F.products()) prods.push_back({{"coef", p.coef}, {"f", function_json(p.f)}});
  return {{"dim", F.dim()}, {"constant", F.constant_term()}, {"composites", std::move(comps)}, {"products", std::move(prods)}};
}

CylinderFunction cylinder_parse(const json& j) {
  const auto dim = field_of<std::size_t>(j, "dim");
  CylinderFunction F = CylinderFunction::constant(field_of<double>(j, "constant"), dim);
  if (j.contains("composites")) {
    for (const json& c : j.at("composites")) {
      std::vector<SmoothFunction> inners;
      for (const json& f : child(c, "inners")) inners.push_back(function_parse(f));
      F = F + CylinderFunction::composite(OuterFunction::from_json(child(c, "outer").dump()), std::move(inners));
    }
  }
  if (j.contains("products")) {
    for (const json& p : j.at("products")) {
      F = F + CylinderFunction::exponential(function_parse(child(p, "f")), field_of<double>(p, "coef"));
    }
  }
  return F;
}

const char* norm_name(CylinderVectorField::Normalization n) {
  switch (n) {
    case CylinderVectorField::Normalization::none: return "none";
    case CylinderVectorField::Normalization::soft: return "soft";
    case CylinderVectorField::Normalization::hard: return "hard";
  }
  return "none";
}

json vfield_json(const CylinderVectorField& V) {
  json terms = json::array();
  for (const auto& t : V.terms()) terms.push_back({{"coef", cylinder_json(t.coef)}, {"field", field_json(t.field)}});
  return {{"terms", std::move(terms)},
          {"normalization", norm_name(V.normalization())},
          {"parameter", V.normalization_parameter()}};
}

CylinderVectorField vfield_parse(const json& j) {
  std::vector<FieldTerm> terms;
  for (const json& t : child(j, "terms")) terms.push_back({cylinder_parse(child(t, "coef")), field_parse(child(t, "field"))});
  CylinderVectorField V(std::move(terms));
  const std::string norm = j.contains("normalization") ? j.at("normalization").get<std::string>() : "none";
  if (norm == "soft") return V.with_soft_normalization(field_of<double>(j, "parameter"));
  if (norm == "hard") return V.with_hard_normalization(field_of<double>(j, "parameter"));
  if (norm != "none") throw std::invalid_argument("descriptor: unknown normalization '" + norm + "'");
  return V;
}

json set_json(const SetSpec& A) {
  json j;
  switch (A.kind()) {
    case SetSpec::Kind::empty: j = {{"kind", "empty"}}; break;
    case SetSpec::Kind::full: j = {{"kind", "full"}}; break;
    case SetSpec::Kind::count_at_least:
      j = {{"kind", "count_at_least"}, {"region", box_json(A.region())}, {"threshold", A.threshold()}};
      break;
    case SetSpec::Kind::level_set:
      j = {{"kind", "level_set"}, {"function", cylinder_json(A.function())}, {"level", A.level()}, {"strict", A.strict()}};
      if (const auto& f = A.count_filter()) {
        j["count_filter"] = {{"region", box_json(f->region)}, {"k_min", f->k_min}, {"k_max", f->k_max}};
      }
      break;
    case SetSpec::Kind::predicate:
      throw std::invalid_argument("to_descriptor: predicate set '" + A.name() + "' has no descriptor");
  }
  j["negated"] = A.negated();
  return j;
}

SetSpec set_parse(const json& j) {
  const auto kind = field_of<std::string>(j, "kind");
  SetSpec A;
  if (kind == "empty") {
    A = SetSpec::empty();
  } else if (kind == "full") {
    A = SetSpec::full();
  } else if (kind == "count_at_least") {
    A = SetSpec::count_at_least(box_parse(child(j, "region")), field_of<std::size_t>(j, "threshold"));
  } else if (kind == "level_set") {
    const bool strict = j.contains("strict") ? j.at("strict").get<bool>() : true;
    A = SetSpec::level_set(cylinder_parse(child(j, "function")), field_of<double>(j, "level"), strict);
    if (j.contains("count_filter")) {
      const json& f = j.at("count_filter");
      A = A.with_count_filter(box_parse(child(f, "region")), field_of<std::size_t>(f, "k_min"),
                              field_of<std::size_t>(f, "k_max"));
    }
  } else {
    throw std::invalid_argument("descriptor: unknown set kind '" + kind + "'");
  }
  if (j.contains("negated") && j.at("negated").get<bool>()) A = A.complement();
  return A;
}

}  // namespace

std::string to_descriptor(const BoxDomain& box) { return box_json(box).dump(); }
std::string to_descriptor(const SmoothFunction& f) { return function_json(f).dump(); }
std::string to_descriptor(const SmoothVectorField& v) { return field_json(v).dump(); }
std::string to_descriptor(const CylinderFunction& F) { return cylinder_json(F).dump(); }
std::string to_descriptor(const CylinderVectorField& V) { return vfield_json(V).dump(); }
std::string to_descriptor(const SetSpec& A) { return set_json(A).dump(); }

BoxDomain box_from_descriptor(const std::string& text) { return box_parse(parse(text)); }
SmoothFunction function_from_descriptor(const std::string& text) { return function_parse(parse(text)); }
SmoothVectorField field_from_descriptor(const std::string& text) { return field_parse(parse(text)); }
CylinderFunction cylinder_from_descriptor(const std::string& text) { return cylinder_parse(parse(text)); }
CylinderVectorField vector_field_from_descriptor(const std::string& text) { return vfield_parse(parse(text)); }
SetSpec set_from_descriptor(const std::string& text) { return set_parse(parse(text)); }

}  // namespace ugmt
