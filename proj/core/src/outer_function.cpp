#include "ugmt/outer_function.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "json.hpp"

namespace ugmt {

namespace {

using json = nlohmann::json;
constexpr double kInf = std::numeric_limits<double>::infinity();

// Product of interval endpoints with 0 * inf = 0.
double safe_mul(double a, double b) {
  if (a == 0.0 || b == 0.0) return 0.0;
  return a * b;
}

Interval imul(Interval a, Interval b) {
  const double p[4] = {safe_mul(a.lo, b.lo), safe_mul(a.lo, b.hi), safe_mul(a.hi, b.lo), safe_mul(a.hi, b.hi)};
  return {*std::min_element(p, p + 4), *std::max_element(p, p + 4)};
}

Interval iadd(Interval a, Interval b) { return {a.lo + b.lo, a.hi + b.hi}; }

Interval isquare(Interval a) {
  const double m = std::max(std::abs(a.lo), std::abs(a.hi));
  const double lo = (a.lo <= 0.0 && a.hi >= 0.0) ? 0.0 : std::min(a.lo * a.lo, a.hi * a.hi);
  return {lo, m * m};
}

const char* op_name(OuterFunction::Op op) {
  switch (op) {
    case OuterFunction::Op::constant: return "const";
    case OuterFunction::Op::variable: return "var";
    case OuterFunction::Op::add: return "add";
    case OuterFunction::Op::mul: return "mul";
    case OuterFunction::Op::tanh: return "tanh";
    case OuterFunction::Op::exp_neg_sq: return "exp_neg_sq";
    case OuterFunction::Op::poly: return "poly";
  }
  return "?";
}

json to_json_value(const OuterFunction& f) {
  const auto& n = *f.node();
  json j;
  j["op"] = op_name(n.op);
  switch (n.op) {
    case OuterFunction::Op::constant: j["value"] = n.value; break;
    case OuterFunction::Op::variable: j["index"] = n.index; break;
    case OuterFunction::Op::poly: j["coeffs"] = n.coeffs; [[fallthrough]];
    default: {
      json args = json::array();
      for (const auto& a : n.args) args.push_back(to_json_value(a));
      j["args"] = std::move(args);
    }
  }
  return j;
}

OuterFunction from_json_value(const json& j) {
  if (!j.is_object() || !j.contains("op")) throw std::invalid_argument("outer function descriptor: missing op");
  const std::string op = j.at("op").get<std::string>();
  if (op == "const") return OuterFunction::constant(j.at("value").get<double>());
  if (op == "var") return OuterFunction::variable(j.at("index").get<std::size_t>());
  const auto& args = j.at("args");
  if (!args.is_array() || args.empty()) throw std::invalid_argument("outer function descriptor: empty args");
  std::vector<OuterFunction> a;
  for (const auto& x : args) a.push_back(from_json_value(x));
  auto unary = [&]() -> const OuterFunction& {
    if (a.size() != 1) throw std::invalid_argument("outer function descriptor: '" + op + "' takes one argument");
    return a[0];
  };
  if (op == "add" || op == "mul") {
    OuterFunction acc = a[0];
    for (std::size_t i = 1; i < a.size(); ++i) acc = (op == "add") ? acc + a[i] : acc * a[i];
    return acc;
  }
  if (op == "tanh") return OuterFunction::tanh(unary());
  if (op == "exp_neg_sq") return OuterFunction::exp_neg_sq(unary());
  if (op == "poly") return OuterFunction::poly(unary(), j.at("coeffs").get<std::vector<double>>());
  throw std::invalid_argument("outer function descriptor: unknown op '" + op + "'");
}

}  // namespace

OuterFunction::OuterFunction() : node_(std::make_shared<Node>()) {}

OuterFunction OuterFunction::constant(double c) {
  if (!std::isfinite(c)) throw std::invalid_argument("OuterFunction: constants must be finite");
  auto n = std::make_shared<Node>();
  n->op = Op::constant;
  n->value = c;
  return OuterFunction(std::move(n));
}

OuterFunction OuterFunction::variable(std::size_t index) {
  auto n = std::make_shared<Node>();
  n->op = Op::variable;
  n->index = index;
  return OuterFunction(std::move(n));
}

OuterFunction OuterFunction::tanh(const OuterFunction& a) {
  if (a.is_constant()) return constant(std::tanh(a.constant_value()));
  auto n = std::make_shared<Node>();
  n->op = Op::tanh;
  n->args = {a};
  return OuterFunction(std::move(n));
}

OuterFunction OuterFunction::exp_neg_sq(const OuterFunction& a) {
  if (a.is_constant()) return constant(std::exp(-a.constant_value() * a.constant_value()));
  auto n = std::make_shared<Node>();
  n->op = Op::exp_neg_sq;
  n->args = {a};
  return OuterFunction(std::move(n));
}

OuterFunction OuterFunction::poly(const OuterFunction& a, std::vector<double> coeffs) {
  while (!coeffs.empty() && coeffs.back() == 0.0) coeffs.pop_back();
  if (coeffs.empty()) return constant(0.0);
  if (coeffs.size() == 1) return constant(coeffs[0]);
  if (a.is_constant()) {
    double v = 0.0;
    for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) v = v * a.constant_value() + *it;
    return constant(v);
  }
  if (coeffs.size() == 2) return constant(coeffs[0]) + constant(coeffs[1]) * a;
  auto n = std::make_shared<Node>();
  n->op = Op::poly;
  n->args = {a};
  n->coeffs = std::move(coeffs);
  return OuterFunction(std::move(n));
}

OuterFunction operator+(const OuterFunction& a, const OuterFunction& b) {
  if (a.is_constant() && b.is_constant()) return OuterFunction::constant(a.constant_value() + b.constant_value());
  if (a.is_constant() && a.constant_value() == 0.0) return b;
  if (b.is_constant() && b.constant_value() == 0.0) return a;
  auto n = std::make_shared<OuterFunction::Node>();
  n->op = OuterFunction::Op::add;
  n->args = {a, b};
  return OuterFunction(std::move(n));
}

OuterFunction operator*(const OuterFunction& a, const OuterFunction& b) {
  if (a.is_constant() && b.is_constant()) return OuterFunction::constant(a.constant_value() * b.constant_value());
  if ((a.is_constant() && a.constant_value() == 0.0) || (b.is_constant() && b.constant_value() == 0.0)) {
    return OuterFunction::constant(0.0);
  }
  if (a.is_constant() && a.constant_value() == 1.0) return b;
  if (b.is_constant() && b.constant_value() == 1.0) return a;
  auto n = std::make_shared<OuterFunction::Node>();
  n->op = OuterFunction::Op::mul;
  // Keep constants on the left for readable descriptors.
  if (b.is_constant()) {
    n->args = {b, a};
  } else {
    n->args = {a, b};
  }
  return OuterFunction(std::move(n));
}

OuterFunction::Op OuterFunction::op() const { return node_->op; }

double OuterFunction::constant_value() const { return node_->op == Op::constant ? node_->value : 0.0; }

bool OuterFunction::is_affine() const {
  switch (node_->op) {
    case Op::constant:
    case Op::variable:
      return true;
    case Op::add:
      return node_->args[0].is_affine() && node_->args[1].is_affine();
    case Op::mul:
      return (node_->args[0].is_constant() && node_->args[1].is_affine()) ||
             (node_->args[1].is_constant() && node_->args[0].is_affine());
    default:
      return false;
  }
}

std::size_t OuterFunction::arity() const {
  if (node_->op == Op::variable) return node_->index + 1;
  std::size_t a = 0;
  for (const auto& x : node_->args) a = std::max(a, x.arity());
  return a;
}

double OuterFunction::eval(std::span<const double> u) const {
  const Node& n = *node_;
  switch (n.op) {
    case Op::constant:
      return n.value;
    case Op::variable:
      if (n.index >= u.size()) throw std::out_of_range("OuterFunction::eval: too few arguments");
      return u[n.index];
    case Op::add:
      return n.args[0].eval(u) + n.args[1].eval(u);
    case Op::mul:
      return n.args[0].eval(u) * n.args[1].eval(u);
    case Op::tanh:
      return std::tanh(n.args[0].eval(u));
    case Op::exp_neg_sq: {
      const double a = n.args[0].eval(u);
      return std::exp(-a * a);
    }
    case Op::poly: {
      const double a = n.args[0].eval(u);
      double v = 0.0;
      for (auto it = n.coeffs.rbegin(); it != n.coeffs.rend(); ++it) v = v * a + *it;
      return v;
    }
  }
  return 0.0;
}

OuterFunction OuterFunction::derivative(std::size_t index) const {
  const Node& n = *node_;
  switch (n.op) {
    case Op::constant:
      return constant(0.0);
    case Op::variable:
      return constant(n.index == index ? 1.0 : 0.0);
    case Op::add:
      return n.args[0].derivative(index) + n.args[1].derivative(index);
    case Op::mul:
      return n.args[0].derivative(index) * n.args[1] + n.args[0] * n.args[1].derivative(index);
    case Op::tanh: {
      const OuterFunction da = n.args[0].derivative(index);
      if (da.is_constant() && da.constant_value() == 0.0) return constant(0.0);
      return poly(*this, {1.0, 0.0, -1.0}) * da;
    }
    case Op::exp_neg_sq: {
      const OuterFunction da = n.args[0].derivative(index);
      if (da.is_constant() && da.constant_value() == 0.0) return constant(0.0);
      return (constant(-2.0) * n.args[0]) * *this * da;
    }
    case Op::poly: {
      const OuterFunction da = n.args[0].derivative(index);
      if (da.is_constant() && da.constant_value() == 0.0) return constant(0.0);
      std::vector<double> dc(n.coeffs.size() - 1);
      for (std::size_t i = 1; i < n.coeffs.size(); ++i) dc[i - 1] = static_cast<double>(i) * n.coeffs[i];
      return poly(n.args[0], std::move(dc)) * da;
    }
  }
  return constant(0.0);
}

Interval OuterFunction::range(std::span<const Interval> args) const {
  const Node& n = *node_;
  switch (n.op) {
    case Op::constant:
      return {n.value, n.value};
    case Op::variable:
      if (n.index >= args.size()) return {-kInf, kInf};
      return args[n.index];
    case Op::add:
      return iadd(n.args[0].range(args), n.args[1].range(args));
    case Op::mul:
      return imul(n.args[0].range(args), n.args[1].range(args));
    case Op::tanh: {
      const Interval a = n.args[0].range(args);
      return {std::tanh(a.lo), std::tanh(a.hi)};
    }
    case Op::exp_neg_sq: {
      const Interval s = isquare(n.args[0].range(args));
      return {std::exp(-s.hi), std::exp(-s.lo)};
    }
    case Op::poly: {
      const Interval a = n.args[0].range(args);
      Interval v{0.0, 0.0};
      for (auto it = n.coeffs.rbegin(); it != n.coeffs.rend(); ++it) v = iadd(imul(v, a), {*it, *it});
      return v;
    }
  }
  return {-kInf, kInf};
}

double OuterFunction::sup_abs() const {
  std::vector<Interval> args(arity(), Interval{-kInf, kInf});
  const Interval r = range(args);
  return std::max(std::abs(r.lo), std::abs(r.hi));
}

std::string OuterFunction::to_json() const { return to_json_value(*this).dump(); }

OuterFunction OuterFunction::from_json(const std::string& text) {
  try {
    return from_json_value(json::parse(text));
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("outer function descriptor: ") + e.what());
  }
}

}  // namespace ugmt
