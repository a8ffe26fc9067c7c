#include "ugmt/cylinder.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace ugmt {

namespace {

std::size_t point_count(std::span<const double> coords, std::size_t n) { return n == 0 ? 0 : coords.size() / n; }

// True when f <= 0 everywhere: nonpositive multiples of nonnegative bumps
// and constants.
bool is_nonpositive(const SmoothFunction& f) {
  for (const auto& t : f.terms()) {
    const bool nonneg_shape = t.kind == FunctionKind::bump || t.kind == FunctionKind::constant_on_box;
    if (!nonneg_shape || t.amplitude > 0.0) return false;
  }
  return true;
}

}  // namespace

double eval_star(const SmoothFunction& f, std::span<const double> coords) {
  const std::size_t n = f.dim();
  double s = 0.0;
  for (std::size_t i = 0; i < point_count(coords, n); ++i) s += f.value(coords.subspan(i * n, n));
  return s;
}

double eval_star(const SmoothFunction& f, const Configuration& gamma) {
  if (gamma.count() > 0 && gamma.dim() != f.dim()) throw std::invalid_argument("eval_star: dimension mismatch");
  return eval_star(f, gamma.coords());
}

CylinderFunction CylinderFunction::constant(double c, std::size_t dim) {
  CylinderFunction F;
  F.dim_ = dim;
  F.constant_ = c;
  return F;
}

CylinderFunction CylinderFunction::composite(OuterFunction outer, std::vector<SmoothFunction> inners) {
  if (inners.empty()) throw std::invalid_argument("CylinderFunction: composite needs at least one inner function");
  if (outer.arity() > inners.size()) throw std::invalid_argument("CylinderFunction: outer arity exceeds inner count");
  const std::size_t n = inners[0].dim();
  for (const auto& f : inners) {
    if (f.empty() || f.dim() != n) throw std::invalid_argument("CylinderFunction: inner functions must share a dimension");
  }
  CylinderFunction F;
  F.dim_ = n;
  if (outer.is_constant()) {
    F.constant_ = outer.constant_value();
    return F;
  }
  CompositeComponent c;
  c.d1.reserve(inners.size());
  for (std::size_t i = 0; i < inners.size(); ++i) c.d1.push_back(outer.derivative(i));
  c.outer = std::move(outer);
  c.inners = std::move(inners);
  F.composites_.push_back(std::move(c));
  return F;
}

CylinderFunction CylinderFunction::star(const SmoothFunction& f) {
  return composite(OuterFunction::variable(0), {f});
}

CylinderFunction CylinderFunction::exponential(const SmoothFunction& f, double coef) {
  if (f.empty()) throw std::invalid_argument("CylinderFunction::exponential: empty inner function");
  if (!(f.sup_bounds().value < 1.0)) {
    throw std::invalid_argument("CylinderFunction::exponential: requires -1 < f (checked as sup |f| < 1)");
  }
  CylinderFunction F;
  F.dim_ = f.dim();
  F.products_.push_back({coef, f});
  return F;
}

CylinderFunction CylinderFunction::operator+(const CylinderFunction& other) const {
  if (dim_ != 0 && other.dim_ != 0 && dim_ != other.dim_) {
    throw std::invalid_argument("CylinderFunction: dimension mismatch in sum");
  }
  CylinderFunction F = *this;
  if (F.dim_ == 0) F.dim_ = other.dim_;
  F.constant_ += other.constant_;
  F.composites_.insert(F.composites_.end(), other.composites_.begin(), other.composites_.end());
  F.products_.insert(F.products_.end(), other.products_.begin(), other.products_.end());
  return F;
}

CylinderFunction CylinderFunction::scaled(double factor) const {
  CylinderFunction F = *this;
  F.constant_ *= factor;
  for (auto& c : F.composites_) {
    c.outer = OuterFunction::constant(factor) * c.outer;
    for (auto& d : c.d1) d = OuterFunction::constant(factor) * d;
  }
  for (auto& p : F.products_) p.coef *= factor;
  return F;
}

double CylinderFunction::value(std::span<const double> coords) const {
  const std::size_t n = dim_;
  const std::size_t k = point_count(coords, n);
  double v = constant_;
  std::vector<double> u;
  for (const auto& c : composites_) {
    u.assign(c.inners.size(), 0.0);
    for (std::size_t i = 0; i < c.inners.size(); ++i) u[i] = eval_star(c.inners[i], coords);
    v += c.outer.eval(u);
  }
  for (const auto& p : products_) {
    double prod = p.coef;
    for (std::size_t i = 0; i < k; ++i) prod *= 1.0 + p.f.value(coords.subspan(i * n, n));
    v += prod;
  }
  return v;
}

void CylinderFunction::gradient(std::span<const double> coords, std::span<double> out) const {
  const std::size_t n = dim_;
  const std::size_t k = point_count(coords, n);
  if (out.size() != k * n) throw std::invalid_argument("CylinderFunction::gradient: output size mismatch");
  std::fill(out.begin(), out.end(), 0.0);
  std::vector<double> u, du, g(n);
  for (const auto& c : composites_) {
    const std::size_t l = c.inners.size();
    u.assign(l, 0.0);
    for (std::size_t i = 0; i < l; ++i) u[i] = eval_star(c.inners[i], coords);
    du.assign(l, 0.0);
    for (std::size_t i = 0; i < l; ++i) du[i] = c.d1[i].eval(u);
    for (std::size_t p = 0; p < k; ++p) {
      const auto x = coords.subspan(p * n, n);
      for (std::size_t i = 0; i < l; ++i) {
        if (du[i] == 0.0) continue;
        c.inners[i].gradient(x, g);
        for (std::size_t d = 0; d < n; ++d) out[p * n + d] += du[i] * g[d];
      }
    }
  }
  for (const auto& pc : products_) {
    // Products over all points but one, via prefix and suffix products.
    std::vector<double> factor(k), prefix(k + 1, 1.0), suffix(k + 1, 1.0);
    for (std::size_t p = 0; p < k; ++p) factor[p] = 1.0 + pc.f.value(coords.subspan(p * n, n));
    for (std::size_t p = 0; p < k; ++p) prefix[p + 1] = prefix[p] * factor[p];
    for (std::size_t p = k; p > 0; --p) suffix[p - 1] = suffix[p] * factor[p - 1];
    for (std::size_t p = 0; p < k; ++p) {
      const double others = pc.coef * prefix[p] * suffix[p + 1];
      if (others == 0.0) continue;
      pc.f.gradient(coords.subspan(p * n, n), g);
      for (std::size_t d = 0; d < n; ++d) out[p * n + d] += others * g[d];
    }
  }
}

std::vector<double> CylinderFunction::gradient(const Configuration& gamma) const {
  std::vector<double> out(gamma.coords().size());
  gradient(gamma.coords(), out);
  return out;
}

double CylinderFunction::sup_abs() const {
  double s = std::abs(constant_);
  for (const auto& c : composites_) s += c.outer.sup_abs();
  for (const auto& p : products_) {
    if (!is_nonpositive(p.f)) return std::numeric_limits<double>::infinity();
    s += std::abs(p.coef);
  }
  return s;
}

std::optional<BoxDomain> CylinderFunction::locality() const {
  std::optional<BoxDomain> box;
  auto merge = [&box](const BoxDomain& b) { box = box ? box->hull(b) : b; };
  for (const auto& c : composites_) {
    for (const auto& f : c.inners) merge(f.support());
  }
  for (const auto& p : products_) merge(p.f.support());
  return box;
}

double gradient_norm_sq(const CylinderFunction& F, std::span<const double> coords) {
  std::vector<double> g(coords.size());
  F.gradient(coords, g);
  double s = 0.0;
  for (double v : g) s += v * v;
  return s;
}

CylinderVectorField::CylinderVectorField(std::vector<FieldTerm> terms) : terms_(std::move(terms)) {
  if (terms_.empty()) throw std::invalid_argument("CylinderVectorField: no terms");
  dim_ = terms_[0].field.dim();
  for (const auto& t : terms_) {
    if (t.field.dim() != dim_ || (t.coef.dim() != 0 && t.coef.dim() != dim_)) {
      throw std::invalid_argument("CylinderVectorField: dimension mismatch");
    }
  }
}

CylinderVectorField CylinderVectorField::single(const SmoothVectorField& v) {
  return CylinderVectorField({FieldTerm{CylinderFunction::constant(1.0, v.dim()), v}});
}

CylinderVectorField CylinderVectorField::gradient_field(const CylinderFunction& F, double scale) {
  std::vector<FieldTerm> terms;
  for (const auto& c : F.composites()) {
    for (std::size_t i = 0; i < c.inners.size(); ++i) {
      if (c.d1[i].is_constant() && c.d1[i].constant_value() == 0.0) continue;
      CylinderFunction coef = CylinderFunction::composite(OuterFunction::constant(scale) * c.d1[i], c.inners);
      terms.push_back({std::move(coef), SmoothVectorField::gradient_of(c.inners[i])});
    }
  }
  for (const auto& p : F.products()) {
    terms.push_back({CylinderFunction::exponential(p.f, p.coef * scale),
                     SmoothVectorField::gradient_of(SmoothFunction::log_one_plus(p.f))});
  }
  if (terms.empty()) throw std::invalid_argument("CylinderVectorField::gradient_field: F is constant");
  return CylinderVectorField(std::move(terms));
}

CylinderVectorField CylinderVectorField::with_soft_normalization(double eps) const {
  if (!(eps > 0.0)) throw std::invalid_argument("normalize_field: eps must be positive");
  if (norm_ != Normalization::none) throw std::logic_error("normalize_field: field is already normalized");
  CylinderVectorField V = *this;
  V.norm_ = Normalization::soft;
  V.param_ = eps;
  return V;
}

CylinderVectorField CylinderVectorField::with_hard_normalization(double delta) const {
  if (!(delta > 0.0)) throw std::invalid_argument("hard normalization: delta must be positive");
  if (norm_ != Normalization::none) throw std::logic_error("hard normalization: field is already normalized");
  CylinderVectorField V = *this;
  V.norm_ = Normalization::hard;
  V.param_ = delta;
  return V;
}

double CylinderVectorField::psi(double s) const {
  switch (norm_) {
    case Normalization::none: return 1.0;
    case Normalization::soft: return 1.0 / (1.0 + param_ * s);
    case Normalization::hard: return 1.0 / std::sqrt(param_ + s);
  }
  return 1.0;
}

double CylinderVectorField::psi_prime(double s) const {
  switch (norm_) {
    case Normalization::none: return 0.0;
    case Normalization::soft: {
      const double q = 1.0 + param_ * s;
      return -param_ / (q * q);
    }
    case Normalization::hard: return -0.5 * std::pow(param_ + s, -1.5);
  }
  return 0.0;
}

void CylinderVectorField::coefficients(std::span<const double> coords, std::vector<double>& F) const {
  F.resize(terms_.size());
  for (std::size_t i = 0; i < terms_.size(); ++i) F[i] = terms_[i].coef.value(coords);
}

void CylinderVectorField::at_points(std::span<const double> coords, std::span<double> out) const {
  const std::size_t n = dim_;
  const std::size_t k = point_count(coords, n);
  if (out.size() != k * n) throw std::invalid_argument("CylinderVectorField::at_points: output size mismatch");
  std::fill(out.begin(), out.end(), 0.0);
  std::vector<double> F, v(n);
  coefficients(coords, F);
  double s = 0.0;
  for (std::size_t p = 0; p < k; ++p) {
    const auto x = coords.subspan(p * n, n);
    for (std::size_t i = 0; i < terms_.size(); ++i) {
      if (F[i] == 0.0) continue;
      terms_[i].field.value(x, v);
      for (std::size_t d = 0; d < n; ++d) out[p * n + d] += F[i] * v[d];
    }
    for (std::size_t d = 0; d < n; ++d) s += out[p * n + d] * out[p * n + d];
  }
  if (norm_ != Normalization::none) {
    const double ps = psi(s);
    for (double& o : out) o *= ps;
  }
}

std::vector<double> CylinderVectorField::at_points(const Configuration& gamma) const {
  std::vector<double> out(gamma.coords().size());
  at_points(gamma.coords(), out);
  return out;
}

void CylinderVectorField::value(std::span<const double> coords, std::span<const double> x,
                                std::span<double> out) const {
  const std::size_t n = dim_;
  std::vector<double> F, v(n);
  coefficients(coords, F);
  std::fill(out.begin(), out.end(), 0.0);
  for (std::size_t i = 0; i < terms_.size(); ++i) {
    terms_[i].field.value(x, v);
    for (std::size_t d = 0; d < n; ++d) out[d] += F[i] * v[d];
  }
  if (norm_ != Normalization::none) {
    std::vector<double> U(coords.size());
    CylinderVectorField raw = *this;
    raw.norm_ = Normalization::none;
    raw.at_points(coords, U);
    double s = 0.0;
    for (double u : U) s += u * u;
    const double ps = psi(s);
    for (double& o : out) o *= ps;
  }
}

double CylinderVectorField::gram_norm_sq(std::span<const double> coords) const {
  const std::size_t n = dim_;
  const std::size_t k = point_count(coords, n);
  const std::size_t m = terms_.size();
  std::vector<double> F;
  coefficients(coords, F);
  std::vector<double> G(m * m, 0.0), vals(m * n);
  for (std::size_t p = 0; p < k; ++p) {
    const auto x = coords.subspan(p * n, n);
    for (std::size_t i = 0; i < m; ++i) terms_[i].field.value(x, std::span<double>(vals).subspan(i * n, n));
    for (std::size_t i = 0; i < m; ++i) {
      for (std::size_t j = 0; j < m; ++j) {
        double dot = 0.0;
        for (std::size_t d = 0; d < n; ++d) dot += vals[i * n + d] * vals[j * n + d];
        G[i * m + j] += dot;
      }
    }
  }
  double s = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < m; ++j) s += F[i] * F[j] * G[i * m + j];
  }
  s = std::max(s, 0.0);
  const double ps = psi(s);
  return ps * ps * s;
}

double CylinderVectorField::divergence(std::span<const double> coords, const BoxDomain& window) const {
  if (!tangential_on(window)) {
    throw std::domain_error("divergence: vector fields must vanish or be tangential at the window boundary");
  }
  const std::size_t n = dim_;
  const std::size_t k = point_count(coords, n);
  const std::size_t m = terms_.size();
  std::vector<double> F;
  coefficients(coords, F);
  // Per-point field values, Jacobians and coefficient gradients.
  std::vector<double> vals(m * k * n), jac(m * k * n * n), gradF(m * k * n);
  double d0 = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    const auto& t = terms_[i];
    std::span<double> gi(gradF.data() + i * k * n, k * n);
    t.coef.gradient(coords, gi);
    for (std::size_t p = 0; p < k; ++p) {
      const auto x = coords.subspan(p * n, n);
      std::span<double> v(vals.data() + (i * k + p) * n, n);
      std::span<double> J(jac.data() + (i * k + p) * n * n, n * n);
      t.field.value(x, v);
      t.field.jacobian(x, J);
      double div = 0.0;
      for (std::size_t d = 0; d < n; ++d) div += J[d * n + d];
      double dir = 0.0;
      for (std::size_t d = 0; d < n; ++d) dir += gi[p * n + d] * v[d];
      d0 += dir + F[i] * div;
    }
  }
  if (norm_ == Normalization::none) return d0;

  std::vector<double> U(k * n, 0.0);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t q = 0; q < k * n; ++q) U[q] += F[i] * vals[i * k * n + q];
  }
  double s = 0.0;
  for (double u : U) s += u * u;
  std::vector<double> a(m, 0.0);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t q = 0; q < k * n; ++q) a[i] += vals[i * k * n + q] * U[q];
  }
  // <grad s, U> with grad_x s = 2 sum_i a_i grad_x F_i + 2 sum_i F_i J_i(x)^T U(x).
  double grad_s_dot_u = 0.0;
  for (std::size_t p = 0; p < k; ++p) {
    for (std::size_t b = 0; b < n; ++b) {
      double g = 0.0;
      for (std::size_t i = 0; i < m; ++i) {
        g += 2.0 * a[i] * gradF[i * k * n + p * n + b];
        const double* J = jac.data() + (i * k + p) * n * n;
        double jtu = 0.0;
        for (std::size_t c = 0; c < n; ++c) jtu += J[c * n + b] * U[p * n + c];
        g += 2.0 * F[i] * jtu;
      }
      grad_s_dot_u += g * U[p * n + b];
    }
  }
  return psi(s) * d0 + psi_prime(s) * grad_s_dot_u;
}

BoxDomain CylinderVectorField::support() const {
  BoxDomain b = terms_.at(0).field.support();
  for (std::size_t i = 1; i < terms_.size(); ++i) b = b.hull(terms_[i].field.support());
  return b;
}

bool CylinderVectorField::tangential_on(const BoxDomain& window) const {
  for (const auto& t : terms_) {
    if (!t.field.tangential_on(window)) return false;
  }
  return true;
}

std::vector<double> gradient(const CylinderFunction& F, const Configuration& gamma) { return F.gradient(gamma); }

double divergence(const CylinderVectorField& V, const Configuration& gamma) {
  return V.divergence(gamma.coords(), gamma.window());
}

double tangent_norm(const CylinderVectorField& V, const Configuration& gamma) {
  const auto v = V.at_points(gamma);
  double s = 0.0;
  for (double x : v) s += x * x;
  return s;
}

double tangent_inner(const CylinderVectorField& V, const CylinderVectorField& W, const Configuration& gamma) {
  const auto v = V.at_points(gamma);
  const auto w = W.at_points(gamma);
  double s = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) s += v[i] * w[i];
  return s;
}

double directional_derivative(const CylinderFunction& F, const CylinderVectorField& V, const Configuration& gamma) {
  const auto g = F.gradient(gamma);
  const auto v = V.at_points(gamma);
  double s = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i) s += g[i] * v[i];
  return s;
}

CylinderVectorField normalize_field(const CylinderVectorField& V, double eps) {
  return V.with_soft_normalization(eps);
}

}  // namespace ugmt
