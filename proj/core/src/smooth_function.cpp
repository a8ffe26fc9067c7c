#include "ugmt/smooth_function.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "ugmt/heat_kernel.hpp"

namespace ugmt {

namespace {

// Radial profile of the unit bump as a function of s = |x-c|^2 / w^2:
// b = exp(1 - 1/(1-s)), b_s = db/ds, b_ss = d^2b/ds^2.
struct BumpProfile {
  double b = 0.0, b_s = 0.0, b_ss = 0.0;
};

BumpProfile bump_profile(double s) {
  BumpProfile p;
  if (s >= 1.0) return p;
  const double u = 1.0 - s;
  p.b = std::exp(1.0 - 1.0 / u);
  const double u2 = u * u;
  p.b_s = -p.b / u2;
  p.b_ss = p.b / (u2 * u2) - 2.0 * p.b / (u2 * u);
  return p;
}

double squared_offset(const std::vector<double>& c, std::span<const double> x, double w) {
  double s = 0.0;
  for (std::size_t d = 0; d < c.size(); ++d) {
    const double z = x[d] - c[d];
    s += z * z;
  }
  return s / (w * w);
}

// Radial suprema of the unit bump of radius w in dimension n:
// {sup b, sup |grad b|, sup |Lap b|, sup r b, sup (b + r|grad b|), sup (2|grad b| + r|Lap b|)}.
std::array<double, 6> bump_radial_sups(double w, std::size_t n) {
  std::array<double, 6> m{};
  const int samples = 20000;
  for (int i = 0; i < samples; ++i) {
    const double r = w * (static_cast<double>(i) + 0.5) / samples;
    const double s = r * r / (w * w);
    const BumpProfile p = bump_profile(s);
    const double grad = std::abs(p.b_s) * 2.0 * r / (w * w);
    const double lap = std::abs(p.b_ss * 4.0 * s / (w * w) + p.b_s * 2.0 * static_cast<double>(n) / (w * w));
    m[0] = std::max(m[0], p.b);
    m[1] = std::max(m[1], grad);
    m[2] = std::max(m[2], lap);
    m[3] = std::max(m[3], r * p.b);
    m[4] = std::max(m[4], p.b + r * grad);
    m[5] = std::max(m[5], 2.0 * grad + r * lap);
  }
  for (double& v : m) v *= 1.01;
  m[0] = 1.0;
  return m;
}

void check_dim(std::size_t expected, std::size_t got) {
  if (expected != got) throw std::invalid_argument("SmoothFunction: dimension mismatch");
}

void add_term_gradient(const FunctionTerm& term, std::span<const double> x, std::span<double> out) {
  const std::size_t n = out.size();
  switch (term.kind) {
    case FunctionKind::bump: {
      const double s = squared_offset(term.center, x, term.radius);
      if (s >= 1.0) return;
      const BumpProfile p = bump_profile(s);
      const double w2 = term.radius * term.radius;
      for (std::size_t d = 0; d < n; ++d) out[d] += term.amplitude * p.b_s * 2.0 * (x[d] - term.center[d]) / w2;
      return;
    }
    case FunctionKind::coordinate_bump: {
      const double s = squared_offset(term.center, x, term.radius);
      if (s >= 1.0) return;
      const BumpProfile p = bump_profile(s);
      const double w2 = term.radius * term.radius;
      const double zj = x[term.axis] - term.center[term.axis];
      for (std::size_t d = 0; d < n; ++d) {
        out[d] += term.amplitude * zj * p.b_s * 2.0 * (x[d] - term.center[d]) / w2;
      }
      out[term.axis] += term.amplitude * p.b;
      return;
    }
    case FunctionKind::constant_on_box:
      return;
    case FunctionKind::cosine_mode: {
      if (!term.box.contains(x)) return;
      for (std::size_t p = 0; p < n; ++p) {
        const double kp = std::numbers::pi * term.modes[p] / term.box.length(p);
        double prod = -term.amplitude * kp * std::sin(kp * (x[p] - term.box.lower(p)));
        for (std::size_t d = 0; d < n; ++d) {
          if (d == p) continue;
          const double kd = std::numbers::pi * term.modes[d] / term.box.length(d);
          prod *= std::cos(kd * (x[d] - term.box.lower(d)));
        }
        out[p] += prod;
      }
      return;
    }
    case FunctionKind::heat_smoothed:
      if (!term.box.contains(x)) return;
      out[0] += term.amplitude * term.table->derivative(x[0]);
      return;
    case FunctionKind::log_one_plus: {
      std::vector<double> g(n);
      term.base->gradient(x, g);
      const double inv = 1.0 / (1.0 + term.base->value(x));
      for (std::size_t d = 0; d < n; ++d) out[d] += term.amplitude * g[d] * inv;
      return;
    }
  }
}

void add_term_hessian(const FunctionTerm& term, std::span<const double> x, std::span<double> out, std::size_t n) {
  switch (term.kind) {
    case FunctionKind::bump:
    case FunctionKind::coordinate_bump: {
      const double s = squared_offset(term.center, x, term.radius);
      if (s >= 1.0) return;
      const BumpProfile p = bump_profile(s);
      const double w2 = term.radius * term.radius;
      // Hessian and gradient of the unit bump.
      std::vector<double> gb(n), hb(n * n);
      for (std::size_t a = 0; a < n; ++a) gb[a] = p.b_s * 2.0 * (x[a] - term.center[a]) / w2;
      for (std::size_t a = 0; a < n; ++a) {
        for (std::size_t b = 0; b < n; ++b) {
          const double sa = 2.0 * (x[a] - term.center[a]) / w2;
          const double sb = 2.0 * (x[b] - term.center[b]) / w2;
          hb[a * n + b] = p.b_ss * sa * sb + (a == b ? p.b_s * 2.0 / w2 : 0.0);
        }
      }
      if (term.kind == FunctionKind::bump) {
        for (std::size_t i = 0; i < n * n; ++i) out[i] += term.amplitude * hb[i];
      } else {
        const std::size_t j = term.axis;
        const double zj = x[j] - term.center[j];
        for (std::size_t a = 0; a < n; ++a) {
          for (std::size_t b = 0; b < n; ++b) {
            double v = zj * hb[a * n + b];
            if (a == j) v += gb[b];
            if (b == j) v += gb[a];
            out[a * n + b] += term.amplitude * v;
          }
        }
      }
      return;
    }
    case FunctionKind::constant_on_box:
      return;
    case FunctionKind::cosine_mode: {
      if (!term.box.contains(x)) return;
      std::vector<double> k(n), c(n), sn(n);
      for (std::size_t d = 0; d < n; ++d) {
        k[d] = std::numbers::pi * term.modes[d] / term.box.length(d);
        c[d] = std::cos(k[d] * (x[d] - term.box.lower(d)));
        sn[d] = std::sin(k[d] * (x[d] - term.box.lower(d)));
      }
      for (std::size_t a = 0; a < n; ++a) {
        for (std::size_t b = 0; b < n; ++b) {
          double v = term.amplitude;
          for (std::size_t d = 0; d < n; ++d) {
            if (a == b && d == a) {
              v *= -k[d] * k[d] * c[d];
            } else if (d == a || d == b) {
              v *= -k[d] * sn[d];
            } else {
              v *= c[d];
            }
          }
          out[a * n + b] += v;
        }
      }
      return;
    }
    case FunctionKind::heat_smoothed:
      if (!term.box.contains(x)) return;
      out[0] += term.amplitude * term.table->second_derivative(x[0]);
      return;
    case FunctionKind::log_one_plus: {
      std::vector<double> g(n), h(n * n);
      term.base->gradient(x, g);
      term.base->hessian(x, h);
      const double inv = 1.0 / (1.0 + term.base->value(x));
      for (std::size_t a = 0; a < n; ++a) {
        for (std::size_t b = 0; b < n; ++b) {
          out[a * n + b] += term.amplitude * (h[a * n + b] * inv - g[a] * g[b] * inv * inv);
        }
      }
      return;
    }
  }
}

double term_value(const FunctionTerm& term, std::span<const double> x) {
  switch (term.kind) {
    case FunctionKind::bump: {
      const double s = squared_offset(term.center, x, term.radius);
      return s >= 1.0 ? 0.0 : term.amplitude * bump_profile(s).b;
    }
    case FunctionKind::coordinate_bump: {
      const double s = squared_offset(term.center, x, term.radius);
      return s >= 1.0 ? 0.0 : term.amplitude * (x[term.axis] - term.center[term.axis]) * bump_profile(s).b;
    }
    case FunctionKind::constant_on_box:
      return term.box.contains(x) ? term.amplitude : 0.0;
    case FunctionKind::cosine_mode: {
      if (!term.box.contains(x)) return 0.0;
      double v = term.amplitude;
      for (std::size_t d = 0; d < x.size(); ++d) {
        v *= std::cos(std::numbers::pi * term.modes[d] * (x[d] - term.box.lower(d)) / term.box.length(d));
      }
      return v;
    }
    case FunctionKind::heat_smoothed:
      return term.box.contains(x) ? term.amplitude * term.table->value(x[0]) : 0.0;
    case FunctionKind::log_one_plus:
      return term.amplitude * std::log1p(term.base->value(x));
  }
  return 0.0;
}

BoxDomain term_support(const FunctionTerm& term) {
  switch (term.kind) {
    case FunctionKind::bump:
    case FunctionKind::coordinate_bump: {
      std::vector<double> lo(term.center.size()), hi(term.center.size());
      for (std::size_t d = 0; d < lo.size(); ++d) {
        lo[d] = term.center[d] - term.radius;
        hi[d] = term.center[d] + term.radius;
      }
      return BoxDomain(std::move(lo), std::move(hi));
    }
    case FunctionKind::log_one_plus:
      return term.base->support();
    default:
      return term.box;
  }
}

SupBounds term_bounds(const FunctionTerm& term, std::size_t n) {
  const double a = std::abs(term.amplitude);
  switch (term.kind) {
    case FunctionKind::bump: {
      const auto m = bump_radial_sups(term.radius, n);
      return {a * m[0], a * m[1], a * m[2]};
    }
    case FunctionKind::coordinate_bump: {
      const auto m = bump_radial_sups(term.radius, n);
      return {a * m[3], a * m[4], a * m[5]};
    }
    case FunctionKind::constant_on_box:
      return {a, 0.0, 0.0};
    case FunctionKind::cosine_mode: {
      double k2 = 0.0;
      for (std::size_t d = 0; d < n; ++d) {
        const double k = std::numbers::pi * term.modes[d] / term.box.length(d);
        k2 += k * k;
      }
      return {a, a * std::sqrt(k2), a * k2};
    }
    case FunctionKind::heat_smoothed:
      return {a * term.table->sup_abs(0), a * term.table->sup_abs(1), a * term.table->sup_abs(2)};
    case FunctionKind::log_one_plus: {
      const SupBounds g = term.base->sup_bounds();
      const double m = 1.0 - g.value;
      return {-a * std::log(m), a * g.gradient / m, a * (g.laplacian / m + g.gradient * g.gradient / (m * m))};
    }
  }
  return {};
}

}  // namespace

SmoothFunction SmoothFunction::bump(std::vector<double> center, double radius, double amplitude) {
  if (center.empty()) throw std::invalid_argument("bump: empty center");
  if (!(radius > 0.0)) throw std::invalid_argument("bump: radius must be positive");
  SmoothFunction f;
  f.dim_ = center.size();
  FunctionTerm t;
  t.kind = FunctionKind::bump;
  t.center = std::move(center);
  t.radius = radius;
  t.amplitude = amplitude;
  f.terms_.push_back(std::move(t));
  return f;
}

SmoothFunction SmoothFunction::coordinate_bump(std::vector<double> center, double radius, std::size_t axis,
                                               double amplitude) {
  SmoothFunction f = bump(std::move(center), radius, amplitude);
  if (axis >= f.dim_) throw std::invalid_argument("coordinate_bump: axis out of range");
  f.terms_[0].kind = FunctionKind::coordinate_bump;
  f.terms_[0].axis = axis;
  return f;
}

SmoothFunction SmoothFunction::constant_on_box(BoxDomain box, double value) {
  SmoothFunction f;
  f.dim_ = box.dim();
  FunctionTerm t;
  t.kind = FunctionKind::constant_on_box;
  t.box = std::move(box);
  t.amplitude = value;
  f.terms_.push_back(std::move(t));
  return f;
}

SmoothFunction SmoothFunction::cosine_mode(BoxDomain box, std::vector<int> modes, double amplitude) {
  if (modes.size() != box.dim()) throw std::invalid_argument("cosine_mode: one mode per axis required");
  for (int m : modes) {
    if (m < 0) throw std::invalid_argument("cosine_mode: modes must be nonnegative");
  }
  SmoothFunction f;
  f.dim_ = box.dim();
  FunctionTerm t;
  t.kind = FunctionKind::cosine_mode;
  t.box = std::move(box);
  t.modes = std::move(modes);
  t.amplitude = amplitude;
  f.terms_.push_back(std::move(t));
  return f;
}

SmoothFunction SmoothFunction::heat_smoothed(const SmoothFunction& g, double t, const BoxDomain& window,
                                             std::size_t quad_order) {
  if (window.dim() != 1 || g.dim() != 1) {
    throw std::invalid_argument("heat_smoothed: only one-dimensional windows are tabulated");
  }
  if (!(t > 0.0)) throw std::invalid_argument("heat_smoothed: t must be positive");
  const HeatKernel1D kernel(window.length(0), 1e-12, window.lower(0));
  auto table = std::make_shared<const SmoothedTable1D>(
      [&g](double x) { return g.value(std::span<const double>(&x, 1)); }, t, kernel, quad_order);
  SmoothFunction f;
  f.dim_ = 1;
  FunctionTerm term;
  term.kind = FunctionKind::heat_smoothed;
  term.box = window;
  term.time = t;
  term.quad_order = quad_order;
  term.base = std::make_shared<const SmoothFunction>(g);
  term.table = std::move(table);
  f.terms_.push_back(std::move(term));
  return f;
}

SmoothFunction SmoothFunction::log_one_plus(const SmoothFunction& g, double amplitude) {
  if (g.empty()) throw std::invalid_argument("log_one_plus: empty argument");
  if (!(g.sup_bounds().value < 1.0)) throw std::invalid_argument("log_one_plus: requires sup |g| < 1");
  SmoothFunction f;
  f.dim_ = g.dim();
  FunctionTerm term;
  term.kind = FunctionKind::log_one_plus;
  term.amplitude = amplitude;
  term.base = std::make_shared<const SmoothFunction>(g);
  f.terms_.push_back(std::move(term));
  return f;
}

SmoothFunction SmoothFunction::from_terms(std::size_t dim, std::vector<FunctionTerm> terms) {
  SmoothFunction f;
  f.dim_ = dim;
  f.terms_ = std::move(terms);
  return f;
}

SmoothFunction SmoothFunction::operator+(const SmoothFunction& other) const {
  if (empty()) return other;
  if (other.empty()) return *this;
  check_dim(dim_, other.dim_);
  SmoothFunction f = *this;
  f.terms_.insert(f.terms_.end(), other.terms_.begin(), other.terms_.end());
  return f;
}

SmoothFunction SmoothFunction::scaled(double factor) const {
  SmoothFunction f = *this;
  for (auto& t : f.terms_) t.amplitude *= factor;
  return f;
}

double SmoothFunction::value(std::span<const double> x) const {
  double v = 0.0;
  for (const auto& t : terms_) v += term_value(t, x);
  return v;
}

void SmoothFunction::gradient(std::span<const double> x, std::span<double> out) const {
  check_dim(dim_, out.size());
  std::fill(out.begin(), out.end(), 0.0);
  for (const auto& t : terms_) add_term_gradient(t, x, out);
}

void SmoothFunction::hessian(std::span<const double> x, std::span<double> out) const {
  check_dim(dim_ * dim_, out.size());
  std::fill(out.begin(), out.end(), 0.0);
  for (const auto& t : terms_) add_term_hessian(t, x, out, dim_);
}

double SmoothFunction::laplacian(std::span<const double> x) const {
  std::vector<double> h(dim_ * dim_);
  hessian(x, h);
  double s = 0.0;
  for (std::size_t d = 0; d < dim_; ++d) s += h[d * dim_ + d];
  return s;
}

BoxDomain SmoothFunction::support() const {
  if (terms_.empty()) throw std::logic_error("SmoothFunction::support: empty function");
  BoxDomain b = term_support(terms_[0]);
  for (std::size_t i = 1; i < terms_.size(); ++i) b = b.hull(term_support(terms_[i]));
  return b;
}

bool SmoothFunction::supported_in_interior(const BoxDomain& window) const {
  for (const auto& t : terms_) {
    if (t.kind != FunctionKind::bump && t.kind != FunctionKind::coordinate_bump) return false;
    const BoxDomain s = term_support(t);
    for (std::size_t d = 0; d < window.dim(); ++d) {
      if (s.lower(d) <= window.lower(d) || s.upper(d) >= window.upper(d)) return false;
    }
  }
  return true;
}

bool SmoothFunction::neumann_on(const BoxDomain& window) const {
  for (const auto& t : terms_) {
    switch (t.kind) {
      case FunctionKind::bump:
      case FunctionKind::coordinate_bump: {
        const BoxDomain s = term_support(t);
        for (std::size_t d = 0; d < window.dim(); ++d) {
          if (s.lower(d) <= window.lower(d) || s.upper(d) >= window.upper(d)) return false;
        }
        break;
      }
      case FunctionKind::constant_on_box:
      case FunctionKind::cosine_mode:
      case FunctionKind::heat_smoothed:
        if (!(t.box == window)) return false;
        break;
      case FunctionKind::log_one_plus:
        if (!t.base->neumann_on(window)) return false;
        break;
    }
  }
  return true;
}

SupBounds SmoothFunction::sup_bounds() const {
  SupBounds b;
  for (const auto& t : terms_) {
    const SupBounds tb = term_bounds(t, dim_);
    b.value += tb.value;
    b.gradient += tb.gradient;
    b.laplacian += tb.laplacian;
  }
  return b;
}

SmoothVectorField SmoothVectorField::from_components(std::vector<SmoothFunction> components) {
  if (components.empty()) throw std::invalid_argument("SmoothVectorField: no components");
  SmoothVectorField v;
  v.dim_ = components.size();
  for (const auto& c : components) {
    if (!c.empty() && c.dim() != v.dim_) throw std::invalid_argument("SmoothVectorField: component dimension mismatch");
  }
  v.components_ = std::move(components);
  return v;
}

SmoothVectorField SmoothVectorField::gradient_of(const SmoothFunction& f, double scale) {
  if (f.empty()) throw std::invalid_argument("SmoothVectorField::gradient_of: empty potential");
  SmoothVectorField v;
  v.dim_ = f.dim();
  v.is_gradient_ = true;
  v.potential_ = f;
  v.scale_ = scale;
  return v;
}

void SmoothVectorField::value(std::span<const double> x, std::span<double> out) const {
  if (is_gradient_) {
    potential_.gradient(x, out);
    for (double& o : out) o *= scale_;
    return;
  }
  for (std::size_t a = 0; a < dim_; ++a) out[a] = components_[a].empty() ? 0.0 : components_[a].value(x);
}

void SmoothVectorField::jacobian(std::span<const double> x, std::span<double> out) const {
  if (is_gradient_) {
    potential_.hessian(x, out);
    for (double& o : out) o *= scale_;
    return;
  }
  for (std::size_t a = 0; a < dim_; ++a) {
    auto row = out.subspan(a * dim_, dim_);
    if (components_[a].empty()) {
      std::fill(row.begin(), row.end(), 0.0);
    } else {
      components_[a].gradient(x, row);
    }
  }
}

double SmoothVectorField::divergence(std::span<const double> x) const {
  if (is_gradient_) return scale_ * potential_.laplacian(x);
  double s = 0.0;
  std::vector<double> g(dim_);
  for (std::size_t a = 0; a < dim_; ++a) {
    if (components_[a].empty()) continue;
    components_[a].gradient(x, g);
    s += g[a];
  }
  return s;
}

BoxDomain SmoothVectorField::support() const {
  if (is_gradient_) return potential_.support();
  bool have = false;
  BoxDomain b;
  for (const auto& c : components_) {
    if (c.empty()) continue;
    b = have ? b.hull(c.support()) : c.support();
    have = true;
  }
  if (!have) throw std::logic_error("SmoothVectorField::support: zero field");
  return b;
}

bool SmoothVectorField::tangential_on(const BoxDomain& window) const {
  if (is_gradient_) return potential_.neumann_on(window);
  return supported_in_interior(window);
}

bool SmoothVectorField::supported_in_interior(const BoxDomain& window) const {
  if (is_gradient_) return potential_.supported_in_interior(window);
  for (const auto& c : components_) {
    if (!c.empty() && !c.supported_in_interior(window)) return false;
  }
  return true;
}

}  // namespace ugmt
