#include "ugmt/hausdorff.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "json.hpp"
#include "ugmt/parallel.hpp"
#include "ugmt/rng.hpp"

namespace ugmt {

std::string to_string(HausdorffMethod m) {
  switch (m) {
    case HausdorffMethod::level_set_oracle: return "level_set_oracle";
    case HausdorffMethod::covering_upper_bound: return "covering_upper_bound";
    case HausdorffMethod::counting: return "counting";
    case HausdorffMethod::surface_mesh: return "surface_mesh";
  }
  return "unknown";
}

LevelFunction level_function(const CylinderFunction& F, std::size_t k) {
  LevelFunction g;
  g.dim = F.dim() * k;
  g.value = [F](std::span<const double> x) { return F.value(x); };
  g.gradient = [F](std::span<const double> x, std::span<double> out) { F.gradient(x, out); };
  return g;
}

LevelFunction level_function(const SetSpec& A, std::size_t k) {
  if (A.kind() != SetSpec::Kind::level_set) throw std::invalid_argument("level_function: A is not a level set");
  LevelFunction g = level_function(A.function(), k);
  if (const auto& filter = A.count_filter()) {
    const std::size_t n = A.function().dim();
    g.mask = [f = *filter, n](std::span<const double> x) {
      std::size_t c = 0;
      for (std::size_t i = 0; i * n < x.size(); ++i) c += f.region.contains(x.subspan(i * n, n));
      return f.accepts(c);
    };
  }
  return g;
}

BoxDomain power_box(const BoxDomain& omega, std::size_t k) {
  std::vector<double> lo, hi;
  for (std::size_t i = 0; i < k; ++i) {
    lo.insert(lo.end(), omega.lower().begin(), omega.lower().end());
    hi.insert(hi.end(), omega.upper().begin(), omega.upper().end());
  }
  return BoxDomain(std::move(lo), std::move(hi));
}

namespace {

double norm(std::span<const double> v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

bool masked_in(const LevelFunction& g, std::span<const double> x) { return !g.mask || g.mask(x); }

void uniform_point(const BoxDomain& box, RandomStream& rng, std::span<double> x) {
  for (std::size_t d = 0; d < box.dim(); ++d) x[d] = rng.uniform(box.lower(d), box.upper(d));
}

}  // namespace

HausdorffEstimate hausdorff_level_set(const LevelFunction& g, const BoxDomain& box, double t, double band,
                                      std::size_t n_samples, std::uint64_t seed) {
  if (g.dim != box.dim()) throw std::invalid_argument("hausdorff_level_set: dimension mismatch");
  if (n_samples < 100) throw std::invalid_argument("hausdorff_level_set: at least 100 samples required");
  const std::size_t D = box.dim();
  std::vector<double> gv(n_samples), gn(n_samples);
  std::vector<char> in(n_samples);
  parallel_for(n_samples, [&](std::size_t i) {
    RandomStream rng(seed, i);
    std::vector<double> x(D), grad(D);
    uniform_point(box, rng, x);
    gv[i] = g.value(x);
    g.gradient(x, grad);
    gn[i] = norm(grad);
    in[i] = masked_in(g, x);
  });

  const double vol = box.volume();
  auto estimate = [&](double eps) {
    std::vector<double> v(n_samples, 0.0);
    for (std::size_t i = 0; i < n_samples; ++i) {
      if (in[i] && std::abs(gv[i] - t) < eps) v[i] = vol * gn[i] / (2.0 * eps);
    }
    return estimate_from_samples(v, seed);
  };

  double eps = band > 0.0 ? band : 1e-2 * box.diameter();
  {
    std::size_t hits = 0, flat = 0;
    for (std::size_t i = 0; i < n_samples; ++i) {
      if (in[i] && std::abs(gv[i] - t) < eps) {
        ++hits;
        flat += gn[i] < 1e-3;
      }
    }
    if (hits > 0 && flat * 100 > hits) {
      throw std::domain_error("hausdorff_level_set: critical level (vanishing gradient in the band)");
    }
  }

  HausdorffEstimate out;
  out.method = HausdorffMethod::level_set_oracle;
  MCEstimate cur = estimate(eps);
  if (band <= 0.0) {
    for (int j = 0; j < 8; ++j) {
      const MCEstimate next = estimate(eps / 2.0);
      const bool settled = std::abs(next.mean - cur.mean) < next.std_err;
      cur = next;
      eps /= 2.0;
      if (settled) break;
    }
  }
  out.value = cur.mean;
  out.error_bar = cur.std_err;
  out.band = eps;
  if (cur.mean == 0.0) out.flags.push_back("no_band_samples");
  return out;
}

HausdorffEstimate hausdorff_count_1d(const LevelFunction& g, const BoxDomain& interval, double t, std::size_t scan) {
  if (g.dim != 1 || interval.dim() != 1) throw std::invalid_argument("hausdorff_count_1d: one-dimensional only");
  if (scan < 2) throw std::invalid_argument("hausdorff_count_1d: scan must be at least 2");
  const double a = interval.lower(0), b = interval.upper(0);
  auto f = [&](double x) { return g.value(std::span<const double>(&x, 1)) - t; };
  HausdorffEstimate out;
  out.method = HausdorffMethod::counting;
  double x0 = a, f0 = f(a);
  for (std::size_t j = 1; j <= scan; ++j) {
    const double x1 = a + (b - a) * static_cast<double>(j) / static_cast<double>(scan);
    const double f1 = f(x1);
    if ((f0 > 0.0) != (f1 > 0.0)) {
      double lo = x0, hi = x1, flo = f0;
      for (int it = 0; it < 80 && hi - lo > 1e-15; ++it) {
        const double mid = 0.5 * (lo + hi);
        const double fm = f(mid);
        if ((fm > 0.0) == (flo > 0.0)) {
          lo = mid;
          flo = fm;
        } else {
          hi = mid;
        }
      }
      const double root = 0.5 * (lo + hi);
      if (masked_in(g, std::span<const double>(&root, 1))) out.value += 1.0;
    }
    x0 = x1;
    f0 = f1;
  }
  return out;
}

HausdorffEstimate hausdorff_covering_upper(std::span<const double> points, std::size_t D, double s, double eps,
                                           double floor) {
  if (D == 0 || points.size() % D != 0) throw std::invalid_argument("hausdorff_covering_upper: bad point array");
  if (!(eps > 0.0)) throw std::invalid_argument("hausdorff_covering_upper: eps must be positive");
  if (s < 0.0) throw std::invalid_argument("hausdorff_covering_upper: s must be nonnegative");
  const std::size_t p = points.size() / D;
  HausdorffEstimate out;
  out.method = HausdorffMethod::covering_upper_bound;
  if (p == 0) return out;

  auto dist2 = [&](std::span<const double> a, std::size_t j) {
    double d = 0.0;
    for (std::size_t c = 0; c < D; ++c) d += (a[c] - points[j * D + c]) * (a[c] - points[j * D + c]);
    return d;
  };

  // Number of balls of diameter `diam` placed greedily; `lonely` reports
  // whether some ball covers a single sample.
  auto cover = [&](double diam, bool& lonely) {
    const double r2 = 0.25 * diam * diam;
    std::vector<char> covered(p, 0);
    std::vector<double> c(D), next(D);
    std::size_t balls = 0;
    lonely = false;
    for (std::size_t i = 0; i < p; ++i) {
      if (covered[i]) continue;
      std::copy(points.begin() + static_cast<std::ptrdiff_t>(i * D),
                points.begin() + static_cast<std::ptrdiff_t>((i + 1) * D), c.begin());
      for (int it = 0; it < 10; ++it) {
        std::fill(next.begin(), next.end(), 0.0);
        std::size_t m = 0;
        for (std::size_t j = 0; j < p; ++j) {
          if (covered[j] || dist2(c, j) > r2) continue;
          for (std::size_t d = 0; d < D; ++d) next[d] += points[j * D + d];
          ++m;
        }
        for (double& v : next) v /= static_cast<double>(m);
        // Keep the seed sample inside the ball so every step makes progress.
        if (dist2(next, i) > r2) break;
        if (next == c) break;
        c = next;
      }
      std::size_t m = 0;
      for (std::size_t j = 0; j < p; ++j) {
        if (!covered[j] && dist2(c, j) <= r2) {
          covered[j] = 1;
          ++m;
        }
      }
      lonely = lonely || m == 1;
      ++balls;
    }
    return balls;
  };

  const double cs = hausdorff_constant(s);
  double best = std::numeric_limits<double>::infinity();
  bool best_lonely = false;
  for (double e = eps;; e /= 2.0) {
    bool lonely = false;
    const double v = static_cast<double>(cover(e, lonely)) * cs * std::pow(e, s);
    if (v < best) {
      best = v;
      best_lonely = lonely;
    }
    if (floor <= 0.0 || e / 2.0 < floor) break;
  }
  out.value = best;
  if (best_lonely) out.flags.push_back("under_resolved");
  return out;
}

namespace {

// One Newton step toward {g = t}, clamped to the box.
void project(const LevelFunction& g, const BoxDomain& box, double t, std::vector<double>& x,
             std::vector<double>& grad) {
  g.gradient(x, grad);
  double n2 = 0.0;
  for (double v : grad) n2 += v * v;
  if (n2 > 0.0) {
    const double step = (g.value(x) - t) / n2;
    for (std::size_t d = 0; d < x.size(); ++d) {
      x[d] = std::clamp(x[d] - step * grad[d], box.lower(d), box.upper(d));
    }
  }
  g.gradient(x, grad);
}

void emit(const LevelFunction& g, const BoxDomain& box, double t, std::vector<double> x, double measure,
          std::vector<SurfaceElement>& out) {
  if (!(measure > 0.0)) return;
  std::vector<double> grad(x.size());
  project(g, box, t, x, grad);
  if (!masked_in(g, x)) return;
  const double gn = norm(grad);
  if (gn > 0.0) {
    for (double& v : grad) v /= gn;
  }
  out.push_back(SurfaceElement{std::move(x), measure, std::move(grad)});
}

using P3 = std::array<double, 3>;

P3 lerp3(const P3& a, const P3& b, double fa, double fb) {
  const double w = fa / (fa - fb);
  return {a[0] + w * (b[0] - a[0]), a[1] + w * (b[1] - a[1]), a[2] + w * (b[2] - a[2])};
}

double triangle_area(const P3& a, const P3& b, const P3& c) {
  const P3 u{b[0] - a[0], b[1] - a[1], b[2] - a[2]};
  const P3 v{c[0] - a[0], c[1] - a[1], c[2] - a[2]};
  const P3 w{u[1] * v[2] - u[2] * v[1], u[2] * v[0] - u[0] * v[2], u[0] * v[1] - u[1] * v[0]};
  return 0.5 * std::sqrt(w[0] * w[0] + w[1] * w[1] + w[2] * w[2]);
}

void emit_triangle(const LevelFunction& g, const BoxDomain& box, double t, const P3& a, const P3& b, const P3& c,
                   std::vector<SurfaceElement>& out) {
  emit(g, box, t, {(a[0] + b[0] + c[0]) / 3.0, (a[1] + b[1] + c[1]) / 3.0, (a[2] + b[2] + c[2]) / 3.0},
       triangle_area(a, b, c), out);
}

void surface_1d(const LevelFunction& g, const BoxDomain& box, double t, std::size_t N,
                std::vector<SurfaceElement>& out) {
  LevelFunction unmasked = g;
  unmasked.mask = nullptr;
  const double a = box.lower(0), b = box.upper(0);
  auto f = [&](double x) { return g.value(std::span<const double>(&x, 1)) - t; };
  double x0 = a, f0 = f(a);
  for (std::size_t j = 1; j <= N; ++j) {
    const double x1 = a + (b - a) * static_cast<double>(j) / static_cast<double>(N);
    const double f1 = f(x1);
    if ((f0 > 0.0) != (f1 > 0.0)) {
      double lo = x0, hi = x1, flo = f0;
      for (int it = 0; it < 80 && hi - lo > 1e-15; ++it) {
        const double mid = 0.5 * (lo + hi);
        const double fm = f(mid);
        if ((fm > 0.0) == (flo > 0.0)) {
          lo = mid;
          flo = fm;
        } else {
          hi = mid;
        }
      }
      std::vector<double> x{0.5 * (lo + hi)};
      if (masked_in(g, x)) {
        std::vector<double> grad(1);
        g.gradient(x, grad);
        grad[0] = grad[0] > 0.0 ? 1.0 : (grad[0] < 0.0 ? -1.0 : 0.0);
        out.push_back(SurfaceElement{std::move(x), 1.0, std::move(grad)});
      }
    }
    x0 = x1;
    f0 = f1;
  }
}

void surface_2d(const LevelFunction& g, const BoxDomain& box, double t, std::size_t N,
                std::vector<SurfaceElement>& out) {
  const double hx = box.length(0) / static_cast<double>(N), hy = box.length(1) / static_cast<double>(N);
  const std::size_t M = N + 1;
  std::vector<double> f(M * M);
  parallel_for(M * M, [&](std::size_t idx) {
    const std::size_t i = idx % M, j = idx / M;
    const std::array<double, 2> x{box.lower(0) + static_cast<double>(i) * hx,
                                  box.lower(1) + static_cast<double>(j) * hy};
    f[idx] = g.value(x) - t;
  });
  using P2 = std::array<double, 2>;
  for (std::size_t j = 0; j < N; ++j) {
    for (std::size_t i = 0; i < N; ++i) {
      const double x0 = box.lower(0) + static_cast<double>(i) * hx, y0 = box.lower(1) + static_cast<double>(j) * hy;
      const std::array<P2, 4> c{P2{x0, y0}, P2{x0 + hx, y0}, P2{x0 + hx, y0 + hy}, P2{x0, y0 + hy}};
      const std::array<double, 4> v{f[j * M + i], f[j * M + i + 1], f[(j + 1) * M + i + 1], f[(j + 1) * M + i]};
      std::array<bool, 4> s{};
      for (int q = 0; q < 4; ++q) s[q] = v[q] > 0.0;
      std::array<P2, 4> cross{};
      std::array<bool, 4> has{};
      int count = 0;
      for (int e = 0; e < 4; ++e) {
        const int a = e, b = (e + 1) % 4;
        if (s[a] != s[b]) {
          const double w = v[a] / (v[a] - v[b]);
          cross[e] = {c[a][0] + w * (c[b][0] - c[a][0]), c[a][1] + w * (c[b][1] - c[a][1])};
          has[e] = true;
          ++count;
        }
      }
      auto segment = [&](int e1, int e2) {
        const P2& p = cross[e1];
        const P2& q = cross[e2];
        emit(g, box, t, {0.5 * (p[0] + q[0]), 0.5 * (p[1] + q[1])}, std::hypot(p[0] - q[0], p[1] - q[1]), out);
      };
      if (count == 2) {
        int e1 = -1, e2 = -1;
        for (int e = 0; e < 4; ++e) {
          if (has[e]) (e1 < 0 ? e1 : e2) = e;
        }
        segment(e1, e2);
      } else if (count == 4) {
        const double centre = 0.25 * (v[0] + v[1] + v[2] + v[3]);
        if ((centre > 0.0) == s[0]) {
          segment(0, 1);
          segment(2, 3);
        } else {
          segment(3, 0);
          segment(1, 2);
        }
      }
    }
  }
}

void surface_3d(const LevelFunction& g, const BoxDomain& box, double t, std::size_t N,
                std::vector<SurfaceElement>& out) {
  const std::array<double, 3> h{box.length(0) / static_cast<double>(N), box.length(1) / static_cast<double>(N),
                                box.length(2) / static_cast<double>(N)};
  const std::size_t M = N + 1;
  std::vector<double> f(M * M * M);
  parallel_for(f.size(), [&](std::size_t idx) {
    const std::size_t i = idx % M, j = (idx / M) % M, k = idx / (M * M);
    const std::array<double, 3> x{box.lower(0) + static_cast<double>(i) * h[0],
                                  box.lower(1) + static_cast<double>(j) * h[1],
                                  box.lower(2) + static_cast<double>(k) * h[2]};
    f[idx] = g.value(x) - t;
  });
  // Six tetrahedra around the main diagonal 0-7; corner c has offsets
  // (c & 1, (c >> 1) & 1, (c >> 2) & 1).
  static constexpr int tets[6][4] = {{0, 1, 3, 7}, {0, 1, 5, 7}, {0, 2, 3, 7},
                                     {0, 2, 6, 7}, {0, 4, 5, 7}, {0, 4, 6, 7}};
  for (std::size_t k = 0; k < N; ++k) {
    for (std::size_t j = 0; j < N; ++j) {
      for (std::size_t i = 0; i < N; ++i) {
        std::array<P3, 8> p{};
        std::array<double, 8> v{};
        bool any_pos = false, any_neg = false;
        for (int c = 0; c < 8; ++c) {
          const std::size_t ci = i + (c & 1), cj = j + ((c >> 1) & 1), ck = k + ((c >> 2) & 1);
          p[c] = {box.lower(0) + static_cast<double>(ci) * h[0], box.lower(1) + static_cast<double>(cj) * h[1],
                  box.lower(2) + static_cast<double>(ck) * h[2]};
          v[c] = f[(ck * M + cj) * M + ci];
          (v[c] > 0.0 ? any_pos : any_neg) = true;
        }
        if (!any_pos || !any_neg) continue;
        for (const auto& tet : tets) {
          std::array<int, 4> pos{}, neg{};
          int np = 0, nn = 0;
          for (int q = 0; q < 4; ++q) (v[tet[q]] > 0.0 ? pos[np++] : neg[nn++]) = tet[q];
          auto X = [&](int a, int b) { return lerp3(p[a], p[b], v[a], v[b]); };
          if (np == 1 || nn == 1) {
            const int lone = np == 1 ? pos[0] : neg[0];
            const auto& others = np == 1 ? neg : pos;
            emit_triangle(g, box, t, X(lone, others[0]), X(lone, others[1]), X(lone, others[2]), out);
          } else if (np == 2) {
            const P3 a = X(pos[0], neg[0]), b = X(pos[0], neg[1]), c = X(pos[1], neg[1]), d = X(pos[1], neg[0]);
            emit_triangle(g, box, t, a, b, c, out);
            emit_triangle(g, box, t, a, c, d, out);
          }
        }
      }
    }
  }
}

}  // namespace

std::vector<SurfaceElement> level_surface(const LevelFunction& g, const BoxDomain& box, double t,
                                          std::size_t resolution) {
  if (g.dim != box.dim()) throw std::invalid_argument("level_surface: dimension mismatch");
  if (resolution < 2) throw std::invalid_argument("level_surface: resolution must be at least 2");
  std::vector<SurfaceElement> out;
  switch (box.dim()) {
    case 1: surface_1d(g, box, t, resolution, out); break;
    case 2: surface_2d(g, box, t, resolution, out); break;
    case 3: surface_3d(g, box, t, resolution, out); break;
    default: throw std::invalid_argument("level_surface: dimension must be 1, 2 or 3");
  }
  return out;
}

std::string CodimMeasureResult::to_json() const {
  nlohmann::ordered_json j;
  j["m"] = m;
  j["total"] = total;
  j["total_err"] = total_err;
  j["k_truncation"] = k_truncation;
  j["per_k"] = per_k;
  j["per_k_err"] = per_k_err;
  j["per_k_method"] = per_k_method;
  j["window"] = {{"lower", window.lower()}, {"upper", window.upper()}};
  j["flags"] = flags;
  return j.dump();
}

CodimMeasureResult rho_m_on_box(const SetSpec& A, int m, const BoxDomain& omega, const MCPlan& plan,
                                std::size_t k_max, double band) {
  if (m < 0) throw std::invalid_argument("rho_m_on_box: m must be nonnegative");
  if (m >= 2) throw std::invalid_argument("rho_m_on_box: only m = 0 and m = 1 are supported");
  if (plan.n_samples < 100) throw std::invalid_argument("rho_m_on_box: at least 100 samples required");
  const double vol = omega.volume();
  CodimMeasureResult r;
  r.m = m;
  r.window = omega;
  r.k_truncation = k_max ? k_max : poisson_truncation(vol);
  const std::size_t K = r.k_truncation;
  r.per_k.assign(K + 1, 0.0);
  r.per_k_err.assign(K + 1, 0.0);
  r.per_k_method.assign(K + 1, "none");
  auto weight = [vol](std::size_t k) {
    return std::exp(static_cast<double>(k) * std::log(vol) - std::lgamma(static_cast<double>(k) + 1.0));
  };
  // Disjoint stream ranges per stratum.
  auto stream = [](std::size_t k, std::size_t i) { return (static_cast<std::uint64_t>(k) << 40) + i; };

  if (m == 0) {
    for (std::size_t k = 0; k <= K; ++k) {
      if (k == 0) {
        r.per_k[0] = A.contains(Configuration(omega)) ? 1.0 : 0.0;
        r.per_k_method[0] = "exact";
        continue;
      }
      const auto v = parallel_map(plan.n_samples, [&](std::size_t i) {
        RandomStream rng(plan.seed, stream(k, i));
        return A.contains(sample_uniform(omega, k, rng)) ? 1.0 : 0.0;
      });
      const MCEstimate e = estimate_from_samples(v, plan.seed);
      r.per_k[k] = weight(k) * e.mean;
      r.per_k_err[k] = weight(k) * e.std_err;
      r.per_k_method[k] = "uniform_mc";
    }
  } else {
    if (A.kind() == SetSpec::Kind::empty || A.kind() == SetSpec::Kind::full) {
      r.flags.push_back("no_boundary");
      return r;
    }
    if (A.kind() != SetSpec::Kind::level_set) {
      r.total = std::numeric_limits<double>::infinity();
      r.total_err = std::numeric_limits<double>::infinity();
      r.flags.push_back("unsupported_set_kind: covering bound is infinite for sets with interior");
      return r;
    }
    const std::size_t n = omega.dim();
    const auto& filter = A.count_filter();
    for (std::size_t k = 1; k <= K; ++k) {
      if (filter && filter->region.contains_box(omega) && !filter->accepts(k)) continue;
      const LevelFunction g = level_function(A, k);
      const BoxDomain box = power_box(omega, k);
      const double inv_fact = std::exp(-std::lgamma(static_cast<double>(k) + 1.0));
      if (n * k == 1) {
        const HausdorffEstimate h = hausdorff_count_1d(g, box, A.level());
        r.per_k[k] = h.value;
        r.per_k_method[k] = to_string(h.method);
      } else {
        const std::uint64_t seed = plan.seed ^ mix64(static_cast<std::uint64_t>(k));
        const HausdorffEstimate h = hausdorff_level_set(g, box, A.level(), band, plan.n_samples, seed);
        r.per_k[k] = h.value * inv_fact;
        r.per_k_err[k] = h.error_bar * inv_fact;
        r.per_k_method[k] = to_string(h.method);
      }
    }
  }
  double total = 0.0, var = 0.0;
  for (std::size_t k = 0; k <= K; ++k) {
    total += r.per_k[k];
    var += r.per_k_err[k] * r.per_k_err[k];
  }
  r.total = std::exp(-vol) * total;
  r.total_err = std::exp(-vol) * std::sqrt(var);
  return r;
}

MCEstimate rho_m_localized(const SetSpec& A, int m, const BoxDomain& Q, const BoxDomain& W, const MCPlan& plan,
                           double band) {
  if (m != 0 && m != 1) throw std::invalid_argument("rho_m_localized: only m = 0 and m = 1 are supported");
  if (A.locality() && !W.contains_box(*A.locality())) {
    throw std::invalid_argument("rho_m_localized: the outer window must contain the locality of A");
  }
  MCPlan p = plan;
  p.window = W;
  p.validate();
  if (m == 0) return measure_of_set(A, p);
  if (A.kind() == SetSpec::Kind::empty || A.kind() == SetSpec::Kind::full) return MCEstimate{0.0, 0.0, p.n_samples, p.seed};
  if (A.kind() != SetSpec::Kind::level_set) throw std::invalid_argument("rho_m_localized: m = 1 requires a level set");
  if (!(band > 0.0)) throw std::invalid_argument("rho_m_localized: band must be positive");
  const CylinderFunction& F = A.function();
  const auto& filter = A.count_filter();
  const std::size_t n = W.dim();
  const double t = A.level();
  const auto v = parallel_map(p.n_samples, [&](std::size_t i) {
    RandomStream rng(p.seed, i);
    const Configuration gamma = sample_poisson(W, rng);
    if (filter && !filter->accepts(gamma.count_in(filter->region))) return 0.0;
    if (std::abs(F.value(gamma) - t) >= band) return 0.0;
    const std::vector<double> grad = F.gradient(gamma);
    double s = 0.0;
    for (std::size_t q = 0; q < gamma.count(); ++q) {
      if (!Q.contains(gamma.point(q))) continue;
      for (std::size_t d = 0; d < n; ++d) s += grad[q * n + d] * grad[q * n + d];
    }
    return std::sqrt(s) / (2.0 * band);
  });
  return estimate_from_samples(v, p.seed);
}

MCEstimate rho_m_localized(const SetSpec& A, int m, double r, double R_outer, const MCPlan& plan, double band) {
  if (!(r > 0.0) || r > R_outer) throw std::invalid_argument("rho_m_localized: need 0 < r <= R_outer");
  const std::size_t n = plan.window.dim() ? plan.window.dim() : A.function().dim();
  return rho_m_localized(A, m, BoxDomain::centered(n, r), BoxDomain::centered(n, R_outer), plan, band);
}

LimitResult rho_m_limit(const SetSpec& A, int m, const std::vector<double>& r_schedule, double R_outer,
                        const MCPlan& plan, double band) {
  if (r_schedule.empty()) throw std::invalid_argument("rho_m_limit: empty schedule");
  if (!std::is_sorted(r_schedule.begin(), r_schedule.end())) {
    throw std::invalid_argument("rho_m_limit: schedule must be increasing");
  }
  LimitResult out;
  out.r = r_schedule;
  for (double r : r_schedule) {
    out.values.push_back(rho_m_localized(A, m, r, R_outer, plan, band));
    const std::size_t j = out.values.size() - 1;
    if (j > 0) {
      const MCEstimate& a = out.values[j - 1];
      const MCEstimate& b = out.values[j];
      const double sigma = std::hypot(a.std_err, b.std_err);
      if (b.mean < a.mean) out.monotone = false;
      if (b.mean < a.mean - 3.0 * sigma) {
        throw std::logic_error("rho_m_limit: localized measure decreased by more than 3 sigma");
      }
    }
  }
  out.limit = out.values.back();
  if (out.values.size() > 1) {
    const MCEstimate& a = out.values[out.values.size() - 2];
    out.saturated = std::abs(out.limit.mean - a.mean) <= std::hypot(a.std_err, out.limit.std_err);
  }
  return out;
}

}  // namespace ugmt
