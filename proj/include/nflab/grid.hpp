#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <string>

#include "nflab/analytic_fn.hpp"
#include "nflab/errors.hpp"

namespace nflab {

// Sampling plan for scans.  Counts are clamped below at 8; refinement is a
// single golden-section pass around the discrete extremum, so it always
// halts.
struct GridSpec {
  enum class Kind { CircleSamples, PolarDiskGrid, SegmentSamples };

  Kind kind{Kind::PolarDiskGrid};
  int angular{256};
  int radial{48};
  bool refine{true};
  double density{1.0};  // multiplies the default circle sample count

  static GridSpec circle(int n = 0, bool refine = true) {
    GridSpec g;
    g.kind = Kind::CircleSamples;
    g.angular = n;
    g.refine = refine;
    return g;
  }

  static GridSpec polar(int radial = 48, int angular = 192, bool refine = true) {
    GridSpec g;
    g.kind = Kind::PolarDiskGrid;
    g.radial = std::max(radial, 8);
    g.angular = std::max(angular, 8);
    g.refine = refine;
    return g;
  }
};

// Default circle sampling: max(256, ceil(64 * r * density)).
inline int circle_sample_count(double r, double density) {
  const double want = std::ceil(64.0 * r * density);
  return std::max(256, static_cast<int>(want));
}

struct GridMeta {
  std::string kind;
  int angular{0};
  int radial{0};
  long evaluations{0};
  bool refined{false};
};

// Result of an extremum scan.  Values are tracked as objective doubles; for
// modulus scans the objective is log|f| so astronomically large moduli stay
// representable, with `value` exposed for callers that can afford it.
struct ScanExtremum {
  Complex point{0.0, 0.0};
  double objective{0.0};  // the scanned objective (log|f| or f#)
  GridMeta meta;
};

namespace detail {

// One golden-section pass over [lo, hi] for a 1-d objective; returns the
// best (x, value) seen including the endpoints.  Maximization.
template <typename F>
std::pair<double, double> golden_max(F&& obj, double lo, double hi, int iters) {
  const double gr = 0.6180339887498949;
  double a = lo, b = hi;
  double x1 = b - gr * (b - a), x2 = a + gr * (b - a);
  double f1 = obj(x1), f2 = obj(x2);
  double best_x = f1 >= f2 ? x1 : x2;
  double best_f = std::max(f1, f2);
  for (int i = 0; i < iters; ++i) {
    if (f1 < f2) {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + gr * (b - a);
      f2 = obj(x2);
    } else {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - gr * (b - a);
      f1 = obj(x1);
    }
    if (f1 > best_f) best_f = f1, best_x = x1;
    if (f2 > best_f) best_f = f2, best_x = x2;
  }
  return {best_x, best_f};
}

}  // namespace detail

// Maximize `obj` over the circle |z - center| = r.  The reported maximum is
// the best over every evaluated point, so refining never decreases it.
template <typename F>
ScanExtremum circle_argmax(F&& obj, Complex center, double r, int n, bool refine) {
  n = std::max(n, 8);
  ScanExtremum out;
  out.meta.kind = "circle";
  out.meta.angular = n;
  double best = -std::numeric_limits<double>::infinity();
  int best_i = 0;
  for (int i = 0; i < n; ++i) {
    const double th = 2.0 * M_PI * i / n;
    const Complex z = center + Complex(r * std::cos(th), r * std::sin(th));
    const double v = obj(z);
    ++out.meta.evaluations;
    if (v > best) {
      best = v;
      best_i = i;
      out.point = z;
    }
  }
  out.objective = best;
  if (refine) {
    const double th0 = 2.0 * M_PI * (best_i - 1) / n;
    const double th1 = 2.0 * M_PI * (best_i + 1) / n;
    auto line = [&](double th) {
      ++out.meta.evaluations;
      return obj(center + Complex(r * std::cos(th), r * std::sin(th)));
    };
    auto [bx, bf] = detail::golden_max(line, th0, th1, 40);
    if (bf > out.objective) {
      out.objective = bf;
      out.point = center + Complex(r * std::cos(bx), r * std::sin(bx));
    }
    out.meta.refined = true;
  }
  return out;
}

// Maximize `obj` over the closed disk D(center, r) on a polar grid (rings
// plus the center point), with an optional golden refinement in angle and
// radius around the discrete argmax.
template <typename F>
ScanExtremum disk_argmax(F&& obj, Complex center, double r, const GridSpec& grid) {
  ScanExtremum out;
  out.meta.kind = "polar-disk";
  out.meta.radial = std::max(grid.radial, 8);
  out.meta.angular = std::max(grid.angular, 8);
  const int nr = out.meta.radial, na = out.meta.angular;

  out.point = center;
  out.objective = obj(center);
  ++out.meta.evaluations;
  double best_rad = 0.0, best_th = 0.0;
  for (int i = 1; i <= nr; ++i) {
    const double rad = r * i / nr;
    for (int j = 0; j < na; ++j) {
      const double th = 2.0 * M_PI * j / na;
      const Complex z = center + Complex(rad * std::cos(th), rad * std::sin(th));
      const double v = obj(z);
      ++out.meta.evaluations;
      if (v > out.objective) {
        out.objective = v;
        out.point = z;
        best_rad = rad;
        best_th = th;
      }
    }
  }
  if (grid.refine && best_rad > 0.0) {
    auto polar = [&](double rad, double th) {
      ++out.meta.evaluations;
      return obj(center + Complex(rad * std::cos(th), rad * std::sin(th)));
    };
    auto [th_best, f_th] = detail::golden_max(
        [&](double th) { return polar(best_rad, th); },
        best_th - 2.0 * M_PI / na, best_th + 2.0 * M_PI / na, 36);
    if (f_th > out.objective) {
      out.objective = f_th;
      out.point = center + Complex(best_rad * std::cos(th_best), best_rad * std::sin(th_best));
    }
    const double dr = r / nr;
    auto [r_best, f_r] = detail::golden_max(
        [&](double rad) { return polar(rad, th_best); },
        std::max(0.0, best_rad - dr), std::min(r, best_rad + dr), 36);
    if (f_r > out.objective) {
      out.objective = f_r;
      out.point = center + Complex(r_best * std::cos(th_best), r_best * std::sin(th_best));
    }
    out.meta.refined = true;
  }
  return out;
}

// --------------------------------------------------------------------------
// Named scans from the operations surface.

struct ModulusExtremum {
  double log_abs{0.0};
  Complex point{0.0, 0.0};
  GridMeta meta;

  // Plain modulus; Overflow if it does not fit in a double.
  double value() const {
    const double v = std::exp(log_abs);
    if (!std::isfinite(v)) throw Error(ErrorCode::Overflow, "modulus exceeds double range");
    return v;
  }
};

inline ModulusExtremum max_modulus_on_circle(const AnalyticFn& f, Complex center, double r,
                                             const GridSpec& grid = GridSpec::circle()) {
  if (!f.domain().contains_disk(center, r))
    throw Error(ErrorCode::DomainExceeded, "circle not inside declared domain");
  const int n = grid.angular > 0 ? grid.angular : circle_sample_count(r, grid.density);
  auto ext = circle_argmax([&](Complex z) { return f.eval_scaled(z).log_abs(); }, center, r, n,
                           grid.refine);
  return {ext.objective, ext.point, ext.meta};
}

inline ModulusExtremum min_modulus_on_circle(const AnalyticFn& f, Complex center, double r,
                                             const GridSpec& grid = GridSpec::circle()) {
  if (!f.domain().contains_disk(center, r))
    throw Error(ErrorCode::DomainExceeded, "circle not inside declared domain");
  const int n = grid.angular > 0 ? grid.angular : circle_sample_count(r, grid.density);
  auto ext = circle_argmax([&](Complex z) { return -f.eval_scaled(z).log_abs(); }, center, r, n,
                           grid.refine);
  return {-ext.objective, ext.point, ext.meta};
}

// H(r)-style scan: (argmax, max) of the spherical derivative over the
// closed disk.
struct SphericalMax {
  Complex argmax{0.0, 0.0};
  double value{0.0};
  GridMeta meta;
};

inline SphericalMax max_spherical_on_disk(const SphericalEvaluator& sph, Complex a, double r,
                                          const GridSpec& grid = GridSpec::polar()) {
  if (!sph.fn().domain().contains_disk(a, r))
    throw Error(ErrorCode::DomainExceeded, "scan disk not inside declared domain");
  if (r == 0.0) {
    return {a, sph(a), GridMeta{"point", 0, 0, 1, false}};
  }
  auto ext = disk_argmax([&](Complex z) { return sph(z); }, a, r, grid);
  return {ext.point, ext.objective, ext.meta};
}

inline SphericalMax max_spherical_on_disk(const AnalyticFn& f, Complex a, double r,
                                          const GridSpec& grid = GridSpec::polar()) {
  SphericalEvaluator sph(f);
  return max_spherical_on_disk(sph, a, r, grid);
}

}  // namespace nflab
