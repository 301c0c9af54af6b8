#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <optional>
#include <vector>

#include "nflab/analytic_fn.hpp"
#include "nflab/errors.hpp"
#include "nflab/grid.hpp"

namespace nflab {

// ---------------------------------------------------------------------------
// Closed contours for argument-principle counting.  A contour is a list of
// pieces traversed in order; pieces are circular arcs or straight segments.

struct ContourPiece {
  enum class Kind { Arc, Line };
  Kind kind;
  Complex center{0.0, 0.0};  // Arc
  double radius{0.0};
  double theta0{0.0}, theta1{0.0};
  Complex z0{0.0, 0.0}, z1{0.0, 0.0};  // Line

  Complex at(double t) const {
    if (kind == Kind::Arc) {
      const double th = theta0 + (theta1 - theta0) * t;
      return center + Complex(radius * std::cos(th), radius * std::sin(th));
    }
    return z0 + (z1 - z0) * t;
  }
};

struct Contour {
  std::vector<ContourPiece> pieces;

  static Contour circle(Complex center, double r) {
    Contour c;
    c.pieces.push_back({ContourPiece::Kind::Arc, center, r, 0.0, 2.0 * M_PI, {}, {}});
    return c;
  }

  static Contour rectangle(Complex lo, Complex hi) {
    Contour c;
    const Complex a(lo), b(hi.real(), lo.imag()), d(hi), e(lo.real(), hi.imag());
    c.pieces.push_back({ContourPiece::Kind::Line, {}, 0, 0, 0, a, b});
    c.pieces.push_back({ContourPiece::Kind::Line, {}, 0, 0, 0, b, d});
    c.pieces.push_back({ContourPiece::Kind::Line, {}, 0, 0, 0, d, e});
    c.pieces.push_back({ContourPiece::Kind::Line, {}, 0, 0, 0, e, a});
    return c;
  }

  // Quarter-disk sector: two radii plus the arc between theta0 and theta1.
  static Contour sector(Complex center, double r, double theta0, double theta1) {
    Contour c;
    const Complex p0 = center + Complex(r * std::cos(theta0), r * std::sin(theta0));
    const Complex p1 = center + Complex(r * std::cos(theta1), r * std::sin(theta1));
    c.pieces.push_back({ContourPiece::Kind::Line, {}, 0, 0, 0, center, p0});
    c.pieces.push_back({ContourPiece::Kind::Arc, center, r, theta0, theta1, {}, {}});
    c.pieces.push_back({ContourPiece::Kind::Line, {}, 0, 0, 0, p1, center});
    return c;
  }

  Complex at(double t) const {
    const double scaled = t * pieces.size();
    std::size_t idx = std::min(static_cast<std::size_t>(scaled), pieces.size() - 1);
    return pieces[idx].at(scaled - idx);
  }
};

// ---------------------------------------------------------------------------
// Winding count of f - a along a contour: trapezoid rule on unwrapped phase
// increments, doubling the sample count until the raw integral sits within
// 0.25 of an integer, the per-step phase increments are tame, and the
// rounded value is stable across a doubling.

struct WindingResult {
  long count{0};
  double residual{0.0};
  double min_log_mod{0.0};
  double max_log_mod{0.0};
  long samples{0};
};

struct WindingOptions {
  int initial_samples{256};
  int max_samples{1 << 18};
  double boundary_floor{1e-9};  // min |f-a| must exceed floor*(1 + max |f-a|)
};

namespace detail {

struct PhaseSample {
  double phase;
  double log_mod;
};

}  // namespace detail

inline WindingResult winding_count(const AnalyticFn& f, Complex a, const Contour& contour,
                                   const WindingOptions& opts = {}) {
  long evals = 0;
  double min_log = std::numeric_limits<double>::infinity();
  double max_log = -std::numeric_limits<double>::infinity();
  auto probe = [&](double tau) -> detail::PhaseSample {
    const Complex z = contour.at(tau);
    const ScaledComplex w = f.eval_scaled(z) - ScaledComplex::from(a);
    ++evals;
    const double lm = w.log_abs();
    min_log = std::min(min_log, lm);
    max_log = std::max(max_log, lm);
    return {w.arg(), lm};
  };
  auto wrap = [](double d) {
    while (d > M_PI) d -= 2.0 * M_PI;
    while (d <= -M_PI) d += 2.0 * M_PI;
    return d;
  };

  // Phase increment over [t0, t1], bisecting locally until every measured
  // step is below pi/2 so the unwrapping cannot alias.  Returns nullopt when
  // the evaluation budget runs out or an interval refuses to settle.
  std::function<std::optional<double>(double, const detail::PhaseSample&, double,
                                      const detail::PhaseSample&, int)>
      increment = [&](double t0, const detail::PhaseSample& s0, double t1,
                      const detail::PhaseSample& s1, int depth) -> std::optional<double> {
    const double d = wrap(s1.phase - s0.phase);
    if (std::fabs(d) <= 0.5 * M_PI) return d;
    if (depth > 48 || t1 - t0 < 1e-14 || evals >= opts.max_samples) return std::nullopt;
    const double tm = 0.5 * (t0 + t1);
    const detail::PhaseSample sm = probe(tm);
    const auto left = increment(t0, s0, tm, sm, depth + 1);
    if (!left) return std::nullopt;
    const auto right = increment(tm, sm, t1, s1, depth + 1);
    if (!right) return std::nullopt;
    return *left + *right;
  };

  long prev_count = 0;
  bool have_prev = false;
  for (int n = opts.initial_samples; n <= opts.max_samples && evals < opts.max_samples; n *= 2) {
    std::vector<detail::PhaseSample> base;
    base.reserve(n);
    bool ok = true;
    for (int i = 0; i < n; ++i) base.push_back(probe(static_cast<double>(i) / n));
    double total = 0.0;
    for (int i = 0; i < n && ok; ++i) {
      const double t0 = static_cast<double>(i) / n;
      const double t1 = static_cast<double>(i + 1) / n;
      const auto inc = increment(t0, base[i], t1, base[(i + 1) % n], 0);
      if (!inc)
        ok = false;
      else
        total += *inc;
    }
    // Scale-aware boundary guard; log form because |f-a| may overflow.
    if (min_log < std::log(opts.boundary_floor) + softplus(max_log))
      throw Error(ErrorCode::BoundaryRoot, "boundary modulus below tolerance");
    if (!ok) continue;
    const double raw = total / (2.0 * M_PI);
    const long k = std::lround(raw);
    const double residual = std::fabs(raw - static_cast<double>(k));
    if (residual < 0.25) {
      if (have_prev && prev_count == k) return {k, residual, min_log, max_log, evals};
      have_prev = true;
      prev_count = k;
    } else {
      have_prev = false;
    }
  }
  throw Error(ErrorCode::NonConvergent, "winding residual floor not reached");
}

// ---------------------------------------------------------------------------
// Public counting surface.

struct RootCount {
  Complex a{0.0, 0.0};
  Disk disk;
  long count{0};
  double winding_residual{0.0};
  long samples{0};
};

inline RootCount count_a_points(const AnalyticFn& f, Complex a, const Disk& disk,
                                const WindingOptions& opts = {}) {
  if (!f.domain().contains_disk(disk.center, disk.radius))
    throw Error(ErrorCode::DomainExceeded, "count disk not inside declared domain");
  const WindingResult w = winding_count(f, a, Contour::circle(disk.center, disk.radius), opts);
  if (w.count < 0)
    throw Error(ErrorCode::NonConvergent, "negative winding for a holomorphic integrand");
  return {a, disk, w.count, w.residual, w.samples};
}

// ---------------------------------------------------------------------------
// Localization: recursive quadrisection of the bounding square by count,
// Newton polishing, multiplicity from an isolating winding circle.

struct Root {
  Complex location{0.0, 0.0};
  long multiplicity{1};
};

struct RootList {
  std::vector<Root> roots;
  long total{0};
};

namespace detail {

struct Square {
  double cx, cy, half;
};

// Winding over a square; jiggles the square outward slightly when the
// boundary guard trips (a root sitting on a cut line).
inline std::optional<long> square_count(const AnalyticFn& f, Complex a, const Square& sq,
                                        const WindingOptions& opts) {
  double grow = 1.0;
  for (int attempt = 0; attempt < 6; ++attempt) {
    const double h = sq.half * grow;
    try {
      const Contour c = Contour::rectangle(Complex(sq.cx - h, sq.cy - h),
                                           Complex(sq.cx + h, sq.cy + h));
      return winding_count(f, a, c, opts).count;
    } catch (const Error& e) {
      if (e.code() != ErrorCode::BoundaryRoot) throw;
      grow *= 1.0 + 3.17e-4 * (attempt + 1);
    }
  }
  return std::nullopt;
}

inline Complex newton_polish(const AnalyticFn& f, const AnalyticFn& df, Complex a, Complex z0,
                             long mult, double scale) {
  Complex z = z0;
  for (int it = 0; it < 120; ++it) {
    const ScaledComplex fv = f.eval_scaled(z) - ScaledComplex::from(a);
    if (fv.is_zero()) return z;
    const ScaledComplex dv = df.eval_scaled(z);
    if (dv.is_zero()) break;
    Complex step;
    try {
      step = (fv / dv).to_complex();
    } catch (const Error&) {
      break;
    }
    step *= static_cast<double>(mult);
    z -= step;
    if (std::abs(step) <= 1e-16 * (1.0 + std::abs(z))) break;
  }
  (void)scale;
  return z;
}

}  // namespace detail

inline RootList locate_a_points(const AnalyticFn& f, Complex a, const Disk& disk, double tol,
                                const WindingOptions& opts = {}) {
  if (!(tol > 0.0)) throw Error(ErrorCode::InvalidArgument, "tolerance must be positive");
  const RootCount total = count_a_points(f, a, disk, opts);
  RootList out;
  if (total.count == 0) return out;

  const AnalyticFn df = f.derivative();
  const double cluster_tol = std::max(tol, 1e-8 * disk.radius);
  std::vector<std::pair<Complex, long>> candidates;  // polished point, box count

  std::vector<detail::Square> stack{{disk.center.real(), disk.center.imag(), disk.radius}};
  while (!stack.empty()) {
    const detail::Square sq = stack.back();
    stack.pop_back();
    // Skip squares that cannot intersect the disk.
    const double dx = std::max(0.0, std::fabs(sq.cx - disk.center.real()) - sq.half);
    const double dy = std::max(0.0, std::fabs(sq.cy - disk.center.imag()) - sq.half);
    if (dx * dx + dy * dy > disk.radius * disk.radius) continue;
    const auto cnt = detail::square_count(f, a, sq, opts);
    if (!cnt) throw Error(ErrorCode::ClusterUnresolved, "root pinned to subdivision boundary");
    if (*cnt == 0) continue;
    if (*cnt == 1 || sq.half < cluster_tol) {
      const Complex z = detail::newton_polish(f, df, a, Complex(sq.cx, sq.cy), *cnt, disk.radius);
      candidates.emplace_back(z, *cnt);
      continue;
    }
    const double h = sq.half / 2.0;
    stack.push_back({sq.cx - h, sq.cy - h, h});
    stack.push_back({sq.cx + h, sq.cy - h, h});
    stack.push_back({sq.cx - h, sq.cy + h, h});
    stack.push_back({sq.cx + h, sq.cy + h, h});
  }

  // Merge candidates closer than the cluster tolerance (jiggled squares can
  // find the same root twice) and drop points outside the disk.
  std::vector<Complex> merged;
  for (const auto& [z, cnt] : candidates) {
    (void)cnt;
    if (std::abs(z - disk.center) > disk.radius * (1.0 + 1e-9) + tol) continue;
    bool dup = false;
    for (const auto& m : merged)
      if (std::abs(z - m) <= cluster_tol) {
        dup = true;
        break;
      }
    if (!dup) merged.push_back(z);
  }
  if (merged.empty()) throw Error(ErrorCode::ClusterUnresolved, "no roots survived polishing");

  // Multiplicity: winding on an isolating circle around each polished root.
  std::sort(merged.begin(), merged.end(), [](Complex x, Complex y) {
    return x.real() != y.real() ? x.real() < y.real() : x.imag() < y.imag();
  });
  long sum = 0;
  for (std::size_t i = 0; i < merged.size(); ++i) {
    double gap = disk.radius;
    for (std::size_t j = 0; j < merged.size(); ++j)
      if (j != i) gap = std::min(gap, std::abs(merged[i] - merged[j]));
    const double iso = std::max(std::min(gap / 3.0, cluster_tol * 16.0), 1e-13 * (1.0 + std::abs(merged[i])));
    const WindingResult w = winding_count(f, a, Contour::circle(merged[i], iso), opts);
    if (w.count <= 0) throw Error(ErrorCode::ClusterUnresolved, "isolating circle lost the root");
    out.roots.push_back({merged[i], w.count});
    sum += w.count;
  }
  out.total = sum;
  if (sum != total.count)
    throw Error(ErrorCode::ClusterUnresolved, "located multiplicities disagree with disk count");
  return out;
}

// ---------------------------------------------------------------------------
// Pairing verdict for functions with positive zeros and negative 1-points:
// on a sub-disk whose boundary modulus exceeds 1, the zero / 1-point counts
// must be (0,0) or (1,1) with both points simple.

enum class PairingVerdict { Empty, OnePair, Violation };

struct AxisPairingReport {
  bool hypothesis_ok{false};
  long n_zeros{0};
  long n_ones{0};
  PairingVerdict verdict{PairingVerdict::Empty};
  double min_boundary_modulus{0.0};
  std::vector<Root> zeros;
  std::vector<Root> ones;
};

struct AxisPairingOptions {
  double hypothesis_radius{0.98};  // where "all" zeros/1-points are validated
  double axis_tol{1e-8};
  WindingOptions winding{};
};

inline const char* pairing_verdict_name(PairingVerdict v) {
  switch (v) {
    case PairingVerdict::Empty: return "Empty";
    case PairingVerdict::OnePair: return "OnePair";
    case PairingVerdict::Violation: return "Violation";
  }
  return "?";
}

inline AxisPairingReport verify_axis_pairing(const AnalyticFn& f, double r,
                                             const AxisPairingOptions& opts = {}) {
  if (!(r > 0.0 && r < 1.0))
    throw Error(ErrorCode::InvalidArgument, "radius must sit in (0,1)");
  const auto boundary_min = min_modulus_on_circle(f, Complex(0, 0), r);
  if (!(boundary_min.log_abs > 0.0))
    throw Error(ErrorCode::HypothesisUnchecked,
                "min modulus on the circle does not exceed 1");

  AxisPairingReport rep;
  rep.min_boundary_modulus = std::exp(boundary_min.log_abs);

  const double hyp_r = std::max(opts.hypothesis_radius, r + 1e-6);
  const Disk hyp_disk(Complex(0, 0), hyp_r);
  RootList zeros_all, ones_all;
  try {
    zeros_all = locate_a_points(f, Complex(0, 0), hyp_disk, 1e-10, opts.winding);
    ones_all = locate_a_points(f, Complex(1, 0), hyp_disk, 1e-10, opts.winding);
  } catch (const Error& e) {
    if (e.code() == ErrorCode::ClusterUnresolved || e.code() == ErrorCode::BoundaryRoot ||
        e.code() == ErrorCode::NonConvergent)
      throw Error(ErrorCode::HypothesisUnchecked,
                  std::string("could not localize zeros/1-points: ") + e.what());
    throw;
  }

  rep.hypothesis_ok = true;
  for (const auto& z : zeros_all.roots)
    if (std::fabs(z.location.imag()) > opts.axis_tol || z.location.real() < -opts.axis_tol)
      rep.hypothesis_ok = false;
  for (const auto& o : ones_all.roots)
    if (std::fabs(o.location.imag()) > opts.axis_tol || o.location.real() > opts.axis_tol)
      rep.hypothesis_ok = false;

  for (const auto& z : zeros_all.roots)
    if (std::abs(z.location) < r) {
      rep.zeros.push_back(z);
      rep.n_zeros += z.multiplicity;
    }
  for (const auto& o : ones_all.roots)
    if (std::abs(o.location) < r) {
      rep.ones.push_back(o);
      rep.n_ones += o.multiplicity;
    }

  if (rep.n_zeros == 0 && rep.n_ones == 0) {
    rep.verdict = PairingVerdict::Empty;
  } else if (rep.n_zeros == 1 && rep.n_ones == 1 && rep.zeros.size() == 1 &&
             rep.ones.size() == 1 && rep.zeros[0].multiplicity == 1 &&
             rep.ones[0].multiplicity == 1) {
    rep.verdict = PairingVerdict::OnePair;
  } else {
    rep.verdict = PairingVerdict::Violation;
  }
  return rep;
}

}  // namespace nflab
