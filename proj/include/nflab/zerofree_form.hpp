#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "nflab/analytic_fn.hpp"
#include "nflab/errors.hpp"
#include "nflab/grid.hpp"
#include "nflab/root_engine.hpp"

namespace nflab {

// ---------------------------------------------------------------------------
// Smallest-modulus 1-point within the search disk of a zero-free function.

inline Complex find_unit_point(const AnalyticFn& g, double search_radius,
                               const WindingOptions& opts = {}) {
  if (!(search_radius > 0.0))
    throw Error(ErrorCode::InvalidArgument, "search radius must be positive");
  const Disk search(Complex(0, 0), search_radius);
  if (count_a_points(g, Complex(0, 0), search, opts).count != 0)
    throw Error(ErrorCode::HypothesisFailed, "function has zeros in the search disk");
  RootList ones;
  try {
    ones = locate_a_points(g, Complex(1, 0), search, 1e-11, opts);
  } catch (const Error& e) {
    if (e.code() == ErrorCode::ClusterUnresolved)
      throw Error(ErrorCode::NoUnitPoint, std::string("1-point localization failed: ") + e.what());
    throw;
  }
  if (ones.roots.empty())
    throw Error(ErrorCode::NoUnitPoint, "no 1-point within the search disk");
  Complex best = ones.roots[0].location;
  for (const auto& r : ones.roots)
    if (std::abs(r.location) < std::abs(best)) best = r.location;
  return best;
}

// ---------------------------------------------------------------------------
// Analytic continuation of log g along the straight segment [b, z]:
//   h(z) = integral of g'/g, with h(b) = 0, so exp(h(z)) = g(z).
// Not a principal log; the branch is the one continued along the path.

struct LogBranchOptions {
  double rel_tol{1e-11};
  int max_panels{1 << 16};
  double integrand_cap{1e12};  // |g'/g| above this means a zero is too close
};

inline Complex log_branch(const AnalyticFn& g, const AnalyticFn& dg, Complex b, Complex z,
                          const LogBranchOptions& opts = {}) {
  const Complex dir = z - b;
  if (std::abs(dir) == 0.0) return Complex(0.0, 0.0);
  auto logderiv = [&](double tau) {
    const Complex p = b + dir * tau;
    const ScaledComplex gv = g.eval_scaled(p);
    if (gv.is_zero()) throw Error(ErrorCode::PathTooCloseToZero, "g vanishes on the path");
    const Complex q = (dg.eval_scaled(p) / gv).to_complex();
    if (std::abs(q) > opts.integrand_cap)
      throw Error(ErrorCode::PathTooCloseToZero, "log-derivative spike on the path");
    return q;
  };
  // Composite Simpson with doubling; the integrand is analytic on the path.
  auto simpson = [&](int n) {
    Complex acc = logderiv(0.0) + logderiv(1.0);
    for (int i = 1; i < n; ++i) acc += logderiv(static_cast<double>(i) / n) * (i % 2 ? 4.0 : 2.0);
    return acc / (3.0 * n);
  };
  Complex prev = simpson(8);
  for (int n = 16; n <= opts.max_panels; n *= 2) {
    const Complex cur = simpson(n);
    if (std::abs(cur - prev) <= opts.rel_tol * (1.0 + std::abs(cur))) return cur * dir;
    prev = cur;
  }
  throw Error(ErrorCode::QuadratureNonConvergent, "path integral did not converge");
}

inline Complex log_branch(const AnalyticFn& g, Complex b, Complex z,
                          const LogBranchOptions& opts = {}) {
  return log_branch(g, g.derivative(), b, z, opts);
}

// ---------------------------------------------------------------------------
// Zero-free form  g(z) = exp(c (z - b) + delta(z))  with g(b) = 1,
// c = g'(b)/g(b) and delta(z) = h(z) - c (z - b).

struct HypothesisCheck {
  bool radius_ok{false};       // R > 2^8 * B
  bool normalized_ok{false};   // g#(0) within [0.999, 1.001]
  bool zero_free_ok{false};
  bool growth_ok{false};       // sampled g#(z) <= 1 + |z|/R
  double growth_margin{0.0};   // min over grid of 1 + |z|/R - g#(z)
  double g_sharp_0{0.0};

  bool all_ok() const { return radius_ok && normalized_ok && zero_free_ok && growth_ok; }
};

class ZeroFreeForm {
 public:
  ZeroFreeForm(AnalyticFn g, double R, double B_used, Complex b, Complex c,
               HypothesisCheck hyp)
      : g_(std::move(g)), dg_(g_.derivative()), R_(R), B_used_(B_used), b_(b), c_(c),
        hyp_(hyp) {}

  double R() const { return R_; }
  double B_used() const { return B_used_; }
  Complex b() const { return b_; }
  Complex c() const { return c_; }
  const HypothesisCheck& hypothesis() const { return hyp_; }
  const AnalyticFn& g() const { return g_; }

  // delta(z) = h(z) - c (z - b); by construction delta(b) = 0, delta'(b) = 0.
  Complex delta(Complex z) const { return log_branch(g_, dg_, b_, z) - c_ * (z - b_); }

  Complex h(Complex z) const { return log_branch(g_, dg_, b_, z); }

 private:
  AnalyticFn g_;
  AnalyticFn dg_;
  double R_;
  double B_used_;
  Complex b_;
  Complex c_;
  HypothesisCheck hyp_;
};

struct ExtractOptions {
  double B_used{4.5};
  GridSpec precheck_grid = GridSpec::polar(16, 48, false);
  double precheck_fraction{0.95};
  bool enforce_hypotheses{true};
  WindingOptions winding{};
};

inline HypothesisCheck check_form_hypotheses(const AnalyticFn& g, double R,
                                             const ExtractOptions& opts) {
  HypothesisCheck hyp;
  hyp.radius_ok = R > 256.0 * opts.B_used;
  const SphericalEvaluator sph(g);
  hyp.g_sharp_0 = sph(Complex(0, 0));
  hyp.normalized_ok = hyp.g_sharp_0 >= 0.999 && hyp.g_sharp_0 <= 1.001;
  try {
    hyp.zero_free_ok = count_a_points(g, Complex(0, 0), Disk(Complex(0, 0), R), opts.winding).count == 0;
  } catch (const Error&) {
    hyp.zero_free_ok = false;
  }
  double margin = std::numeric_limits<double>::infinity();
  const int nr = std::max(opts.precheck_grid.radial, 8);
  const int na = std::max(opts.precheck_grid.angular, 8);
  for (int i = 0; i <= nr; ++i) {
    const double rad = opts.precheck_fraction * R * i / nr;
    const int slots = i == 0 ? 1 : na;
    for (int j = 0; j < slots; ++j) {
      const double th = 2.0 * M_PI * j / slots;
      const Complex z(rad * std::cos(th), rad * std::sin(th));
      margin = std::min(margin, 1.0 + rad / R - sph(z));
    }
  }
  hyp.growth_margin = margin;
  hyp.growth_ok = margin >= -1e-9;
  return hyp;
}

inline ZeroFreeForm extract_form(const AnalyticFn& g, double R, const ExtractOptions& opts = {}) {
  if (!g.domain().contains_disk(Complex(0, 0), R))
    throw Error(ErrorCode::DomainExceeded, "hypothesis disk not inside declared domain");
  const HypothesisCheck hyp = check_form_hypotheses(g, R, opts);
  if (opts.enforce_hypotheses && !hyp.all_ok()) {
    std::string why;
    if (!hyp.radius_ok) why += " radius<=256*B;";
    if (!hyp.normalized_ok) why += " g#(0) not normalized;";
    if (!hyp.zero_free_ok) why += " zeros present;";
    if (!hyp.growth_ok) why += " sampled growth bound fails;";
    throw Error(ErrorCode::HypothesisFailed, "form hypotheses failed:" + why);
  }
  const Complex b = find_unit_point(g, opts.B_used, opts.winding);
  const ScaledComplex gb = g.eval_scaled(b);
  const Complex gb_plain = gb.to_complex();
  if (std::abs(gb_plain - Complex(1, 0)) > 1e-10)
    throw Error(ErrorCode::NoUnitPoint, "unit point polished value is not 1");
  const Complex c = (g.derivative().eval_scaled(b) / gb).to_complex();
  return ZeroFreeForm(g, R, opts.B_used, b, c, hyp);
}

struct FormBoundReport {
  bool c_bound_ok{false};
  double c_abs{0.0};
  double c_lower{0.0};   // 2 - 2^8 B/R
  double c_upper{0.0};   // 2 + 2 B/R
  double delta_margin{0.0};  // min over grid of 2^7 |z-b|^2/R - |delta(z)|
  double delta_max{0.0};
  long grid_points{0};
  int grid_radial{0};
  int grid_angular{0};
};

// Sample |delta| against the quadratic envelope on |z - b| <= R/16.
inline FormBoundReport verify_form_bounds(const ZeroFreeForm& form,
                                          int n_radial = 32, int n_angular = 64) {
  FormBoundReport rep;
  rep.c_abs = std::abs(form.c());
  rep.c_lower = 2.0 - 256.0 * form.B_used() / form.R();
  rep.c_upper = 2.0 + 2.0 * form.B_used() / form.R();
  rep.c_bound_ok = rep.c_lower <= rep.c_abs && rep.c_abs <= rep.c_upper;
  rep.grid_radial = n_radial;
  rep.grid_angular = n_angular;

  const double rmax = form.R() / 16.0;
  double margin = std::numeric_limits<double>::infinity();
  double dmax = 0.0;
  for (int i = 1; i <= n_radial; ++i) {
    const double rad = rmax * i / n_radial;
    for (int j = 0; j < n_angular; ++j) {
      const double th = 2.0 * M_PI * j / n_angular;
      const Complex z = form.b() + Complex(rad * std::cos(th), rad * std::sin(th));
      const double d = std::abs(form.delta(z));
      dmax = std::max(dmax, d);
      margin = std::min(margin, 128.0 * rad * rad / form.R() - d);
      ++rep.grid_points;
    }
  }
  rep.delta_margin = margin;
  rep.delta_max = dmax;
  return rep;
}

// ---------------------------------------------------------------------------
// Growth envelope: if |f(a)| <= K and |f'| <= L on the level set |f| = K,
// then |f(z)| < K exp(2L/K |z - a|) on the half disk.

struct GrowthEnvelopeReport {
  bool premise_ok{false};
  bool bound_ok{false};
  double worst_log_margin{0.0};  // min of log K + (2L/K)|z-a| - log|f(z)|
  Complex worst_point{0.0, 0.0};
  long level_set_samples{0};
};

inline GrowthEnvelopeReport verify_growth_envelope(const AnalyticFn& f, Complex a, double r,
                                                   double K, double L,
                                                   const GridSpec& grid = GridSpec::polar(32, 96, false)) {
  if (!(K > 0.0 && L > 0.0)) throw Error(ErrorCode::InvalidArgument, "K and L must be positive");
  if (!f.domain().contains_disk(a, r))
    throw Error(ErrorCode::DomainExceeded, "disk not inside declared domain");
  GrowthEnvelopeReport rep;
  const AnalyticFn df = f.derivative();

  const double fa = std::exp(f.eval_scaled(a).log_abs());
  if (!(fa <= K * (1.0 + 1e-12))) {
    throw Error(ErrorCode::PremiseFailed, "|f(a)| exceeds K");
  }
  // Sample the disk; wherever |f| sits within 2% of K, require |f'| <= 1.1 L
  // (the slack covers the width of the sampled level band).
  const int nr = std::max(grid.radial, 8), na = std::max(grid.angular, 8);
  const double band = 0.02, slack = 1.1;
  for (int i = 1; i <= nr; ++i) {
    const double rad = r * i / nr;
    for (int j = 0; j < na; ++j) {
      const double th = 2.0 * M_PI * j / na;
      const Complex z = a + Complex(rad * std::cos(th), rad * std::sin(th));
      const double mod = std::exp(f.eval_scaled(z).log_abs());
      if (std::fabs(mod - K) <= band * K) {
        ++rep.level_set_samples;
        const double dmod = std::exp(df.eval_scaled(z).log_abs());
        if (dmod > slack * L)
          throw Error(ErrorCode::PremiseFailed, "|f'| exceeds L near the level set |f| = K");
      }
    }
  }
  rep.premise_ok = true;

  double worst = std::numeric_limits<double>::infinity();
  for (int i = 0; i <= nr; ++i) {
    const double rad = 0.5 * r * i / nr;
    const int slots = i == 0 ? 1 : na;
    for (int j = 0; j < slots; ++j) {
      const double th = 2.0 * M_PI * j / slots;
      const Complex z = a + Complex(rad * std::cos(th), rad * std::sin(th));
      const double m = std::log(K) + 2.0 * L / K * rad - f.eval_scaled(z).log_abs();
      if (m < worst) {
        worst = m;
        rep.worst_point = z;
      }
    }
  }
  rep.worst_log_margin = worst;
  rep.bound_ok = worst > 0.0;
  return rep;
}

}  // namespace nflab
