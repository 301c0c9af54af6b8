#pragma once

#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include <boost/math/constants/constants.hpp>
#include <boost/multiprecision/cpp_dec_float.hpp>

#include "nflab/analytic_fn.hpp"
#include "nflab/errors.hpp"
#include "nflab/grid.hpp"
#include "nflab/root_engine.hpp"

namespace nflab {

// Extended precision lives only in this module; everything else runs on
// machine doubles.
template <unsigned Digits>
using BigFloat = boost::multiprecision::number<boost::multiprecision::cpp_dec_float<Digits>>;

using BigFloat50 = BigFloat<50>;
using BigFloat100 = BigFloat<100>;
using BigFloat200 = BigFloat<200>;

struct HighPrecisionReal {
  std::string decimal;     // >= 50 significant digits
  double approx{0.0};
  double error_bound{0.0};
};

namespace detail {

template <typename T>
T agm(T a, T b) {
  const T eps = std::numeric_limits<T>::epsilon();
  for (int i = 0; i < 64; ++i) {
    const T am = (a + b) / 2;
    const T gm = sqrt(a * b);
    a = am;
    b = gm;
    if (abs(a - b) <= eps * abs(a) * 4) break;
  }
  return (a + b) / 2;
}

template <typename T>
HighPrecisionReal to_hp(const T& v, double err) {
  HighPrecisionReal hp;
  hp.decimal = v.str(50);
  hp.approx = static_cast<double>(v);
  hp.error_bound = err;
  return hp;
}

}  // namespace detail

// Gamma(1/4) from the arithmetic-geometric mean:
//   Gamma(1/4) = sqrt( (2 pi)^{3/2} / AGM(1, sqrt 2) ).
// The AGM converges quadratically, so at 100 working digits the result is
// correct to well below 1e-90.
template <unsigned Digits = 100>
BigFloat<Digits> gamma_quarter_big() {
  using T = BigFloat<Digits>;
  const T pi = boost::math::constants::pi<T>();
  const T two_pi = 2 * pi;
  const T m = detail::agm<T>(T(1), sqrt(T(2)));
  return sqrt(two_pi * sqrt(two_pi) / m);
}

// The sharp constant in the derivative bound for functions omitting 0 and 1:
// A = Gamma(1/4)^4 / (4 pi^2).
template <unsigned Digits = 100>
BigFloat<Digits> hempel_lai_big() {
  using T = BigFloat<Digits>;
  const T g = gamma_quarter_big<Digits>();
  const T pi = boost::math::constants::pi<T>();
  return g * g * g * g / (4 * pi * pi);
}

inline HighPrecisionReal hempel_lai_A() {
  return detail::to_hp(hempel_lai_big<100>(), 1e-90);
}

inline HighPrecisionReal gamma_quarter() {
  return detail::to_hp(gamma_quarter_big<100>(), 1e-90);
}

inline double hempel_lai_A_double() {
  static const double a = static_cast<double>(hempel_lai_big<50>());
  return a;
}

// ---------------------------------------------------------------------------
// Feasibility of the quantitative constant C: the strict inequality
//   log(2 log((1-C)/(2 sqrt C)) + A)  >  log sqrt(A^2 + pi^2) + pi^2/log(1/C)
// certifies C.  Verdicts inside the error budget escalate precision and are
// never guessed.

struct FeasibilityVerdict {
  double C{0.0};
  HighPrecisionReal lhs;
  HighPrecisionReal rhs;
  bool feasible{false};
  double margin{0.0};  // lhs - rhs
  unsigned digits_used{0};
};

// Positivity edge of the lower bound: (1-C)/(2 sqrt C) > 1 iff C < 3-2*sqrt2.
inline double lower_bound_positivity_edge() { return 3.0 - 2.0 * std::sqrt(2.0); }

// 2 log((1-C)/(2 sqrt C)), the certified floor for log M(sqrt C, f).
inline double theorem_lower_bound(double C) {
  if (!(C > 0.0 && C < 1.0)) throw Error(ErrorCode::InvalidArgument, "need 0 < C < 1");
  return 2.0 * std::log((1.0 - C) / (2.0 * std::sqrt(C)));
}

namespace detail {

template <unsigned Digits>
std::pair<BigFloat<Digits>, BigFloat<Digits>> feasibility_sides(double C_in) {
  using T = BigFloat<Digits>;
  const T C(C_in);
  const T pi = boost::math::constants::pi<T>();
  const T A = hempel_lai_big<Digits>();
  const T lower = 2 * log((1 - C) / (2 * sqrt(C)));
  const T lhs = log(lower + A);
  const T rhs = log(sqrt(A * A + pi * pi)) + pi * pi / log(1 / C);
  return {lhs, rhs};
}

}  // namespace detail

inline FeasibilityVerdict critical_feasible(double C, double error_budget = 1e-20) {
  if (!(C > 0.0 && C < lower_bound_positivity_edge()))
    throw Error(ErrorCode::InvalidArgument, "C outside (0, 3 - 2 sqrt 2)");
  auto decide = [&](auto sides, unsigned digits, double err) -> std::optional<FeasibilityVerdict> {
    const auto& [lhs, rhs] = sides;
    const auto diff = lhs - rhs;
    if (abs(diff) <= error_budget) return std::nullopt;
    FeasibilityVerdict v;
    v.C = C;
    v.lhs = detail::to_hp(lhs, err);
    v.rhs = detail::to_hp(rhs, err);
    v.feasible = diff > 0;
    v.margin = static_cast<double>(diff);
    v.digits_used = digits;
    return v;
  };
  if (auto v = decide(detail::feasibility_sides<50>(C), 50, 1e-45)) return *v;
  if (auto v = decide(detail::feasibility_sides<100>(C), 100, 1e-95)) return *v;
  if (auto v = decide(detail::feasibility_sides<200>(C), 200, 1e-195)) return *v;
  throw Error(ErrorCode::Indeterminate,
              "feasibility margin within error budget at 200 digits");
}

// Bisect for the critical constant on the validated bracket
// [0.000024, 0.000025]; the margin is checked to be strictly decreasing on
// the bracket before trusting the bisection.
inline double max_feasible_constant(double tol = 1e-12) {
  if (!(tol >= 1e-12)) throw Error(ErrorCode::InvalidArgument, "tolerance below 1e-12");
  double lo = 0.000024, hi = 0.000025;
  if (!critical_feasible(lo).feasible || critical_feasible(hi).feasible)
    throw Error(ErrorCode::BracketInvalid, "bracket endpoints do not straddle the edge");
  double prev = std::numeric_limits<double>::infinity();
  for (int i = 0; i <= 8; ++i) {
    const double c = lo + (hi - lo) * i / 8.0;
    const double m = critical_feasible(c).margin;
    if (!(m < prev)) throw Error(ErrorCode::BracketInvalid, "margin not decreasing on bracket");
    prev = m;
  }
  while (hi - lo > tol) {
    const double mid = (lo + hi) / 2.0;
    if (critical_feasible(mid).feasible)
      lo = mid;
    else
      hi = mid;
  }
  return (lo + hi) / 2.0;
}

// ---------------------------------------------------------------------------
// Strip-to-disk biholomorphism centered at z0 = x0 + i y0 on the strip
// 2 x0 < Re z < 0 (x0 < 0), with |phi'(z0)| = pi / (4 |x0|).

inline Complex strip_map(Complex z, double x0, double y0) {
  if (!(x0 < 0.0)) throw Error(ErrorCode::InvalidArgument, "x0 must be negative");
  if (!(2.0 * x0 < z.real() && z.real() < 0.0))
    throw Error(ErrorCode::DomainExceeded, "point outside the strip");
  const Complex z0(x0, y0);
  const Complex k = Complex(0, M_PI) / (2.0 * x0);
  const Complex w = std::exp(k * (z - z0));
  return (w - 1.0) / (w + 1.0);
}

inline double strip_map_deriv_at_center(double x0) {
  if (!(x0 < 0.0)) throw Error(ErrorCode::InvalidArgument, "x0 must be negative");
  const Complex k = Complex(0, M_PI) / (2.0 * x0);
  return std::abs(k) / 2.0;  // = pi / (4 |x0|)
}

// ---------------------------------------------------------------------------
// Derivative bound at the center of a disk where f omits 0 and 1.

struct LandauReport {
  double lhs{0.0};
  double rhs{0.0};
  bool pass{false};
};

namespace detail {

inline void require_omits_01(const AnalyticFn& f, Complex a, double r,
                             const WindingOptions& opts) {
  const Disk disk(a, r);
  long zeros, ones;
  try {
    zeros = count_a_points(f, Complex(0, 0), disk, opts).count;
    ones = count_a_points(f, Complex(1, 0), disk, opts).count;
  } catch (const Error& e) {
    if (e.code() == ErrorCode::BoundaryRoot)
      throw Error(ErrorCode::OmissionFailed, "0 or 1 is attained on the boundary");
    throw;
  }
  if (zeros != 0 || ones != 0)
    throw Error(ErrorCode::OmissionFailed, "function attains 0 or 1 in the disk");
}

}  // namespace detail

inline LandauReport landau_check(const AnalyticFn& f, Complex a, double r,
                                 const WindingOptions& opts = {}) {
  detail::require_omits_01(f, a, r, opts);
  const double A = hempel_lai_A_double();
  const double log_fa = f.eval_scaled(a).log_abs();
  const double log_dfa = f.derivative().eval_scaled(a).log_abs();
  LandauReport rep;
  rep.lhs = std::exp(log_dfa - log_fa) / (std::fabs(log_fa) + A);
  rep.rhs = 2.0 / r;
  rep.pass = rep.lhs <= rep.rhs * (1.0 + 1e-12);
  return rep;
}

inline LandauReport spherical_landau_check(const AnalyticFn& f, Complex a, double r,
                                           double B_used, const WindingOptions& opts = {}) {
  detail::require_omits_01(f, a, r, opts);
  LandauReport rep;
  rep.lhs = spherical_derivative(f, a);
  rep.rhs = B_used / r;
  rep.pass = rep.lhs <= rep.rhs * (1.0 + 1e-12);
  return rep;
}

// ---------------------------------------------------------------------------
// Poisson-Jensen identity check:
//   log|f(b)| = boundary integral - sum over zeros log |(r^2 - conj(a_j) b)
//   / (r (b - a_j))|.

struct PoissonJensenReport {
  double log_fb{0.0};
  double boundary_integral{0.0};
  double zero_sum{0.0};
  double residual{0.0};
  long boundary_samples{0};
  std::vector<Root> zeros;
};

inline PoissonJensenReport poisson_jensen_check(const AnalyticFn& f, Complex b, double r,
                                                std::optional<RootList> zeros = std::nullopt,
                                                const WindingOptions& opts = {}) {
  if (!(std::abs(b) < r)) throw Error(ErrorCode::InvalidArgument, "b must be interior");
  if (!f.domain().contains_disk(Complex(0, 0), r))
    throw Error(ErrorCode::DomainExceeded, "disk not inside declared domain");
  RootList zl;
  try {
    zl = zeros ? *zeros : locate_a_points(f, Complex(0, 0), Disk(Complex(0, 0), r), 1e-11, opts);
  } catch (const Error& e) {
    if (e.code() == ErrorCode::BoundaryRoot)
      throw Error(ErrorCode::BoundaryRoot, "zero on the boundary circle");
    throw;
  }
  PoissonJensenReport rep;
  rep.zeros = zl.roots;
  const double log_fb = f.eval_scaled(b).log_abs();
  if (!std::isfinite(log_fb)) throw Error(ErrorCode::InvalidArgument, "f(b) = 0");
  rep.log_fb = log_fb;

  auto level = [&](long n) {
    double acc = 0.0;
    for (long j = 0; j < n; ++j) {
      const double th = 2.0 * M_PI * j / n;
      const Complex w(r * std::cos(th), r * std::sin(th));
      const double lf = f.eval_scaled(w).log_abs();
      acc += lf * ((w + b) / (w - b)).real();
    }
    return acc / n;
  };
  long n = 64;
  double prev = level(n);
  for (;;) {
    n *= 2;
    const double cur = level(n);
    if (std::fabs(cur - prev) <= 1e-8 * (1.0 + std::fabs(cur))) {
      rep.boundary_integral = cur;
      rep.boundary_samples = n;
      break;
    }
    if (n > (1 << 20))
      throw Error(ErrorCode::QuadratureNonConvergent, "boundary integral did not settle");
    prev = cur;
  }

  double zsum = 0.0;
  for (const auto& root : zl.roots) {
    const Complex aj = root.location;
    zsum += root.multiplicity *
            std::log(std::abs((r * r - std::conj(aj) * b) / (r * (b - aj))));
  }
  rep.zero_sum = zsum;
  rep.residual = std::fabs(rep.log_fb - (rep.boundary_integral - zsum));
  return rep;
}

// ---------------------------------------------------------------------------
// Witness check for the quantitative radius theorem: zeros in [0, r],
// 1-points in [-r, 0], both values attained, one at least twice.  Pillar (a)
// is the inherited circle bound min_{|z|=s} |f| <= 1 for s in (r, 1); pillar
// (b) is r >= 0.000024.

struct WitnessReport {
  bool hypothesis_ok{false};
  std::string hypothesis_note;
  bool pillar_min_modulus{false};  // every sampled s has min <= 1
  bool pillar_radius{false};       // r >= 0.000024
  bool violation{false};           // hypotheses hold yet some circle has min > 1
  double worst_log_min{0.0};       // max over sampled s of log min_{|z|=s}|f|
  double worst_s{0.0};
  long n_zeros{0};
  long n_ones{0};
};

struct WitnessOptions {
  double hypothesis_radius{0.98};
  double axis_tol{1e-8};
  int s_samples{16};
  bool force_pillars{false};  // evaluate pillars even if hypotheses fail
  WindingOptions winding{};
};

inline WitnessReport witness_radius_check(const AnalyticFn& f, double r,
                                          const WitnessOptions& opts = {}) {
  if (!(r > 0.0 && r < 1.0)) throw Error(ErrorCode::InvalidArgument, "need 0 < r < 1");
  WitnessReport rep;
  const Disk hyp(Complex(0, 0), opts.hypothesis_radius);
  RootList zeros = locate_a_points(f, Complex(0, 0), hyp, 1e-10, opts.winding);
  RootList ones = locate_a_points(f, Complex(1, 0), hyp, 1e-10, opts.winding);
  rep.n_zeros = zeros.total;
  rep.n_ones = ones.total;

  rep.hypothesis_ok = true;
  for (const auto& z : zeros.roots)
    if (std::fabs(z.location.imag()) > opts.axis_tol || z.location.real() < -opts.axis_tol ||
        z.location.real() > r + opts.axis_tol) {
      rep.hypothesis_ok = false;
      rep.hypothesis_note += "zero outside [0,r]; ";
    }
  for (const auto& o : ones.roots)
    if (std::fabs(o.location.imag()) > opts.axis_tol || o.location.real() > opts.axis_tol ||
        o.location.real() < -r - opts.axis_tol) {
      rep.hypothesis_ok = false;
      rep.hypothesis_note += "1-point outside [-r,0]; ";
    }
  if (zeros.total == 0 || ones.total == 0) {
    rep.hypothesis_ok = false;
    rep.hypothesis_note += "both values must be attained; ";
  }
  if (zeros.total < 2 && ones.total < 2) {
    rep.hypothesis_ok = false;
    rep.hypothesis_note += "one value must be attained at least twice; ";
  }
  if (!rep.hypothesis_ok && !opts.force_pillars)
    throw Error(ErrorCode::HypothesisFailed, "witness hypotheses failed: " + rep.hypothesis_note);

  rep.pillar_min_modulus = true;
  rep.worst_log_min = -std::numeric_limits<double>::infinity();
  for (int i = 1; i <= opts.s_samples; ++i) {
    const double s = r + (opts.hypothesis_radius - r) * i / (opts.s_samples + 1);
    const double log_min = min_modulus_on_circle(f, Complex(0, 0), s).log_abs;
    if (log_min > rep.worst_log_min) {
      rep.worst_log_min = log_min;
      rep.worst_s = s;
    }
    if (log_min > 0.0) rep.pillar_min_modulus = false;
  }
  rep.pillar_radius = r >= 0.000024;
  rep.violation = rep.hypothesis_ok && !rep.pillar_min_modulus && zeros.total >= 2;
  return rep;
}

}  // namespace nflab
