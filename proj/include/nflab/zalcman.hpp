#pragma once

#include <cmath>
#include <functional>
#include <string>
#include <vector>

#include "nflab/analytic_fn.hpp"
#include "nflab/errors.hpp"
#include "nflab/grid.hpp"

namespace nflab {

// ---------------------------------------------------------------------------
// Admissible weight functions phi: [t0, inf) -> (0, inf), non-decreasing,
// phi(t)/t -> 0, with integral dt/(t*phi(t)) finite.

class WeightFn {
 public:
  enum class Kind { LogSquared, PowerLog, CustomTable };

  static WeightFn log_squared(double t0 = 8.0) {
    WeightFn w;
    w.kind_ = Kind::LogSquared;
    w.p_ = 2.0;
    w.t0_ = t0;
    w.check_threshold();
    return w;
  }

  static WeightFn power_log(double p, double t0 = 4.5) {
    if (!(p > 1.0)) throw Error(ErrorCode::InvalidArgument, "power-log exponent must exceed 1");
    WeightFn w;
    w.kind_ = Kind::PowerLog;
    w.p_ = p;
    w.t0_ = t0;
    w.check_threshold();
    return w;
  }

  static WeightFn custom(std::vector<std::pair<double, double>> table) {
    if (table.size() < 2)
      throw Error(ErrorCode::InvalidArgument, "custom weight needs at least two nodes");
    WeightFn w;
    w.kind_ = Kind::CustomTable;
    w.table_ = std::move(table);
    w.t0_ = w.table_.front().first;
    for (std::size_t i = 1; i < w.table_.size(); ++i) {
      if (!(w.table_[i].first > w.table_[i - 1].first) ||
          w.table_[i].second < w.table_[i - 1].second || !(w.table_[i - 1].second > 0.0))
        throw Error(ErrorCode::InvalidArgument, "custom weight table must be increasing");
    }
    w.check_threshold();
    return w;
  }

  double threshold() const { return t0_; }
  Kind kind() const { return kind_; }

  double operator()(double t) const {
    if (!(t >= t0_))
      throw Error(ErrorCode::InvalidArgument, "weight evaluated below its threshold");
    switch (kind_) {
      case Kind::LogSquared:
      case Kind::PowerLog:
        return std::pow(std::log(t), p_);
      case Kind::CustomTable: {
        if (t >= table_.back().first) {
          const auto& [ta, fa] = table_[table_.size() - 2];
          const auto& [tb, fb] = table_.back();
          return fb + (fb - fa) / (tb - ta) * (t - tb);
        }
        for (std::size_t i = 1; i < table_.size(); ++i)
          if (t <= table_[i].first) {
            const auto& [ta, fa] = table_[i - 1];
            const auto& [tb, fb] = table_[i];
            return fa + (fb - fa) / (tb - ta) * (t - ta);
          }
        return table_.back().second;
      }
    }
    throw Error(ErrorCode::InvalidArgument, "bad weight kind");
  }

  std::string describe() const {
    switch (kind_) {
      case Kind::LogSquared: return "log-squared(t0=" + std::to_string(t0_) + ")";
      case Kind::PowerLog:
        return "power-log(p=" + std::to_string(p_) + ",t0=" + std::to_string(t0_) + ")";
      case Kind::CustomTable: return "custom-table(" + std::to_string(table_.size()) + " nodes)";
    }
    return "?";
  }

  // Numeric admissibility: monotone, sublinear, and the integral
  // dt/(t*phi(t)) over [t0, T] converges (last-decade contribution small).
  struct Admissibility {
    bool monotone_ok{false};
    bool sublinear_ok{false};
    double integral{0.0};      // over [t0, T]
    double last_decade{0.0};   // contribution of [T/10, T]
    bool tail_ok{false};
  };

  Admissibility admissibility(double T = 1e12, double tail_tol = 1e-2) const {
    Admissibility rep;
    rep.monotone_ok = true;
    rep.sublinear_ok = true;
    double prev_phi = 0.0, prev_ratio = std::numeric_limits<double>::infinity();
    for (int i = 0; i <= 200; ++i) {
      const double t = t0_ * std::pow(T / t0_, i / 200.0);
      const double ph = (*this)(t);
      if (ph < prev_phi - 1e-12 * prev_phi) rep.monotone_ok = false;
      const double ratio = ph / t;
      if (i > 10 && ratio > prev_ratio * (1.0 + 1e-9)) rep.sublinear_ok = false;
      prev_phi = ph;
      prev_ratio = ratio;
    }
    // substitute u = log t: integral du / phi(e^u), smooth integrand.
    auto integrand = [&](double u) { return 1.0 / (*this)(std::exp(u)); };
    auto simpson = [&](double a, double b, int n) {
      double acc = integrand(a) + integrand(b);
      for (int i = 1; i < n; ++i) acc += integrand(a + (b - a) * i / n) * (i % 2 ? 4.0 : 2.0);
      return acc * (b - a) / (3.0 * n);
    };
    const double u0 = std::log(t0_), u1 = std::log(T);
    double prev = simpson(u0, u1, 512), cur = simpson(u0, u1, 1024);
    for (int n = 2048; std::fabs(cur - prev) > 1e-9 * (1.0 + std::fabs(cur)) && n <= 1 << 20;
         n *= 2) {
      prev = cur;
      cur = simpson(u0, u1, n);
    }
    rep.integral = cur;
    rep.last_decade = simpson(std::log(T / 10.0), u1, 4096);
    rep.tail_ok = rep.last_decade <= tail_tol * std::max(rep.integral, 1e-300);
    return rep;
  }

 private:
  WeightFn() = default;
  void check_threshold() const {
    if (!(t0_ > 1.0)) throw Error(ErrorCode::InvalidArgument, "weight threshold must exceed 1");
    if (!((*this)(t0_) > 0.0))
      throw Error(ErrorCode::InvalidArgument, "weight must be positive at its threshold");
  }

  Kind kind_{Kind::LogSquared};
  double p_{2.0};
  double t0_{8.0};
  std::vector<std::pair<double, double>> table_;
};

// ---------------------------------------------------------------------------
// Rescaling certificate: the point/scale data selected by the iteration,
// plus the sampled bound margin for  g#(z) <= 1/(1 - |z|/s).

struct RescalingCertificate {
  Complex a{0.0, 0.0};
  double epsilon{0.0};
  double r{0.0};          // accepted stopping radius
  Complex b{0.0, 0.0};    // argmax of f# on the closed disk D(a, r)
  double t{0.0};          // 1/phi(H(r))
  Complex c{0.0, 0.0};    // weighted argmax over D(b, t)
  double rho{0.0};        // 1/f#(c)
  double s{0.0};          // f#(c) / (3 phi(f#(c)))
  double fs_b{0.0};       // f#(b) = H(r)
  double fs_c{0.0};       // f#(c)
  double bound_margin{0.0};  // min over grid of 1 - g#(z)(1 - |z|/s)
  long grid_points{0};
  int iterations{0};
  std::string weight;
};

struct RescalingOptions {
  GridSpec scan_grid = GridSpec::polar(48, 192, true);
  GridSpec verify_grid = GridSpec::polar(24, 64, false);
  double verify_fraction{0.9};   // sample the bound on D(0, fraction*s)
  double bound_tolerance{1e-6};  // allowed slack in the sampled bound
  int max_iterations{512};
};

namespace detail {

// Running max of f# over growing disks.  Keeps the scan monotone in r, which
// the stopping rule needs (the true H is monotone by definition).
struct RunningSphericalMax {
  const SphericalEvaluator& sph;
  Complex a;
  const GridSpec& grid;
  Complex argmax;
  double value{-1.0};
  long evals{0};

  RunningSphericalMax(const SphericalEvaluator& s, Complex center, const GridSpec& g)
      : sph(s), a(center), grid(g), argmax(center) {}

  double scan(double r) {
    const SphericalMax m = max_spherical_on_disk(sph, a, r, grid);
    evals += m.meta.evaluations;
    if (m.value > value) {
      value = m.value;
      argmax = m.argmax;
    }
    return value;
  }
};

}  // namespace detail

// The constructive point selection: iterate radii by steps 1/phi(H(r))
// until H stops growing by more than a factor e across one step, then pick
// the weighted argmax  c  near the plain argmax  b  and certify the
// spherical bound on the rescaled function.
inline RescalingCertificate find_rescaling(const AnalyticFn& f, Complex a, double eps,
                                           const WeightFn& phi,
                                           const RescalingOptions& opts = {}) {
  if (!(eps > 0.0)) throw Error(ErrorCode::InvalidArgument, "epsilon must be positive");
  if (!f.domain().contains_disk(a, eps))
    throw Error(ErrorCode::DomainExceeded, "search disk not inside declared domain");

  const SphericalEvaluator sph(f);
  const double fsa = sph(a);
  if (!(fsa >= phi.threshold()))
    throw Error(ErrorCode::NoStop, "spherical derivative at the center is below the weight threshold");
  if (!(phi(fsa) > 2.0 / eps))
    throw Error(ErrorCode::NoStop, "largeness guard failed: phi(f#(a)) <= 2/eps");

  detail::RunningSphericalMax H(sph, a, opts.scan_grid);
  double r = 0.0;
  double H_r = H.scan(0.0);
  Complex b = H.argmax;
  double t = 0.0;
  int iterations = 0;
  bool accepted = false;
  while (iterations++ < opts.max_iterations) {
    const double step = 1.0 / phi(H_r);
    const double r_next = r + step;
    if (!(r_next < eps)) break;  // cannot even test the stopping rule
    const Complex b_here = H.argmax;
    const double H_next = H.scan(r_next);
    if (H_next <= M_E * H_r) {
      b = b_here;
      t = step;
      accepted = true;
      break;
    }
    r = r_next;
    H_r = H_next;
    b = H.argmax;
    if (!(r < eps / 2.0)) break;
  }
  if (!accepted)
    throw Error(ErrorCode::NoStop,
                "radius iteration left [0, eps/2) without meeting the stopping rule");

  // Weighted argmax over the closed disk D(b, t); the center is a grid
  // point, so the weighted maximum is at least f#(b).
  const ScanExtremum cw = disk_argmax(
      [&](Complex z) {
        const double w = 1.0 - std::abs(z - b) / t;
        return w <= 0.0 ? 0.0 : sph(z) * w;
      },
      b, t, opts.scan_grid);
  const Complex c = cw.point;
  const double fs_c = sph(c);
  const double rho = 1.0 / fs_c;
  const double s = fs_c / (3.0 * phi(fs_c));

  RescalingCertificate cert;
  cert.a = a;
  cert.epsilon = eps;
  cert.r = r;
  cert.b = b;
  cert.t = t;
  cert.c = c;
  cert.rho = rho;
  cert.s = s;
  cert.fs_b = H_r;
  cert.fs_c = fs_c;
  cert.iterations = iterations;
  cert.weight = phi.describe();

  // Certificate algebra, re-derivable from the stored fields.
  if (!(fs_c >= H_r * (1.0 - 1e-12)))
    throw Error(ErrorCode::BoundViolated, "weighted argmax lost the plain argmax");
  if (std::abs(c - b) > (2.0 / 3.0) * t * (1.0 + 1e-9))
    throw Error(ErrorCode::BoundViolated, "weighted argmax strayed too far from the argmax");
  if (std::abs(c - a) + rho * s > eps * (1.0 + 1e-9))
    throw Error(ErrorCode::BoundViolated, "certified disk escapes the search disk");

  // Sampled bound  g#(z) * (1 - |z|/s) <= 1  on D(0, fraction*s) where
  // g(z) = f(c + rho z), so g#(z) = rho * f#(c + rho z).
  double margin = std::numeric_limits<double>::infinity();
  const int nr = std::max(opts.verify_grid.radial, 8);
  const int na = std::max(opts.verify_grid.angular, 8);
  long pts = 0;
  for (int i = 0; i <= nr; ++i) {
    const double rad = opts.verify_fraction * s * i / nr;
    const int slots = i == 0 ? 1 : na;
    for (int j = 0; j < slots; ++j) {
      const double th = 2.0 * M_PI * j / slots;
      const Complex z(rad * std::cos(th), rad * std::sin(th));
      const double gs = rho * sph(c + rho * z);
      const double m = 1.0 - gs * (1.0 - rad / s);
      margin = std::min(margin, m);
      ++pts;
    }
  }
  cert.bound_margin = margin;
  cert.grid_points = pts;
  if (margin < -opts.bound_tolerance)
    throw Error(ErrorCode::BoundViolated, "sampled rescaling bound failed beyond tolerance");
  return cert;
}

// ---------------------------------------------------------------------------
// Sequence-level wrapper: apply the selection to each member of an
// escalating family and record the disk radii R_k = s_k / 2 together with
// the sampled linear bound  g_k#(z) <= 1 + |z|/R_k.

struct SequenceRow {
  double k{0.0};
  Complex xi{0.0, 0.0};  // escalation point chosen near z0
  RescalingCertificate cert;
  double R{0.0};
  double bound12_margin{0.0};  // min over grid of 1 + |z|/R - g#(z)
  double d1_residual{0.0};     // |R - 1/(6 rho phi(1/rho))|
};

struct SequenceRun {
  std::vector<SequenceRow> rows;
  bool radii_strictly_increasing{true};
};

// Per member: probe D(z0, eps_k/2) for the spherical-derivative argmax
// xi_k, then run the point selection centered there with the other half of
// the shrinking radius, so everything stays inside D(z0, eps_k).
inline SequenceRun run_sequence(const std::function<AnalyticFn(double)>& family, Complex z0,
                                const std::vector<double>& ks, const WeightFn& phi,
                                double eps0 = 3.0, const RescalingOptions& opts = {}) {
  if (ks.empty()) throw Error(ErrorCode::InvalidArgument, "empty k schedule");
  for (std::size_t i = 1; i < ks.size(); ++i)
    if (!(ks[i] > ks[i - 1]))
      throw Error(ErrorCode::InvalidArgument, "k schedule must be strictly increasing");

  SequenceRun run;
  double prev_R = -1.0;
  for (double k : ks) {
    const AnalyticFn f = family(k);
    const double eps_k = eps0 / std::sqrt(k);  // any schedule decreasing to 0 works
    SequenceRow row;
    row.k = k;
    const SphericalEvaluator probe_sph(f);
    row.xi = max_spherical_on_disk(probe_sph, z0, eps_k / 2.0, opts.scan_grid).argmax;
    row.cert = find_rescaling(f, row.xi, eps_k / 2.0, phi, opts);
    row.R = row.cert.s / 2.0;
    row.d1_residual =
        std::fabs(row.R - 1.0 / (6.0 * row.cert.rho * phi(1.0 / row.cert.rho)));

    const SphericalEvaluator sph(f);
    double margin = std::numeric_limits<double>::infinity();
    const int nr = std::max(opts.verify_grid.radial, 8);
    const int na = std::max(opts.verify_grid.angular, 8);
    for (int i = 0; i <= nr; ++i) {
      const double rad = 0.9 * row.R * i / nr;
      const int slots = i == 0 ? 1 : na;
      for (int j = 0; j < slots; ++j) {
        const double th = 2.0 * M_PI * j / slots;
        const Complex z(rad * std::cos(th), rad * std::sin(th));
        const double gs = row.cert.rho * sph(row.cert.c + row.cert.rho * z);
        margin = std::min(margin, 1.0 + rad / row.R - gs);
      }
    }
    row.bound12_margin = margin;
    if (row.R <= prev_R) run.radii_strictly_increasing = false;
    prev_R = row.R;
    run.rows.push_back(std::move(row));
  }
  return run;
}

}  // namespace nflab
