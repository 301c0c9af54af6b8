// Acceptance suite: one pass/fail line per criterion, nonzero exit on any
// failure.  Criterion 9 drives the CLI binary whose path arrives as argv[1].

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "nflab/constants.hpp"
#include "nflab/dsl.hpp"
#include "nflab/root_engine.hpp"
#include "nflab/scenario.hpp"
#include "nflab/zalcman.hpp"
#include "nflab/zerofree_form.hpp"

using namespace nflab;

namespace {

int g_failures = 0;

void run_criterion(const std::string& name, double budget_seconds,
                   const std::function<std::string()>& body) {
  const auto t0 = std::chrono::steady_clock::now();
  std::string detail;
  bool ok = true;
  try {
    detail = body();
  } catch (const std::exception& e) {
    ok = false;
    detail = e.what();
  }
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (ok && secs > budget_seconds) {
    ok = false;
    detail = "runtime budget exceeded";
  }
  std::printf("[%s] %-28s (%6.2fs)  %s\n", ok ? "PASS" : "FAIL", name.c_str(), secs,
              detail.c_str());
  std::fflush(stdout);
  if (!ok) ++g_failures;
}

void require(bool cond, const std::string& why) {
  if (!cond) throw std::runtime_error(why);
}

AnalyticFn fn(const std::string& expr, double domain_radius,
              const std::map<std::string, double>& params = {}) {
  return dsl::parse_fn(expr, params).with_domain(Disk(Complex(0, 0), domain_radius));
}

std::string run_cli(const std::string& cli, const std::string& args, int& exit_code) {
  const std::string cmd = cli + " " + args + " 2>/dev/null";
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) throw std::runtime_error("popen failed");
  std::string out;
  char buf[4096];
  size_t n;
  while ((n = fread(buf, 1, sizeof buf, pipe)) > 0) out.append(buf, n);
  const int status = pclose(pipe);
  exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  const std::string cli = argc > 1 ? argv[1] : "";

  run_criterion("constant-A", 1.0, [] {
    const auto A = hempel_lai_A();
    require(std::fabs(A.approx / 4.3768796 - 1.0) <= 1e-7,
            "A does not match the printed digits to 7 significant figures");
    require(A.error_bound < 1e-40, "error bound too loose");
    char buf[64];
    std::snprintf(buf, sizeof buf, "A = %.10f", A.approx);
    return std::string(buf);
  });

  run_criterion("critical-constant", 5.0, [] {
    const auto yes = critical_feasible(0.000024, 1e-20);
    require(yes.feasible && yes.margin > 0.0, "C = 0.000024 must be feasible");
    require(yes.digits_used >= 50, "decision below 50 digits");
    const auto no = critical_feasible(0.000025, 1e-20);
    require(!no.feasible, "C = 0.000025 must be infeasible");
    require(no.digits_used >= 50, "decision below 50 digits");
    const double cstar = max_feasible_constant(1e-12);
    require(cstar > 0.000024 && cstar < 0.000025, "critical constant escaped the bracket");
    char buf[96];
    std::snprintf(buf, sizeof buf, "margin(2.4e-5) = %.3e, C* = %.12e", yes.margin, cstar);
    return std::string(buf);
  });

  run_criterion("argument-principle-oracle", 30.0, [] {
    std::mt19937 rng(424242);
    std::uniform_real_distribution<double> unif(-1.8, 1.8);
    std::uniform_int_distribution<int> deg_dist(1, 6);
    const Disk disk(Complex(0, 0), 1.0);
    int done = 0, mismatches = 0;
    while (done < 200) {
      const int deg = deg_dist(rng);
      std::vector<Complex> roots;
      bool ok = true;
      for (int i = 0; i < deg; ++i) {
        const Complex r(unif(rng), unif(rng));
        if (std::fabs(std::abs(r) - 1.0) < 1e-6) ok = false;
        roots.push_back(r);
      }
      if (!ok) continue;
      std::vector<Complex> coeffs{Complex(1.0, 0.0)};
      for (Complex r : roots) coeffs = poly_mul(coeffs, {-r, Complex(1.0, 0.0)});
      AnalyticFn f(make_poly(coeffs), Disk(Complex(0, 0), 16.0));
      long expected = 0;
      for (Complex r : roots)
        if (std::abs(r) < 1.0) ++expected;
      if (count_a_points(f, Complex(0, 0), disk).count != expected) ++mismatches;
      ++done;
    }
    require(mismatches == 0, std::to_string(mismatches) + " mismatches out of 200");
    return std::string("200 random polynomials, 0 mismatches");
  });

  run_criterion("rescaling-certificates", 60.0, [] {
    auto family = [](double k) { return fn("exp(-1*i*k*z)", 512.0, {{"k", k}}); };
    const auto phi = WeightFn::power_log(1.5, 4.5);
    const auto run = run_sequence(family, Complex(0, 0), {10.0, 20.0, 40.0, 80.0}, phi, 6.4);
    require(run.rows.size() == 4, "sequence incomplete");
    require(run.radii_strictly_increasing, "R_k not strictly increasing");
    for (const auto& row : run.rows) {
      require(std::fabs(row.cert.rho * row.cert.fs_c - 1.0) <= 1e-12,
              "normalization off at k = " + std::to_string(row.k));
      require(row.cert.bound_margin >= -1e-6,
              "rescaled spherical bound failed at k = " + std::to_string(row.k));
      require(row.bound12_margin >= -1e-6,
              "linear bound failed at k = " + std::to_string(row.k));
    }
    char buf[96];
    std::snprintf(buf, sizeof buf, "R = %.4f .. %.4f", run.rows.front().R, run.rows.back().R);
    return std::string(buf);
  });

  run_criterion("form-extraction", 10.0, [] {
    for (const char* expr : {"exp(2*i*z)", "exp(-2*i*z)"}) {
      const auto form = extract_form(fn(expr, 4096.0), 2000.0);
      const Complex want(0, expr[4] == '-' ? -2.0 : 2.0);
      require(std::abs(form.c() - want) <= 1e-9, "exponent slope off for pure exponential");
      const auto rep = verify_form_bounds(form);
      require(rep.delta_max <= 1e-9, "residual term visible on a pure exponential");
    }
    const auto form = extract_form(fn("exp(2*i*z + 0.00001*z^2)", 4096.0), 2000.0);
    const auto rep = verify_form_bounds(form);
    require(rep.c_bound_ok, "slope bound failed on the small perturbation");
    require(rep.delta_margin > 0.0, "quadratic envelope not positive");
    // the deliberate violation must be reported, not passed
    ExtractOptions loose;
    loose.enforce_hypotheses = false;
    const auto bad = extract_form(fn("exp(2*i*z + 0.1*z^2)", 4096.0), 2000.0, loose);
    require(!bad.hypothesis().growth_ok, "growth hypothesis unexpectedly held");
    const auto bad_rep = verify_form_bounds(bad, 8, 16);
    require(bad_rep.delta_margin < 0.0, "violating perturbation slipped through");
    return std::string("slopes exact, envelopes signed correctly");
  });

  run_criterion("pairing-verdicts", 30.0, [] {
    const auto one = verify_axis_pairing(fn("(0.05 - z)*10", 8.0), 0.5);
    require(one.verdict == PairingVerdict::OnePair && one.hypothesis_ok,
            "affine witness not OnePair");
    const auto empty = verify_axis_pairing(fn("z + 2", 8.0), 0.5);
    require(empty.verdict == PairingVerdict::Empty, "shifted identity not Empty");
    std::mt19937 rng(777);
    std::uniform_real_distribution<double> uc(5.0, 100.0), ux(0.0, 1.0);
    int violations = 0;
    for (int i = 0; i < 100; ++i) {
      const double C = uc(rng);
      const double x0 = ux(rng) * std::min(0.08, 0.9 / C);
      AnalyticFn f(make_poly({Complex(C * x0, 0), Complex(-C, 0)}), Disk(Complex(0, 0), 8.0));
      const auto rep = verify_axis_pairing(f, 0.5);
      if (rep.verdict == PairingVerdict::Violation) ++violations;
    }
    require(violations == 0, std::to_string(violations) + " violations in the sweep");
    return std::string("100 admissible families, 0 violations");
  });

  run_criterion("poisson-jensen", 5.0, [] {
    double worst = 0.0;
    worst = std::max(worst, poisson_jensen_check(fn("z", 8.0), Complex(0.5, 0), 1.0).residual);
    worst = std::max(worst,
                     poisson_jensen_check(fn("z^2 - 0.25", 8.0), Complex(0, 0), 1.0).residual);
    worst = std::max(worst,
                     poisson_jensen_check(fn("exp(z)", 8.0), Complex(0.3, 0), 0.9).residual);
    require(worst <= 1e-6, "residual above 1e-6");
    char buf[64];
    std::snprintf(buf, sizeof buf, "worst residual = %.2e", worst);
    return std::string(buf);
  });

  run_criterion("dichotomy-scenario", 60.0, [] {
    Config cfg;
    scenario::DichotomyParams p;  // ks = {10, 20, 40}
    const auto reports = scenario::run_dichotomy(p, cfg);
    for (const auto& r : reports)
      require(r.verdict == Verdict::Pass, r.id + " did not pass");
    double arg_err = 1e300, mod_err = 1e300;
    for (const auto& [name, v] : reports[1].margins) {
      if (name == "final_arg_error") arg_err = v;
      if (name == "final_mod_error") mod_err = v;
    }
    require(arg_err <= 0.05, "arg c missed -pi/2");
    require(mod_err <= 0.05, "|c| missed 2");
    char buf[80];
    std::snprintf(buf, sizeof buf, "arg err = %.2e, mod err = %.2e", arg_err, mod_err);
    return std::string(buf);
  });

  run_criterion("deterministic-reports", 120.0, [&] {
    require(!cli.empty(), "CLI path missing (pass it as argv[1])");
    int code1 = 0, code2 = 0;
    const std::string out1 = run_cli(cli, "scenario all --deterministic", code1);
    const std::string out2 = run_cli(cli, "scenario all --deterministic", code2);
    require(code1 == 0, "first run exited " + std::to_string(code1));
    require(code2 == 0, "second run exited " + std::to_string(code2));
    require(!out1.empty(), "no output");
    require(out1 == out2, "outputs differ between runs");
    std::istringstream ss(out1);
    std::string line;
    int lines = 0;
    while (std::getline(ss, line)) ++lines;
    return std::to_string(lines) + " report lines, byte-identical";
  });

  if (g_failures) {
    std::printf("%d criterion(s) failed\n", g_failures);
    return 1;
  }
  std::printf("all acceptance criteria passed\n");
  return 0;
}
