#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "nflab/constants.hpp"
#include "nflab/dsl.hpp"

using namespace nflab;
using Catch::Approx;

namespace {

AnalyticFn fn(const std::string& expr, double domain_radius = 8.0) {
  return dsl::parse_fn(expr).with_domain(Disk(Complex(0, 0), domain_radius));
}

// Test-side oracle: Spouge's series for Gamma, independent of the AGM route
// used by the library.  At a = 81 the relative error is far below 1e-45.
BigFloat100 spouge_gamma(const BigFloat100& x) {
  using T = BigFloat100;
  constexpr int a = 81;
  const T pi = boost::math::constants::pi<T>();
  const T z = x - 1;
  T sum = sqrt(2 * pi);
  T factorial = 1;
  for (int k = 1; k < a; ++k) {
    if (k > 1) factorial *= (k - 1);
    const T ck = pow(T(a - k), T(k) - T(1) / 2) * exp(T(a - k)) / factorial;
    sum += (k % 2 ? ck : -ck) / (z + k);
  }
  return pow(z + a, z + T(1) / 2) * exp(-(z + a)) * sum;
}

}  // namespace

TEST_CASE("Gamma(1/4) via AGM matches the Spouge oracle and the reflection identity") {
  using T = BigFloat100;
  const T pi = boost::math::constants::pi<T>();
  const T g14 = gamma_quarter_big<100>();
  const T g14_oracle = spouge_gamma(T(1) / 4);
  CHECK(abs(g14 - g14_oracle) < T("1e-45"));

  // reflection: Gamma(1/4) Gamma(3/4) = pi sqrt 2, with Gamma(3/4) from the
  // oracle route only
  const T g34_oracle = spouge_gamma(T(3) / 4);
  CHECK(abs(g14 * g34_oracle - pi * sqrt(T(2))) < T("1e-45"));

  // frozen digits (computed with the oracle before the implementation)
  const T frozen("3.62560990822190831193068515586767200299516768288006546743338");
  CHECK(abs(g14 - frozen) < T("1e-45"));
}

TEST_CASE("the sharp derivative-bound constant") {
  auto A = hempel_lai_A();
  CHECK(A.error_bound < 1e-40);
  // agreement with the printed digits 4.3768796 to 7 significant figures
  CHECK(std::fabs(A.approx / 4.3768796 - 1.0) <= 1e-7);

  using T = BigFloat100;
  const T a_big = hempel_lai_big<100>();
  const T frozen("4.37687923045295327767353988140892908651874544565113344423857");
  CHECK(abs(a_big - frozen) < T("1e-45"));

  // 4 pi^2 A = Gamma(1/4)^4
  const T pi = boost::math::constants::pi<T>();
  const T g = gamma_quarter_big<100>();
  CHECK(abs(4 * pi * pi * a_big - g * g * g * g) < T("1e-40"));

  CHECK(A.decimal.substr(0, 12) == "4.3768792304");
}

TEST_CASE("feasibility of the quantitative constant") {
  auto v24 = critical_feasible(0.000024);
  CHECK(v24.feasible);
  CHECK(v24.digits_used >= 50);
  // frozen margin from the 60-digit oracle
  CHECK(v24.margin == Approx(2.0221795713543504e-04).epsilon(1e-9));

  auto v25 = critical_feasible(0.000025);
  CHECK_FALSE(v25.feasible);
  CHECK(v25.margin == Approx(-6.3721530390137861e-03).epsilon(1e-9));

  auto v01 = critical_feasible(0.01);
  CHECK_FALSE(v01.feasible);
  CHECK(v01.lhs.approx == Approx(2.0249397349400625).epsilon(1e-12));
  CHECK(v01.rhs.approx == Approx(3.8272650030302867).epsilon(1e-12));

  CHECK_THROWS_AS(critical_feasible(0.2), Error);  // beyond the positivity edge
}

TEST_CASE("bisection pins the critical constant") {
  const double tol = 1e-12;
  const double cstar = max_feasible_constant(tol);
  CHECK(cstar > 0.000024);
  CHECK(cstar < 0.000025);
  // frozen from the oracle: 2.40302351585244031200e-05
  CHECK(cstar == Approx(2.40302351585244e-05).margin(1e-11));
  CHECK(critical_feasible(cstar - 10 * tol).feasible);
  CHECK_FALSE(critical_feasible(cstar + 10 * tol).feasible);
  CHECK_THROWS_AS(max_feasible_constant(1e-13), Error);
}

TEST_CASE("feasibility is antitone in C") {
  bool seen_infeasible = false;
  for (int i = 0; i <= 50; ++i) {
    const double C = 1e-8 * std::pow(1e6, i / 50.0);  // 1e-8 .. 1e-2, log-spaced
    const bool feas = critical_feasible(C).feasible;
    if (seen_infeasible) CHECK_FALSE(feas);
    if (!feas) seen_infeasible = true;
  }
  CHECK(seen_infeasible);
}

TEST_CASE("lower bound closed form") {
  CHECK(theorem_lower_bound(0.000024) == Approx(9.25111436592043).epsilon(1e-12));
  CHECK(theorem_lower_bound(1.0 / 9.0) == Approx(2.0 * std::log(4.0 / 3.0)).epsilon(1e-14));
  const double edge = lower_bound_positivity_edge();
  CHECK(theorem_lower_bound(edge * (1.0 - 1e-9)) > 0.0);
  CHECK(theorem_lower_bound(edge * (1.0 + 1e-9)) < 0.0);
  CHECK_THROWS_AS(theorem_lower_bound(1.5), Error);
}

TEST_CASE("strip map centers, scales and stays inside the disk") {
  CHECK(std::abs(strip_map(Complex(-1, 0.3), -1.0, 0.3)) < 1e-14);
  CHECK(strip_map_deriv_at_center(-1.0) == Approx(M_PI / 4.0).margin(1e-12));
  for (double x0 : {-0.5, -1.0, -5.0}) {
    // central differences as the independent check of |phi'(z0)|
    const double h = 1e-6;
    const Complex d =
        (strip_map(Complex(x0 + h, 0.0), x0, 0.0) - strip_map(Complex(x0 - h, 0.0), x0, 0.0)) /
        (2.0 * h);
    CHECK(std::abs(d) == Approx(M_PI / (4.0 * std::fabs(x0))).margin(1e-9));
    CHECK(strip_map_deriv_at_center(x0) == Approx(M_PI / (4.0 * std::fabs(x0))).margin(1e-12));
  }
  std::mt19937 rng(31337);
  std::uniform_real_distribution<double> ux(0.0, 1.0), uy(-8.0, 8.0);
  const double x0 = -1.2, y0 = 0.4;
  for (int i = 0; i < 1000; ++i) {
    const Complex z(2.0 * x0 * (1e-9 + (1 - 2e-9) * ux(rng)), uy(rng));
    CHECK(std::abs(strip_map(z, x0, y0)) < 1.0);
  }
  CHECK_THROWS_AS(strip_map(Complex(0.5, 0), -1.0, 0.0), Error);
}

TEST_CASE("derivative bound at the center for omitting functions") {
  auto rep = landau_check(fn("exp(z + 3)"), Complex(0, 0), 1.0);
  CHECK(rep.pass);
  CHECK(rep.lhs == Approx(1.0 / (3.0 + hempel_lai_A_double())).epsilon(1e-12));
  CHECK(rep.rhs == Approx(2.0));

  CHECK(landau_check(fn("5"), Complex(0, 0), 1.0).lhs == 0.0);

  try {
    landau_check(fn("exp(2*i*z)"), Complex(0, 0), 1.0);
    FAIL("expected OmissionFailed");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::OmissionFailed);
  }
}

TEST_CASE("spherical derivative bound at the center") {
  CHECK(spherical_landau_check(fn("5"), Complex(0, 0), 1.0, 4.5).lhs == 0.0);
  auto rep = spherical_landau_check(fn("exp(z + 3)"), Complex(0, 0), 1.0, 4.5);
  CHECK(rep.pass);
  CHECK(rep.lhs ==
        Approx(std::exp(3.0) / (1.0 + std::exp(6.0))).epsilon(1e-12));
  auto rep2 = spherical_landau_check(fn("exp(10*z + 3)"), Complex(0, 0), 0.1, 4.5);
  CHECK(rep2.pass);
  CHECK(rep2.lhs == Approx(10.0 * std::exp(3.0) / (1.0 + std::exp(6.0))).epsilon(1e-12));
}

TEST_CASE("Poisson-Jensen identity on the bundled corpus") {
  // single zero at the origin
  auto rep1 = poisson_jensen_check(fn("z"), Complex(0.5, 0), 1.0);
  CHECK(rep1.residual <= 1e-6);
  CHECK(rep1.log_fb == Approx(std::log(0.5)).epsilon(1e-12));
  CHECK(rep1.zero_sum == Approx(std::log(2.0)).epsilon(1e-9));
  CHECK(std::fabs(rep1.boundary_integral) <= 1e-8);

  // two zeros
  auto rep2 = poisson_jensen_check(fn("z^2 - 0.25"), Complex(0, 0), 1.0);
  CHECK(rep2.residual <= 1e-6);
  CHECK(rep2.log_fb == Approx(std::log(0.25)).epsilon(1e-12));
  REQUIRE(rep2.zeros.size() == 2);

  // zero-free exponential
  auto rep3 = poisson_jensen_check(fn("exp(z)"), Complex(0.3, 0), 0.9);
  CHECK(rep3.residual <= 1e-6);
  CHECK(rep3.boundary_integral == Approx(0.3).margin(1e-7));
  CHECK(rep3.zeros.empty());
}

TEST_CASE("witness radius check enforces its hypotheses") {
  // 40 z (z - 0.1): zeros {0, 0.1}, 1-points (1 +- sqrt 11)/20; the positive
  // 1-point 0.2158... breaks the sign hypothesis (quadratic-root oracle).
  auto f = fn("40*z*(z - 0.1)", 4.0);
  try {
    witness_radius_check(f, 0.22);
    FAIL("expected HypothesisFailed");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::HypothesisFailed);
  }
  WitnessOptions force;
  force.force_pillars = true;
  auto rep = witness_radius_check(f, 0.22, force);
  CHECK_FALSE(rep.hypothesis_ok);
  CHECK(rep.n_zeros == 2);
  CHECK(rep.n_ones == 2);
  // the sign hypothesis fails, so the inherited circle bound genuinely fails
  // beyond the positive 1-point: a witness of why the hypothesis matters
  CHECK_FALSE(rep.pillar_min_modulus);
  CHECK(rep.pillar_radius);
  CHECK_FALSE(rep.violation);

  // too few special points
  try {
    witness_radius_check(fn("z + 2", 4.0), 0.5);
    FAIL("expected HypothesisFailed");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::HypothesisFailed);
  }
}
