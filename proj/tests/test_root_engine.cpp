#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "nflab/dsl.hpp"
#include "nflab/root_engine.hpp"

using namespace nflab;
using Catch::Approx;

namespace {
AnalyticFn fn(const std::string& expr, double domain_radius = 8.0,
              const std::map<std::string, double>& params = {}) {
  return dsl::parse_fn(expr, params).with_domain(Disk(Complex(0, 0), domain_radius));
}

AnalyticFn poly_from_roots(const std::vector<Complex>& roots, Complex lead = {1.0, 0.0},
                           double domain_radius = 16.0) {
  std::vector<Complex> coeffs{lead};
  for (Complex r : roots) coeffs = poly_mul(coeffs, {-r, Complex(1.0, 0.0)});
  return AnalyticFn(make_poly(std::move(coeffs)), Disk(Complex(0, 0), domain_radius));
}
}  // namespace

TEST_CASE("count_a_points on known examples") {
  CHECK(count_a_points(fn("z^2 - 1"), Complex(0, 0), Disk(Complex(0, 0), 2.0)).count == 2);
  CHECK(count_a_points(fn("exp(z)"), Complex(0, 0), Disk(Complex(0, 0), 5.0)).count == 0);
  // 1-points of exp(-10iz) are z = -pi*m/5; three of them lie in |z| < 0.95.
  CHECK(count_a_points(fn("exp(-10*i*z)"), Complex(1, 0), Disk(Complex(0, 0), 0.95)).count == 3);
}

TEST_CASE("count residual is certified") {
  auto rc = count_a_points(fn("z^2 - 1"), Complex(0, 0), Disk(Complex(0, 0), 2.0));
  CHECK(rc.winding_residual < 0.25);
}

TEST_CASE("boundary roots are refused") {
  // Root exactly on the contour.
  try {
    count_a_points(fn("z - 0.5"), Complex(0, 0), Disk(Complex(0, 0), 0.5));
    FAIL("expected BoundaryRoot");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::BoundaryRoot);
  }
}

TEST_CASE("locate_a_points on known examples") {
  auto roots = locate_a_points(fn("z^2 - 1"), Complex(0, 0), Disk(Complex(0, 0), 2.0), 1e-10);
  REQUIRE(roots.roots.size() == 2);
  CHECK(std::abs(roots.roots[0].location - Complex(-1, 0)) < 1e-9);
  CHECK(std::abs(roots.roots[1].location - Complex(1, 0)) < 1e-9);
  CHECK(roots.roots[0].multiplicity == 1);
  CHECK(roots.roots[1].multiplicity == 1);

  auto dbl = locate_a_points(fn("(z - 0.3)^2"), Complex(0, 0), Disk(Complex(0, 0), 1.0), 1e-8);
  REQUIRE(dbl.roots.size() == 1);
  CHECK(std::abs(dbl.roots[0].location - Complex(0.3, 0)) < 1e-7);
  CHECK(dbl.roots[0].multiplicity == 2);

  auto one = locate_a_points(fn("(0.05 - z)*10"), Complex(1, 0), Disk(Complex(0, 0), 0.5), 1e-10);
  REQUIRE(one.roots.size() == 1);
  CHECK(std::abs(one.roots[0].location - Complex(-0.05, 0)) < 1e-10);
  CHECK(one.roots[0].multiplicity == 1);
}

TEST_CASE("argument principle agrees with known roots on random polynomials") {
  std::mt19937 rng(2024);
  std::uniform_real_distribution<double> unif(-1.8, 1.8);
  std::uniform_int_distribution<int> deg_dist(1, 6);
  const Disk disk(Complex(0, 0), 1.0);
  int tested = 0;
  while (tested < 40) {
    const int deg = deg_dist(rng);
    std::vector<Complex> roots;
    bool ok = true;
    for (int i = 0; i < deg; ++i) {
      const Complex r(unif(rng), unif(rng));
      if (std::fabs(std::abs(r) - disk.radius) < 1e-6) ok = false;
      roots.push_back(r);
    }
    if (!ok) continue;
    long inside = 0;
    for (Complex r : roots)
      if (std::abs(r) < disk.radius) ++inside;
    auto f = poly_from_roots(roots);
    CHECK(count_a_points(f, Complex(0, 0), disk).count == inside);
    ++tested;
  }
}

TEST_CASE("counts add over a four-sector quadrisection") {
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> unif(-1.5, 1.5);
  const Disk disk(Complex(0, 0), 1.2);
  for (int trial = 0; trial < 8; ++trial) {
    std::vector<Complex> roots;
    for (int i = 0; i < 4; ++i) {
      Complex r(unif(rng), unif(rng));
      // keep roots away from the sector cut lines (the axes) and the rim
      if (std::fabs(r.real()) < 0.05) r += Complex(0.1, 0);
      if (std::fabs(r.imag()) < 0.05) r += Complex(0, 0.1);
      if (std::fabs(std::abs(r) - disk.radius) < 0.05) r *= 1.1;
      roots.push_back(r);
    }
    auto f = poly_from_roots(roots);
    const long whole = count_a_points(f, Complex(0, 0), disk).count;
    long parts = 0;
    for (int q = 0; q < 4; ++q) {
      const Contour sec =
          Contour::sector(disk.center, disk.radius, q * M_PI / 2.0, (q + 1) * M_PI / 2.0);
      parts += winding_count(f, Complex(0, 0), sec).count;
    }
    CHECK(parts == whole);
  }
}

TEST_CASE("zero and 1-point counts agree when boundary modulus exceeds 1") {
  struct Case {
    std::string expr;
    double r;
  };
  for (const auto& c : {Case{"(0.05 - z)*10", 0.5}, Case{"40*z*(z - 0.1)", 0.5},
                        Case{"z + 2", 0.5}}) {
    auto f = fn(c.expr);
    REQUIRE(min_modulus_on_circle(f, Complex(0, 0), c.r).log_abs > 0.0);
    const long zeros = count_a_points(f, Complex(0, 0), Disk(Complex(0, 0), c.r)).count;
    const long ones = count_a_points(f, Complex(1, 0), Disk(Complex(0, 0), c.r)).count;
    CHECK(zeros == ones);
  }
}

TEST_CASE("locate totals match counts") {
  auto f = fn("(z - 0.2)*(z + 0.4)*(z - 0.1*i)*(z - 0.2)");
  const Disk disk(Complex(0, 0), 0.9);
  auto located = locate_a_points(f, Complex(0, 0), disk, 1e-9);
  CHECK(located.total == count_a_points(f, Complex(0, 0), disk).count);
  long mult_02 = 0;
  for (const auto& r : located.roots)
    if (std::abs(r.location - Complex(0.2, 0)) < 1e-7) mult_02 = r.multiplicity;
  CHECK(mult_02 == 2);
}

TEST_CASE("axis pairing verdicts") {
  auto rep = verify_axis_pairing(fn("(0.05 - z)*10"), 0.5);
  CHECK(rep.hypothesis_ok);
  CHECK(rep.verdict == PairingVerdict::OnePair);
  CHECK(rep.min_boundary_modulus == Approx(4.5).epsilon(1e-6));
  REQUIRE(rep.zeros.size() == 1);
  REQUIRE(rep.ones.size() == 1);
  CHECK(std::abs(rep.zeros[0].location - Complex(0.05, 0)) < 1e-9);
  CHECK(std::abs(rep.ones[0].location - Complex(-0.05, 0)) < 1e-9);

  auto rep2 = verify_axis_pairing(fn("z + 2"), 0.5);
  CHECK(rep2.verdict == PairingVerdict::Empty);
  CHECK(rep2.n_zeros == 0);
  CHECK(rep2.n_ones == 0);

  try {
    verify_axis_pairing(fn("z"), 0.5);
    FAIL("expected HypothesisUnchecked");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::HypothesisUnchecked);
  }
}

TEST_CASE("axis pairing flags off-axis configurations") {
  // 1-point at +0.11 (positive): hypothesis must be marked violated, and the
  // counts still give one of each.
  auto f = fn("100*(z - 0.1)", 2.0);
  auto rep = verify_axis_pairing(f, 0.5);
  CHECK_FALSE(rep.hypothesis_ok);
  CHECK(rep.verdict == PairingVerdict::OnePair);
}
