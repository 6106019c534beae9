#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "dimple/numerics.hpp"

using namespace dimple;

TEST_CASE("spec validation") {
  RootSpec bad;
  bad.scan_lo = 1.0;
  bad.scan_hi = 0.0;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  bad = {};
  bad.scan_steps = 5;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  QuadSpec q;
  q.max_depth = 99;
  CHECK_THROWS_AS(q.validate(), std::invalid_argument);
  q = {};
  q.abs_tolerance = -1.0;
  CHECK_THROWS_AS(q.validate(), std::invalid_argument);
}

TEST_CASE("find_roots locates all zeros of sin on (0, 10)") {
  FlaggedFn f = [](double x) -> SpecialValue { return {std::sin(x), Flag::ok}; };
  RootSpec spec;
  spec.scan_lo = 0.5;
  spec.scan_hi = 10.0;
  spec.scan_steps = 100;
  RootScan scan = find_roots(f, spec);
  REQUIRE(scan.roots.size() == 3);
  CHECK(scan.roots[0].x == doctest::Approx(M_PI).epsilon(1e-9));
  CHECK(scan.roots[1].x == doctest::Approx(2.0 * M_PI).epsilon(1e-9));
  CHECK(scan.roots[2].x == doctest::Approx(3.0 * M_PI).epsilon(1e-9));
  CHECK(scan.gaps.empty());
  for (const auto& r : scan.roots) CHECK(std::fabs(r.residual) < 1e-6);
}

TEST_CASE("flagged regions become reported gaps, not roots") {
  // pole flag over (2, 3); sign change hidden inside
  FlaggedFn f = [](double x) -> SpecialValue {
    if (x > 2.0 && x < 3.0) return {std::nan(""), Flag::pole};
    return {x - 2.5, Flag::ok};
  };
  RootSpec spec;
  spec.scan_lo = 0.0;
  spec.scan_hi = 5.0;
  spec.scan_steps = 50;
  RootScan scan = find_roots(f, spec);
  CHECK(scan.roots.empty());
  CHECK(!scan.gaps.empty());
  for (const auto& [lo, hi] : scan.gaps) {
    CHECK(lo >= 1.9);
    CHECK(hi <= 3.1);
  }
}

TEST_CASE("steep crossings are machine-resolved") {
  // width ~1e-13 sign flip around x = 1
  FlaggedFn f = [](double x) -> SpecialValue {
    return {std::tanh((x - 1.0) * 1e13), Flag::ok};
  };
  RootSpec spec;
  spec.scan_lo = 0.0;
  spec.scan_hi = 2.0;
  spec.scan_steps = 20;
  RootScan scan = find_roots(f, spec);
  REQUIRE(scan.roots.size() == 1);
  CHECK(scan.roots[0].x == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(scan.roots[0].machine_resolved());
}

TEST_CASE("quadrature battery") {
  QuadSpec q;
  auto sin_int = integrate([](double x) { return std::sin(x); }, 0.0, M_PI, q);
  CHECK(sin_int.value == doctest::Approx(2.0).epsilon(1e-11));
  CHECK(sin_int.flag == Flag::ok);

  auto poly = integrate([](double x) { return x * x * x - 2.0 * x + 1.0; }, -1.0, 2.0, q);
  CHECK(poly.value == doctest::Approx(15.0 / 4.0 - 3.0 + 3.0).epsilon(1e-12));

  // reversed bounds flip the sign
  auto rev = integrate([](double x) { return x; }, 1.0, 0.0, q);
  CHECK(rev.value == doctest::Approx(-0.5).epsilon(1e-12));

  // zero-length interval
  CHECK(integrate([](double x) { return x; }, 3.0, 3.0, q).value == 0.0);

  // Gaussian over the half line
  auto gauss = integrate_to_infinity([](double x) { return std::exp(-x * x); }, 0.0, q);
  CHECK(gauss.value == doctest::Approx(0.5 * std::sqrt(M_PI)).epsilon(1e-11));

  // sharply peaked integrand
  auto peak = integrate([](double x) { return 1.0 / (1e-6 + (x - 0.3) * (x - 0.3)); }, 0.0,
                        1.0, q);
  double w = 1e-3;
  double exact = (std::atan(0.7 / w) + std::atan(0.3 / w)) / w;
  CHECK(peak.value == doctest::Approx(exact).epsilon(1e-9));
}

TEST_CASE("quadrature flags exhaustion instead of lying") {
  QuadSpec q;
  q.max_depth = 3;
  auto r = integrate([](double x) { return std::sqrt(std::fabs(x - 0.123456)); }, 0.0, 1.0, q);
  CHECK(r.flag == Flag::degraded);
}
