#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "dimple/delta_limit.hpp"

using namespace dimple;

TEST_CASE("sampling identities") {
  for (double a : {0.5, 0.1, 0.003}) {
    CHECK(delta_rep_sample([](double) { return 1.0; }, a) ==
          doctest::Approx(1.0).epsilon(1e-12));
    CHECK(delta_rep_sample([](double x) { return x * x; }, a) ==
          doctest::Approx(a * a / 5.0).epsilon(1e-10));
    CHECK(std::fabs(delta_rep_sample([](double x) { return x * x * x; }, a)) < 1e-14);
  }
  CHECK_THROWS_AS(delta_rep_sample([](double) { return 1.0; }, 0.0), std::invalid_argument);
}

TEST_CASE("sampling error scales as a^2") {
  for (auto h : std::vector<std::function<double(double)>>{
           [](double x) { return std::cos(x); }, [](double x) { return std::exp(x); }}) {
    std::vector<double> errs;
    std::vector<double> as{0.1, 0.05, 0.025, 0.0125, 0.00625};
    for (double a : as) errs.push_back(std::fabs(delta_rep_sample(h, a) - h(0.0)));
    for (size_t i = 1; i < as.size(); ++i) {
      double slope = std::log(errs[i - 1] / errs[i]) / std::log(as[i - 1] / as[i]);
      CHECK(slope == doctest::Approx(2.0).epsilon(0.05));
    }
  }
}

TEST_CASE("delta bound-state energy") {
  CHECK(delta_bound_energy(2.0, 1.0, 0.5) == doctest::Approx(-1.0).epsilon(1e-15));
  CHECK(delta_bound_energy(0.0, 1.0, 0.5) == 0.0);
  CHECK(delta_bound_energy(4.0, 1.0, 0.5) ==
        doctest::Approx(4.0 * delta_bound_energy(2.0, 1.0, 0.5)).epsilon(1e-14));
}

TEST_CASE("equivalent coupling") {
  CHECK(sigma_equivalent(2.0, 0.5, 1.0, 0.5) == doctest::Approx(4.0 / 3.0).epsilon(1e-15));
  // combined with the bound energy: E = -(8/9) m U0^2 a^2 / hbar^2
  double U0 = 3.0, a = 0.2, m = 0.5, hbar = 1.0;
  double E = delta_bound_energy(sigma_equivalent(U0, a, hbar, m), hbar, m);
  CHECK(E == doctest::Approx(-(8.0 / 9.0) * m * U0 * U0 * a * a / (hbar * hbar))
                 .epsilon(1e-14));
}

TEST_CASE("free well ground state against frozen references, c = 1") {
  struct Case {
    int k;
    double want;
  };
  for (auto c : {Case{3, -0.409785898116}, Case{6, -0.439741259113}, Case{10, -0.444147057695}}) {
    double a = std::ldexp(1.0, -c.k);
    FreeWellParams p{1.0, 0.5, a, 1.0 / a};
    EigenState st = well_ground_energy(p);
    CAPTURE(c.k);
    CHECK(st.energy == doctest::Approx(c.want).epsilon(1e-8));
    CHECK(st.parity == Parity::even);
    // no odd bound state at small a
    CHECK(free_well_roots(Parity::odd, p).empty());
  }
}

TEST_CASE("free well ground converges to the delta reference") {
  for (double c : {0.5, 1.0, 2.0}) {
    double prev = 1e9;
    for (int k = 3; k <= 10; ++k) {
      double a = std::ldexp(1.0, -k);
      double U0 = c / a;
      FreeWellParams p{1.0, 0.5, a, U0};
      double Eref = -(8.0 / 9.0) * 0.5 * U0 * U0 * a * a;
      double ratio_err = std::fabs(well_ground_energy(p).energy / Eref - 1.0);
      CAPTURE(c);
      CAPTURE(k);
      CHECK(ratio_err < prev + 1e-12);
      prev = ratio_err;
      if (k == 10) CHECK(ratio_err < 1e-2);
    }
  }
}

TEST_CASE("deep well approaches the shifted-oscillator ground state") {
  FreeWellParams p{1.0, 0.5, 1.0, 4000.0};
  EigenState st = well_ground_energy(p);
  CHECK(st.energy == doctest::Approx(-p.U0 + 0.5 * p.nu()).epsilon(1e-3));
}

TEST_CASE("harmonic + delta even levels") {
  auto zero = harm_delta_even_roots(0.0, 3);
  REQUIRE(zero.size() == 3);
  CHECK(zero[0] == doctest::Approx(0.0).scale(1).epsilon(1e-9));
  CHECK(zero[1] == doctest::Approx(2.0).epsilon(1e-9));
  CHECK(zero[2] == doctest::Approx(4.0).epsilon(1e-9));

  auto four = harm_delta_even_roots(4.0, 3);
  REQUIRE(four.size() == 3);
  CHECK(four[0] == doctest::Approx(-2.44235869898).epsilon(1e-9));
  CHECK(four[1] == doctest::Approx(1.50477558541).epsilon(1e-9));
  CHECK(four[2] == doctest::Approx(3.61342516242).epsilon(1e-9));

  auto third = harm_delta_even_roots(4.0 / 3.0, 3);
  REQUIRE(third.size() == 3);
  CHECK(third[0] == doctest::Approx(-0.491259831478).epsilon(1e-9));
  CHECK(third[1] == doctest::Approx(1.81046407603).epsilon(1e-9));
  CHECK(third[2] == doctest::Approx(3.85906641361).epsilon(1e-9));

  // interlacing with the untouched odd levels
  for (const auto& r : {four, third}) {
    CHECK(r[0] < 1.0);
    CHECK(1.0 < r[1]);
    CHECK(r[1] < 3.0);
    CHECK(3.0 < r[2]);
    CHECK(r[2] < 5.0);
  }

  // strong-coupling ground state approaches the pure delta energy
  double L = 40.0;
  auto strong = harm_delta_even_roots(L, 1);
  REQUIRE(strong.size() == 1);
  double lam_delta = -L * L / 8.0 - 0.5;
  CHECK(strong[0] == doctest::Approx(lam_delta).epsilon(1e-2));
}

TEST_CASE("dimple spectrum converges to the delta-limit references") {
  std::vector<double> as;
  for (int k = 2; k <= 6; ++k) as.push_back(std::ldexp(1.0, -k));
  TrapParams base = TrapParams::natural(1.0, 1.0, 0.0);
  SweepTable t = dimple_to_delta_convergence(1.0, as, base, 3);
  REQUIRE(t.rows.size() == as.size());
  // every gap column decreases monotonically down the table
  for (size_t col = 1; col < t.columns.size(); ++col)
    for (size_t r = 1; r < t.rows.size(); ++r)
      CHECK(std::stod(t.rows[r][col]) < std::stod(t.rows[r - 1][col]));
}

TEST_CASE("c = 0 reduces to the oscillator at every a") {
  std::vector<double> as{0.25, 0.125};
  TrapParams base = TrapParams::natural(1.0, 1.0, 0.0);
  SweepTable t = dimple_to_delta_convergence(0.0, as, base, 2);
  for (const auto& row : t.rows)
    for (size_t col = 1; col < row.size(); ++col) CHECK(std::stod(row[col]) < 1e-7);
}
