#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "dimple/bound_spectrum.hpp"

using namespace dimple;

namespace {

TrapParams table1() { return TrapParams::natural(1.0, 3.0, 10.0); }

TrapParams table2() {
  TrapParams p;
  p.hbar = 1.054571817e-34;
  p.m = 23.0 * 1.66053906660e-27;
  p.omega = 2.0 * M_PI * 20.0;
  p.a = 11e-6;
  p.U0 = 1e-30;
  p.unit_preset = UnitPreset::si;
  return p;
}

}  // namespace

TEST_CASE("derived scales") {
  DerivedScales s = derived_scales(table1());
  CHECK(s.omega_d == doctest::Approx(7.0 / 3.0).epsilon(1e-14));
  CHECK(s.A == doctest::Approx(3.0 * std::sqrt(0.5)).epsilon(1e-14));
  CHECK(s.B == doctest::Approx(3.0 * std::sqrt(7.0 / 6.0)).epsilon(1e-14));
  CHECK(s.lambda_from_energy(s.energy_from_lambda(1.7)) == doctest::Approx(1.7));

  DerivedScales s2 = derived_scales(table2());
  CHECK(s2.omega_d / (2.0 * M_PI * 20.0) == doctest::Approx(5.329742).epsilon(1e-6));
  CHECK(s2.A == doctest::Approx(2.346648).epsilon(1e-6));
  CHECK(s2.B == doctest::Approx(5.417527).epsilon(1e-6));
  CHECK(table2().U0 / s2.hbar_omega == doctest::Approx(75.459509).epsilon(1e-6));

  TrapParams bad = table1();
  bad.a = -1.0;
  CHECK_THROWS_AS(derived_scales(bad), std::invalid_argument);
}

TEST_CASE("reference shallow-trap energies reproduce") {
  const double want[12] = {-8.8333, -6.5001, -4.1681, -1.8447, 0.4355,  2.5432,
                           4.1711,  5.2756,  6.3845,  7.5823,  8.6277,  9.7171};
  Spectrum sp = solve_spectrum(table1(), 10.25);
  REQUIRE(sp.states.size() == 12);
  DerivedScales s = derived_scales(table1());
  for (int i = 0; i < 12; ++i) {
    CAPTURE(i);
    CHECK(std::fabs(sp.states[i].energy / s.hbar_omega - want[i]) < 5e-4);
  }
  CHECK(spectrum_ordering_defect(sp) == -1);
  CHECK(sp.gaps.empty());
}

TEST_CASE("harmonic limit recovers the oscillator ladder") {
  TrapParams p = TrapParams::natural(1.0, 3.0, 0.0);
  Spectrum sp = solve_spectrum(p, 6.1);
  REQUIRE(sp.states.size() == 6);
  for (int i = 0; i < 6; ++i)
    CHECK(sp.states[i].energy == doctest::Approx(i + 0.5).epsilon(1e-8));
  CHECK(spectrum_ordering_defect(sp) == -1);
}

TEST_CASE("spectrum is continuous in U0 near zero") {
  TrapParams p = TrapParams::natural(1.0, 3.0, 1e-5);
  Spectrum sp = solve_spectrum(p, 4.1);
  REQUIRE(sp.states.size() >= 4);
  for (int i = 0; i < 4; ++i)
    CHECK(std::fabs(sp.states[i].energy - (i + 0.5)) < 1e-4);
}

TEST_CASE("all energies exceed the well bottom") {
  Spectrum sp = solve_spectrum(table1(), 10.25);
  for (const auto& st : sp.states) {
    CHECK(st.energy > -10.0);
    CHECK(st.residual < 1e-6);
  }
}

TEST_CASE("deep SI trap reproduces the reference deep and high rows") {
  const double want[9] = {-72.7948, -67.4650, -30.1570, -3.6816, 1.2167,
                          4.8125,   13.6232,  -62.1353, -24.8278};
  const int idx[9] = {0, 1, 8, 13, 14, 15, 22, 2, 9};
  TrapParams p = table2();
  DerivedScales s = derived_scales(p);
  Spectrum sp = solve_spectrum(p, 14.0 * s.hbar_omega);
  REQUIRE(sp.states.size() >= 23);
  for (int i = 0; i < 9; ++i) {
    CAPTURE(idx[i]);
    CHECK(std::fabs(sp.states[idx[i]].energy / s.hbar_omega - want[i]) < 5e-4);
  }
  CHECK(spectrum_ordering_defect(sp) == -1);
}

TEST_CASE("residual functions change sign exactly at an eigenvalue") {
  TrapParams p = table1();
  Spectrum sp = solve_spectrum(p, 10.25);
  double lam = sp.states[2].lambda;  // even state
  double left = even_residual(lam - 1e-6, p).value;
  double right = even_residual(lam + 1e-6, p).value;
  CHECK(std::signbit(left) != std::signbit(right));
}

TEST_CASE("eigenfunctions are continuous, normalized, and parity-pure") {
  TrapParams p = table1();
  Spectrum sp = solve_spectrum(p, 10.25);
  QuadSpec q;
  for (int i : {0, 1, 4, 7}) {
    PiecewiseWaveFunction psi = eigenfunction(sp.states[i], p, q);
    CAPTURE(i);
    CHECK(psi.continuity_defect() < 1e-5);
    auto f2 = [&](double x) {
      double v = psi(x);
      return v * v;
    };
    IntegralResult norm = integrate(f2, 0.0, 14.0, q);
    CHECK(2.0 * norm.value == doctest::Approx(1.0).epsilon(1e-6));
    double sgn = sp.states[i].parity == Parity::even ? 1.0 : -1.0;
    CHECK(psi(-1.234) == doctest::Approx(sgn * psi(1.234)).epsilon(1e-12));
  }
}

TEST_CASE("spectrum table round-trips the states") {
  Spectrum sp = solve_spectrum(table1(), 10.25);
  SweepTable t = spectrum_table(sp);
  REQUIRE(t.rows.size() == sp.states.size());
  CHECK(t.columns.size() == 6);
  CHECK(t.rows[0][1] == "even");
  CHECK(t.rows[1][1] == "odd");
}
