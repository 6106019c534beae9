#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "dimple/sudden_transitions.hpp"

using namespace dimple;

namespace {

TrapParams table1() { return TrapParams::natural(1.0, 3.0, 10.0); }

// composite Gauss-Legendre (5-point panels), independent of the adaptive
// Simpson used by the library
double gl_integrate(const std::function<double(double)>& f, double a, double b,
                    int panels = 400) {
  static const double xs[5] = {-0.9061798459386640, -0.5384693101056831, 0.0,
                               0.5384693101056831, 0.9061798459386640};
  static const double ws[5] = {0.2369268850561891, 0.4786286704993665, 0.5688888888888889,
                               0.4786286704993665, 0.2369268850561891};
  double h = (b - a) / panels, sum = 0.0;
  for (int p = 0; p < panels; ++p) {
    double mid = a + (p + 0.5) * h;
    for (int i = 0; i < 5; ++i) sum += ws[i] * f(mid + 0.5 * h * xs[i]);
  }
  return 0.5 * h * sum;
}

}  // namespace

TEST_CASE("oscillator states are orthonormal with the right peak") {
  TrapParams p = table1();
  CHECK(ho_eigenfunction(0, p)(0.0) ==
        doctest::Approx(std::pow(p.m * p.omega / (M_PI * p.hbar), 0.25)).epsilon(1e-14));
  for (auto [i, j] : std::vector<std::pair<int, int>>{{0, 0}, {4, 4}, {11, 11}}) {
    HoState a = ho_eigenfunction(i, p), b = ho_eigenfunction(j, p);
    double v = 2.0 * gl_integrate([&](double x) { return a(x) * b(x); }, 0.0, 15.0);
    CHECK(v == doctest::Approx(1.0).epsilon(1e-10));
  }
  for (auto [i, j] : std::vector<std::pair<int, int>>{{0, 2}, {3, 5}, {1, 7}}) {
    HoState a = ho_eigenfunction(i, p), b = ho_eigenfunction(j, p);
    double v = 2.0 * gl_integrate([&](double x) { return a(x) * b(x); }, 0.0, 15.0);
    CHECK(std::fabs(v) < 1e-10);
  }
  CHECK_THROWS_AS(ho_eigenfunction(-1, p), std::invalid_argument);
}

TEST_CASE("parity-forbidden amplitudes are exactly zero") {
  TrapParams p = table1();
  Spectrum sp = solve_spectrum(p, 10.25);
  CHECK(transition_amplitude(1, sp.states[0], p).amplitude == 0.0);
  CHECK(transition_amplitude(0, sp.states[1], p).amplitude == 0.0);
  CHECK(transition_amplitude(2, sp.states[3], p).amplitude == 0.0);
}

TEST_CASE("ground-to-ground amplitude, dual-quadrature cross-check") {
  TrapParams p = table1();
  Spectrum sp = solve_spectrum(p, 10.25);
  TransitionRecord r = transition_amplitude(0, sp.states[0], p);
  CHECK(r.flag == Flag::ok);
  CHECK(r.amplitude == doctest::Approx(0.95736253383178).epsilon(1e-8));
  CHECK(r.probability == doctest::Approx(0.916543021184806).epsilon(1e-8));

  // second, independent quadrature of the same overlap
  PiecewiseWaveFunction psi = eigenfunction(sp.states[0], p);
  HoState ho = ho_eigenfunction(0, p);
  double t2 = 2.0 * (gl_integrate([&](double x) { return ho(x) * psi(x); }, 0.0, 3.0) +
                     gl_integrate([&](double x) { return ho(x) * psi(x); }, 3.0, 14.0));
  CHECK(std::fabs(r.amplitude - t2) < 1e-6);

  TransitionRecord r20 = transition_amplitude(2, sp.states[0], p);
  CHECK(r20.amplitude == doctest::Approx(-0.270688402925231).epsilon(1e-8));
}

TEST_CASE("probabilities stay in the unit interval across the sweep") {
  TrapParams base = TrapParams::natural(1.0, 3.0, 0.0);
  std::vector<double> grid{0.0, 1.0, 4.0, 10.0, 20.0};
  for (int n : {0, 2}) {
    SweepTable t = probability_sweep(n, 0, grid, base);
    REQUIRE(t.rows.size() == grid.size());
    for (const auto& row : t.rows) {
      double P = std::stod(row[1]);
      CHECK(P >= 0.0);
      CHECK(P <= 1.0);
    }
    // U0 = 0 row: identity matrix element
    CHECK(std::stod(t.rows[0][1]) == (n == 0 ? 1.0 : 0.0));
  }
}

TEST_CASE("odd initial state against even target: all-zero sweep") {
  TrapParams base = TrapParams::natural(1.0, 3.0, 0.0);
  SweepTable t = probability_sweep(1, 0, {0.0, 2.0, 8.0}, base);
  for (const auto& row : t.rows) CHECK(std::stod(row[1]) == 0.0);
}

TEST_CASE("completeness defect shrinks with the basis") {
  TrapParams p = table1();
  CHECK(completeness_defect(0, TrapParams::natural(1.0, 3.0, 0.0), 8.0) == 0.0);
  double d6 = completeness_defect(0, p, 6.0);
  double d8 = completeness_defect(0, p, 8.0);
  double d10 = completeness_defect(0, p, 10.0);
  CHECK(d6 >= -1e-8);
  CHECK(d8 >= -1e-8);
  CHECK(d10 >= -1e-8);
  CHECK(d8 <= d6 + 1e-10);
  CHECK(d10 <= d8 + 1e-10);
  CHECK(d6 < 1.0);
}
