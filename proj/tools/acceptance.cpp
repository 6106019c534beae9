// Acceptance gate: one pass/fail line per criterion, nonzero exit on any
// failure.  Each check re-derives its numbers from the library surface only.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <random>
#include <string>
#include <vector>

#include "dimple/bound_spectrum.hpp"
#include "dimple/delta_limit.hpp"
#include "dimple/jwkb.hpp"
#include "dimple/scattering.hpp"
#include "dimple/specfun.hpp"
#include "dimple/sudden_transitions.hpp"

namespace {

int g_failures = 0;

struct Timer {
  std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  }
};

void report(int id, const std::string& name, bool ok, double secs, const std::string& note = "") {
  std::printf("criterion %2d  %-34s %s  (%.1fs)%s%s\n", id, name.c_str(), ok ? "PASS" : "FAIL",
              secs, note.empty() ? "" : "  ", note.c_str());
  if (!ok) ++g_failures;
}

dimple::TrapParams table1() { return dimple::TrapParams::natural(1.0, 3.0, 10.0); }

dimple::TrapParams table2() {
  dimple::TrapParams p;
  p.hbar = 1.054571817e-34;
  p.m = 23.0 * 1.66053906660e-27;
  p.omega = 2.0 * M_PI * 20.0;
  p.a = 11e-6;
  p.U0 = 1e-30;
  p.unit_preset = dimple::UnitPreset::si;
  return p;
}

// ---------------------------------------------------------------------------

void criterion1() {
  Timer tm;
  const double analytic[12] = {-8.8333, -6.5001, -4.1681, -1.8447, 0.4355, 2.5432,
                               4.1711,  5.2756,  6.3845,  7.5823,  8.6277, 9.7171};
  const double jwkb[12] = {-8.8333, -6.5000, -4.1667, -1.8333, 0.5000, 2.6852,
                           4.0504,  5.2638,  6.4181,  7.5390,  8.6381, 9.7217};
  dimple::TrapParams p = table1();
  dimple::DerivedScales s = dimple::derived_scales(p);
  dimple::Spectrum sp = dimple::solve_spectrum(p, 10.25);
  bool ok = sp.states.size() == 12;
  double d3 = 0.0;
  if (ok) {
    for (int i = 0; i < 12; ++i) {
      double ea = sp.states[i].energy / s.hbar_omega;
      double ej = dimple::jwkb_level(p, i).energy / s.hbar_omega;
      ok = ok && std::fabs(ea - analytic[i]) < 5e-4 && std::fabs(ej - jwkb[i]) < 5e-4;
      if (i == 3) d3 = std::fabs(ea - ej);
    }
    // eigenstate 3: recomputed difference 0.0114, against the reference 0.114
    ok = ok && std::fabs(d3 - 0.0114) < 5e-4;
  }
  report(1, "shallow-trap table, both columns", ok && tm.seconds() < 30.0, tm.seconds(),
         "row-3 difference recomputed as " + std::to_string(d3).substr(0, 6) +
             " (reference value 0.114 looks like a dropped zero)");
}

void criterion2and3() {
  Timer tm;
  const int idx[7] = {0, 1, 8, 13, 14, 15, 22};
  const double analytic[7] = {-72.7948, -67.4650, -30.1570, -3.6816, 1.2167, 4.8125, 13.6232};
  const double jwkb[7] = {-72.7948, -67.4650, -30.1569, -3.5082, 1.8216, 4.4790, 13.6273};
  const double an_inner[8] = {-72.7948, -67.4650, -62.1353, -56.8055,
                              -51.4758, -46.1461, -40.8163, -35.4866};
  dimple::TrapParams p = table2();
  dimple::DerivedScales s = dimple::derived_scales(p);
  dimple::Spectrum sp = dimple::solve_spectrum(p, 14.0 * s.hbar_omega);
  bool ok = sp.states.size() >= 23;
  if (ok) {
    for (int i = 0; i < 7; ++i) {
      double ea = sp.states[idx[i]].energy / s.hbar_omega;
      double ej = dimple::jwkb_level(p, idx[i]).energy / s.hbar_omega;
      ok = ok && std::fabs(ea - analytic[i]) < 5e-4 && std::fabs(ej - jwkb[i]) < 5e-4;
    }
  }
  // high rows via a windowed scan around the reference energies
  dimple::RootSpec rs;
  dimple::PrecisionPolicy pol;
  dimple::RootScan diag;
  auto odd = dimple::detail::parity_roots(dimple::Parity::odd, s, 496.0, 497.3, rs, pol, diag);
  auto even = dimple::detail::parity_roots(dimple::Parity::even, s, 497.3, 498.3, rs, pol, diag);
  ok = ok && odd.size() == 1 && even.size() == 1;
  if (ok) {
    double e499 = odd[0].x + 0.5, e500 = even[0].x + 0.5;
    double j499 = dimple::jwkb_outer(p, 499).energy / s.hbar_omega;
    double j500 = dimple::jwkb_outer(p, 500).energy / s.hbar_omega;
    ok = ok && std::fabs(e499 - 497.1836) < 5e-4 && std::fabs(j499 - 497.1835) < 5e-4 &&
         std::fabs(e500 - 498.1856) < 5e-4 && std::fabs(j500 - 498.1857) < 5e-4;
  }
  report(2, "deep SI table incl. rows 499/500", ok && tm.seconds() < 120.0, tm.seconds());

  Timer tm3;
  bool ok3 = sp.states.size() >= 8;
  if (ok3) {
    for (int i = 0; i < 8; ++i) {
      double ea = sp.states[i].energy / s.hbar_omega;
      double ej = dimple::jwkb_level(p, i).energy / s.hbar_omega;
      ok3 = ok3 && std::fabs(ea - an_inner[i]) < 5e-4 && std::fabs(ea - ej) <= 1e-4;
    }
  }
  report(3, "JWKB exact in the deep region", ok3, tm3.seconds());
}

void criterion4() {
  Timer tm;
  bool ok = true;
  for (int i = 0; i < 10 && ok; ++i) {
    for (int j = 0; j < 10 && ok; ++j) {
      for (int k = 0; k < 10 && ok; ++k) {
        dimple::ScatterParams p;
        p.E = 0.1 + i * (50.0 - 0.1) / 9.0;
        p.a = 0.1 + j * (5.0 - 0.1) / 9.0;
        p.U0 = 0.1 + k * (20.0 - 0.1) / 9.0;
        dimple::ScatterResult cf =
            dimple::parabolic_amplitudes(p, dimple::ScatterMethod::closed_form);
        dimple::ScatterResult ls =
            dimple::parabolic_amplitudes(p, dimple::ScatterMethod::linear_solve);
        ok = std::fabs(cf.unitarity_defect) < 1e-8 && std::abs(cf.R - ls.R) < 1e-8 &&
             std::abs(cf.T - ls.T) < 1e-8;
      }
    }
  }
  report(4, "scattering unitarity, 1000 points", ok, tm.seconds());
}

void criterion5() {
  Timer tm;
  bool ok = true;
  for (double c : {0.5, 1.0, 2.0}) {
    double prev = 1e300;
    for (int k = 3; k <= 10; ++k) {
      double a = std::ldexp(1.0, -k);
      double U0 = c / a;
      dimple::FreeWellParams p{1.0, 0.5, a, U0};
      double Eref = -(8.0 / 9.0) * 0.5 * U0 * U0 * a * a;
      double err = std::fabs(dimple::well_ground_energy(p).energy / Eref - 1.0);
      ok = ok && err < prev + 1e-12;
      prev = err;
      if (k == 10) ok = ok && err < 1e-2;
    }
  }
  report(5, "delta limit of the bound state", ok, tm.seconds());
}

void criterion6() {
  Timer tm;
  bool ok = true;
  double prev = 1e300;
  for (int k = 3; k <= 10; ++k) {
    double a = std::ldexp(1.0, -k);
    double gap = dimple::scattering_delta_gap(1.0, 1.0, a);
    ok = ok && gap < prev;
    prev = gap;
  }
  report(6, "delta limit of the transmission", ok, tm.seconds());
}

void criterion7() {
  Timer tm;
  std::vector<double> as;
  for (int k = 2; k <= 6; ++k) as.push_back(std::ldexp(1.0, -k));
  dimple::TrapParams base = dimple::TrapParams::natural(1.0, 1.0, 0.0);
  dimple::SweepTable t = dimple::dimple_to_delta_convergence(1.0, as, base, 4);
  bool ok = t.rows.size() == as.size();
  if (ok) {
    for (size_t col = 1; col < t.columns.size(); ++col)
      for (size_t r = 1; r < t.rows.size(); ++r)
        ok = ok && std::stod(t.rows[r][col]) < std::stod(t.rows[r - 1][col]);
  }
  report(7, "delta limit of the spectrum", ok, tm.seconds());
}

void criterion8() {
  Timer tm;
  bool ok = true;
  std::vector<std::function<double(double)>> hs{[](double x) { return x * x; },
                                                [](double x) { return std::cos(x); },
                                                [](double x) { return std::exp(x); }};
  std::vector<double> as{0.1, 0.05, 0.025, 0.0125, 0.00625};
  for (const auto& h : hs) {
    std::vector<double> errs;
    for (double a : as) errs.push_back(std::fabs(dimple::delta_rep_sample(h, a) - h(0.0)));
    for (size_t i = 1; i < as.size(); ++i) {
      double slope = std::log(errs[i - 1] / errs[i]) / std::log(as[i - 1] / as[i]);
      ok = ok && std::fabs(slope - 2.0) <= 0.1;
    }
  }
  for (double a : {0.1, 0.01}) {
    ok = ok && std::fabs(dimple::delta_rep_sample([](double) { return 1.0; }, a) - 1.0) < 1e-10;
    ok = ok && std::fabs(dimple::delta_rep_sample([](double x) { return x * x; }, a) -
                         a * a / 5.0) < 1e-10;
  }
  report(8, "delta sampling property", ok, tm.seconds());
}

void criterion9() {
  Timer tm;
  dimple::TrapParams p = table1();
  dimple::Spectrum sp = dimple::solve_spectrum(p, 10.25);
  bool ok = sp.states.size() == 12;
  // parity-forbidden overlaps are identically zero
  ok = ok && dimple::transition_amplitude(1, sp.states[0], p).amplitude == 0.0;
  ok = ok && dimple::transition_amplitude(0, sp.states[1], p).amplitude == 0.0;
  // figure grids: every probability in the unit interval
  dimple::TrapParams base = dimple::TrapParams::natural(1.0, 3.0, 0.0);
  std::vector<double> grid;
  for (int i = 0; i <= 40; ++i) grid.push_back(0.5 * i);
  for (int n : {0, 2}) {
    dimple::SweepTable t = dimple::probability_sweep(n, 0, grid, base);
    ok = ok && t.rows.size() == grid.size();
    for (const auto& row : t.rows) {
      double P = std::stod(row[1]);
      ok = ok && P >= 0.0 && P <= 1.0;
    }
  }
  // completeness defect: non-negative, non-increasing in the basis size
  double d6 = dimple::completeness_defect(0, p, 6.0);
  double d8 = dimple::completeness_defect(0, p, 8.0);
  double d10 = dimple::completeness_defect(0, p, 10.0);
  ok = ok && d6 >= -1e-8 && d8 >= -1e-8 && d10 >= -1e-8 && d8 <= d6 + 1e-10 &&
       d10 <= d8 + 1e-10;
  // dual-quadrature agreement on the ground-state overlap
  dimple::TransitionRecord r = dimple::transition_amplitude(0, sp.states[0], p);
  dimple::PiecewiseWaveFunction psi = dimple::eigenfunction(sp.states[0], p);
  dimple::HoState ho = dimple::ho_eigenfunction(0, p);
  auto f = [&](double x) { return ho(x) * psi(x); };
  double h = 14.0 / 4000.0, second = 0.0;
  for (int i = 0; i < 4000; ++i) {  // midpoint rule, independent of the library path
    double x = (i + 0.5) * h;
    second += f(x) * h;
  }
  second *= 2.0;
  ok = ok && std::fabs(r.amplitude - second) < 1e-6;
  report(9, "sudden-approximation suite", ok, tm.seconds());
}

// independent standard-convention evaluator for the bridge check
double phi_plain(double alpha, double gamma_par, double y) {
  double term = 1.0, sum = 1.0;
  for (int n = 0; n < 400; ++n) {
    term *= (alpha + n) / (gamma_par + n) * y / (n + 1.0);
    sum += term;
    if (std::fabs(term) < 1e-18 * std::fabs(sum)) break;
  }
  return sum;
}

double pcf_standard(double nu, double x) {
  double y = 0.5 * x * x;
  double p = phi_plain(-0.5 * nu, 0.5, y) / std::tgamma(0.5 * (1.0 - nu));
  double q = std::sqrt(2.0) * x * phi_plain(0.5 * (1.0 - nu), 1.5, y) /
             std::tgamma(-0.5 * nu);
  return std::pow(2.0, 0.5 * nu) * std::sqrt(M_PI) * std::exp(-0.25 * x * x) * (p - q);
}

void criterion10() {
  Timer tm;
  bool ok = true;
  std::mt19937 rng(20240817);
  std::uniform_real_distribution<double> ld(-5.0, 10.0), zd(-6.0, 6.0);
  dimple::PrecisionPolicy pol;
  int checked = 0;
  for (int i = 0; i < 1200; ++i) {
    double lam = ld(rng), z = zd(rng);
    auto e = dimple::detail::pcf_eval(lam, z, pol, 2);
    if (e.flag != dimple::Flag::ok) continue;
    double lhs = e.d2, rhs = (z * z - 2.0 * lam - 1.0) * e.d;
    double scale = std::fabs(lhs) + std::fabs(rhs);
    if (scale < 1e-280) continue;
    ok = ok && std::fabs(lhs - rhs) <= 1e-6 * scale;
    ++checked;
  }
  ok = ok && checked >= 1000;
  // terminating-series exactness
  ok = ok && dimple::kummer_phi(0.0, 0.5, 3.0).value == 1.0;
  ok = ok && std::fabs(dimple::kummer_phi(-1.0, 0.5, 2.0).value - (-3.0)) < 1e-15;
  ok = ok && std::fabs(dimple::kummer_phi(-2.0, 1.5, 1.0).value -
                       (1.0 - 2.0 / 1.5 + 0.5 * 2.0 / (1.5 * 2.5))) < 1e-15;
  // convention bridge on random well-conditioned points
  std::uniform_real_distribution<double> lb(-2.9, 2.9), zb(0.1, 3.0);
  for (int i = 0; i < 1000; ++i) {
    double lam = lb(rng), z = zb(rng);
    if (std::fabs(lam - std::round(lam)) < 0.05) continue;  // gamma poles in the reference
    double ours = dimple::pcf_D(lam, z, pol).value;
    double ref = std::pow(2.0, 0.5 * lam) * pcf_standard(lam, std::sqrt(2.0) * z);
    if (std::fabs(ref) < 1e-12) continue;
    ok = ok && std::fabs(ours / ref - 1.0) <= 1e-8;
  }
  report(10, "special-function invariants", ok && tm.seconds() < 10.0, tm.seconds());
}

}  // namespace

int main() {
  criterion1();
  criterion2and3();
  criterion4();
  criterion5();
  criterion6();
  criterion7();
  criterion8();
  criterion9();
  criterion10();
  std::printf("%s\n", g_failures == 0 ? "acceptance: all criteria passed"
                                      : "acceptance: FAILURES present");
  return g_failures == 0 ? 0 : 1;
}
