#ifndef DIMPLE_SCATTERING_HPP
#define DIMPLE_SCATTERING_HPP

#include <array>
#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

#include "dimple/specfun.hpp"
#include "dimple/sweep_table.hpp"

namespace dimple {

using Complex = std::complex<double>;

enum class ScatterMethod { closed_form, linear_solve };

struct ScatterParams {
  double E = 1.0;
  double a = 1.0;
  double U0 = 1.0;
  double hbar = 1.0;
  double m = 0.5;

  void validate() const {
    if (!(E > 0.0) || !(a > 0.0) || !(hbar > 0.0) || !(m > 0.0))
      throw std::invalid_argument("ScatterParams: E, a, hbar, m must be positive");
    if (U0 < 0.0) throw std::invalid_argument("ScatterParams: U0 must be non-negative");
  }
  double k() const { return std::sqrt(2.0 * m * E) / hbar; }
  double nu() const { return std::sqrt(2.0 * U0 / (m * a * a)); }
  double s() const { return std::sqrt(m * nu() / hbar); }
  double gamma_d() const { return (E + U0) / (hbar * nu()) - 0.5; }
};

struct ScatterResult {
  Complex R{0.0, 0.0};
  Complex T{1.0, 0.0};
  double R2 = 0.0;
  double T2 = 1.0;
  double unitarity_defect = 0.0;
  ScatterMethod method = ScatterMethod::closed_form;
  Flag flag = Flag::ok;

  void finish() {
    R2 = std::norm(R);
    T2 = std::norm(T);
    unitarity_defect = R2 + T2 - 1.0;
  }
};

// Reference amplitudes for the attractive delta potential -sigma delta(x)
// (in the hbar = 1, 2m = 1 convention absorbed into sigma).
inline ScatterResult delta_amplitudes(double k, double sigma) {
  if (!(k > 0.0)) throw std::invalid_argument("delta_amplitudes: k > 0 required");
  ScatterResult out;
  Complex den(sigma, 2.0 * k);
  out.T = Complex(0.0, 2.0 * k) / den;
  out.R = -sigma / den;
  out.finish();
  return out;
}

struct FFunctions {
  Complex F1, F2, F3, F4, F5, F6;
  Flag flag = Flag::ok;
};

inline FFunctions f_functions(const ScatterParams& p, const PrecisionPolicy& pol = {}) {
  p.validate();
  if (!(p.U0 > 0.0)) throw std::invalid_argument("f_functions: U0 > 0 required");
  double k = p.k(), s = p.s(), a = p.a, lam = p.gamma_d();
  double y = a * a * s * s;
  auto phi = [&](double alpha, double gamma, Flag& fl) {
    SpecialValue v = kummer_phi(alpha, gamma, y, pol);
    fl = worse(fl, v.flag);
    return v.value;
  };
  FFunctions f;
  double pa = phi(-lam / 2.0, 0.5, f.flag);
  double pb = phi(-lam / 2.0, 1.5, f.flag);
  double pc = phi((1.0 - lam) / 2.0, 1.5, f.flag);
  double pd = phi((3.0 - lam) / 2.0, 2.5, f.flag);
  double pe = phi(1.0 - lam / 2.0, 1.5, f.flag);
  double pf = phi((1.0 - lam) / 2.0, 2.5, f.flag);
  Complex iak(0.0, a * k), ik(0.0, k);
  double s2 = s * s;
  f.F1 = -pa + 2.0 * (1.0 + lam) * pb;
  f.F2 = (k * k + s2 + a * a * s2 * s2) * pa - 2.0 * s2 * (1.0 + y) * (1.0 + lam) * pb;
  f.F3 = 3.0 * (-1.0 + iak + y) * pc + 2.0 * y * (lam - 1.0) * pd;
  f.F4 = 2.0 * a * s2 * lam * pe + (ik + a * s2) * pa;
  f.F5 = -2.0 * y * (2.0 + lam) * pf * pa;
  f.F6 = pa + 2.0 * y * (1.0 + lam) * pb;
  return f;
}

namespace detail {

inline ScatterResult scatter_closed_form(const ScatterParams& p, const PrecisionPolicy& pol) {
  double k = p.k(), s = p.s(), a = p.a, lam = p.gamma_d();
  FFunctions f = f_functions(p, pol);
  Complex phase = std::exp(Complex(0.0, -2.0 * a * k));
  double y = a * a * s * s;
  double pc3 = 0.0, pf1 = 0.0;
  {
    Flag tmp = Flag::ok;
    SpecialValue vc = kummer_phi((1.0 - lam) / 2.0, 1.5, y, pol);
    SpecialValue vf = kummer_phi((1.0 - lam) / 2.0, 2.5, y, pol);
    tmp = worse(vc.flag, vf.flag);
    f.flag = worse(f.flag, tmp);
    pc3 = vc.value;
    pf1 = vf.value;
  }
  Complex den = f.F3 * f.F4;
  ScatterResult out;
  out.method = ScatterMethod::closed_form;
  out.flag = f.flag;
  out.R = -a * phase *
          (2.0 * a * a * s * s * s * s * (2.0 + lam) * pf1 * f.F1 + 3.0 * pc3 * f.F2) / den;
  out.T = Complex(0.0, -1.0) * phase * k * (f.F5 + 3.0 * pc3 * f.F6) / den;
  out.finish();
  return out;
}

// 4x4 complex Gaussian elimination with partial pivoting; small and local,
// not worth a dependency.
inline std::array<Complex, 4> solve4(std::array<std::array<Complex, 4>, 4> M,
                                     std::array<Complex, 4> b) {
  for (int col = 0; col < 4; ++col) {
    int piv = col;
    for (int r = col + 1; r < 4; ++r)
      if (std::abs(M[r][col]) > std::abs(M[piv][col])) piv = r;
    if (std::abs(M[piv][col]) == 0.0)
      throw std::runtime_error("scattering linear solve: singular matrix");
    std::swap(M[piv], M[col]);
    std::swap(b[piv], b[col]);
    for (int r = col + 1; r < 4; ++r) {
      Complex fac = M[r][col] / M[col][col];
      for (int cc = col; cc < 4; ++cc) M[r][cc] -= fac * M[col][cc];
      b[r] -= fac * b[col];
    }
  }
  std::array<Complex, 4> x;
  for (int r = 3; r >= 0; --r) {
    Complex acc = b[r];
    for (int cc = r + 1; cc < 4; ++cc) acc -= M[r][cc] * x[cc];
    x[r] = acc / M[r][r];
  }
  return x;
}

// Continuity system at x = +-a for psi = e^{ikx} + R e^{-ikx} (left),
// c1 D(sx) + c2 D(-sx) (inside), T e^{ikx} (right); mirrored = incoming
// from +infinity instead.
inline ScatterResult scatter_linear_solve(const ScatterParams& p, const PrecisionPolicy& pol,
                                          bool mirrored = false) {
  double k = p.k(), s = p.s(), a = p.a, lam = p.gamma_d();
  double za = s * a;
  PcfOut vp = pcf_eval(lam, za, pol, 1);
  PcfOut vm = pcf_eval(lam, -za, pol, 1);
  Flag flag = worse(vp.flag, vm.flag);
  // rebalance the interior columns so the pivoting sees O(1) entries
  long be = std::max(vp.exp2, vm.exp2);
  double dp = std::ldexp(vp.d, static_cast<int>(std::max(vp.exp2 - be, -1060L)));
  double dm = std::ldexp(vm.d, static_cast<int>(std::max(vm.exp2 - be, -1060L)));
  double gp = std::ldexp(vp.g, static_cast<int>(std::max(vp.exp2 - be, -1060L)));
  double gm = std::ldexp(vm.g, static_cast<int>(std::max(vm.exp2 - be, -1060L)));

  Complex eip = std::exp(Complex(0.0, k * a));
  Complex eim = std::exp(Complex(0.0, -k * a));
  Complex ik(0.0, k);
  // unknowns: [R, c1, c2, T]
  std::array<std::array<Complex, 4>, 4> M{};
  std::array<Complex, 4> b{};
  // x = -a: value and derivative
  M[0] = {eip, Complex(-dm), Complex(-dp), Complex(0.0)};
  b[0] = -eim;
  M[1] = {-ik * eip, Complex(-s * gm), Complex(s * gp), Complex(0.0)};
  b[1] = -ik * eim;
  // x = +a: value and derivative
  M[2] = {Complex(0.0), Complex(dp), Complex(dm), -eip};
  b[2] = Complex(0.0);
  M[3] = {Complex(0.0), Complex(s * gp), Complex(-s * gm), -ik * eip};
  b[3] = Complex(0.0);
  auto x = solve4(M, b);
  ScatterResult out;
  out.method = ScatterMethod::linear_solve;
  out.flag = flag;
  out.R = x[0];
  out.T = x[3];
  out.finish();
  (void)mirrored;
  return out;
}

// Incoming from +infinity: right side e^{-ikx} + R' e^{ikx}, left T' e^{-ikx}.
inline ScatterResult scatter_linear_solve_right(const ScatterParams& p,
                                               const PrecisionPolicy& pol) {
  double k = p.k(), s = p.s(), a = p.a, lam = p.gamma_d();
  double za = s * a;
  PcfOut vp = pcf_eval(lam, za, pol, 1);
  PcfOut vm = pcf_eval(lam, -za, pol, 1);
  Flag flag = worse(vp.flag, vm.flag);
  long be = std::max(vp.exp2, vm.exp2);
  double dp = std::ldexp(vp.d, static_cast<int>(std::max(vp.exp2 - be, -1060L)));
  double dm = std::ldexp(vm.d, static_cast<int>(std::max(vm.exp2 - be, -1060L)));
  double gp = std::ldexp(vp.g, static_cast<int>(std::max(vp.exp2 - be, -1060L)));
  double gm = std::ldexp(vm.g, static_cast<int>(std::max(vm.exp2 - be, -1060L)));
  Complex eip = std::exp(Complex(0.0, k * a));
  Complex eim = std::exp(Complex(0.0, -k * a));
  Complex ik(0.0, k);
  // unknowns: [R', c1, c2, T']
  std::array<std::array<Complex, 4>, 4> M{};
  std::array<Complex, 4> b{};
  // x = +a
  M[0] = {eip, Complex(-dp), Complex(-dm), Complex(0.0)};
  b[0] = -eim;
  M[1] = {ik * eip, Complex(-s * gp), Complex(s * gm), Complex(0.0)};
  b[1] = ik * eim;
  // x = -a
  M[2] = {Complex(0.0), Complex(dm), Complex(dp), -eip};
  b[2] = Complex(0.0);
  M[3] = {Complex(0.0), Complex(s * gm), Complex(-s * gp), ik * eip};
  b[3] = Complex(0.0);
  auto x = solve4(M, b);
  ScatterResult out;
  out.method = ScatterMethod::linear_solve;
  out.flag = flag;
  out.R = x[0];
  out.T = x[3];
  out.finish();
  return out;
}

}  // namespace detail

inline ScatterResult parabolic_amplitudes(const ScatterParams& p,
                                          ScatterMethod method = ScatterMethod::closed_form,
                                          const PrecisionPolicy& pol = {}) {
  p.validate();
  if (p.U0 == 0.0) {
    ScatterResult out;
    out.method = method;
    out.finish();
    return out;
  }
  if (method == ScatterMethod::linear_solve) return detail::scatter_linear_solve(p, pol);
  ScatterResult out = detail::scatter_closed_form(p, pol);
  if (out.flag != Flag::ok || !std::isfinite(out.R2) || !std::isfinite(out.T2)) {
    // keep the result trustworthy: rebuild from the continuity system
    ScatterResult fb = detail::scatter_linear_solve(p, pol);
    fb.flag = worse(fb.flag, Flag::degraded);
    return fb;
  }
  return out;
}

// |T(a) - T_delta| at fixed c = U0 a: the scattering side of the delta limit.
inline double scattering_delta_gap(double E, double c, double a, double hbar = 1.0,
                                   double m = 0.5, const PrecisionPolicy& pol = {}) {
  if (!(c > 0.0) || !(a > 0.0))
    throw std::invalid_argument("scattering_delta_gap: c, a > 0 required");
  ScatterParams p;
  p.E = E;
  p.a = a;
  p.U0 = c / a;
  p.hbar = hbar;
  p.m = m;
  ScatterResult full = parabolic_amplitudes(p, ScatterMethod::closed_form, pol);
  double sigma = 8.0 * m * a * p.U0 / (3.0 * hbar * hbar);
  ScatterResult ref = delta_amplitudes(p.k(), sigma);
  return std::abs(full.T - ref.T);
}

enum class SweepVariable { E, a, U0 };

inline SweepTable scatter_sweep(SweepVariable vary, const std::vector<double>& grid,
                                ScatterParams fixed,
                                ScatterMethod method = ScatterMethod::closed_form,
                                const PrecisionPolicy& pol = {}) {
  SweepTable t;
  t.columns = {"x", "T2", "R2", "defect", "flag"};
  const char* name = vary == SweepVariable::E ? "E" : (vary == SweepVariable::a ? "a" : "U0");
  t.add_meta("vary", name);
  if (vary != SweepVariable::E) t.add_meta("E", SweepTable::num(fixed.E));
  if (vary != SweepVariable::a) t.add_meta("a", SweepTable::num(fixed.a));
  if (vary != SweepVariable::U0) t.add_meta("U0", SweepTable::num(fixed.U0));
  for (double x : grid) {
    ScatterParams p = fixed;
    switch (vary) {
      case SweepVariable::E: p.E = x; break;
      case SweepVariable::a: p.a = x; break;
      case SweepVariable::U0: p.U0 = x; break;
    }
    ScatterResult r = parabolic_amplitudes(p, method, pol);
    auto& row = t.add_row();
    row.push_back(SweepTable::num(x));
    row.push_back(SweepTable::num(r.T2));
    row.push_back(SweepTable::num(r.R2));
    row.push_back(SweepTable::num(r.unitarity_defect, 3));
    row.push_back(r.flag == Flag::ok ? "ok" : (r.flag == Flag::degraded ? "degraded" : "pole"));
  }
  return t;
}

}  // namespace dimple

#endif  // DIMPLE_SCATTERING_HPP
