#ifndef DIMPLE_DELTA_LIMIT_HPP
#define DIMPLE_DELTA_LIMIT_HPP

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "dimple/bound_spectrum.hpp"
#include "dimple/numerics.hpp"
#include "dimple/specfun.hpp"
#include "dimple/sweep_table.hpp"

namespace dimple {

// Normalized parabolic bump (3/(4a))(1 - x^2/a^2) on [-a, a]: a delta-family
// representative with unit weight.
inline double delta_rep(double x, double a) {
  if (std::fabs(x) >= a) return 0.0;
  return 0.75 / a * (1.0 - x * x / (a * a));
}

inline double delta_rep_sample(const std::function<double(double)>& h, double a,
                               const QuadSpec& quad = {}) {
  if (!(a > 0.0)) throw std::invalid_argument("delta_rep_sample: a > 0 required");
  auto f = [&](double x) { return delta_rep(x, a) * h(x); };
  return integrate(f, -a, a, quad).value;
}

inline double delta_bound_energy(double sigma, double hbar, double m) {
  if (sigma < 0.0) throw std::invalid_argument("delta_bound_energy: sigma >= 0 required");
  return -hbar * hbar * sigma * sigma / (8.0 * m);
}

// Coupling of the delta potential equivalent to the truncated parabolic well.
inline double sigma_equivalent(double U0, double a, double hbar, double m) {
  if (!(U0 > 0.0) || !(a > 0.0))
    throw std::invalid_argument("sigma_equivalent: U0, a > 0 required");
  return 8.0 * m * a * U0 / (3.0 * hbar * hbar);
}

struct DeltaParams {
  double sigma = 0.0;
  double Lambda = 0.0;  // sigma * sqrt(hbar / (m omega)), harmonic + delta
  double c = 0.0;       // held-fixed product U0 * a in limit studies
};

// Truncated parabolic well in free space (no outer harmonic confinement).
struct FreeWellParams {
  double hbar = 1.0;
  double m = 0.5;
  double a = 1.0;
  double U0 = 1.0;

  void validate() const {
    if (!(hbar > 0.0) || !(m > 0.0) || !(a > 0.0) || !(U0 > 0.0))
      throw std::invalid_argument("FreeWellParams: all fields must be positive");
  }
  double nu() const { return std::sqrt(2.0 * U0 / (m * a * a)); }
  double gamma(double E) const { return E / (hbar * nu()) - 0.5; }
  double gamma_d(double E) const { return (E + U0) / (hbar * nu()) - 0.5; }
  double kappa(double E) const {
    if (E >= 0.0) throw std::domain_error("FreeWellParams: kappa defined for E < 0");
    return std::sqrt(-2.0 * m * E) / hbar;
  }
};

namespace detail {

// Log-derivative matching at x = a between the interior parabolic solution
// and the exponential exterior tail, normalized to [-1, 1].
inline SpecialValue free_well_residual(double E, Parity parity, const FreeWellParams& p,
                                       const PrecisionPolicy& pol) {
  double s = std::sqrt(p.m * p.nu() / p.hbar);
  double gd = p.gamma_d(E);
  double kap = p.kappa(E);
  double za = s * p.a;
  PcfOut vp = pcf_eval(gd, za, pol, 1);
  PcfOut vm = pcf_eval(gd, -za, pol, 1);
  Flag flag = worse(vp.flag, vm.flag);
  long be = std::max(vp.exp2, vm.exp2);
  double dp = std::ldexp(vp.d, static_cast<int>(std::max(vp.exp2 - be, -1060L)));
  double dm = std::ldexp(vm.d, static_cast<int>(std::max(vm.exp2 - be, -1060L)));
  double gp = std::ldexp(vp.g, static_cast<int>(std::max(vp.exp2 - be, -1060L)));
  double gm = std::ldexp(vm.g, static_cast<int>(std::max(vm.exp2 - be, -1060L)));
  double dval = parity == Parity::even ? dp + dm : dp - dm;
  double gval = parity == Parity::even ? gp - gm : gp + gm;
  double lhs = s * gval;
  double rhs = -kap * dval;
  double den = std::fabs(lhs) + std::fabs(rhs);
  if (den == 0.0) return {0.0, flag};
  return {(lhs - rhs) / den, flag};
}

}  // namespace detail

inline SpecialValue free_well_even_residual(double E, const FreeWellParams& p,
                                            const PrecisionPolicy& pol = {}) {
  return detail::free_well_residual(E, Parity::even, p, pol);
}

inline SpecialValue free_well_odd_residual(double E, const FreeWellParams& p,
                                           const PrecisionPolicy& pol = {}) {
  return detail::free_well_residual(E, Parity::odd, p, pol);
}

// All bound states of the free-standing well for one parity.
inline std::vector<Root> free_well_roots(Parity parity, const FreeWellParams& p,
                                         const RootSpec& spec = {},
                                         const PrecisionPolicy& pol = {}) {
  p.validate();
  FlaggedFn f = [&](double E) { return detail::free_well_residual(E, parity, p, pol); };
  RootSpec local = spec;
  local.scan_lo = -p.U0 * (1.0 - 1e-12);
  local.scan_hi = -p.U0 * 1e-12;
  local.scan_steps = std::max(local.scan_steps, 400);
  RootScan scan = find_roots(f, local);
  std::vector<Root> kept;
  for (const auto& r : scan.roots)
    if ((r.flag == Flag::ok && std::fabs(r.residual) <= spec.residual_tolerance) ||
        (r.machine_resolved() && r.flag != Flag::pole))
      kept.push_back(r);
  return kept;
}

inline EigenState well_ground_energy(const FreeWellParams& p, const RootSpec& spec = {},
                                     const PrecisionPolicy& pol = {}) {
  auto even = free_well_roots(Parity::even, p, spec, pol);
  if (even.empty()) throw std::runtime_error("well_ground_energy: no even bound state found");
  EigenState st;
  st.index = 0;
  st.parity = Parity::even;
  st.energy = even.front().x;
  st.lambda = p.gamma(st.energy);
  st.residual = std::fabs(even.front().residual);
  return st;
}

// Even levels of the harmonic + attractive delta problem: roots of
// Gamma((1-lambda)/2) / Gamma(-lambda/2) = Lambda/4, ascending.  The odd
// levels stay at lambda = 2n + 1 untouched by the delta.
inline std::vector<double> harm_delta_even_roots(double Lambda, int count,
                                                 const RootSpec& spec = {}) {
  if (Lambda < 0.0) throw std::invalid_argument("harm_delta_even_roots: Lambda >= 0 required");
  if (count < 1) throw std::invalid_argument("harm_delta_even_roots: count >= 1 required");
  FlaggedFn f = [&](double lambda) -> SpecialValue {
    // poles of the ratio sit at odd positive lambda; express through
    // reciprocal gammas so everything else stays finite
    SpecialValue num = gamma_real(0.5 * (1.0 - lambda));
    SpecialValue den = gamma_real(-0.5 * lambda);
    if (num.flag == Flag::pole) return {std::nan(""), Flag::pole};
    double ratio;
    if (den.flag == Flag::pole) {
      ratio = 0.0;  // 1/Gamma vanishes: lambda at an even non-negative integer
    } else {
      ratio = num.value / den.value;
    }
    return {ratio - 0.25 * Lambda, worse(num.flag == Flag::pole ? Flag::ok : num.flag,
                                         den.flag == Flag::pole ? Flag::ok : den.flag)};
  };
  RootSpec local = spec;
  // the ground level tends to the delta bound state lambda = -Lambda^2/8 - 1/2
  local.scan_lo = -(Lambda * Lambda / 8.0 + 2.0 + 0.37);
  local.scan_hi = 2.0 * count + 0.63;  // keep grid points off integer poles
  local.scan_steps = std::max(100, static_cast<int>((local.scan_hi - local.scan_lo) / 0.01));
  RootScan scan = find_roots(f, local);
  std::vector<double> out;
  for (const auto& r : scan.roots) {
    if (!(r.flag == Flag::ok && std::fabs(r.residual) <= spec.residual_tolerance)) continue;
    out.push_back(r.x);
    if (static_cast<int>(out.size()) == count) break;
  }
  return out;
}

// Gap table between the full dimple spectrum at U0 = c/a and its delta-limit
// reference (harmonic + delta even roots; unshifted odd oscillator levels).
inline SweepTable dimple_to_delta_convergence(double c, const std::vector<double>& a_sequence,
                                              const TrapParams& base, int levels = 4,
                                              const RootSpec& spec = {},
                                              const PrecisionPolicy& pol = {}) {
  if (!(c >= 0.0)) throw std::invalid_argument("dimple_to_delta_convergence: c >= 0 required");
  if (levels < 1) throw std::invalid_argument("dimple_to_delta_convergence: levels >= 1");
  double Lambda = c > 0.0
                      ? sigma_equivalent(c / 1.0, 1.0, base.hbar, base.m) *
                            std::sqrt(base.hbar / (base.m * base.omega))
                      : 0.0;
  std::vector<double> ref_even;
  if (c > 0.0) {
    ref_even = harm_delta_even_roots(Lambda, levels, spec);
  } else {
    for (int i = 0; i < levels; ++i) ref_even.push_back(2.0 * i);
  }
  if (static_cast<int>(ref_even.size()) < levels)
    throw std::runtime_error("dimple_to_delta_convergence: reference roots missing");

  SweepTable t;
  t.columns = {"a"};
  for (int i = 0; i < levels; ++i) t.columns.push_back("even_gap_" + std::to_string(i));
  for (int i = 0; i < levels; ++i) t.columns.push_back("odd_gap_" + std::to_string(i));
  t.add_meta("c", SweepTable::num(c));
  t.add_meta("Lambda", SweepTable::num(Lambda));

  std::vector<std::vector<double>> even_gaps, odd_gaps;
  for (double a : a_sequence) {
    TrapParams p = base;
    p.a = a;
    p.U0 = c > 0.0 ? c / a : 0.0;
    double e_max = (2.0 * levels + 1.5) * p.hbar * p.omega;
    Spectrum sp = solve_spectrum(p, e_max, spec, pol);
    std::vector<double> ev, od;
    for (const auto& st : sp.states) {
      if (st.parity == Parity::even && static_cast<int>(ev.size()) < levels)
        ev.push_back(st.lambda);
      if (st.parity == Parity::odd && static_cast<int>(od.size()) < levels)
        od.push_back(st.lambda);
    }
    if (static_cast<int>(ev.size()) < levels || static_cast<int>(od.size()) < levels)
      throw std::runtime_error("dimple_to_delta_convergence: spectrum too short at a = " +
                               std::to_string(a));
    auto& row = t.add_row();
    row.push_back(SweepTable::num(a));
    std::vector<double> eg, og;
    for (int i = 0; i < levels; ++i) {
      eg.push_back(std::fabs(ev[i] - ref_even[i]));
      row.push_back(SweepTable::num(eg.back(), 6));
    }
    for (int i = 0; i < levels; ++i) {
      og.push_back(std::fabs(od[i] - (2.0 * i + 1.0)));
      row.push_back(SweepTable::num(og.back(), 6));
    }
    even_gaps.push_back(eg);
    odd_gaps.push_back(og);
  }

  // observed order from the last halving step, per level (reported, not asserted)
  size_t nr = even_gaps.size();
  if (nr >= 2 && a_sequence[nr - 2] != a_sequence[nr - 1]) {
    double la = std::log(a_sequence[nr - 2] / a_sequence[nr - 1]);
    for (int i = 0; i < levels; ++i) {
      double g0 = even_gaps[nr - 2][i], g1 = even_gaps[nr - 1][i];
      if (g0 > 0.0 && g1 > 0.0)
        t.add_meta("order_even_" + std::to_string(i), SweepTable::num(std::log(g0 / g1) / la, 4));
      double h0 = odd_gaps[nr - 2][i], h1 = odd_gaps[nr - 1][i];
      if (h0 > 0.0 && h1 > 0.0)
        t.add_meta("order_odd_" + std::to_string(i), SweepTable::num(std::log(h0 / h1) / la, 4));
    }
  }
  return t;
}

}  // namespace dimple

#endif  // DIMPLE_DELTA_LIMIT_HPP
