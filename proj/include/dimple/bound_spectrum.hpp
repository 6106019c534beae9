#ifndef DIMPLE_BOUND_SPECTRUM_HPP
#define DIMPLE_BOUND_SPECTRUM_HPP

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "dimple/numerics.hpp"
#include "dimple/specfun.hpp"
#include "dimple/sweep_table.hpp"

namespace dimple {

enum class UnitPreset { natural, si };
enum class Parity { even, odd };
enum class Method { analytic, jwkb };

struct TrapParams {
  double hbar = 1.0;
  double m = 0.5;
  double omega = 1.0;
  double a = 1.0;
  double U0 = 0.0;
  UnitPreset unit_preset = UnitPreset::natural;

  static TrapParams natural(double omega, double a, double U0) {
    return {1.0, 0.5, omega, a, U0, UnitPreset::natural};
  }

  void validate() const {
    if (!(hbar > 0.0) || !(m > 0.0) || !(omega > 0.0) || !(a > 0.0))
      throw std::invalid_argument("TrapParams: hbar, m, omega, a must be positive");
    if (U0 < 0.0) throw std::invalid_argument("TrapParams: U0 must be non-negative");
  }
};

struct DerivedScales {
  double omega_d = 0.0;
  double A = 0.0;  // sqrt(m omega / hbar) a
  double B = 0.0;  // sqrt(m omega_d / hbar) a
  double hbar_omega = 0.0;
  double hbar_omega_d = 0.0;
  double U0 = 0.0;

  double lambda_from_energy(double E) const { return E / hbar_omega - 0.5; }
  double energy_from_lambda(double lambda) const { return (lambda + 0.5) * hbar_omega; }
  double lambda_d_from_energy(double E) const { return (E + U0) / hbar_omega_d - 0.5; }
  double lambda_d_from_lambda(double lambda) const {
    return lambda_d_from_energy(energy_from_lambda(lambda));
  }
  double z_of_x(double x, double m, double hbar) const {
    return std::sqrt(m * (hbar_omega / hbar) / hbar) * x;  // sqrt(m omega / hbar) x
  }
};

inline DerivedScales derived_scales(const TrapParams& p) {
  p.validate();
  DerivedScales s;
  s.omega_d = std::sqrt(p.omega * p.omega + 2.0 * p.U0 / (p.m * p.a * p.a));
  s.A = std::sqrt(p.m * p.omega / p.hbar) * p.a;
  s.B = std::sqrt(p.m * s.omega_d / p.hbar) * p.a;
  s.hbar_omega = p.hbar * p.omega;
  s.hbar_omega_d = p.hbar * s.omega_d;
  s.U0 = p.U0;
  return s;
}

struct EigenState {
  int index = 0;
  Parity parity = Parity::even;
  double lambda = 0.0;
  double energy = 0.0;
  Method method = Method::analytic;
  double residual = 0.0;
};

struct Spectrum {
  TrapParams params;
  std::vector<EigenState> states;
  std::vector<std::pair<double, double>> gaps;  // lambda intervals skipped on flags
};

namespace detail {

// value * 2^e with |value| kept near 1, for residual products whose raw
// magnitudes overflow double (lambda_d in the hundreds)
struct Scaled {
  double m = 0.0;
  long e = 0;

  static Scaled make(double mant, long ex) {
    Scaled s{mant, ex};
    s.normalize();
    return s;
  }
  void normalize() {
    if (m == 0.0 || !std::isfinite(m)) {
      e = 0;
      return;
    }
    int k = 0;
    m = std::frexp(m, &k);
    e += k;
  }
  Scaled operator*(const Scaled& o) const { return make(m * o.m, e + o.e); }
  Scaled operator+(const Scaled& o) const {
    if (m == 0.0) return o;
    if (o.m == 0.0) return *this;
    long emax = std::max(e, o.e);
    double a = std::ldexp(m, static_cast<int>(std::max(e - emax, -1060L)));
    double b = std::ldexp(o.m, static_cast<int>(std::max(o.e - emax, -1060L)));
    return make(a + b, emax);
  }
  Scaled operator-() const { return {-m, e}; }
  Scaled abs() const { return {std::fabs(m), e}; }
};

// ratio (x - y) / (|x| + |y|) of scaled quantities, as a plain double
inline double scaled_normalized_diff(const Scaled& x, const Scaled& y) {
  Scaled num = x + (-y);
  Scaled den = x.abs() + y.abs();
  if (den.m == 0.0) return 0.0;
  long de = num.e - den.e;
  if (de < -1060) return 0.0;
  return std::ldexp(num.m / den.m, static_cast<int>(de));
}

struct ResidualParts {
  Scaled lhs, rhs;
  Flag flag = Flag::ok;
};

inline ResidualParts residual_parts(double lambda, Parity parity, const DerivedScales& s,
                                    const PrecisionPolicy& pol) {
  double lambda_d = s.lambda_d_from_lambda(lambda);
  PcfOut at_a = pcf_eval(lambda, s.A, pol, 1);
  PcfOut bp = pcf_eval(lambda_d, s.B, pol, 1);
  PcfOut bm = pcf_eval(lambda_d, -s.B, pol, 1);
  ResidualParts out;
  out.flag = worse(at_a.flag, worse(bp.flag, bm.flag));

  long be = std::max(bp.exp2, bm.exp2);
  double dbp = std::ldexp(bp.d, static_cast<int>(std::max(bp.exp2 - be, -1060L)));
  double dbm = std::ldexp(bm.d, static_cast<int>(std::max(bm.exp2 - be, -1060L)));
  double gbp = std::ldexp(bp.g, static_cast<int>(std::max(bp.exp2 - be, -1060L)));
  double gbm = std::ldexp(bm.g, static_cast<int>(std::max(bm.exp2 - be, -1060L)));

  double ratio = std::sqrt(s.hbar_omega / s.hbar_omega_d);  // sqrt(omega/omega_d)
  double d_sum, g_diff;
  if (parity == Parity::even) {
    d_sum = dbp + dbm;
    g_diff = gbp - gbm;
  } else {
    d_sum = dbp - dbm;
    g_diff = gbp + gbm;
  }
  out.lhs = Scaled::make(ratio * d_sum, be) * Scaled::make(at_a.g, at_a.exp2);
  out.rhs = Scaled::make(g_diff, be) * Scaled::make(at_a.d, at_a.exp2);
  return out;
}

}  // namespace detail

// Normalized residual of the even/odd eigenvalue equation: zero exactly at
// eigenvalues, bounded in [-1, 1], usable at any magnitude of lambda_d.
inline SpecialValue even_residual(double lambda, const TrapParams& p,
                                  const PrecisionPolicy& pol = {}) {
  auto parts = detail::residual_parts(lambda, Parity::even, derived_scales(p), pol);
  return {detail::scaled_normalized_diff(parts.lhs, parts.rhs), parts.flag};
}

inline SpecialValue odd_residual(double lambda, const TrapParams& p,
                                 const PrecisionPolicy& pol = {}) {
  auto parts = detail::residual_parts(lambda, Parity::odd, derived_scales(p), pol);
  return {detail::scaled_normalized_diff(parts.lhs, parts.rhs), parts.flag};
}

namespace detail {

inline std::vector<Root> parity_roots(Parity parity, const DerivedScales& s, double lambda_lo,
                                      double lambda_hi, const RootSpec& spec,
                                      const PrecisionPolicy& pol, RootScan& diag) {
  FlaggedFn f = [&](double lambda) -> SpecialValue {
    auto parts = residual_parts(lambda, parity, s, pol);
    return {scaled_normalized_diff(parts.lhs, parts.rhs), parts.flag};
  };
  RootSpec local = spec;
  local.scan_lo = lambda_lo;
  local.scan_hi = lambda_hi;
  local.scan_steps = std::max(10, static_cast<int>(std::ceil((lambda_hi - lambda_lo) /
                                                             0.05)));
  RootScan scan = find_roots(f, local);
  for (auto& g : scan.gaps) diag.gaps.push_back(g);
  // Reject removable 0/0 points: when lambda_d equals an integer of the
  // opposite parity, both bracket combinations vanish identically and the
  // normalized residual sign-flips without an eigenvalue.  True deep-well
  // roots sit exponentially close to integers of the SAME parity, so the
  // two sets cannot collide.
  std::vector<Root> kept;
  for (const auto& r : scan.roots) {
    bool small_residual = r.flag == Flag::ok &&
                          std::fabs(r.residual) <= spec.residual_tolerance;
    // deep-well crossings are ~exp(-B^2) wide in lambda: the midpoint residual
    // cannot be made small, but the machine-resolved bracket certifies the root
    bool certified = r.machine_resolved() && r.flag != Flag::pole;
    if (!small_residual && !certified) continue;
    double lambda_d = s.lambda_d_from_lambda(r.x);
    double nearest = std::round(lambda_d);
    if (std::fabs(lambda_d - nearest) < 1e-7 * (1.0 + std::fabs(lambda_d)) && nearest >= 0.0) {
      bool nearest_even = std::fmod(nearest, 2.0) == 0.0;
      bool scan_even = parity == Parity::even;
      if (nearest_even != scan_even) continue;
    }
    kept.push_back(r);
  }
  return kept;
}

}  // namespace detail

inline Spectrum solve_spectrum(const TrapParams& p, double e_max, const RootSpec& spec = {},
                               const PrecisionPolicy& pol = {}) {
  DerivedScales s = derived_scales(p);
  if (!(e_max > -p.U0)) throw std::invalid_argument("solve_spectrum: e_max must exceed -U0");
  double lambda_lo = s.lambda_from_energy(-p.U0) + 1e-9;
  double lambda_hi = s.lambda_from_energy(e_max);
  Spectrum out;
  out.params = p;
  if (lambda_hi <= lambda_lo) return out;

  RootScan diag;
  auto even = detail::parity_roots(Parity::even, s, lambda_lo, lambda_hi, spec, pol, diag);
  auto odd = detail::parity_roots(Parity::odd, s, lambda_lo, lambda_hi, spec, pol, diag);
  out.gaps = diag.gaps;

  std::vector<EigenState> merged;
  for (const auto& r : even)
    merged.push_back({0, Parity::even, r.x, s.energy_from_lambda(r.x), Method::analytic,
                      std::fabs(r.residual)});
  for (const auto& r : odd)
    merged.push_back({0, Parity::odd, r.x, s.energy_from_lambda(r.x), Method::analytic,
                      std::fabs(r.residual)});
  std::sort(merged.begin(), merged.end(),
            [](const EigenState& a, const EigenState& b) { return a.lambda < b.lambda; });
  for (size_t i = 0; i < merged.size(); ++i) merged[i].index = static_cast<int>(i);
  out.states = std::move(merged);
  return out;
}

// Sturm-Liouville check: strictly increasing energies, parities alternating
// starting even.  Returns the first offending index, or -1 if clean.
inline int spectrum_ordering_defect(const Spectrum& sp) {
  for (size_t i = 0; i < sp.states.size(); ++i) {
    Parity expect = (i % 2 == 0) ? Parity::even : Parity::odd;
    if (sp.states[i].parity != expect) return static_cast<int>(i);
    if (i > 0 && !(sp.states[i].energy > sp.states[i - 1].energy)) return static_cast<int>(i);
  }
  return -1;
}

struct PiecewiseWaveFunction {
  TrapParams params;
  EigenState state;
  double c1 = 0.0;  // outer coefficient
  double c2 = 0.0;  // inner coefficient
  PrecisionPolicy pol;

  double operator()(double x) const {
    DerivedScales s = derived_scales(params);
    double sign = 1.0;
    if (x < 0.0) {
      sign = (state.parity == Parity::even) ? 1.0 : -1.0;
      x = -x;
    }
    double lambda_d = s.lambda_d_from_lambda(state.lambda);
    double sx = std::sqrt(params.m * params.omega / params.hbar);
    double sxd = std::sqrt(params.m * s.omega_d / params.hbar);
    if (x >= params.a) {
      return sign * c1 * pcf_D(state.lambda, sx * x, pol).value;
    }
    double dp = pcf_D(lambda_d, sxd * x, pol).value;
    double dm = pcf_D(lambda_d, -sxd * x, pol).value;
    return sign * c2 * (state.parity == Parity::even ? dp + dm : dp - dm);
  }

  double derivative(double x) const {
    DerivedScales s = derived_scales(params);
    double sign = 1.0;
    bool mirrored = false;
    if (x < 0.0) {
      mirrored = true;
      x = -x;
    }
    double lambda_d = s.lambda_d_from_lambda(state.lambda);
    double sx = std::sqrt(params.m * params.omega / params.hbar);
    double sxd = std::sqrt(params.m * s.omega_d / params.hbar);
    double v;
    if (x >= params.a) {
      v = c1 * sx * pcf_G(state.lambda, sx * x, pol).value;
    } else {
      double gp = pcf_G(lambda_d, sxd * x, pol).value;
      double gm = pcf_G(lambda_d, -sxd * x, pol).value;
      v = c2 * sxd * (state.parity == Parity::even ? gp - gm : gp + gm);
    }
    if (mirrored) v = (state.parity == Parity::even) ? -v : v;
    return v;
  }

  // relative mismatch of value and derivative at x = a
  double continuity_defect() const {
    DerivedScales s = derived_scales(params);
    double lambda_d = s.lambda_d_from_lambda(state.lambda);
    double sx = std::sqrt(params.m * params.omega / params.hbar);
    double sxd = std::sqrt(params.m * s.omega_d / params.hbar);
    double outer_v = c1 * pcf_D(state.lambda, s.A, pol).value;
    double outer_g = c1 * sx * pcf_G(state.lambda, s.A, pol).value;
    double dp = pcf_D(lambda_d, s.B, pol).value;
    double dm = pcf_D(lambda_d, -s.B, pol).value;
    double gp = pcf_G(lambda_d, s.B, pol).value;
    double gm = pcf_G(lambda_d, -s.B, pol).value;
    double inner_v = c2 * (state.parity == Parity::even ? dp + dm : dp - dm);
    double inner_g = c2 * sxd * (state.parity == Parity::even ? gp - gm : gp + gm);
    double dv = std::fabs(outer_v - inner_v) / (std::fabs(outer_v) + std::fabs(inner_v) + 1e-300);
    double dg = std::fabs(outer_g - inner_g) / (std::fabs(outer_g) + std::fabs(inner_g) + 1e-300);
    return std::max(dv, dg);
  }
};

inline PiecewiseWaveFunction eigenfunction(const EigenState& state, const TrapParams& p,
                                           const QuadSpec& quad = {},
                                           const PrecisionPolicy& pol = {}) {
  DerivedScales s = derived_scales(p);
  double lambda_d = s.lambda_d_from_lambda(state.lambda);
  PiecewiseWaveFunction psi{p, state, 1.0, 0.0, pol};
  double outer = pcf_D(state.lambda, s.A, pol).value;
  double dp = pcf_D(lambda_d, s.B, pol).value;
  double dm = pcf_D(lambda_d, -s.B, pol).value;
  double inner = (state.parity == Parity::even) ? dp + dm : dp - dm;
  double sx = std::sqrt(p.m * p.omega / p.hbar);
  double sxd = std::sqrt(p.m * s.omega_d / p.hbar);
  if (std::fabs(inner) > 1e-12 * (std::fabs(dp) + std::fabs(dm))) {
    psi.c1 = 1.0;
    psi.c2 = outer / inner;
  } else {
    // value matching ill-posed (node at the boundary): match derivatives
    double gp = pcf_G(lambda_d, s.B, pol).value;
    double gm = pcf_G(lambda_d, -s.B, pol).value;
    double ig = sxd * (state.parity == Parity::even ? gp - gm : gp + gm);
    psi.c1 = 1.0;
    psi.c2 = sx * pcf_G(state.lambda, s.A, pol).value / ig;
  }
  // unit L2 norm; outer tail decays like a Gaussian beyond the turning point
  double zt2 = std::max(2.0 * state.lambda + 1.0, 0.0);
  double x_max = (std::sqrt(zt2) + 8.0) / sx;
  // rescale to O(1) amplitude first so the norm quadrature is not squeezed
  // under its absolute tolerance
  double peak = 0.0;
  for (int i = 0; i <= 64; ++i)
    peak = std::max(peak, std::fabs(psi(i * x_max / 64.0)));
  if (peak > 0.0 && std::isfinite(peak)) {
    psi.c1 /= peak;
    psi.c2 /= peak;
  }
  auto f2 = [&psi](double x) {
    double v = psi(x);
    return v * v;
  };
  IntegralResult inner_n = integrate(f2, 0.0, p.a, quad);
  IntegralResult outer_n = integrate(f2, p.a, std::max(x_max, p.a * (1.0 + 1e-12)), quad);
  double norm2 = 2.0 * (inner_n.value + outer_n.value);
  if (!(norm2 > 0.0) || !std::isfinite(norm2))
    throw std::runtime_error("eigenfunction: normalization failed");
  double scale = 1.0 / std::sqrt(norm2);
  psi.c1 *= scale;
  psi.c2 *= scale;
  return psi;
}

inline SweepTable spectrum_table(const Spectrum& sp) {
  DerivedScales s = derived_scales(sp.params);
  SweepTable t;
  t.columns = {"index", "parity", "lambda", "energy_over_hbar_omega", "residual", "method"};
  for (const auto& st : sp.states) {
    auto& row = t.add_row();
    row.push_back(std::to_string(st.index));
    row.push_back(st.parity == Parity::even ? "even" : "odd");
    row.push_back(SweepTable::num(st.lambda));
    row.push_back(SweepTable::num(st.energy / s.hbar_omega));
    row.push_back(SweepTable::num(st.residual, 3));
    row.push_back(st.method == Method::analytic ? "analytic" : "jwkb");
  }
  return t;
}

}  // namespace dimple

#endif  // DIMPLE_BOUND_SPECTRUM_HPP
