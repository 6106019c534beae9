#ifndef DIMPLE_JWKB_HPP
#define DIMPLE_JWKB_HPP

#include <cmath>
#include <stdexcept>
#include <string>

#include "dimple/bound_spectrum.hpp"
#include "dimple/numerics.hpp"
#include "dimple/sweep_table.hpp"

namespace dimple {

enum class JwkbRegion { inner, outer };

struct JwkbLevel {
  int n = 0;
  JwkbRegion region = JwkbRegion::inner;
  double energy = 0.0;
  double x1 = 0.0;  // classical turning points (symmetric: x1 = -x2)
  double x2 = 0.0;
};

// Number of levels below the matching energy V(a) = 1/2 m omega^2 a^2.
inline int n_prime(const TrapParams& p) {
  p.validate();
  if (!(p.U0 > 0.0)) throw std::invalid_argument("n_prime: U0 > 0 required");
  DerivedScales s = derived_scales(p);
  double va = 0.5 * p.m * p.omega * p.omega * p.a * p.a;
  double e0 = -p.U0 + 0.5 * s.hbar_omega_d;
  return static_cast<int>(std::floor((va - e0) / s.hbar_omega_d)) + 1;
}

inline JwkbLevel jwkb_inner(const TrapParams& p, int n) {
  int np = n_prime(p);
  if (n < 0 || n >= np)
    throw std::domain_error("jwkb_inner: n out of range, use jwkb_outer for n >= " +
                            std::to_string(np));
  DerivedScales s = derived_scales(p);
  JwkbLevel lvl;
  lvl.n = n;
  lvl.region = JwkbRegion::inner;
  lvl.energy = -p.U0 + (n + 0.5) * s.hbar_omega_d;
  lvl.x2 = std::sqrt(2.0 * (lvl.energy + p.U0) / (p.m * s.omega_d * s.omega_d));
  lvl.x1 = -lvl.x2;
  return lvl;
}

namespace detail {

// Closed-form action integral for E > V(a): dimple segment [0, a] plus
// harmonic segment [a, x2], each doubled for the symmetric well.
inline double jwkb_outer_phase(const TrapParams& p, const DerivedScales& s, double E) {
  double xt = std::sqrt(2.0 * (E + p.U0) / (p.m * s.omega_d * s.omega_d));
  double x2 = std::sqrt(2.0 * E / (p.m * p.omega * p.omega));
  double r1 = std::min(p.a / xt, 1.0);
  double r2 = std::min(p.a / x2, 1.0);
  double inner = 2.0 * (E + p.U0) / s.omega_d * std::asin(r1) +
                 p.m * p.a * s.omega_d * std::sqrt(std::max(xt * xt - p.a * p.a, 0.0));
  double outer = E / p.omega * (M_PI - 2.0 * std::asin(r2)) -
                 p.m * p.a * p.omega * std::sqrt(std::max(x2 * x2 - p.a * p.a, 0.0));
  return inner + outer;
}

// Same action by adaptive quadrature; the harmonic segment is regularized
// at the turning point with x = x2 - t^2.  The integrand is p/hbar so the
// quadrature sees O(1) numbers in SI units too; the action is rescaled after.
inline IntegralResult jwkb_outer_phase_quadrature(const TrapParams& p, const DerivedScales& s,
                                                  double E, const QuadSpec& quad = {}) {
  double x2 = std::sqrt(2.0 * E / (p.m * p.omega * p.omega));
  auto p_inner = [&](double x) {
    double v = 2.0 * p.m * (E + p.U0 - 0.5 * p.m * s.omega_d * s.omega_d * x * x);
    return std::sqrt(std::max(v, 0.0)) / p.hbar;
  };
  auto p_outer_reg = [&](double t) {
    double x = x2 - t * t;
    double v = 2.0 * p.m * (E - 0.5 * p.m * p.omega * p.omega * x * x);
    return 2.0 * t * std::sqrt(std::max(v, 0.0)) / p.hbar;
  };
  IntegralResult i1 = integrate(p_inner, 0.0, p.a, quad);
  IntegralResult i2 = integrate(p_outer_reg, 0.0, std::sqrt(std::max(x2 - p.a, 0.0)), quad);
  return {2.0 * p.hbar * (i1.value + i2.value), p.hbar * (i1.error_estimate + i2.error_estimate),
          worse(i1.flag, i2.flag)};
}

}  // namespace detail

inline JwkbLevel jwkb_outer(const TrapParams& p, int n, const RootSpec& spec = {}) {
  if (p.U0 > 0.0 && n < n_prime(p))
    throw std::domain_error("jwkb_outer: n below n', use jwkb_inner");
  DerivedScales s = derived_scales(p);
  // work in units of hbar*omega so the tolerances are unit-free
  double va = 0.5 * p.m * p.omega * p.omega * p.a * p.a / s.hbar_omega;
  double target = (n + 0.5) * M_PI;
  auto g = [&](double e) {
    return detail::jwkb_outer_phase(p, s, e * s.hbar_omega) / p.hbar - target;
  };

  // the action is strictly increasing in E: bracket around the harmonic guess
  double guess = n + 0.5;
  double lo;
  double hi = std::max(2.0 * guess, va * 2.0 + 1.0);
  if (p.U0 > 0.0) {
    lo = std::max(va * (1.0 + 1e-12), 0.5 * guess);
    while (g(lo) > 0.0 && lo > va * (1.0 + 1e-11)) {
      lo = std::max(va * (1.0 + 1e-12), 0.5 * (lo + va));
    }
    if (g(lo) > 0.0) throw std::runtime_error("jwkb_outer: level below matching energy");
  } else {
    // pure oscillator: the clamped closed form is valid down to E -> 0
    lo = 0.25 * guess;
    while (g(lo) > 0.0) lo *= 0.5;
  }
  int expand = 0;
  while (g(hi) < 0.0) {
    hi *= 2.0;
    if (++expand > 200) throw std::runtime_error("jwkb_outer: no bracketing root");
  }

  double flo = g(lo);
  for (int it = 0; it < 200 && hi - lo > spec.root_tolerance * std::max(1.0, std::fabs(hi));
       ++it) {
    double mid = 0.5 * (lo + hi);
    double fm = g(mid);
    if (fm == 0.0) {
      lo = hi = mid;
      break;
    }
    if (std::signbit(fm) == std::signbit(flo)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  JwkbLevel lvl;
  lvl.n = n;
  lvl.region = JwkbRegion::outer;
  lvl.energy = 0.5 * (lo + hi) * s.hbar_omega;
  lvl.x2 = std::sqrt(2.0 * lvl.energy / (p.m * p.omega * p.omega));
  lvl.x1 = -lvl.x2;
  return lvl;
}

inline JwkbLevel jwkb_level(const TrapParams& p, int n, const RootSpec& spec = {}) {
  if (p.U0 > 0.0 && n < n_prime(p)) return jwkb_inner(p, n);
  return jwkb_outer(p, n, spec);
}

inline SweepTable compare_spectra(const TrapParams& p, double e_max, const RootSpec& spec = {},
                                  const PrecisionPolicy& pol = {}) {
  Spectrum sp = solve_spectrum(p, e_max, spec, pol);
  DerivedScales s = derived_scales(p);
  SweepTable t;
  t.columns = {"n", "analytic", "jwkb", "abs_difference"};
  t.add_meta("e_max_over_hbar_omega", SweepTable::num(e_max / s.hbar_omega));
  t.add_meta("n_prime", p.U0 > 0.0 ? std::to_string(n_prime(p)) : "0");
  for (const auto& st : sp.states) {
    JwkbLevel lvl = jwkb_level(p, st.index, spec);
    auto& row = t.add_row();
    row.push_back(std::to_string(st.index));
    row.push_back(SweepTable::num(st.energy / s.hbar_omega));
    row.push_back(SweepTable::num(lvl.energy / s.hbar_omega));
    row.push_back(SweepTable::num(std::fabs(st.energy - lvl.energy) / s.hbar_omega, 6));
  }
  return t;
}

}  // namespace dimple

#endif  // DIMPLE_JWKB_HPP
