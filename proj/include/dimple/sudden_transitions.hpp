#ifndef DIMPLE_SUDDEN_TRANSITIONS_HPP
#define DIMPLE_SUDDEN_TRANSITIONS_HPP

#include <cmath>
#include <stdexcept>
#include <vector>

#include "dimple/bound_spectrum.hpp"
#include "dimple/numerics.hpp"
#include "dimple/sweep_table.hpp"

namespace dimple {

// Unit-x-norm harmonic oscillator eigenfunction, Hermite polynomials folded
// into an orthonormal three-term recurrence (no factorial overflow).
struct HoState {
  int n = 0;
  double hbar = 1.0;
  double m = 0.5;
  double omega = 1.0;

  double operator()(double x) const {
    double sx = std::sqrt(m * omega / hbar);
    double z = sx * x;
    double u0 = std::pow(M_PI, -0.25) * std::exp(-0.5 * z * z);
    if (n == 0) return std::sqrt(sx) * u0;
    double um1 = u0;
    double u = std::sqrt(2.0) * z * u0;
    for (int k = 2; k <= n; ++k) {
      double next = std::sqrt(2.0 / k) * z * u - std::sqrt((k - 1.0) / k) * um1;
      um1 = u;
      u = next;
    }
    return std::sqrt(sx) * u;
  }

  Parity parity() const { return n % 2 == 0 ? Parity::even : Parity::odd; }
};

inline HoState ho_eigenfunction(int n, const TrapParams& p) {
  if (n < 0) throw std::invalid_argument("ho_eigenfunction: n >= 0 required");
  p.validate();
  return {n, p.hbar, p.m, p.omega};
}

struct TransitionRecord {
  int n = 0;             // initial bare-trap index
  int target_index = 0;  // dimple-spectrum index
  double amplitude = 0.0;
  double probability = 0.0;
  Flag flag = Flag::ok;
};

inline TransitionRecord transition_amplitude(int n, const EigenState& state,
                                             const TrapParams& p, const QuadSpec& quad = {},
                                             const PrecisionPolicy& pol = {}) {
  HoState ho = ho_eigenfunction(n, p);
  TransitionRecord rec;
  rec.n = n;
  rec.target_index = state.index;
  if (ho.parity() != state.parity) return rec;  // exact zero, no quadrature

  PiecewiseWaveFunction psi = eigenfunction(state, p, quad, pol);
  auto f = [&](double x) { return ho(x) * psi(x); };
  double sx = std::sqrt(p.m * p.omega / p.hbar);
  double zt2 = std::max(2.0 * state.lambda + 1.0, 2.0 * n + 1.0);
  double x_max = (std::sqrt(std::max(zt2, 0.0)) + 8.0) / sx;
  IntegralResult in = integrate(f, 0.0, p.a, quad);
  IntegralResult out = integrate(f, p.a, std::max(x_max, p.a * (1.0 + 1e-12)), quad);
  rec.amplitude = 2.0 * (in.value + out.value);  // even integrand by parity match
  rec.probability = rec.amplitude * rec.amplitude;
  rec.flag = worse(in.flag, out.flag);
  return rec;
}

inline SweepTable probability_sweep(int n, int target_index, const std::vector<double>& u0_grid,
                                    const TrapParams& base, const RootSpec& spec = {},
                                    const QuadSpec& quad = {}, const PrecisionPolicy& pol = {}) {
  SweepTable t;
  t.columns = {"U0", "P"};
  t.add_meta("n", std::to_string(n));
  t.add_meta("target_index", std::to_string(target_index));
  for (double u0 : u0_grid) {
    TrapParams p = base;
    p.U0 = u0;
    double P;
    if (u0 == 0.0) {
      P = (n == target_index) ? 1.0 : 0.0;
    } else {
      // the dimple only deepens levels, so index k always lies below (k+1/2)hw
      double e_max = (target_index + 1.5) * p.hbar * p.omega;
      Spectrum sp = solve_spectrum(p, e_max, spec, pol);
      if (target_index >= static_cast<int>(sp.states.size()))
        throw std::runtime_error("probability_sweep: target index not found in spectrum");
      P = transition_amplitude(n, sp.states[target_index], p, quad, pol).probability;
    }
    auto& row = t.add_row();
    row.push_back(SweepTable::num(u0));
    row.push_back(SweepTable::num(P));
  }
  return t;
}

// 1 - sum of transition probabilities into all bound targets below e_max.
inline double completeness_defect(int n, const TrapParams& p, double e_max,
                                  const RootSpec& spec = {}, const QuadSpec& quad = {},
                                  const PrecisionPolicy& pol = {}) {
  if (p.U0 == 0.0) return 0.0;
  Spectrum sp = solve_spectrum(p, e_max, spec, pol);
  double sum = 0.0;
  for (const auto& st : sp.states)
    sum += transition_amplitude(n, st, p, quad, pol).probability;
  return 1.0 - sum;
}

}  // namespace dimple

#endif  // DIMPLE_SUDDEN_TRANSITIONS_HPP
