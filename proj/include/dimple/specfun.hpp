#ifndef DIMPLE_SPECFUN_HPP
#define DIMPLE_SPECFUN_HPP

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "dimple/detail/dd.hpp"

namespace dimple {

enum class Flag { ok, degraded, pole };

inline Flag worse(Flag a, Flag b) { return static_cast<int>(a) >= static_cast<int>(b) ? a : b; }

struct SpecialValue {
  double value = 0.0;
  Flag flag = Flag::ok;
};

struct PrecisionPolicy {
  double term_tolerance = 1e-15;    // relative series truncation target
  int max_terms = 2000;
  double cancellation_guard = 1e-24;  // |result| / largest partial sum
  double asymptotic_switch = 5.0;     // |z| above which the decaying asymptotic branch is tried
};

namespace detail {

inline bool is_nonpositive_integer(double x) {
  return x <= 0.0 && x == std::round(x);
}

// Gamma in double-double via the Stirling series, with the argument lifted
// above 30 through the recurrence and reflection below 1/2.  Unlike Spouge
// or Lanczos sums, every step here is cancellation-free, which matters: the
// parabolic-cylinder combination amplifies any relative error of these
// prefactors by its own cancellation factor (up to ~1e21 for deep states).
class DdGamma {
 public:
  static const DdGamma& instance() {
    static const DdGamma g;
    return g;
  }

  dd gamma(const dd& x) const {
    if (static_cast<double>(x) < 0.5) {
      dd s = dd_sin_pi(x);
      if (s.hi == 0.0) return dd(std::numeric_limits<double>::infinity());
      return kPi / (s * gamma(dd(1.0) - x));
    }
    int lift = x.hi < 30.0 ? static_cast<int>(31.0 - std::floor(x.hi)) : 0;
    dd y = x + dd(static_cast<double>(lift));
    dd ly = dd_log(y);
    dd inv = dd(1.0) / y;
    dd inv2 = inv * inv;
    dd series(0.0);
    dd p = inv;
    for (int n = 0; n < kN; ++n) {
      series = series + a_[n] * p;
      p = p * inv2;
    }
    dd g = dd_exp((y - dd(0.5)) * ly - y + half_ln_2pi_ + series);
    for (int j = lift - 1; j >= 0; --j) g = g / (x + dd(static_cast<double>(j)));
    return g;
  }

  dd recip_gamma(const dd& x) const {
    if (x.lo == 0.0 && is_nonpositive_integer(x.hi)) return dd(0.0);
    return dd(1.0) / gamma(x);
  }

 private:
  static constexpr int kN = 13;
  dd a_[kN];  // B_{2n} / (2n (2n-1))
  dd half_ln_2pi_;

  DdGamma() {
    const double num[kN] = {1.0,  -1.0, 1.0,  -1.0, 5.0,  -691.0,      7.0,
                            -3617.0, 43867.0, -174611.0, 854513.0, -236364091.0, 8553103.0};
    const double den[kN] = {6.0,  30.0, 42.0, 30.0, 66.0, 2730.0,      6.0,
                            510.0,   798.0,   330.0,     138.0,    2730.0,       6.0};
    for (int n = 0; n < kN; ++n) {
      double f = (2.0 * n + 2.0) * (2.0 * n + 1.0);
      a_[n] = dd(num[n]) / (dd(den[n]) * dd(f));
    }
    half_ln_2pi_ = dd_ldexp(dd_log(dd_ldexp(kPi, 1)), -1);
  }
};



struct SeriesOut {
  dd value;
  double max_partial = 0.0;  // largest |partial sum| seen, for cancellation tracking
  Flag flag = Flag::ok;
};

// Kummer series sum_n (alpha)_n/(gamma)_n y^n/n!, double-double accumulation.
// alpha is carried in dd: a double-rounded alpha perturbs one branch of the
// parabolic-cylinder combination independently of the other, and the
// cancellation between the branches amplifies that perturbation.
inline SeriesOut kummer_series(const dd& alpha, const dd& gamma_par, const dd& y,
                               const PrecisionPolicy& pol) {
  SeriesOut out;
  const bool poly = alpha.lo == 0.0 && is_nonpositive_integer(alpha.hi);
  if (gamma_par.lo == 0.0 && is_nonpositive_integer(gamma_par.hi) &&
      !(poly && alpha.hi > gamma_par.hi)) {
    out.flag = Flag::pole;
    out.value = dd(std::numeric_limits<double>::quiet_NaN());
    return out;
  }
  dd term(1.0);
  dd sum(1.0);
  double max_mag = 1.0;
  int consec = 0;
  for (int n = 0; n < pol.max_terms; ++n) {
    if (poly && alpha.hi + n == 0.0) {
      out.value = sum;
      out.max_partial = max_mag;
      return out;  // exact polynomial termination
    }
    term = term * (alpha + dd(static_cast<double>(n))) * y /
           ((gamma_par + dd(static_cast<double>(n))) * dd(n + 1.0));
    sum = sum + term;
    max_mag = std::max(max_mag, std::fabs(sum.hi));
    if (std::fabs(term.hi) <= 1e-33 * std::fabs(sum.hi)) {
      if (++consec >= 3) {
        out.value = sum;
        out.max_partial = max_mag;
        return out;
      }
    } else {
      consec = 0;
    }
  }
  out.value = sum;
  out.max_partial = max_mag;
  out.flag = Flag::degraded;
  return out;
}

// One parabolic-cylinder evaluation: D, D' and D'' as mantissa * 2^exp2.
// D_lambda(z) = 2^lambda e^{-z^2/2} [P(z^2) + z Q(z^2)] with
//   P(y) = sqrt(pi) Phi(-l/2, 1/2; y) / Gamma((1-l)/2)
//   Q(y) = Gamma(-1/2) Phi((1-l)/2, 3/2; y) / Gamma(-l/2).
struct PcfOut {
  double d = 0.0, g = 0.0, d2 = 0.0;
  dd dm;  // D mantissa in full precision, for recurrence seeding
  long exp2 = 0;
  Flag flag = Flag::ok;
};

inline PcfOut pcf_series(double lambda, double z, const PrecisionPolicy& pol,
                         int max_deriv = 1) {
  PcfOut out;
  const auto& sg = DdGamma::instance();
  dd y = two_prod(z, z);
  if (y.hi > 650.0) {  // e^{y/2} overflows even the scaled representation path
    out.flag = Flag::degraded;
    out.d = out.g = out.d2 = std::numeric_limits<double>::quiet_NaN();
    return out;
  }
  dd sqrt_pi = dd_sqrt(kPi);
  const double hl = -lambda / 2.0;  // exact in binary
  dd rg1 = sg.recip_gamma(two_sum(0.5, hl));
  dd rg2 = sg.recip_gamma(dd(hl));
  dd pref_p = sqrt_pi * rg1;
  dd pref_q = dd_ldexp(-sqrt_pi, 1) * rg2;  // Gamma(-1/2) = -2 sqrt(pi)

  SeriesOut s_p0, s_q0, s_p1, s_q1, s_p2, s_q2;
  dd p0(0.0), q0(0.0), p1(0.0), q1(0.0), p2(0.0), q2(0.0);
  double mag = 0.0;
  if (rg1.hi != 0.0) {
    s_p0 = kummer_series(dd(hl), dd(0.5), y, pol);
    p0 = pref_p * s_p0.value;
    mag = std::max(mag, std::fabs(pref_p.hi) * s_p0.max_partial);
  }
  if (rg2.hi != 0.0) {
    s_q0 = kummer_series(two_sum(0.5, hl), dd(1.5), y, pol);
    q0 = pref_q * s_q0.value;
    mag = std::max(mag, std::fabs(z * pref_q.hi) * s_q0.max_partial);
  }
  Flag fl = worse(s_p0.flag, s_q0.flag);
  if (max_deriv >= 1) {
    if (rg1.hi != 0.0) {
      s_p1 = kummer_series(two_sum(1.0, hl), dd(1.5), y, pol);
      p1 = dd(-lambda) * pref_p * s_p1.value;
    }
    if (rg2.hi != 0.0) {
      s_q1 = kummer_series(two_sum(1.5, hl), dd(2.5), y, pol);
      q1 = (dd(1.0) - dd(lambda)) / dd(3.0) * pref_q * s_q1.value;
    }
    fl = worse(fl, worse(s_p1.flag, s_q1.flag));
  }
  if (max_deriv >= 2) {
    if (rg1.hi != 0.0) {
      s_p2 = kummer_series(two_sum(2.0, hl), dd(2.5), y, pol);
      p2 = dd(lambda) * (dd(lambda) - dd(2.0)) / dd(3.0) * pref_p * s_p2.value;
    }
    if (rg2.hi != 0.0) {
      s_q2 = kummer_series(two_sum(2.5, hl), dd(3.5), y, pol);
      q2 = (dd(1.0) - dd(lambda)) * (dd(3.0) - dd(lambda)) / dd(15.0) * pref_q * s_q2.value;
    }
    fl = worse(fl, worse(s_p2.flag, s_q2.flag));
  }

  dd zz(z);
  dd z2 = two_prod(z, z);
  dd bd = p0 + zz * q0;
  // b = dD/dz without the 2^l e^{-y/2} prefactor
  dd bg = -zz * bd + dd(2.0) * zz * p1 + q0 + dd(2.0) * z2 * q1;
  dd bd2(0.0);
  if (max_deriv >= 2) {
    dd db = -p0 + (dd(2.0) - dd(2.0) * z2) * p1 + dd(4.0) * z2 * p2 - dd(2.0) * zz * q0 +
            (dd(6.0) * zz - dd(2.0) * z2 * zz) * q1 + dd(4.0) * z2 * zz * q2;
    bd2 = -zz * bg + db;
  }

  if (mag > 0.0 && std::fabs(bd.hi) < pol.cancellation_guard * mag) fl = worse(fl, Flag::degraded);

  // prefactor 2^l e^{-y/2} split into mantissa in [1,2) and power of two
  dd t = dd(lambda) * kLn2 - dd_ldexp(y, -1);
  double e2 = std::floor(static_cast<double>(t) / kLn2.hi);
  dd pref = dd_exp(t - kLn2 * dd(e2));
  out.dm = bd * pref;
  out.d = static_cast<double>(out.dm);
  out.g = static_cast<double>(bg * pref);
  out.d2 = static_cast<double>(bd2 * pref);
  out.exp2 = static_cast<long>(e2);
  out.flag = fl;
  return out;
}

// Decaying asymptotic branch for z >> 1:
//   D_lambda(z) ~ 2^l z^l e^{-z^2/2} sum_k (-1)^k prod_{j<2k}(l-j) / (k! 4^k z^{2k}).
// Returns false when the divergent series cannot reach the target accuracy
// (large lambda at moderate z); caller falls back to the series path.
inline bool pcf_asymptotic(double lambda, double z, PcfOut& out) {
  if (z <= 0.0) return false;
  double z2 = z * z;
  double term = 1.0, s = 1.0, sp = 0.0;
  double prev = std::fabs(term);
  for (int k = 1; k <= 80; ++k) {
    term *= -(lambda - (2.0 * k - 2.0)) * (lambda - (2.0 * k - 1.0)) / (4.0 * k * z2);
    if (std::fabs(term) > prev) return false;  // divergence reached before convergence
    prev = std::fabs(term);
    s += term;
    sp += term * (-2.0 * k) / z;
    if (std::fabs(term) < 1e-17 * std::fabs(s)) {
      double le2 = lambda * (1.0 + std::log2(z)) - z2 / (2.0 * kLn2.hi);
      double e2 = std::floor(le2);
      double mant = std::exp2(le2 - e2);  // in [1,2)
      out.d = mant * s;
      out.g = out.d * (lambda / z - z) + mant * sp;
      out.d2 = (z2 - 2.0 * lambda - 1.0) * out.d;
      out.exp2 = static_cast<long>(e2);
      out.flag = Flag::ok;
      return true;
    }
  }
  return false;
}

// log of int_0^inf t^p e^{-t^2/2 - x t} dt for p > 0, by Gauss-Legendre on a
// window around the saddle.  The integrand is log-concave, so there is no
// cancellation to fight; double precision is enough here.
inline constexpr double kSqrt2 = 1.4142135623730951;

inline double pcf_log_laplace(double p, double x) {
  static const double gx[4] = {0.1834346424956498, 0.5255324099163290, 0.7966664774136267,
                               0.9602898564975363};
  static const double gw[4] = {0.3626837833783620, 0.3137066458778873, 0.2223810344533745,
                               0.1012285362903763};
  double ts = 0.5 * (-x + std::sqrt(x * x + 4.0 * p));
  double ls = p * std::log(ts) - 0.5 * ts * ts - x * ts;
  double sig = 1.0 / std::sqrt(p / (ts * ts) + 1.0);
  double lo = std::max(0.0, ts - 13.0 * sig), hi = ts + 13.0 * sig;
  const int panels = 48;
  double h = (hi - lo) / panels, sum = 0.0;
  for (int k = 0; k < panels; ++k) {
    double mid = lo + (k + 0.5) * h;
    for (int i = 0; i < 4; ++i) {
      for (double s : {-1.0, 1.0}) {
        double t = mid + s * 0.5 * h * gx[i];
        if (t <= 0.0) continue;
        sum += gw[i] * std::exp(p * std::log(t) - 0.5 * t * t - x * t - ls);
      }
    }
  }
  return ls + std::log(0.5 * h * sum);
}

// Integral representation, the fallback for deep negative lambda at moderate z
// where the power series has cancelled away and the asymptotic sum diverges:
//   D_lambda(z) = 2^{lambda/2} e^{-z^2/2} I(-lambda-1) / Gamma(-lambda),
//   I(p) = int_0^inf t^p e^{-t^2/2 - sqrt(2) z t} dt,
//   G = dD/dz = -z D - sqrt(2) 2^{lambda/2} e^{-z^2/2} I(-lambda) / Gamma(-lambda).
inline bool pcf_integral(double lambda, double z, PcfOut& out) {
  if (!(lambda < -1.5) || !(z > 0.0)) return false;
  double p = -lambda - 1.0;
  double x = kSqrt2 * z;
  double lg = std::lgamma(-lambda);
  double base = 0.5 * lambda * kLn2.hi - 0.5 * z * z - lg;
  double ld = base + pcf_log_laplace(p, x);
  double ld1 = base + pcf_log_laplace(p + 1.0, x);
  double le2 = ld / kLn2.hi;
  double e2 = std::floor(le2);
  double mant = std::exp2(le2 - e2);
  out.d = mant;
  out.g = -z * mant - kSqrt2 * std::exp2(ld1 / kLn2.hi - e2);
  out.d2 = (z * z - 2.0 * lambda - 1.0) * out.d;
  out.dm = dd(out.d);
  out.exp2 = static_cast<long>(e2);
  out.flag = Flag::ok;
  return true;
}

// shift both members of the pair so |v1| stays near 1; returns exponent shift
inline int pcf_renorm(dd& v0, dd& v1) {
  if (v1.hi == 0.0 || !std::isfinite(v1.hi)) return 0;
  int k = 0;
  std::frexp(v1.hi, &k);
  if (k > 500 || k < -500) {
    v0 = dd_ldexp(v0, -k);
    v1 = dd_ldexp(v1, -k);
    return k;
  }
  return 0;
}

// D_lambda, D_{lambda-1} via upward three-term recurrence
// D_{l+1}(z) = 2 z D_l(z) - 2 l D_{l-1}(z), started from the series at the
// fractional part of lambda.  Upward is the stable direction here: the
// target becomes the dominant member of the pair as l grows.
inline PcfOut pcf_recurrence(double lambda, double z, const PrecisionPolicy& pol) {
  double mu = lambda - std::floor(lambda);
  int steps = static_cast<int>(std::llround(lambda - (mu + 1.0)));
  PcfOut a = pcf_series(mu, z, pol, 0);
  PcfOut b = pcf_series(mu + 1.0, z, pol, 0);
  Flag fl = worse(a.flag, b.flag);
  long e = std::max(a.exp2, b.exp2);
  dd v0 = dd_ldexp(a.dm, static_cast<int>(a.exp2 - e));
  dd v1 = dd_ldexp(b.dm, static_cast<int>(b.exp2 - e));
  const dd z2(2.0 * z);
  double l = mu + 1.0;
  for (int i = 0; i < steps; ++i, l += 1.0) {
    dd v2 = z2 * v1 - dd(2.0 * l) * v0;
    v0 = v1;
    v1 = v2;
    e += pcf_renorm(v0, v1);
  }
  PcfOut out;
  out.dm = v1;
  out.d = static_cast<double>(v1);
  out.g = static_cast<double>(dd(2.0 * lambda) * v0 - dd(z) * v1);
  out.d2 = (z * z - 2.0 * lambda - 1.0) * out.d;
  out.exp2 = e;
  out.flag = fl;
  return out;
}

inline constexpr double kRecurrenceThreshold = 30.0;

inline PcfOut pcf_eval(double lambda, double z, const PrecisionPolicy& pol,
                       int max_deriv = 1) {
  if (lambda > kRecurrenceThreshold) return pcf_recurrence(lambda, z, pol);
  if (z > pol.asymptotic_switch) {
    PcfOut out;
    if (pcf_asymptotic(lambda, z, out)) return out;
  }
  PcfOut s = pcf_series(lambda, z, pol, max_deriv);
  if (s.flag != Flag::ok && z >= 4.0) {
    PcfOut iv;
    if (pcf_integral(lambda, z, iv)) return iv;
  }
  return s;
}

inline double scaled_to_double(double mant, long e, Flag& fl) {
  if (e > 1020) {
    fl = worse(fl, Flag::degraded);
    return mant > 0 ? std::numeric_limits<double>::infinity()
                    : -std::numeric_limits<double>::infinity();
  }
  if (e < -1060) return 0.0;
  return std::ldexp(mant, static_cast<int>(e));
}

}  // namespace detail

// --- public surface ---------------------------------------------------------

inline SpecialValue gamma_real(double x) {
  if (!std::isfinite(x)) throw std::invalid_argument("gamma_real: non-finite argument");
  if (detail::is_nonpositive_integer(x)) {
    return {std::numeric_limits<double>::infinity(), Flag::pole};
  }
  return {static_cast<double>(detail::DdGamma::instance().gamma(detail::dd(x))), Flag::ok};
}

inline SpecialValue kummer_phi(double alpha, double gamma_par, double y,
                               const PrecisionPolicy& pol = {}) {
  if (detail::is_nonpositive_integer(gamma_par) &&
      !(detail::is_nonpositive_integer(alpha) && alpha > gamma_par)) {
    return {std::numeric_limits<double>::quiet_NaN(), Flag::pole};
  }
  auto s = detail::kummer_series(detail::dd(alpha), detail::dd(gamma_par), detail::dd(y), pol);
  SpecialValue out{static_cast<double>(s.value), s.flag};
  if (s.flag == Flag::ok && s.max_partial > 0.0 &&
      std::fabs(out.value) < pol.cancellation_guard * s.max_partial) {
    out.flag = Flag::degraded;
  }
  return out;
}

inline SpecialValue pcf_D(double lambda, double z, const PrecisionPolicy& pol = {}) {
  auto e = detail::pcf_eval(lambda, z, pol, 0);
  SpecialValue out{0.0, e.flag};
  out.value = detail::scaled_to_double(e.d, e.exp2, out.flag);
  return out;
}

inline SpecialValue pcf_G(double lambda, double z, const PrecisionPolicy& pol = {}) {
  auto e = detail::pcf_eval(lambda, z, pol, 1);
  SpecialValue out{0.0, e.flag};
  out.value = detail::scaled_to_double(e.g, e.exp2, out.flag);
  return out;
}

}  // namespace dimple

#endif  // DIMPLE_SPECFUN_HPP
