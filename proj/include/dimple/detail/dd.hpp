#ifndef DIMPLE_DETAIL_DD_HPP
#define DIMPLE_DETAIL_DD_HPP

#include <cmath>
#include <limits>

namespace dimple::detail {

// Double-double arithmetic: an unevaluated sum of two doubles, ~32
// significant digits.  The parabolic-cylinder series below subtract terms
// that agree to a factor e^{z^2}, so plain doubles run out of digits
// around z^2 ~ 30; these extended accumulators push that to z^2 ~ 60.
struct dd {
  double hi = 0.0;
  double lo = 0.0;
  constexpr dd() = default;
  constexpr dd(double h) : hi(h) {}
  constexpr dd(double h, double l) : hi(h), lo(l) {}
  explicit operator double() const { return hi + lo; }
};

inline dd quick_two_sum(double a, double b) {
  double s = a + b;
  return {s, b - (s - a)};
}

inline dd two_sum(double a, double b) {
  double s = a + b;
  double v = s - a;
  return {s, (a - (s - v)) + (b - v)};
}

inline dd two_prod(double a, double b) {
  double p = a * b;
  return {p, std::fma(a, b, -p)};
}

inline dd operator+(const dd& a, const dd& b) {
  dd s = two_sum(a.hi, b.hi);
  return quick_two_sum(s.hi, s.lo + (a.lo + b.lo));
}

inline dd operator-(const dd& a) { return {-a.hi, -a.lo}; }
inline dd operator-(const dd& a, const dd& b) { return a + (-b); }

inline dd operator*(const dd& a, const dd& b) {
  dd p = two_prod(a.hi, b.hi);
  return quick_two_sum(p.hi, p.lo + (a.hi * b.lo + a.lo * b.hi));
}

inline dd operator/(const dd& a, const dd& b) {
  double q1 = a.hi / b.hi;
  dd r = a - b * dd(q1);
  double q2 = r.hi / b.hi;
  r = r - b * dd(q2);
  double q3 = r.hi / b.hi;
  return quick_two_sum(q1, q2) + dd(q3);
}

inline dd dd_abs(const dd& a) { return a.hi < 0.0 ? -a : a; }

inline dd dd_ldexp(const dd& a, int n) {
  return {std::ldexp(a.hi, n), std::ldexp(a.lo, n)};
}

inline constexpr dd kPi{3.141592653589793116e+00, 1.224646799147353207e-16};
inline constexpr dd kLn2{6.931471805599452862e-01, 2.319046813846299558e-17};

inline dd dd_exp(const dd& a) {
  if (a.hi > 690.0) return {std::numeric_limits<double>::infinity(), 0.0};
  if (a.hi < -745.0) return {0.0, 0.0};
  double m = std::round(a.hi / kLn2.hi);
  dd r = dd_ldexp(a - kLn2 * dd(m), -9);
  dd term = r;
  dd sum = r;
  for (int n = 2; n <= 16; ++n) {
    term = term * r / dd(static_cast<double>(n));
    sum = sum + term;
    if (std::fabs(term.hi) < 1e-36 * std::fabs(sum.hi)) break;
  }
  // undo the /2^9 reduction via (1+x)^2 - 1 = x(2+x)
  for (int i = 0; i < 9; ++i) sum = sum * (dd(2.0) + sum);
  return dd_ldexp(dd(1.0) + sum, static_cast<int>(m));
}

inline dd dd_log(const dd& a) {
  dd x(std::log(a.hi));
  for (int i = 0; i < 2; ++i) x = x + a * dd_exp(-x) - dd(1.0);
  return x;
}

inline dd dd_sqrt(const dd& a) {
  if (a.hi == 0.0) return dd(0.0);
  double y = std::sqrt(a.hi);
  dd r = (a - dd(y) * dd(y)) / dd(2.0 * y);
  return dd(y) + r;
}

// sin(pi x), exact reduction at half-integers
inline dd dd_sin_pi(const dd& x) {
  double n = std::round(static_cast<double>(x));
  dd t = kPi * (x - dd(n));
  dd t2 = t * t;
  dd term = t;
  dd sum = t;
  for (int k = 1; k <= 24; ++k) {
    term = -(term * t2) / dd((2.0 * k) * (2.0 * k + 1.0));
    sum = sum + term;
    if (std::fabs(term.hi) < 1e-36 * (std::fabs(sum.hi) + 1e-300)) break;
  }
  return (std::fmod(n, 2.0) != 0.0) ? -sum : sum;
}

}  // namespace dimple::detail

#endif  // DIMPLE_DETAIL_DD_HPP
