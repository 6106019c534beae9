#ifndef DIMPLE_NUMERICS_HPP
#define DIMPLE_NUMERICS_HPP

#include <cmath>
#include <functional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "dimple/specfun.hpp"

namespace dimple {

struct RootSpec {
  double scan_lo = 0.0;
  double scan_hi = 1.0;
  int scan_steps = 100;
  double root_tolerance = 1e-10;
  double residual_tolerance = 1e-6;

  void validate() const {
    if (!(scan_lo < scan_hi)) throw std::invalid_argument("RootSpec: scan_lo < scan_hi required");
    if (scan_steps < 10) throw std::invalid_argument("RootSpec: scan_steps >= 10 required");
    if (!(root_tolerance > 0.0) || !(residual_tolerance > 0.0))
      throw std::invalid_argument("RootSpec: tolerances must be positive");
  }
};

struct QuadSpec {
  double abs_tolerance = 1e-12;
  double rel_tolerance = 1e-10;
  int max_depth = 48;
  double tail_cut = 40.0;

  void validate() const {
    if (!(abs_tolerance > 0.0) || !(rel_tolerance > 0.0) || !(tail_cut > 0.0))
      throw std::invalid_argument("QuadSpec: tolerances and tail_cut must be positive");
    if (max_depth < 1 || max_depth > 60)
      throw std::invalid_argument("QuadSpec: max_depth in [1, 60] required");
  }
};

struct Root {
  double x = 0.0;
  double residual = 0.0;
  double bracket_width = 0.0;  // final certified sign-change interval
  Flag flag = Flag::ok;

  // the bracket cannot shrink further in double precision
  bool machine_resolved() const {
    return bracket_width <= 8.0 * std::numeric_limits<double>::epsilon() *
                                std::max(1.0, std::fabs(x));
  }
};

struct RootScan {
  std::vector<Root> roots;
  std::vector<std::pair<double, double>> gaps;  // intervals skipped due to persistent flags
};

using FlaggedFn = std::function<SpecialValue(double)>;

namespace detail {

// degraded values keep a trustworthy sign, so bisection may still use them;
// only poles and non-finite values make an interval unusable
inline bool usable(const SpecialValue& v) {
  return v.flag != Flag::pole && std::isfinite(v.value);
}

inline Root bisect(const FlaggedFn& f, double lo, double hi, SpecialValue flo,
                   const RootSpec& spec) {
  auto eps_limit = [](double lo_, double hi_) {
    return 4.0 * std::numeric_limits<double>::epsilon() *
           std::max(1.0, std::max(std::fabs(lo_), std::fabs(hi_)));
  };
  SpecialValue fx = flo;
  double x = lo;
  while (hi - lo > eps_limit(lo, hi)) {
    double mid = 0.5 * (lo + hi);
    SpecialValue fm = f(mid);
    if (!usable(fm)) {
      // nudge off the bad point; give up on this bracket if it persists
      double mid2 = mid + 0.25 * (hi - lo) * 1e-3;
      fm = f(mid2);
      if (!usable(fm)) {
        Root r{mid, fm.value, hi - lo, worse(fm.flag, Flag::degraded)};
        return r;
      }
      mid = mid2;
    }
    x = mid;
    fx = fm;
    if (fm.value == 0.0) break;
    if (std::signbit(fm.value) == std::signbit(flo.value)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
    // past root_tolerance, keep going only while the residual stays large
    // (steep crossings need the full double resolution to land inside)
    if (hi - lo <= spec.root_tolerance && std::fabs(fm.value) <= spec.residual_tolerance) break;
  }
  Root r{x, fx.value, hi - lo, fx.flag};
  if (r.flag == Flag::ok && std::fabs(r.residual) > spec.residual_tolerance)
    r.flag = Flag::degraded;
  return r;
}

inline void scan_interval(const FlaggedFn& f, double lo, double hi, SpecialValue flo,
                          SpecialValue fhi, int depth, const RootSpec& spec, RootScan& out) {
  bool lo_ok = usable(flo), hi_ok = usable(fhi);
  if (!lo_ok || !hi_ok) {
    if (depth >= 8) {
      out.gaps.emplace_back(lo, hi);
      return;
    }
    double mid = 0.5 * (lo + hi);
    SpecialValue fm = f(mid);
    scan_interval(f, lo, mid, flo, fm, depth + 1, spec, out);
    scan_interval(f, mid, hi, fm, fhi, depth + 1, spec, out);
    return;
  }
  if (flo.value == 0.0) {
    out.roots.push_back({lo, 0.0, 0.0, Flag::ok});
    return;
  }
  if (std::signbit(flo.value) != std::signbit(fhi.value))
    out.roots.push_back(bisect(f, lo, hi, flo, spec));
}

}  // namespace detail

inline RootScan find_roots(const FlaggedFn& f, const RootSpec& spec) {
  spec.validate();
  RootScan out;
  const double h = (spec.scan_hi - spec.scan_lo) / spec.scan_steps;
  SpecialValue prev = f(spec.scan_lo);
  double xp = spec.scan_lo;
  for (int i = 1; i <= spec.scan_steps; ++i) {
    double x = spec.scan_lo + i * h;
    SpecialValue cur = f(x);
    detail::scan_interval(f, xp, x, prev, cur, 0, spec, out);
    xp = x;
    prev = cur;
  }
  if (detail::usable(prev) && prev.value == 0.0)
    out.roots.push_back({xp, 0.0, 0.0, Flag::ok});
  // drop duplicates from roots that land exactly on grid points
  std::vector<Root> uniq;
  for (const auto& r : out.roots) {
    if (!uniq.empty() && std::fabs(r.x - uniq.back().x) <= 2.0 * spec.root_tolerance) continue;
    uniq.push_back(r);
  }
  out.roots = std::move(uniq);
  return out;
}

struct IntegralResult {
  double value = 0.0;
  double error_estimate = 0.0;
  Flag flag = Flag::ok;
};

namespace detail {

struct SimpsonCtx {
  const std::function<double(double)>& f;
  const QuadSpec& spec;
  Flag flag = Flag::ok;
  double err = 0.0;
  long evals = 0;
};

// hard cap on refinement work; a noisy integrand must not hang the caller
inline constexpr long kSimpsonEvalBudget = 2'000'000;

inline double simpson_rec(SimpsonCtx& ctx, double a, double b, double fa, double fm, double fb,
                          double whole, double tol, int depth) {
  double m = 0.5 * (a + b);
  double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  double flm = ctx.f(lm), frm = ctx.f(rm);
  ctx.evals += 2;
  double h6 = (b - a) / 12.0;
  double left = h6 * (fa + 4.0 * flm + fm);
  double right = h6 * (fm + 4.0 * frm + fb);
  double delta = left + right - whole;
  bool out_of_budget = ctx.evals > kSimpsonEvalBudget || depth >= ctx.spec.max_depth;
  if (std::fabs(delta) <= 15.0 * tol || out_of_budget) {
    if (out_of_budget && std::fabs(delta) > 15.0 * tol)
      ctx.flag = worse(ctx.flag, Flag::degraded);
    ctx.err += std::fabs(delta) / 15.0;
    return left + right + delta / 15.0;
  }
  return simpson_rec(ctx, a, m, fa, flm, fm, left, 0.5 * tol, depth + 1) +
         simpson_rec(ctx, m, b, fm, frm, fb, right, 0.5 * tol, depth + 1);
}

}  // namespace detail

inline IntegralResult integrate(const std::function<double(double)>& f, double lo, double hi,
                                const QuadSpec& spec = {}) {
  spec.validate();
  if (lo == hi) return {0.0, 0.0, Flag::ok};
  double sign = 1.0;
  if (lo > hi) {
    std::swap(lo, hi);
    sign = -1.0;
  }
  detail::SimpsonCtx ctx{f, spec};
  // coarse first pass to set the relative scale
  double fa = f(lo), fb = f(hi), fm = f(0.5 * (lo + hi));
  double whole = (hi - lo) / 6.0 * (fa + 4.0 * fm + fb);
  double tol = std::max(spec.abs_tolerance, spec.rel_tolerance * std::fabs(whole));
  double v = detail::simpson_rec(ctx, lo, hi, fa, fm, fb, whole, tol, 0);
  return {sign * v, ctx.err, ctx.flag};
}

// Semi-infinite integral of a Gaussian-decaying integrand: the caller
// certifies |f| is negligible beyond spec.tail_cut.
inline IntegralResult integrate_to_infinity(const std::function<double(double)>& f, double lo,
                                            const QuadSpec& spec = {}) {
  if (lo >= spec.tail_cut) return {0.0, 0.0, Flag::ok};
  return integrate(f, lo, spec.tail_cut, spec);
}

}  // namespace dimple

#endif  // DIMPLE_NUMERICS_HPP
