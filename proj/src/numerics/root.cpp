#include <cmath>
#include <string>

#include "wiretap/errors.hpp"
#include "wiretap/numerics.hpp"

namespace wiretap::numerics {

void RootSpec::validate() const {
  if (!std::isfinite(bracket_low) || !std::isfinite(bracket_high) || !(bracket_low < bracket_high)) {
    throw DomainError("RootSpec: need finite bracket_low < bracket_high");
  }
  if (!(tolerance > 0.0)) throw DomainError("RootSpec: tolerance must be positive");
  if (max_iterations < 1) throw DomainError("RootSpec: max_iterations must be >= 1");
}

double solve_monotone_root(const std::function<double(double)>& g, const RootSpec& spec) {
  spec.validate();
  double lo = spec.bracket_low;
  double hi = spec.bracket_high;
  double g_lo = g(lo);
  double g_hi = g(hi);
  if (std::isnan(g_lo) || std::isnan(g_hi)) throw BracketError("solve_monotone_root: g is NaN at a bracket end");
  if (std::abs(g_lo) <= spec.tolerance) return lo;
  if (std::abs(g_hi) <= spec.tolerance) return hi;
  if (std::signbit(g_lo) == std::signbit(g_hi)) {
    throw BracketError("solve_monotone_root: no sign change on [" + std::to_string(lo) + ", " +
                       std::to_string(hi) + "]");
  }

  // Illinois weights: the retained end's value is halved when the same side
  // is replaced twice in a row, which keeps regula falsi from stalling.
  double w_lo = g_lo;
  double w_hi = g_hi;
  int last_side = 0;
  double width_two_back = hi - lo;
  double width_one_back = hi - lo;

  for (int it = 0; it < spec.max_iterations; ++it) {
    const double width = hi - lo;
    if (width <= spec.tolerance) return 0.5 * (lo + hi);

    const double mid = 0.5 * (lo + hi);
    double x = mid;
    const bool stalled = width > 0.5 * width_two_back;
    if (!stalled && std::isfinite(w_lo) && std::isfinite(w_hi) && w_hi != w_lo) {
      const double secant = hi - w_hi * (hi - lo) / (w_hi - w_lo);
      if (secant > lo && secant < hi) x = secant;
    }
    if (x == lo || x == hi) x = mid;

    const double gx = g(x);
    if (std::isnan(gx)) throw ConvergenceError("solve_monotone_root: g is NaN", x, width);
    if (std::abs(gx) <= spec.tolerance) return x;

    if (std::signbit(gx) == std::signbit(g_lo)) {
      lo = x;
      g_lo = w_lo = gx;
      if (last_side == -1) w_hi *= 0.5;
      last_side = -1;
    } else {
      hi = x;
      g_hi = w_hi = gx;
      if (last_side == 1) w_lo *= 0.5;
      last_side = 1;
    }
    width_two_back = width_one_back;
    width_one_back = width;
  }
  throw ConvergenceError("solve_monotone_root: max_iterations exceeded", 0.5 * (lo + hi), hi - lo);
}

}  // namespace wiretap::numerics
