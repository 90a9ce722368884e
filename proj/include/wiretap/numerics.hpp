#pragma once

// Special functions, adaptive quadrature over finite and semi-infinite domains,
// and a bracketing root finder.

#include <functional>

namespace wiretap::numerics {

/// exp(-x) * I_0(x) for x >= 0. Throws DomainError on negative or non-finite x.
double bessel_i0_scaled(double x);

/// How [a, inf) is mapped onto a finite parameter domain.
enum class TailMap {
  /// x = a + scale * t / (1 - t), t in [0, 1).
  Rational,
  /// Integrate over [a, a + scale] and drop the remainder.
  Truncated,
};

struct TailPolicy {
  TailMap map = TailMap::Rational;
  /// Characteristic length of the integrand's decay (Rational) or the
  /// truncation length (Truncated).
  double scale = 1.0;
};

struct QuadratureSpec {
  double relative_tolerance = 1e-9;
  double absolute_tolerance = 1e-12;
  int max_subdivisions = 2000;
  TailPolicy tail{};

  /// Throws DomainError when an invariant is violated.
  void validate() const;

  /// Same spec with both tolerances multiplied by `factor`.
  QuadratureSpec tightened(double factor) const;
  QuadratureSpec with_scale(double scale) const;
};

struct QuadratureResult {
  double value = 0.0;
  double error = 0.0;
  int subdivisions = 0;
};

using Integrand = std::function<double(double)>;
using Integrand2 = std::function<double(double, double)>;

/// Integral of f over the finite interval [a, b] by globally adaptive
/// Gauss-Kronrod (7, 15). Throws ConvergenceError if the tolerance is not met
/// within spec.max_subdivisions.
QuadratureResult integrate(const Integrand& f, double a, double b, const QuadratureSpec& spec = {});

/// Integral of f over [a, inf) using spec.tail to reach a finite domain.
QuadratureResult integrate_semi_infinite(const Integrand& f, double a,
                                         const QuadratureSpec& spec = {});

enum class DoubleRegion {
  /// h_main in (h_eve, inf), h_eve in (0, inf).
  AboveDiagonal,
  /// The full quadrant; the inner integral is split at the diagonal.
  Quadrant,
};

struct DoubleIntegralOptions {
  DoubleRegion region = DoubleRegion::AboveDiagonal;
  /// The inner integral starts at h_eve + inner_gap. The integrand must
  /// vanish on the skipped strip. Ignored for Quadrant.
  double inner_gap = 0.0;
  /// Decay length of the integrand in h_main (outer length comes from spec.tail).
  double inner_scale = 1.0;
  /// Optional interior point of the inner domain where the integrand peaks
  /// or has a kink; the inner integral is split there when it lies inside.
  std::function<double(double)> inner_breakpoint{};
};

/// Iterated integral of f(h_main, h_eve): inner over h_main, outer over h_eve.
/// The reported error is the outer error plus the integrated inner errors.
QuadratureResult integrate_double(const Integrand2& f, const QuadratureSpec& spec = {},
                                  const DoubleIntegralOptions& options = {});

struct RootSpec {
  double bracket_low = 0.0;
  double bracket_high = 1.0;
  double tolerance = 1e-12;
  int max_iterations = 200;

  void validate() const;
};

/// Root of a strictly monotone g inside [bracket_low, bracket_high]: bisection
/// with Illinois secant steps. Returns x with |g(x)| <= tolerance or a final
/// bracket no wider than tolerance. Throws BracketError when g has the same
/// sign at both ends and ConvergenceError when max_iterations is exhausted.
double solve_monotone_root(const std::function<double(double)>& g, const RootSpec& spec);

}  // namespace wiretap::numerics
