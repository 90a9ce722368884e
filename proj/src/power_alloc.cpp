#include "wiretap/power_alloc.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "wiretap/errors.hpp"

namespace wiretap::power {
namespace {

using channel::ChannelParams;
using numerics::QuadratureSpec;

constexpr int kMaxBracketExpansions = 60;
constexpr double kBracketFactor = 4.0;
// Relaxed tolerance used while searching for the multiplier.
constexpr double kSearchRelTol = 1e-7;
// Log-residual targets for the search and the polish step.
constexpr double kSearchLogTol = 1e-6;
constexpr double kPolishLogTol = 1e-9;

void require_lambda(double lambda) {
  if (!(lambda > 0.0) || !std::isfinite(lambda)) throw DomainError("lambda must be positive and finite");
}

double log_power_residual(double lambda, const ChannelParams& params, double p_bar,
                          const QuadratureSpec& spec) {
  const double mp = mean_power(lambda, params, spec);
  return std::log(std::max(mp, std::numeric_limits<double>::min())) - std::log(p_bar);
}

}  // namespace

PowerConstraint PowerConstraint::from_db(double p_bar_db) { return {std::pow(10.0, p_bar_db / 10.0)}; }

void PowerConstraint::validate() const {
  if (!(p_bar > 0.0) || !std::isfinite(p_bar)) throw DomainError("PowerConstraint: p_bar must be positive and finite");
}

double PowerPolicy::power(double h_main, double h_eve) const { return optimal_power(lambda, h_main, h_eve); }

double optimal_power(double lambda, double h_main, double h_eve) {
  require_lambda(lambda);
  if (!(h_main > 0.0) || !(h_eve > 0.0) || !std::isfinite(h_main) || !std::isfinite(h_eve)) {
    throw DomainError("optimal_power: gains must be positive and finite");
  }
  const double margin = h_main - h_eve - lambda;
  if (!(margin > 0.0)) return 0.0;
  // Closed form rationalized and scaled by h_E so it stays exact near the
  // activation boundary and finite as h_E -> 0.
  const double r = h_eve / h_main;
  const double a = 1.0 - r;
  const double b = 1.0 + r;
  const double root = std::sqrt(a * (a + 4.0 * h_eve / lambda));
  return 2.0 * margin / (lambda * h_main * (root + b));
}

double secrecy_lagrangian_slope(double lambda, double h_main, double h_eve, double power) {
  return h_main / (1.0 + h_main * power) - h_eve / (1.0 + h_eve * power) - lambda;
}

numerics::DoubleIntegralOptions joint_pdf_options(const ChannelParams& params, double lambda) {
  numerics::DoubleIntegralOptions options;
  options.region = numerics::DoubleRegion::AboveDiagonal;
  options.inner_gap = lambda;
  options.inner_scale = params.mean_gain_main;
  const double kappa = params.cgr();
  options.inner_breakpoint = [kappa](double h_eve) { return kappa * h_eve; };
  return options;
}

QuadratureSpec joint_pdf_spec(const ChannelParams& params, QuadratureSpec spec) {
  spec.tail.scale = params.mean_gain_eve;
  return spec;
}

numerics::QuadratureResult mean_power_with_error(double lambda, const ChannelParams& params,
                                                 const QuadratureSpec& spec) {
  require_lambda(lambda);
  params.validate(false);
  auto integrand = [&](double h_main, double h_eve) {
    const double p = optimal_power(lambda, h_main, h_eve);
    return p == 0.0 ? 0.0 : p * channel::joint_power_gain_pdf(params, h_main, h_eve);
  };
  return numerics::integrate_double(integrand, joint_pdf_spec(params, spec), joint_pdf_options(params, lambda));
}

double mean_power(double lambda, const ChannelParams& params, const QuadratureSpec& spec) {
  return mean_power_with_error(lambda, params, spec).value;
}

PowerPolicy solve_lagrange_multiplier(const ChannelParams& params, const PowerConstraint& constraint,
                                      const QuadratureSpec& spec) {
  params.validate(false);
  constraint.validate();
  spec.validate();

  QuadratureSpec relaxed = spec;
  relaxed.relative_tolerance = std::max(spec.relative_tolerance, kSearchRelTol);

  // Search in log(lambda): the residual is monotone decreasing there and the
  // multiplier spans many decades across the SNR range.
  auto residual = [&](double log_lambda) {
    return log_power_residual(std::exp(log_lambda), params, constraint.p_bar, relaxed);
  };

  const double step = std::log(kBracketFactor);
  double lo = 0.0;
  double hi = 0.0;
  const double r0 = residual(0.0);
  if (r0 == 0.0) {
    lo = hi = 0.0;
  } else {
    // r > 0 means too much power: raise lambda.
    const double direction = r0 > 0.0 ? 1.0 : -1.0;
    double prev = 0.0;
    double x = 0.0;
    bool found = false;
    for (int i = 0; i < kMaxBracketExpansions; ++i) {
      x = prev + direction * step;
      const double r = residual(x);
      if (std::signbit(r) != std::signbit(r0) || r == 0.0) {
        found = true;
        break;
      }
      prev = x;
    }
    if (!found) {
      throw BracketError("solve_lagrange_multiplier: no multiplier bracket after " +
                         std::to_string(kMaxBracketExpansions) + " expansions (p_bar = " +
                         std::to_string(constraint.p_bar) + ", kappa = " + std::to_string(params.cgr()) +
                         ", rho = " + std::to_string(params.pcc) + ")");
    }
    lo = std::min(prev, x);
    hi = std::max(prev, x);
  }

  double log_lambda = lo;
  if (hi > lo) {
    log_lambda = numerics::solve_monotone_root(residual, {lo, hi, kSearchLogTol, 200});
  }

  // Polish at full tolerance inside a small bracket around the relaxed root.
  auto full = [&](double x) { return log_power_residual(std::exp(x), params, constraint.p_bar, spec); };
  const double r_star = full(log_lambda);
  if (std::abs(r_star) > kPolishLogTol) {
    double width = std::max(4.0 * std::abs(r_star), 1e-6);
    double a = log_lambda;
    double b = log_lambda;
    bool bracketed = false;
    for (int i = 0; i < kMaxBracketExpansions && !bracketed; ++i) {
      // r decreasing in log lambda: r > 0 means the root lies to the right.
      if (r_star > 0.0) {
        b = log_lambda + width;
        bracketed = full(b) < 0.0;
      } else {
        a = log_lambda - width;
        bracketed = full(a) > 0.0;
      }
      width *= 4.0;
    }
    if (!bracketed) throw BracketError("solve_lagrange_multiplier: polish bracket not found");
    log_lambda = numerics::solve_monotone_root(full, {a, b, kPolishLogTol, 200});
  }

  PowerPolicy policy;
  policy.lambda = std::exp(log_lambda);
  policy.params = params;
  policy.constraint = constraint;
  policy.achieved_mean_power = mean_power(policy.lambda, params, spec);
  return policy;
}

}  // namespace wiretap::power
