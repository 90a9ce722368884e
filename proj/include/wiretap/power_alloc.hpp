#pragma once

// Optimal instantaneous power allocation under an average power budget.

#include "wiretap/channel_model.hpp"
#include "wiretap/numerics.hpp"

namespace wiretap::power {

struct PowerConstraint {
  double p_bar = 1.0;  ///< average transmit power; noise variance is 1 so this is the SNR

  static PowerConstraint from_db(double p_bar_db);
  void validate() const;
};

/// Allocation rule for one (params, budget) pair, fixed by its multiplier.
struct PowerPolicy {
  double lambda = 1.0;
  channel::ChannelParams params{};
  PowerConstraint constraint{};
  double achieved_mean_power = 0.0;

  double power(double h_main, double h_eve) const;
};

/// Power that maximizes ln(1 + h_M P) - ln(1 + h_E P) - lambda P over P >= 0.
/// Zero whenever h_M - h_E <= lambda (in particular for h_M <= h_E).
double optimal_power(double lambda, double h_main, double h_eve);

/// d/dP [ln(1 + h_M P) - ln(1 + h_E P) - lambda P]. Vanishes at optimal_power
/// wherever that power is positive.
double secrecy_lagrangian_slope(double lambda, double h_main, double h_eve, double power);

/// E[optimal_power(lambda, H_M, H_E)] by double quadrature over h_M > h_E.
double mean_power(double lambda, const channel::ChannelParams& params,
                  const numerics::QuadratureSpec& spec = {});
numerics::QuadratureResult mean_power_with_error(double lambda, const channel::ChannelParams& params,
                                                 const numerics::QuadratureSpec& spec = {});

/// Finds lambda with mean_power(lambda) = p_bar (relative residual <= 1e-4,
/// typically far smaller). Throws BracketError when no bracket is found.
PowerPolicy solve_lagrange_multiplier(const channel::ChannelParams& params, const PowerConstraint& constraint,
                                      const numerics::QuadratureSpec& spec = {});

/// Quadrature options that fit the joint-pdf integrands at multiplier `lambda`.
numerics::DoubleIntegralOptions joint_pdf_options(const channel::ChannelParams& params, double lambda);
numerics::QuadratureSpec joint_pdf_spec(const channel::ChannelParams& params, numerics::QuadratureSpec spec);

}  // namespace wiretap::power
