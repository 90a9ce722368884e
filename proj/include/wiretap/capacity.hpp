#pragma once

// Secrecy capacity of the correlated Rayleigh wiretap channel, in nats.
//
//   * ergodic_secrecy_capacity: finite-power capacity under the optimal
//     allocation, by double quadrature over h_M > h_E.
//   * limit_via_ratio_integral / secrecy_limit_closed_form: the high-power
//     limit E[ln(H_M/H_E); H_M > H_E], by quadrature and in closed form.
//   * bounds and asymptotic forms of the limit in kappa and rho.
//   * monte_carlo_capacity: sample-average oracle for all of the above.

#include <cstdint>
#include <optional>
#include <string_view>

#include "wiretap/channel_model.hpp"
#include "wiretap/numerics.hpp"
#include "wiretap/power_alloc.hpp"

namespace wiretap::capacity {

enum class Method { Quadrature, ClosedForm, MonteCarlo, BoundLower, BoundUpper };

std::string_view to_string(Method method);

struct CapacityEstimate {
  double value = 0.0;  ///< nats per channel use
  double error = 0.0;  ///< nats
  Method method = Method::ClosedForm;
  channel::ChannelParams params{};
  std::optional<double> p_bar;  ///< empty for the infinite-power limit
  /// Multiplier and achieved mean power, when a power policy was solved.
  std::optional<power::PowerPolicy> policy;
};

/// Solves the multiplier for the budget, then integrates the secrecy rate.
CapacityEstimate ergodic_secrecy_capacity(const channel::ChannelParams& params,
                                          const power::PowerConstraint& constraint,
                                          const numerics::QuadratureSpec& spec = {});
/// Same integral for an already solved policy.
CapacityEstimate ergodic_secrecy_capacity(const power::PowerPolicy& policy,
                                          const numerics::QuadratureSpec& spec = {});

/// Integral of ln(u) f_U(u) over u > 1. Requires rho < 1.
CapacityEstimate limit_via_ratio_integral(const channel::ChannelParams& params,
                                          const numerics::QuadratureSpec& spec = {});

/// ln(1 + kappa) + ln(1/2 + sqrt(1/4 - rho kappa / (1 + kappa)^2)); rho may be 1.
double secrecy_limit(double kappa, double rho);
CapacityEstimate secrecy_limit_closed_form(const channel::ChannelParams& params);

/// The correlation loss ln(1/2 + sqrt(1/4 - rho kappa / (1 + kappa)^2)), in [-ln 2, 0].
double limit_loss_term(double kappa, double rho);

/// rho = 0: ln(1 + kappa).
double limit_independent(double kappa);
/// rho -> 1: ln(kappa) for kappa > 1, else 0.
double limit_fully_correlated(double kappa);

struct CgrApproximations {
  double low_cgr;   ///< kappa, valid for kappa << 1
  double high_cgr;  ///< ln(kappa), valid for kappa >> 1
};
CgrApproximations limit_low_high_cgr_approx(double kappa);

struct LimitBounds {
  double lower;  ///< (1 - rho) ln(1 + kappa)
  double upper;  ///< ln(1 + kappa)
};
LimitBounds limit_bounds(const channel::ChannelParams& params);

struct InfinitePower {};

/// Sample average of ln(1 + h_M P) - ln(1 + h_E P) under `policy`, with a
/// 100-batch-means standard error.
CapacityEstimate monte_carlo_capacity(const channel::ChannelParams& params, const power::PowerPolicy& policy,
                                      std::uint64_t samples, channel::RandomStream& stream);
/// Sample average of ln(h_M / h_E) on h_M > h_E (zero elsewhere).
CapacityEstimate monte_carlo_capacity(const channel::ChannelParams& params, InfinitePower,
                                      std::uint64_t samples, channel::RandomStream& stream);

}  // namespace wiretap::capacity
