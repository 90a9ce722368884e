#pragma once

// Brute-force oracle: sampled estimates of the ratio law, the capacity limit
// and the power constraint, reported as z-scores against the analytic values.

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>
#include "wiretap/channel_model.hpp"
#include "wiretap/numerics.hpp"

namespace wiretap::montecarlo {

struct OracleReport {
  std::string target;
  std::size_t grid_index = 0;
  channel::ChannelParams params{};
  double analytic_value = 0.0;
  double mc_value = 0.0;
  double standard_error = 0.0;
  double z_score = 0.0;
  std::uint64_t samples = 0;
  std::uint64_t seed = 0;
};

struct OracleOptions {
  /// Budget at which the power-constraint report is evaluated.
  double p_bar = 10.0;
  unsigned workers = 0;
  numerics::QuadratureSpec quadrature{};
};

inline constexpr std::uint64_t kMinOracleSamples = 10'000;

/// Reports per grid point, in grid order:
///   "ratio_tail"       P(U > 1)            vs 1/2 - F_U(1)
///   "secrecy_limit"    mean gated ln(U)    vs the closed-form limit
///   "mean_power"       mean P(lambda*)     vs p_bar
/// Point i draws from stream (seed, i), so the output does not depend on the
/// worker count.
std::vector<OracleReport> run_oracle_suite(const std::vector<channel::ChannelParams>& grid,
                                           std::uint64_t samples_per_point, std::uint64_t seed,
                                           const OracleOptions& options = {});

/// kappa in {0.25, 0.5, 1, 2, 4, 10} x rho in {0, 0.2, 0.4, 0.6, 0.8, 0.9}.
std::vector<channel::ChannelParams> default_oracle_grid();

struct OracleSummary {
  std::size_t reports = 0;
  std::size_t within_3_sigma = 0;
  std::size_t within_5_sigma = 0;

  /// At most 1% of reports beyond |z| = 3 and none beyond |z| = 5.
  bool passes() const;
};
OracleSummary summarize(const std::vector<OracleReport>& reports);

/// Sample correlation of the two power gains. Throws DomainError on fewer
/// than two samples and std::runtime_error when either gain has zero variance.
double empirical_power_correlation(std::span<const channel::ChannelSample> samples);

nlohmann::json to_json(const OracleReport& report);

}  // namespace wiretap::montecarlo
