#include "wiretap/montecarlo.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "wiretap/capacity.hpp"
#include "wiretap/errors.hpp"
#include "wiretap/parallel.hpp"
#include "wiretap/power_alloc.hpp"
#include "wiretap/statistics.hpp"

namespace wiretap::montecarlo {
namespace {

constexpr int kBatches = 100;

OracleReport make_report(std::string target, std::size_t index, const channel::ChannelParams& params,
                         double analytic, const stats::BatchMeans& acc, std::uint64_t seed) {
  OracleReport r;
  r.target = std::move(target);
  r.grid_index = index;
  r.params = params;
  r.analytic_value = analytic;
  r.mc_value = acc.mean();
  r.standard_error = acc.standard_error();
  const double diff = r.mc_value - analytic;
  if (r.standard_error > 0.0) {
    r.z_score = diff / r.standard_error;
  } else {
    r.z_score = diff == 0.0 ? 0.0 : std::copysign(std::numeric_limits<double>::infinity(), diff);
  }
  r.samples = acc.count();
  r.seed = seed;
  return r;
}

std::vector<OracleReport> oracle_point(const channel::ChannelParams& params, std::size_t index,
                                       std::uint64_t samples, std::uint64_t seed, const OracleOptions& options) {
  const auto policy =
      power::solve_lagrange_multiplier(params, power::PowerConstraint{options.p_bar}, options.quadrature);

  stats::BatchMeans tail(samples, kBatches);
  stats::BatchMeans limit(samples, kBatches);
  stats::BatchMeans mean_power(samples, kBatches);
  channel::RandomStream stream(seed, index);
  for (std::uint64_t i = 0; i < samples; ++i) {
    const auto s = channel::sample_channel_pair(params, stream);
    const bool above = s.h_main > s.h_eve;
    tail.add(above ? 1.0 : 0.0);
    limit.add(above ? std::log(s.h_main / s.h_eve) : 0.0);
    mean_power.add(above ? policy.power(s.h_main, s.h_eve) : 0.0);
  }

  return {
      make_report("ratio_tail", index, params, 0.5 - channel::ratio_antiderivative(params, 1.0), tail, seed),
      make_report("secrecy_limit", index, params, capacity::secrecy_limit(params.cgr(), params.pcc), limit, seed),
      make_report("mean_power", index, params, options.p_bar, mean_power, seed),
  };
}

}  // namespace

std::vector<OracleReport> run_oracle_suite(const std::vector<channel::ChannelParams>& grid,
                                           std::uint64_t samples_per_point, std::uint64_t seed,
                                           const OracleOptions& options) {
  if (samples_per_point < kMinOracleSamples) {
    throw DomainError("run_oracle_suite: need at least 10^4 samples per point");
  }
  if (!(options.p_bar > 0.0)) throw DomainError("run_oracle_suite: p_bar must be positive");
  for (const auto& p : grid) p.validate(false);

  std::vector<std::vector<OracleReport>> per_point(grid.size());
  parallel_for(grid.size(), options.workers, [&](std::size_t i) {
    per_point[i] = oracle_point(grid[i], i, samples_per_point, seed, options);
  });

  std::vector<OracleReport> out;
  out.reserve(3 * grid.size());
  for (auto& reports : per_point) {
    for (auto& r : reports) out.push_back(std::move(r));
  }
  return out;
}

std::vector<channel::ChannelParams> default_oracle_grid() {
  std::vector<channel::ChannelParams> grid;
  for (double kappa : {0.25, 0.5, 1.0, 2.0, 4.0, 10.0}) {
    for (double rho : {0.0, 0.2, 0.4, 0.6, 0.8, 0.9}) grid.push_back(channel::ChannelParams::from_cgr(kappa, rho));
  }
  return grid;
}

bool OracleSummary::passes() const {
  const std::size_t beyond_3 = reports - within_3_sigma;
  return within_5_sigma == reports && 100 * beyond_3 <= reports;
}

OracleSummary summarize(const std::vector<OracleReport>& reports) {
  OracleSummary s;
  s.reports = reports.size();
  for (const auto& r : reports) {
    if (std::abs(r.z_score) < 3.0) ++s.within_3_sigma;
    if (std::abs(r.z_score) < 5.0) ++s.within_5_sigma;
  }
  return s;
}

double empirical_power_correlation(std::span<const channel::ChannelSample> samples) {
  if (samples.size() < 2) throw DomainError("empirical_power_correlation: need at least two samples");
  const auto n = static_cast<long double>(samples.size());
  long double mean_m = 0.0L;
  long double mean_e = 0.0L;
  for (const auto& s : samples) {
    mean_m += s.h_main;
    mean_e += s.h_eve;
  }
  mean_m /= n;
  mean_e /= n;
  long double cov = 0.0L;
  long double var_m = 0.0L;
  long double var_e = 0.0L;
  for (const auto& s : samples) {
    const long double dm = s.h_main - mean_m;
    const long double de = s.h_eve - mean_e;
    cov += dm * de;
    var_m += dm * dm;
    var_e += de * de;
  }
  if (var_m == 0.0L || var_e == 0.0L) {
    throw std::runtime_error("empirical_power_correlation: a power gain has zero variance");
  }
  const double r = static_cast<double>(cov / std::sqrt(var_m * var_e));
  return std::clamp(r, -1.0, 1.0);
}

nlohmann::json to_json(const OracleReport& r) {
  return {{"target", r.target},
          {"grid_index", r.grid_index},
          {"kappa", r.params.cgr()},
          {"rho", r.params.pcc},
          {"analytic_value", r.analytic_value},
          {"mc_value", r.mc_value},
          {"standard_error", r.standard_error},
          {"z_score", r.z_score},
          {"samples", r.samples},
          {"seed", r.seed}};
}

}  // namespace wiretap::montecarlo
