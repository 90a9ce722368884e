#include "wiretap/capacity.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "wiretap/errors.hpp"
#include "wiretap/statistics.hpp"

namespace wiretap::capacity {
namespace {

using channel::ChannelParams;
using numerics::QuadratureSpec;

constexpr std::uint64_t kMinSamples = 1000;
constexpr int kBatches = 100;
// Beyond this ln(u) the ratio-integral integrand is below 1e-120.
constexpr double kMaxLogRatio = 300.0;

void require_kappa(double kappa) {
  if (!(kappa > 0.0) || !std::isfinite(kappa)) throw DomainError("kappa must be positive and finite");
}

void require_rho(double rho) {
  if (!(rho >= 0.0 && rho <= 1.0)) throw DomainError("rho must lie in [0, 1]");
}

// sqrt((1 + kappa)^2 - 4 rho kappa), as sqrt((1 - kappa)^2 + 4 kappa (1 - rho)).
double discriminant_root(double kappa, double rho) {
  const double d = 1.0 - kappa;
  return std::sqrt(d * d + 4.0 * kappa * (1.0 - rho));
}

}  // namespace

std::string_view to_string(Method method) {
  switch (method) {
    case Method::Quadrature: return "quadrature";
    case Method::ClosedForm: return "closed-form";
    case Method::MonteCarlo: return "monte-carlo";
    case Method::BoundLower: return "bound-lower";
    case Method::BoundUpper: return "bound-upper";
  }
  return "unknown";
}

double secrecy_limit(double kappa, double rho) {
  require_kappa(kappa);
  require_rho(rho);
  // C = ln((1 + kappa + S) / 2) = log1p((S - (1 - kappa)) / 2).
  const double s = discriminant_root(kappa, rho);
  double excess = 0.0;
  if (kappa > 1.0) {
    excess = 0.5 * (s + (kappa - 1.0));
  } else {
    const double denom = s + (1.0 - kappa);
    excess = denom > 0.0 ? 2.0 * kappa * (1.0 - rho) / denom : 0.0;
  }
  return std::log1p(excess);
}

double limit_loss_term(double kappa, double rho) {
  require_kappa(kappa);
  require_rho(rho);
  const double s = discriminant_root(kappa, rho);
  return std::log1p(-2.0 * rho * kappa / ((1.0 + kappa) * (s + 1.0 + kappa)));
}

CapacityEstimate secrecy_limit_closed_form(const ChannelParams& params) {
  params.validate(true);
  CapacityEstimate out;
  out.value = secrecy_limit(params.cgr(), params.pcc);
  out.error = 4.0 * std::numeric_limits<double>::epsilon() * out.value;
  out.method = Method::ClosedForm;
  out.params = params;
  return out;
}

double limit_independent(double kappa) {
  require_kappa(kappa);
  return std::log1p(kappa);
}

double limit_fully_correlated(double kappa) {
  require_kappa(kappa);
  return kappa > 1.0 ? std::log(kappa) : 0.0;
}

CgrApproximations limit_low_high_cgr_approx(double kappa) {
  require_kappa(kappa);
  return {kappa, std::log(kappa)};
}

LimitBounds limit_bounds(const ChannelParams& params) {
  params.validate(true);
  const double upper = std::log1p(params.cgr());
  return {(1.0 - params.pcc) * upper, upper};
}

CapacityEstimate limit_via_ratio_integral(const ChannelParams& params, const QuadratureSpec& spec) {
  params.validate(false);
  const double kappa = params.cgr();
  // u = e^v turns the ln(u)/u^2 tail into an exponentially decaying one. The
  // density peaks at u = kappa, which becomes a narrow spike as rho -> 1, so
  // the domain is split there.
  auto integrand = [&](double v) {
    if (v > kMaxLogRatio) return 0.0;
    const double u = std::exp(v);
    return v * channel::ratio_pdf(params, u) * u;
  };
  numerics::QuadratureResult total;
  double start = 0.0;
  if (kappa > 1.0) {
    start = std::log(kappa);
    total = numerics::integrate(integrand, 0.0, start, spec);
  }
  const auto tail = numerics::integrate_semi_infinite(integrand, start, spec.with_scale(1.0));

  CapacityEstimate out;
  out.value = total.value + tail.value;
  out.error = total.error + tail.error;
  out.method = Method::Quadrature;
  out.params = params;
  return out;
}

CapacityEstimate ergodic_secrecy_capacity(const power::PowerPolicy& policy, const QuadratureSpec& spec) {
  const ChannelParams& params = policy.params;
  params.validate(false);
  auto integrand = [&](double h_main, double h_eve) {
    const double p = policy.power(h_main, h_eve);
    if (p == 0.0) return 0.0;
    const double rate = std::log1p(h_main * p) - std::log1p(h_eve * p);
    return rate * channel::joint_power_gain_pdf(params, h_main, h_eve);
  };
  const auto r = numerics::integrate_double(integrand, power::joint_pdf_spec(params, spec),
                                            power::joint_pdf_options(params, policy.lambda));
  CapacityEstimate out;
  out.value = r.value;
  out.error = r.error;
  out.method = Method::Quadrature;
  out.params = params;
  out.p_bar = policy.constraint.p_bar;
  out.policy = policy;
  return out;
}

CapacityEstimate ergodic_secrecy_capacity(const ChannelParams& params, const power::PowerConstraint& constraint,
                                          const QuadratureSpec& spec) {
  return ergodic_secrecy_capacity(power::solve_lagrange_multiplier(params, constraint, spec), spec);
}

namespace {

template <class Rate>
CapacityEstimate sample_average(const ChannelParams& params, std::uint64_t samples,
                                channel::RandomStream& stream, const Rate& rate) {
  params.validate(false);
  if (samples < kMinSamples) {
    throw DomainError("monte_carlo_capacity: need at least " + std::to_string(kMinSamples) + " samples");
  }
  stats::BatchMeans acc(samples, kBatches);
  for (std::uint64_t i = 0; i < samples; ++i) {
    const auto s = channel::sample_channel_pair(params, stream);
    acc.add(rate(s));
  }
  CapacityEstimate out;
  out.value = acc.mean();
  out.error = acc.standard_error();
  out.method = Method::MonteCarlo;
  out.params = params;
  return out;
}

}  // namespace

CapacityEstimate monte_carlo_capacity(const ChannelParams& params, const power::PowerPolicy& policy,
                                      std::uint64_t samples, channel::RandomStream& stream) {
  auto out = sample_average(params, samples, stream, [&](const channel::ChannelSample& s) {
    if (!(s.h_main > s.h_eve)) return 0.0;
    const double p = policy.power(s.h_main, s.h_eve);
    return std::log1p(s.h_main * p) - std::log1p(s.h_eve * p);
  });
  out.p_bar = policy.constraint.p_bar;
  out.policy = policy;
  return out;
}

CapacityEstimate monte_carlo_capacity(const ChannelParams& params, InfinitePower, std::uint64_t samples,
                                      channel::RandomStream& stream) {
  return sample_average(params, samples, stream, [](const channel::ChannelSample& s) {
    return s.h_main > s.h_eve ? std::log(s.h_main / s.h_eve) : 0.0;
  });
}

}  // namespace wiretap::capacity
