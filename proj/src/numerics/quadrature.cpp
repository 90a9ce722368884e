#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <queue>
#include <string>
#include <vector>

#include "wiretap/errors.hpp"
#include "wiretap/numerics.hpp"

namespace wiretap::numerics {
namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

// Gauss-Kronrod 7/15 abscissae and weights (QUADPACK qk15).
constexpr std::array<double, 8> kXgk = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr std::array<double, 8> kWgk = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr std::array<double, 4> kWg = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

template <std::size_t N>
using Vec = std::array<double, N>;

template <std::size_t N>
struct Segment {
  double a;
  double b;
  Vec<N> value;
  double error;
};

template <std::size_t N>
struct ByError {
  bool operator()(const Segment<N>& l, const Segment<N>& r) const { return l.error < r.error; }
};

template <std::size_t N>
Vec<N> check_finite(const Vec<N>& v, double x) {
  for (double c : v) {
    if (!std::isfinite(c)) {
      throw ConvergenceError("integrand is not finite at x = " + std::to_string(x),
                             std::numeric_limits<double>::quiet_NaN(),
                             std::numeric_limits<double>::infinity());
    }
  }
  return v;
}

// One GK15 panel. Component 0 drives the error estimate; the remaining
// components ride along on the Kronrod rule.
template <std::size_t N, class F>
Segment<N> gk15(const F& f, double a, double b) {
  const double center = 0.5 * (a + b);
  const double half = 0.5 * (b - a);

  std::array<Vec<N>, 15> fv;
  fv[7] = check_finite<N>(f(center), center);
  for (int j = 0; j < 7; ++j) {
    const double dx = half * kXgk[j];
    fv[j] = check_finite<N>(f(center - dx), center - dx);
    fv[14 - j] = check_finite<N>(f(center + dx), center + dx);
  }

  Vec<N> kronrod{};
  for (std::size_t c = 0; c < N; ++c) {
    double s = kWgk[7] * fv[7][c];
    for (int j = 0; j < 7; ++j) s += kWgk[j] * (fv[j][c] + fv[14 - j][c]);
    kronrod[c] = s * half;
  }

  // Gauss nodes are the odd Kronrod indices 1, 3, 5 and the center.
  double gauss = kWg[3] * fv[7][0];
  for (int j = 0; j < 3; ++j) gauss += kWg[j] * (fv[2 * j + 1][0] + fv[13 - 2 * j][0]);
  gauss *= half;

  const double mean = kronrod[0] / (b - a);
  double resabs = kWgk[7] * std::abs(fv[7][0]);
  double resasc = kWgk[7] * std::abs(fv[7][0] - mean);
  for (int j = 0; j < 7; ++j) {
    resabs += kWgk[j] * (std::abs(fv[j][0]) + std::abs(fv[14 - j][0]));
    resasc += kWgk[j] * (std::abs(fv[j][0] - mean) + std::abs(fv[14 - j][0] - mean));
  }
  resabs *= std::abs(half);
  resasc *= std::abs(half);

  double err = std::abs(kronrod[0] - gauss);
  if (resasc != 0.0 && err != 0.0) err = resasc * std::min(1.0, std::pow(200.0 * err / resasc, 1.5));
  if (resabs > std::numeric_limits<double>::min() / (50.0 * kEps)) err = std::max(50.0 * kEps * resabs, err);
  return {a, b, kronrod, err};
}

template <std::size_t N>
struct AdaptiveResult {
  Vec<N> value{};
  double error = 0.0;
  int subdivisions = 0;
};

template <std::size_t N, class F>
AdaptiveResult<N> adaptive(const F& f, double a, double b, const QuadratureSpec& spec) {
  std::priority_queue<Segment<N>, std::vector<Segment<N>>, ByError<N>> heap;
  std::vector<Segment<N>> frozen;

  Segment<N> first = gk15<N>(f, a, b);
  Vec<N> total = first.value;
  double total_err = first.error;
  heap.push(first);

  int subdivisions = 0;
  auto target = [&] { return std::max(spec.absolute_tolerance, spec.relative_tolerance * std::abs(total[0])); };

  while (total_err > target()) {
    if (heap.empty() || subdivisions >= spec.max_subdivisions) {
      throw ConvergenceError("quadrature tolerance not met after " + std::to_string(subdivisions) +
                                 " subdivisions",
                             total[0], total_err);
    }
    Segment<N> worst = heap.top();
    heap.pop();
    const double mid = 0.5 * (worst.a + worst.b);
    if (!(mid > worst.a && mid < worst.b) ||
        worst.b - worst.a <= 8.0 * kEps * std::max(std::abs(worst.a), std::abs(worst.b))) {
      frozen.push_back(worst);
      continue;
    }
    Segment<N> left = gk15<N>(f, worst.a, mid);
    Segment<N> right = gk15<N>(f, mid, worst.b);
    for (std::size_t c = 0; c < N; ++c) total[c] += left.value[c] + right.value[c] - worst.value[c];
    total_err += left.error + right.error - worst.error;
    heap.push(left);
    heap.push(right);
    ++subdivisions;
  }

  // Re-sum to shed the drift of the incremental updates.
  AdaptiveResult<N> out;
  out.subdivisions = subdivisions;
  auto accumulate = [&](const Segment<N>& s) {
    for (std::size_t c = 0; c < N; ++c) out.value[c] += s.value[c];
    out.error += s.error;
  };
  for (const auto& s : frozen) accumulate(s);
  while (!heap.empty()) {
    accumulate(heap.top());
    heap.pop();
  }
  return out;
}

template <std::size_t N, class F>
AdaptiveResult<N> adaptive_semi_infinite(const F& f, double a, const QuadratureSpec& spec) {
  const double scale = spec.tail.scale;
  if (spec.tail.map == TailMap::Truncated) return adaptive<N>(f, a, a + scale, spec);
  auto mapped = [&](double t) {
    const double gap = 1.0 - t;
    Vec<N> v = f(a + scale * t / gap);
    const double jacobian = scale / (gap * gap);
    for (double& c : v) c = c == 0.0 ? 0.0 : c * jacobian;
    return v;
  };
  return adaptive<N>(mapped, 0.0, 1.0, spec);
}

template <class Fn>
auto scalar(const Fn& f) {
  return [&f](double x) { return Vec<1>{f(x)}; };
}

}  // namespace

void QuadratureSpec::validate() const {
  if (!(relative_tolerance > 0.0) || !(absolute_tolerance > 0.0)) {
    throw DomainError("QuadratureSpec: tolerances must be positive");
  }
  if (max_subdivisions < 1) throw DomainError("QuadratureSpec: max_subdivisions must be >= 1");
  if (!(tail.scale > 0.0) || !std::isfinite(tail.scale)) {
    throw DomainError("QuadratureSpec: tail scale must be positive and finite");
  }
}

QuadratureSpec QuadratureSpec::tightened(double factor) const {
  QuadratureSpec out = *this;
  out.relative_tolerance *= factor;
  out.absolute_tolerance *= factor;
  return out;
}

QuadratureSpec QuadratureSpec::with_scale(double scale) const {
  QuadratureSpec out = *this;
  out.tail.scale = scale;
  return out;
}

QuadratureResult integrate(const Integrand& f, double a, double b, const QuadratureSpec& spec) {
  spec.validate();
  if (!std::isfinite(a) || !std::isfinite(b)) throw DomainError("integrate: limits must be finite");
  if (a == b) return {};
  auto r = adaptive<1>(scalar(f), a, b, spec);
  return {r.value[0], r.error, r.subdivisions};
}

QuadratureResult integrate_semi_infinite(const Integrand& f, double a, const QuadratureSpec& spec) {
  spec.validate();
  if (!std::isfinite(a)) throw DomainError("integrate_semi_infinite: lower limit must be finite");
  auto r = adaptive_semi_infinite<1>(scalar(f), a, spec);
  return {r.value[0], r.error, r.subdivisions};
}

QuadratureResult integrate_double(const Integrand2& f, const QuadratureSpec& spec,
                                  const DoubleIntegralOptions& options) {
  spec.validate();
  if (!(options.inner_gap >= 0.0)) throw DomainError("integrate_double: inner_gap must be >= 0");
  const QuadratureSpec inner_spec = spec.tightened(0.1).with_scale(options.inner_scale);
  inner_spec.validate();

  auto inner = [&](double h_eve) {
    auto slice = [&](double h_main) { return Vec<1>{f(h_main, h_eve)}; };
    Vec<2> acc{};
    auto add = [&](const AdaptiveResult<1>& r) {
      acc[0] += r.value[0];
      acc[1] += r.error;
    };

    double lower = h_eve;
    if (options.region == DoubleRegion::Quadrant) {
      add(adaptive<1>(slice, 0.0, h_eve, inner_spec));
    } else {
      lower += options.inner_gap;
    }
    if (options.inner_breakpoint) {
      const double split = options.inner_breakpoint(h_eve);
      if (std::isfinite(split) && split > lower) {
        add(adaptive<1>(slice, lower, split, inner_spec));
        lower = split;
      }
    }
    add(adaptive_semi_infinite<1>(slice, lower, inner_spec));
    return acc;
  };

  auto r = adaptive_semi_infinite<2>(inner, 0.0, spec);
  return {r.value[0], r.error + std::abs(r.value[1]), r.subdivisions};
}

}  // namespace wiretap::numerics
