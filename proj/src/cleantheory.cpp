#include "topoloc/cleantheory.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "topoloc/observables.hpp"

namespace topoloc {
namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kQuadratureTolerance = 1e-9;

template <class F>
double integrate(F f, double a, double b) {
  if (b <= a) return 0.0;
  double error = 0.0;
  const double value =
      boost::math::quadrature::gauss_kronrod<double, 31>::integrate(f, a, b, 15, 1e-11, &error);
  if (!std::isfinite(value) || error > kQuadratureTolerance * std::max(1.0, std::abs(value))) {
    throw std::runtime_error("cleantheory: quadrature did not converge (error estimate " +
                             std::to_string(error) + ")");
  }
  return value;
}

double speed(double h, double p) { return std::abs(group_velocity(h, p)); }

// Root of speed(h, p) = target on [lo, hi] where the speed is monotone.
double bisect_speed(double h, double target, double lo, double hi, bool increasing) {
  for (int it = 0; it < 200 && hi - lo > 1e-15; ++it) {
    const double mid = 0.5 * (lo + hi);
    const bool below = speed(h, mid) < target;
    if (below == increasing) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

struct LightCone {
  double fast_lo = 0.0;  // modes in [fast_lo, fast_hi] satisfy 2 |omega'| t > D
  double fast_hi = 0.0;
};

LightCone light_cone(double h, double d, double t) {
  const MaxVelocity vmax = max_group_velocity(h);
  const double target = d / (2.0 * t);
  if (target >= vmax.velocity) return {};
  LightCone cone;
  cone.fast_lo = speed(h, 0.0) >= target ? 0.0 : bisect_speed(h, target, 0.0, vmax.momentum, true);
  cone.fast_hi = speed(h, kPi) >= target ? kPi : bisect_speed(h, target, vmax.momentum, kPi, false);
  return cone;
}

// (1/pi) [ t int_slow 2|omega'| f + D int_fast f ] over p in [0, pi]; the
// integrands are even in p.
template <class F>
double pair_counting(const CleanQuenchSpec& spec, double d, double t, F mode_weight) {
  spec.validate();
  if (std::abs(spec.h) > 1.0 || std::abs(spec.h0) > 1.0) {
    throw std::domain_error("semiclassical: requires |h|, |h0| <= 1");
  }
  if (d < 0.0 || t < 0.0) throw std::invalid_argument("semiclassical: need D >= 0, t >= 0");
  if (d == 0.0 || t == 0.0) return 0.0;
  const double h = spec.h;
  const auto slow = [&](double p) { return 2.0 * speed(h, p) * mode_weight(p); };
  const LightCone cone = light_cone(h, d, t);
  double result = 0.0;
  if (cone.fast_hi > cone.fast_lo) {
    result += t * (integrate(slow, 0.0, cone.fast_lo) + integrate(slow, cone.fast_hi, kPi));
    result += d * integrate(mode_weight, cone.fast_lo, cone.fast_hi);
  } else {
    result += t * integrate(slow, 0.0, kPi);
  }
  return result / kPi;
}

}  // namespace

void CleanQuenchSpec::validate() const {
  if (!(h0 >= 0.0) || !(h >= 0.0) || !std::isfinite(h0) || !std::isfinite(h)) {
    throw std::invalid_argument("CleanQuenchSpec: fields must be finite and >= 0");
  }
  if (n_sites && *n_sites < 2) throw std::invalid_argument("CleanQuenchSpec: N must be >= 2");
}

namespace {

// 1 - 2 h cos p + h^2 without cancellation near h = 1, p = 0.
double gap_squared(double h, double p) {
  const double s = std::sin(0.5 * p);
  return (1.0 - h) * (1.0 - h) + 4.0 * h * s * s;
}

}  // namespace

double dispersion(double h, double p) { return 2.0 * std::sqrt(gap_squared(h, p)); }

double group_velocity(double h, double p) {
  const double root = std::sqrt(gap_squared(h, p));
  if (root == 0.0) return 2.0;  // h = 1, p = 0: one-sided limit 2 cos(p / 2)
  return 2.0 * h * std::sin(p) / root;
}

MaxVelocity max_group_velocity(double h) {
  constexpr int kGrid = 2048;
  int best = 0;
  double best_v = -1.0;
  for (int i = 0; i <= kGrid; ++i) {
    const double v = speed(h, kPi * i / kGrid);
    if (v > best_v) {
      best_v = v;
      best = i;
    }
  }
  // Golden-section refinement inside the bracketing grid cells.
  double lo = kPi * std::max(0, best - 1) / kGrid;
  double hi = kPi * std::min(kGrid, best + 1) / kGrid;
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double x1 = hi - inv_phi * (hi - lo);
  double x2 = lo + inv_phi * (hi - lo);
  double f1 = speed(h, x1);
  double f2 = speed(h, x2);
  while (hi - lo > 1e-13) {
    if (f1 < f2) {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + inv_phi * (hi - lo);
      f2 = speed(h, x2);
    } else {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - inv_phi * (hi - lo);
      f1 = speed(h, x1);
    }
  }
  MaxVelocity out{speed(h, 0.5 * (lo + hi)), 0.5 * (lo + hi)};
  // The maximum may sit on an end point of [0, pi].
  for (const double edge : {0.0, kPi}) {
    if (speed(h, edge) > out.velocity) out = {speed(h, edge), edge};
  }
  return out;
}

double cos_angle_diff(double h0, double h, double p) {
  const double w = dispersion(h, p);
  const double w0 = dispersion(h0, p);
  if (w < 1e-12 || w0 < 1e-12) {
    throw std::domain_error("cos_angle_diff: dispersion vanishes at p = " + std::to_string(p));
  }
  const double c = 4.0 * (1.0 + h * h0 - (h + h0) * std::cos(p)) / (w * w0);
  return std::clamp(c, -1.0, 1.0);
}

double bogoliubov_angle_diff(double h0, double h, double p) {
  return std::acos(cos_angle_diff(h0, h, p));
}

double occupation(double h0, double h, double p) {
  return 0.5 * (1.0 - cos_angle_diff(h0, h, p));
}

double semiclassical_entropy(const CleanQuenchSpec& spec, double d, double t) {
  return pair_counting(spec, d, t, [&](double p) {
    return binary_entropy(occupation(spec.h0, spec.h, p));
  });
}

double semiclassical_correlation(const CleanQuenchSpec& spec, double d, double t) {
  return pair_counting(spec, d, t, [&](double p) {
    const double c = cos_angle_diff(spec.h0, spec.h, p);
    if (c <= 0.0) throw std::domain_error("semiclassical_correlation: cos Delta_p <= 0");
    return std::log(c);
  });
}

double effective_temperature(double h0, double h, double p) {
  const double n = occupation(h0, h, p);
  if (n <= 0.0) return 0.0;
  if (n >= 0.5) return std::numeric_limits<double>::infinity();
  return dispersion(h, p) / std::log((1.0 - n) / n);
}

GgeResult gge(const CleanQuenchSpec& spec) {
  spec.validate();
  GgeResult out;
  if (spec.h0 == spec.h) {
    out.xi_eff = std::numeric_limits<double>::infinity();
    return out;
  }
  // ln tanh(omega_p / 2 T_eff(p)) = ln(1 - 2 n_p) = ln cos Delta_p.
  out.inverse_xi_eff = -integrate(
      [&](double p) {
        const double c = cos_angle_diff(spec.h0, spec.h, p);
        if (c <= 0.0) throw std::domain_error("gge: occupation reaches 1/2");
        return std::log(c);
      },
      0.0, kPi) / kPi;
  out.inverse_xi_eff = std::max(out.inverse_xi_eff, 0.0);
  out.xi_eff = out.inverse_xi_eff > 0.0 ? 1.0 / out.inverse_xi_eff
                                        : std::numeric_limits<double>::infinity();
  out.entropy_density = integrate(
      [&](double p) { return binary_entropy(occupation(spec.h0, spec.h, p)); }, 0.0, kPi) / kPi;
  if (spec.n_sites) {
    const std::size_t n = *spec.n_sites;
    double total = 0.0;
    for (std::size_t m = 1; m <= n; ++m) {
      const double p = (2.0 * static_cast<double>(m) - 1.0) * kPi / static_cast<double>(n);
      total += binary_entropy(occupation(spec.h0, spec.h, p));
    }
    out.entropy_total = total;
  } else {
    out.entropy_total = out.entropy_density;
  }
  return out;
}

double gge_block_entropy(const CleanQuenchSpec& spec, double d) {
  const GgeResult g = gge(spec);
  if (spec.n_sites) return d / static_cast<double>(*spec.n_sites) * g.entropy_total;
  return d * g.entropy_density;
}

StaticLaw static_laws(double coupling, double field) {
  if (!(coupling > 0.0) || !(field > 0.0)) {
    throw std::invalid_argument("static_laws: need J > 0 and h > 0");
  }
  const double ratio = field / coupling;
  if (std::abs(ratio - 1.0) < 1e-12) {
    throw std::domain_error("static_laws: critical point J = h has no finite law");
  }
  StaticLaw law;
  if (ratio < 1.0) {
    law.regime = StaticRegime::Perimeter;
    law.limit_correlator = std::pow(1.0 - ratio * ratio, 0.25);
    law.wilson_coefficient = -0.25 * std::log1p(-ratio * ratio);
    law.correlation_length = std::numeric_limits<double>::infinity();
  } else {
    law.regime = StaticRegime::Area;
    law.correlation_length = 1.0 / (1.0 - coupling / field);
  }
  return law;
}

double revival_period(std::size_t n_sites, double h) {
  if (!(h > 0.0) || h > 1.0) {
    throw std::domain_error("revival_period: defined for 0 < h <= 1");
  }
  return static_cast<double>(n_sites) / (2.0 * max_group_velocity(h).velocity);
}

}  // namespace topoloc
