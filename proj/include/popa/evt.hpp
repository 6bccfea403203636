#pragma once

#include <cmath>
#include <cstddef>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "popa/errors.hpp"
#include "popa/numeric.hpp"
#include "popa/report.hpp"

namespace popa::evt {

/// Extreme-value kernel parameters: E(t) = kappa (t^gamma - 1)/gamma with
/// the gamma = 0 limit kappa log t, and auxiliary A(t) = t^gamma.
struct EvtParams {
  double kappa = 1.0;
  double gamma = 0.0;
};

inline double evt_E(const EvtParams& p, double t) {
  if (!(t > 0.0)) throw DomainViolation("kernel argument must be positive");
  const double lt = std::log(t);
  return p.kappa * lt * expm1_over(p.gamma * lt);
}

inline double evt_A(double gamma, double t) {
  if (!(t > 0.0)) throw DomainViolation("auxiliary argument must be positive");
  return std::pow(t, gamma);
}

/// Residual of the multiplicative Goldie identity E(xy) = E(x)A(y) + E(y).
inline Report evt_goldie_residual(const EvtParams& p,
                                  const std::vector<std::pair<double, double>>& pairs) {
  Report rep;
  rep.check = "extreme-value Goldie residual";
  for (const auto& [x, y] : pairs) {
    const double lhs = evt_E(p, x * y);
    const double rhs = evt_E(p, x) * evt_A(p.gamma, y) + evt_E(p, y);
    rep.max_residual = std::max(rep.max_residual, std::fabs(lhs - rhs));
    ++rep.samples;
  }
  return rep;
}

/// Generalised extreme-value CDF exp(-(1+gamma x)^{-1/gamma}), with the
/// Gumbel branch exp(-e^{-x}) for |gamma| below 1e-8. Outside the support
/// {1 + gamma x > 0} the CDF is extended by its monotone limits: 0 on the
/// lower-tail side, 1 on the upper-tail side.
inline double gev_cdf(double gamma, double x) {
  if (std::fabs(gamma) < 1e-8) return std::exp(-std::exp(-x));
  const double z = 1.0 + gamma * x;
  if (z <= 0.0) return gamma > 0.0 ? 0.0 : 1.0;
  return std::exp(-std::exp(-std::log(z) / gamma));
}

struct EvtFit {
  EvtParams params;
  double residual = 0.0;     // max |fit - observation|
  bool degenerate = false;   // all observations ~ 0: gamma unidentifiable
};

namespace detail {

inline double basis_at(double gamma, double t) {
  const double lt = std::log(t);
  return lt * expm1_over(gamma * lt);
}

/// Closed-form kappa and SSE at a fixed gamma (regression through the
/// origin: E(1) = 0 by construction).
inline std::pair<double, double> kappa_sse(double gamma,
                                           const std::vector<std::pair<double, double>>& pts) {
  double bb = 0, by = 0, yy = 0;
  for (const auto& [t, y] : pts) {
    const double b = basis_at(gamma, t);
    bb += b * b;
    by += b * y;
    yy += y * y;
  }
  if (bb == 0.0) return {0.0, yy};
  const double kappa = by / bb;
  return {kappa, yy - kappa * by};
}

}  // namespace detail

/// Fits (kappa, gamma) to samples (t_i, E_i): coarse scan on gamma over
/// [-10, 10], golden-section refinement to 1e-6, closed-form kappa inside.
inline EvtFit fit_E(const std::vector<std::pair<double, double>>& samples) {
  if (samples.size() < 3) throw DomainViolation("need at least three samples");
  double y_scale = 0, y_min = samples[0].second, y_max = samples[0].second;
  for (const auto& [t, y] : samples) {
    if (!(t > 0.0)) throw DomainViolation("sample abscissa must be positive");
    y_scale = std::max(y_scale, std::fabs(y));
    y_min = std::min(y_min, y);
    y_max = std::max(y_max, y);
  }
  EvtFit out;
  if (y_scale <= 1e-12) {
    out.degenerate = true;
    out.params.kappa = 0.0;
    return out;
  }
  if (y_max - y_min == 0.0) throw DomainViolation("observations are all equal");

  double best_gamma = 0, best_sse = std::numeric_limits<double>::infinity();
  for (int i = 0; i <= 400; ++i) {
    const double gamma = -10.0 + 0.05 * i;
    const double sse = detail::kappa_sse(gamma, samples).second;
    if (sse < best_sse) {
      best_sse = sse;
      best_gamma = gamma;
    }
  }
  double lo = std::max(-10.0, best_gamma - 0.05);
  double hi = std::min(10.0, best_gamma + 0.05);
  const double phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = hi - phi * (hi - lo), b = lo + phi * (hi - lo);
  double fa = detail::kappa_sse(a, samples).second;
  double fb = detail::kappa_sse(b, samples).second;
  while (hi - lo > 1e-6) {
    if (fa < fb) {
      hi = b; b = a; fb = fa;
      a = hi - phi * (hi - lo);
      fa = detail::kappa_sse(a, samples).second;
    } else {
      lo = a; a = b; fa = fb;
      b = lo + phi * (hi - lo);
      fb = detail::kappa_sse(b, samples).second;
    }
  }
  out.params.gamma = (lo + hi) / 2.0;
  out.params.kappa = detail::kappa_sse(out.params.gamma, samples).first;
  for (const auto& [t, y] : samples)
    out.residual = std::max(out.residual, std::fabs(evt_E(out.params, t) - y));
  return out;
}

}  // namespace popa::evt
