#pragma once

#include <cmath>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "popa/errors.hpp"
#include "popa/numeric.hpp"
#include "popa/report.hpp"
#include "popa/rng.hpp"
#include "popa/scalar.hpp"

namespace popa {

/// Scalar circle-group parameter in [0, infinity]. 0 is the additive group
/// (R, +), a finite r > 0 is the scalar circle group on (-1/r, inf), and
/// infinity is the multiplicative group (R_+, x).
struct ExtParam {
  enum class Kind { Zero, Fin, Inf };
  Kind kind = Kind::Zero;
  double value = 0.0;  // Fin only, > 0

  static ExtParam zero() { return {Kind::Zero, 0.0}; }
  static ExtParam fin(double r) {
    if (!(r > 0.0)) throw DomainViolation("finite circle parameter must be positive");
    return {Kind::Fin, r};
  }
  static ExtParam inf() { return {Kind::Inf, 0.0}; }

  std::string str() const {
    switch (kind) {
      case Kind::Zero: return "0";
      case Kind::Inf: return "inf";
      default: return scalar_traits<double>::str(value);
    }
  }
};

/// Open interval; +-infinity for unbounded sides.
struct Interval {
  double lo = -std::numeric_limits<double>::infinity();
  double hi = std::numeric_limits<double>::infinity();
  bool contains(double t) const { return t > lo && t < hi; }
};

inline Interval ext_domain(const ExtParam& p) {
  switch (p.kind) {
    case ExtParam::Kind::Zero: return {};
    case ExtParam::Kind::Fin: return {-1.0 / p.value, std::numeric_limits<double>::infinity()};
    default: return {0.0, std::numeric_limits<double>::infinity()};
  }
}

inline double ext_circle(const ExtParam& p, double s, double t) {
  const Interval dom = ext_domain(p);
  if (!dom.contains(s) || !dom.contains(t))
    throw DomainViolation("circle argument outside the group domain");
  switch (p.kind) {
    case ExtParam::Kind::Zero: return s + t;
    case ExtParam::Kind::Fin: return s + t + p.value * s * t;
    default: return s * t;
  }
}

/// One homomorphism psi: G_rho(R) -> G_sigma(R) from the nine-cell table,
/// determined by the endpoint parameters and a free exponent kappa.
///
/// All cells are evaluated through exp-minus-one of kappa-scaled
/// log-one-plus forms, so the parameter-zero cells are the literal limits
/// of their neighbours (deviation O(sigma) across cells).
struct ScalarHom {
  ExtParam rho;
  ExtParam sigma;
  double kappa = 0.0;
};

inline double scalar_hom_eval(const ScalarHom& m, double t) {
  if (!ext_domain(m.rho).contains(t))
    throw DomainViolation("argument outside the domain group");

  // z = kappa * (additive coordinate of t in the domain group).
  double z;
  switch (m.rho.kind) {
    case ExtParam::Kind::Zero: z = m.kappa * t; break;
    case ExtParam::Kind::Fin: z = (m.kappa / m.rho.value) * std::log1p(m.rho.value * t); break;
    default: z = m.kappa * std::log(t); break;
  }
  // Map the additive coordinate into the range group.
  switch (m.sigma.kind) {
    case ExtParam::Kind::Zero: return z;
    case ExtParam::Kind::Fin: return scaled_expm1(z, m.sigma.value);
    default: return std::exp(z);
  }
}

/// Residual of psi(s o_rho t) = psi(s) o_sigma psi(t); relative once
/// magnitudes exceed 1.
inline Report scalar_hom_residual(const ScalarHom& m,
                                  const std::vector<std::pair<double, double>>& pairs) {
  Report rep;
  rep.check = "scalar homomorphism residual";
  rep.samples = pairs.size();
  for (const auto& [s, t] : pairs) {
    const double lhs = scalar_hom_eval(m, ext_circle(m.rho, s, t));
    const double rhs = ext_circle(m.sigma, scalar_hom_eval(m, s), scalar_hom_eval(m, t));
    rep.max_residual = std::max(rep.max_residual, rel_gap(lhs, rhs));
  }
  return rep;
}

/// Draws a point of the domain group, bounded away from the boundary.
inline double draw_in_domain(const ExtParam& p, Rng& rng) {
  switch (p.kind) {
    case ExtParam::Kind::Zero: return rng.uniform(-3.0, 3.0);
    case ExtParam::Kind::Fin: return rng.uniform(-0.9 / p.value, 4.0);
    default: return rng.uniform(0.1, 5.0);
  }
}

inline Report scalar_hom_residual_sweep(const ScalarHom& m, std::size_t n_pairs,
                                        std::uint64_t seed, double tol = 1e-10) {
  struct Partial { double worst = 0.0; };
  Partial total = chunked_reduce(
      seed, n_pairs, 256, Partial{},
      [&](std::size_t begin, std::size_t end, Rng& rng) {
        Partial part;
        for (std::size_t i = begin; i < end; ++i) {
          const double s = draw_in_domain(m.rho, rng);
          const double t = draw_in_domain(m.rho, rng);
          const double lhs = scalar_hom_eval(m, ext_circle(m.rho, s, t));
          const double rhs =
              ext_circle(m.sigma, scalar_hom_eval(m, s), scalar_hom_eval(m, t));
          part.worst = std::max(part.worst, rel_gap(lhs, rhs));
        }
        return part;
      },
      [](Partial a, Partial b) {
        a.worst = std::max(a.worst, b.worst);
        return a;
      });
  Report rep;
  rep.check = "scalar homomorphism residual sweep";
  rep.samples = n_pairs;
  rep.seed = seed;
  rep.tolerance = tol;
  rep.max_residual = total.worst;
  rep.pass = total.worst <= tol;
  return rep;
}

/// Gap between the sigma = eps column and the sigma = 0 column at one point:
/// measures how seamlessly the parameter-zero convention joins the cells.
inline double cell_continuity_gap(const ExtParam& rho, double t, double kappa,
                                  double sigma_eps) {
  const ScalarHom near_zero{rho, ExtParam::fin(sigma_eps), kappa};
  const ScalarHom at_zero{rho, ExtParam::zero(), kappa};
  return std::fabs(scalar_hom_eval(near_zero, t) - scalar_hom_eval(at_zero, t));
}

}  // namespace popa
