#pragma once

#include "popa/group.hpp"
#include "popa/rng.hpp"
#include "popa/scalar.hpp"

namespace popa {

/// Draws a member of G_rho with eta(x) kept away from the boundary.
inline Vec<double> random_member(const PopaCtx<double>& ctx, Rng& rng, double lo = -2.0,
                                 double hi = 2.0, double eta_min = 0.05) {
  for (int tries = 0; tries < 100000; ++tries) {
    Vec<double> x(ctx.dim);
    for (auto& c : x) c = rng.uniform(lo, hi);
    if (eta(ctx, x) > eta_min) return x;
  }
  throw Error("failed to draw a group member; shrink the box or rho");
}

inline Rational random_rational(Rng& rng, int num_range = 6, int den_range = 4) {
  return Rational(rng.uniform_int(-num_range, num_range),
                  rng.uniform_int(1, den_range));
}

inline Vec<Rational> random_vec_q(std::size_t d, Rng& rng, int num_range = 6,
                                  int den_range = 4) {
  Vec<Rational> x(d);
  for (auto& c : x) c = random_rational(rng, num_range, den_range);
  return x;
}

inline Vec<Rational> random_member_q(const PopaCtx<Rational>& ctx, Rng& rng,
                                     int num_range = 6, int den_range = 4) {
  for (int tries = 0; tries < 100000; ++tries) {
    Vec<Rational> x = random_vec_q(ctx.dim, rng, num_range, den_range);
    if (is_member(ctx, x)) return x;
  }
  throw Error("failed to draw an exact group member");
}

}  // namespace popa
