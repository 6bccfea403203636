#pragma once

#include <cstddef>
#include <string>
#include <utility>

#include "popa/errors.hpp"
#include "popa/scalar.hpp"
#include "popa/vec.hpp"

namespace popa {

inline constexpr std::size_t kMaxDim = 16;

/// The circle group G_rho(X) on X = R^d: the open half-space
/// {x : eta(x) = 1 + rho(x) > 0} under x o y = x + y + rho(x)*y.
/// 0 is the neutral element; the group is non-abelian for d >= 2, rho != 0.
///
/// Membership is tested as eta(x) > eps_mem. The guard keeps inverses
/// -x/eta(x) away from the boundary hyperplane, where cancellation is
/// catastrophic in floating point; the exact kind uses eps_mem = 0.
template <class S>
struct PopaCtx {
  std::size_t dim = 0;
  LinFunc<S> rho;
  S eps_mem{};
};

template <class S>
PopaCtx<S> make_ctx(std::vector<S> rho_coeffs,
                    S eps_mem = scalar_traits<S>::membership_guard()) {
  PopaCtx<S> ctx;
  ctx.dim = rho_coeffs.size();
  if (ctx.dim == 0 || ctx.dim > kMaxDim)
    throw DimensionMismatch("dimension must be in 1.." + std::to_string(kMaxDim) +
                            ", got " + std::to_string(ctx.dim));
  for (const S& c : rho_coeffs)
    if (!scalar_traits<S>::finite(c)) throw DomainViolation("non-finite rho coefficient");
  if (eps_mem < S{} || !(eps_mem < S(1)))
    throw DomainViolation("membership guard must satisfy 0 <= eps_mem < 1");
  ctx.rho = LinFunc<S>(std::move(rho_coeffs));
  ctx.eps_mem = eps_mem;
  return ctx;
}

template <class S>
void check_dim(const PopaCtx<S>& ctx, const Vec<S>& x) {
  if (x.size() != ctx.dim)
    throw DimensionMismatch("vector length " + std::to_string(x.size()) +
                            " does not match context dimension " +
                            std::to_string(ctx.dim));
}

/// eta(x) = 1 + rho(x). Defined on all of X; positivity is what membership
/// tests, so the raw value is returned even off the group.
template <class S>
S eta(const PopaCtx<S>& ctx, const Vec<S>& x) {
  check_dim(ctx, x);
  return S(1) + ctx.rho(x);
}

template <class S>
bool is_member(const PopaCtx<S>& ctx, const Vec<S>& x) {
  return eta(ctx, x) > ctx.eps_mem;
}

/// x o y = x + y + rho(x)*y without the membership check. Closure is only
/// guaranteed inside the group; callers outside checked paths own the risk.
template <class S>
Vec<S> circle_unchecked(const PopaCtx<S>& ctx, const Vec<S>& x, const Vec<S>& y) {
  check_dim(ctx, x);
  check_dim(ctx, y);
  const S f = ctx.rho(x) + S(1);
  Vec<S> r(ctx.dim);
  for (std::size_t i = 0; i < ctx.dim; ++i) r[i] = x[i] + f * y[i];
  return r;
}

template <class S>
Vec<S> circle(const PopaCtx<S>& ctx, const Vec<S>& x, const Vec<S>& y) {
  if (!is_member(ctx, x)) throw NonMember("left circle argument is not a group member");
  if (!is_member(ctx, y)) throw NonMember("right circle argument is not a group member");
  return circle_unchecked(ctx, x, y);
}

/// Two-sided inverse -x/eta(x); eta(inverse(x)) = 1/eta(x).
template <class S>
Vec<S> inverse(const PopaCtx<S>& ctx, const Vec<S>& x) {
  if (!is_member(ctx, x)) throw NonMember("inverse requested off the group");
  const S e = eta(ctx, x);
  Vec<S> r(ctx.dim);
  for (std::size_t i = 0; i < ctx.dim; ++i) r[i] = -x[i] / e;
  return r;
}

template <class S>
Vec<S> identity(const PopaCtx<S>& ctx) {
  return vzero<S>(ctx.dim);
}

}  // namespace popa
