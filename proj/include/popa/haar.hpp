#pragma once

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "popa/errors.hpp"
#include "popa/group.hpp"
#include "popa/rng.hpp"

namespace popa::haar {

/// Axis-aligned box inside the group domain.
struct Box {
  Vec<double> lo, hi;

  std::size_t dim() const { return lo.size(); }
  double volume() const {
    double v = 1.0;
    for (std::size_t i = 0; i < lo.size(); ++i) v *= hi[i] - lo[i];
    return v;
  }
};

enum class Side { Right, Left };

/// Invariant density on the group: 1/eta(x) for the right-invariant measure,
/// 1/eta(x)^d for the left-invariant one.
inline double density(const PopaCtx<double>& ctx, const Vec<double>& x, Side side) {
  if (!is_member(ctx, x)) throw NonMember("density evaluated off the group");
  const double e = eta(ctx, x);
  return side == Side::Right ? 1.0 / e
                             : std::pow(e, -static_cast<double>(ctx.dim));
}

/// eta is affine, so its minimum over a box sits at a corner picked
/// coordinatewise by the sign of rho.
inline double min_eta_over_box(const PopaCtx<double>& ctx, const Box& box) {
  if (box.dim() != ctx.dim) throw DimensionMismatch("box dimension mismatch");
  double e = 1.0;
  for (std::size_t i = 0; i < ctx.dim; ++i) {
    if (!(box.hi[i] > box.lo[i])) throw DomainViolation("empty box side");
    const double r = ctx.rho.coeffs[i];
    e += std::min(r * box.lo[i], r * box.hi[i]);
  }
  return e;
}

inline void check_box_inside(const PopaCtx<double>& ctx, const Box& box) {
  if (!(min_eta_over_box(ctx, box) > ctx.eps_mem))
    throw BoxOutsideDomain("box reaches the boundary hyperplane eta = 0");
}

struct Job {
  PopaCtx<double> ctx;
  Box box;
  Side side = Side::Right;
  std::size_t n = 1000;
  std::uint64_t seed = 0;
};

inline void check_job(const Job& job) {
  if (job.n < 1000) throw DomainViolation("Monte Carlo needs n >= 1000");
  check_box_inside(job.ctx, job.box);
}

struct McEstimate {
  double value = 0.0;
  double std_error = 0.0;
  std::size_t n = 0;
};

namespace detail {

struct Moments {
  double sum = 0.0, sumsq = 0.0;
};

/// vol(box) * mean of `weight` over uniform box samples, with chunk-ordered
/// deterministic reduction. `weight` sees the raw uniform sample.
template <class Weight>
McEstimate mc_over_box(const Box& box, std::size_t n, std::uint64_t seed, Weight weight) {
  const std::size_t d = box.dim();
  const Moments m = chunked_reduce(
      seed, n, 4096, Moments{},
      [&](std::size_t begin, std::size_t end, Rng& rng) {
        Moments part;
        Vec<double> x(d);
        for (std::size_t i = begin; i < end; ++i) {
          for (std::size_t j = 0; j < d; ++j) x[j] = rng.uniform(box.lo[j], box.hi[j]);
          const double w = weight(x);
          part.sum += w;
          part.sumsq += w * w;
        }
        return part;
      },
      [](Moments a, Moments b) {
        a.sum += b.sum;
        a.sumsq += b.sumsq;
        return a;
      });
  const double nn = static_cast<double>(n);
  const double mean = m.sum / nn;
  const double var = std::max(0.0, m.sumsq / nn - mean * mean);
  McEstimate est;
  est.value = box.volume() * mean;
  est.std_error = box.volume() * std::sqrt(var / nn);
  est.n = n;
  return est;
}

}  // namespace detail

/// Monte Carlo estimate of the invariant measure of the box: plain uniform
/// proposals with density weights (the density is bounded on a compact box).
inline McEstimate measure_mc(const Job& job) {
  check_job(job);
  return detail::mc_over_box(job.box, job.n, job.seed, [&](const Vec<double>& x) {
    return density(job.ctx, x, job.side);
  });
}

/// Measure of the translated region (box o a for Right, a o box for Left),
/// estimated by pushing the SAME seeded sample stream through the affine
/// translate with its exact Jacobian: det(I + a rho^T) = eta(a) on the
/// right, det(eta(a) I) = eta(a)^d on the left. Same seed + a = 0 gives an
/// estimate identical to measure_mc.
inline McEstimate translated_measure_mc(const Job& job, const Vec<double>& a,
                                        Side translate_side) {
  check_job(job);
  check_dim(job.ctx, a);
  if (!is_member(job.ctx, a)) throw NonMember("translation element off the group");
  const double ea = eta(job.ctx, a);
  if (!(min_eta_over_box(job.ctx, job.box) * ea > job.ctx.eps_mem))
    throw BoxOutsideDomain("translated box reaches the boundary");
  const double d = static_cast<double>(job.ctx.dim);
  const double jac = translate_side == Side::Right ? ea : std::pow(ea, d);
  return detail::mc_over_box(job.box, job.n, job.seed, [&](const Vec<double>& x) {
    const Vec<double> y = translate_side == Side::Right
                              ? circle_unchecked(job.ctx, x, a)
                              : circle_unchecked(job.ctx, a, x);
    return density(job.ctx, y, job.side) * jac;
  });
}

struct InvarianceReport {
  McEstimate base;
  McEstimate translated;
  double deviation = 0.0;
  double combined_se = 0.0;
  bool pass = false;
};

/// Compares mu(box) with the matching translate: the exponent-1 density
/// against right translation, the exponent-d density against left
/// translation. Pass means agreement within 3 combined standard errors.
inline InvarianceReport invariance_check(const PopaCtx<double>& ctx, const Box& box,
                                         const Vec<double>& a, Side side, std::size_t n,
                                         std::uint64_t seed) {
  Job job{ctx, box, side, n, seed};
  InvarianceReport rep;
  rep.base = measure_mc(job);
  rep.translated = translated_measure_mc(job, a, side);
  rep.deviation = std::fabs(rep.base.value - rep.translated.value);
  rep.combined_se = std::hypot(rep.base.std_error, rep.translated.std_error);
  rep.pass = rep.deviation <= 3.0 * rep.combined_se;
  return rep;
}

}  // namespace popa::haar
