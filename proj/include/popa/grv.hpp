#pragma once

#include <cmath>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "popa/errors.hpp"
#include "popa/numeric.hpp"
#include "popa/report.hpp"
#include "popa/vec.hpp"

namespace popa::grv {

using VecFn = std::function<Vec<double>(const Vec<double>&)>;
using ScalarFn = std::function<double(const Vec<double>&)>;

/// Geometric evaluation schedule t_k = t0 * ratio^k with a streak-based
/// convergence rule: done once `streak` consecutive relative deltas fall
/// below tol_rel. No extrapolation: the limits in scope drift slowly and a
/// plain streak gives honest failure signals.
struct Schedule {
  double t0 = 1.0;
  double ratio = 4.0;
  int k_max = 60;
  double tol_rel = 1e-6;
  int streak = 3;
};

inline void check_schedule(const Schedule& s) {
  if (!(s.t0 > 0) || !(s.ratio > 1) || s.k_max < 1 || !(s.tol_rel > 0) || s.streak < 2)
    throw DomainViolation("bad schedule: need t0>0, ratio>1, k_max>=1, tol>0, streak>=2");
}

/// A regular-variation problem instance: primary f, self-equivarying phi,
/// norming h. The kernel is K(x) = lim_t [f(tx + x phi(tx)) - f(tx)]/h(tx).
struct Problem {
  std::size_t dim = 1;
  VecFn f;
  ScalarFn phi;
  ScalarFn h;
  Schedule schedule;
};

struct LimitEstimate {
  Vec<double> value;
  bool converged = false;
  std::vector<double> last_deltas;
  double t_final = 0.0;
  int steps = 0;

  double scalar() const { return value.empty() ? 0.0 : value[0]; }
};

namespace detail {

/// Runs the streak rule over term(t_k). Throws NonConvergent at k_max.
template <class Term>
LimitEstimate run_schedule(const Schedule& sched, Term term,
                           const std::string& what) {
  check_schedule(sched);
  LimitEstimate est;
  Vec<double> prev;
  int streak = 0;
  double t = sched.t0;
  for (int k = 0; k <= sched.k_max; ++k, t *= sched.ratio) {
    Vec<double> cur = term(t);
    if (!vfinite(cur)) throw NonConvergent(what + ": non-finite term at t = " +
                                           scalar_traits<double>::str(t));
    if (k > 0) {
      const double delta = vrel_gap(cur, prev);
      est.last_deltas.push_back(delta);
      if (est.last_deltas.size() > 8) est.last_deltas.erase(est.last_deltas.begin());
      streak = delta <= sched.tol_rel ? streak + 1 : 0;
    }
    prev = std::move(cur);
    est.steps = k + 1;
    est.t_final = t;
    if (streak >= sched.streak) {
      est.value = prev;
      est.converged = true;
      return est;
    }
  }
  throw NonConvergent(what + ": no streak of " + std::to_string(sched.streak) +
                      " deltas below " + scalar_traits<double>::str(sched.tol_rel) +
                      " within k_max = " + std::to_string(sched.k_max));
}

}  // namespace detail

/// Kernel estimate K(x). The origin is the kernel's fixed zero and is
/// returned directly.
inline LimitEstimate kernel(const Problem& p, const Vec<double>& x) {
  if (x.size() != p.dim) throw DimensionMismatch("kernel probe length");
  if (vis_zero(x)) {
    LimitEstimate est;
    est.value = vzero<double>(p.dim);
    est.converged = true;
    est.t_final = p.schedule.t0;
    return est;
  }
  return detail::run_schedule(
      p.schedule,
      [&](double t) {
        const Vec<double> tx = vscale(t, x);
        const Vec<double> shifted = vaxpy(tx, p.phi(tx), x);
        const double den = p.h(tx);
        return vscale(1.0 / den, vsub(p.f(shifted), p.f(tx)));
      },
      "kernel limit");
}

/// Ray-restricted estimator: K(xi*u) computed along s -> infinity with the
/// substitution s = t*xi, i.e. [f(su + xi*u*phi(su)) - f(su)]/h(su).
inline LimitEstimate kernel_along_ray(const Problem& p, const Vec<double>& u, double xi) {
  if (u.size() != p.dim) throw DimensionMismatch("ray direction length");
  if (xi == 0.0 || vis_zero(u)) {
    LimitEstimate est;
    est.value = vzero<double>(p.dim);
    est.converged = true;
    est.t_final = p.schedule.t0;
    return est;
  }
  const Vec<double> x = vscale(xi, u);
  return detail::run_schedule(
      p.schedule,
      [&](double s) {
        const Vec<double> su = vscale(s, u);
        const Vec<double> shifted = vaxpy(su, p.phi(su), x);
        return vscale(1.0 / p.h(su), vsub(p.f(shifted), p.f(su)));
      },
      "ray kernel limit");
}

/// Norming-ratio limit g(x) = lim h(tx + x phi(tx))/h(tx); g(0) = 1.
inline LimitEstimate auxiliary(const Problem& p, const Vec<double>& x) {
  if (x.size() != p.dim) throw DimensionMismatch("auxiliary probe length");
  if (vis_zero(x)) {
    LimitEstimate est;
    est.value = {1.0};
    est.converged = true;
    est.t_final = p.schedule.t0;
    return est;
  }
  return detail::run_schedule(
      p.schedule,
      [&](double t) -> Vec<double> {
        const Vec<double> tx = vscale(t, x);
        const Vec<double> shifted = vaxpy(tx, p.phi(tx), x);
        return {p.h(shifted) / p.h(tx)};
      },
      "auxiliary limit");
}

/// Self-equivariance check along a ray: for each scalar v in the grid,
/// estimates eta_u(v) = lim phi(tu + v*u*phi(tu))/phi(tu), plus an O(t)
/// growth diagnostic on phi(tu)/t over the schedule.
struct SePoint {
  double v = 0.0;
  LimitEstimate eta;
};

struct SeReport {
  std::vector<SePoint> points;
  double growth_max = 0.0;   // max of phi(t u)/t over the schedule
  bool growth_bounded = true;
};

inline SeReport se_check(const ScalarFn& phi, const Vec<double>& u,
                         const std::vector<double>& v_grid, const Schedule& sched) {
  if (vis_zero(u)) throw ZeroDirection("self-equivariance needs a nonzero ray");
  check_schedule(sched);
  SeReport rep;
  for (double v : v_grid) {
    SePoint pt;
    pt.v = v;
    pt.eta = detail::run_schedule(
        sched,
        [&](double t) -> Vec<double> {
          const Vec<double> tu = vscale(t, u);
          const double p = phi(tu);
          if (!(p > 0.0))
            throw NonConvergent("phi is not positive along the ray at t = " +
                                scalar_traits<double>::str(t));
          const Vec<double> shifted = vaxpy(tu, v * p, u);
          return {phi(shifted) / p};
        },
        "self-equivariance ratio");
    rep.points.push_back(std::move(pt));
  }

  // Bounded growth: the tail of phi(tu)/t must not outgrow the head.
  std::vector<double> ratios;
  double t = sched.t0;
  for (int k = 0; k <= sched.k_max; ++k, t *= sched.ratio)
    ratios.push_back(std::fabs(phi(vscale(t, u))) / t);
  double head = 0.0, tail = 0.0;
  for (std::size_t i = 0; i < ratios.size(); ++i) {
    rep.growth_max = std::max(rep.growth_max, ratios[i]);
    if (i < ratios.size() / 2)
      head = std::max(head, ratios[i]);
    else
      tail = std::max(tail, ratios[i]);
  }
  rep.growth_bounded = tail <= 4.0 * head + 1e-12;
  return rep;
}

/// Residuals of the Goldie identities for candidate kernel K, auxiliary g,
/// and limit function eta, over collinear sample pairs (y on the ray of x):
///   K(x + eta(x) y) = K(x) + g(x) K(y)
///   g(x + eta(x) y) = g(x) g(y)
struct GfeSample {
  Vec<double> x;
  Vec<double> y;
};

inline Report gfe_residual(const VecFn& kernel_fn, const ScalarFn& g_fn,
                           const ScalarFn& eta_fn, const std::vector<GfeSample>& samples,
                           double collinear_tol = 1e-9) {
  Report rep;
  rep.check = "Goldie functional equation residual";
  for (const auto& [x, y] : samples) {
    check_same_dim(x, y);
    const double xx = vdot(x, x);
    if (xx == 0.0) {
      if (!vis_zero(y)) throw NotCollinear("sample pairs zero x with nonzero y");
    } else {
      const double xi = vdot(y, x) / xx;
      if (scalar_traits<double>::to_double(vnorm_inf(vsub(y, vscale(xi, x)))) >
          collinear_tol * (1.0 + scalar_traits<double>::to_double(vnorm_inf(y))))
        throw NotCollinear("sample y is not on the ray of x");
    }
    const Vec<double> arg = vaxpy(x, eta_fn(x), y);
    const Vec<double> klhs = kernel_fn(arg);
    const Vec<double> krhs = vaxpy(kernel_fn(x), g_fn(x), kernel_fn(y));
    rep.max_residual = std::max(rep.max_residual, vrel_gap(klhs, krhs));
    rep.max_residual =
        std::max(rep.max_residual, rel_gap(g_fn(arg), g_fn(x) * g_fn(y)));
    ++rep.samples;
  }
  return rep;
}

// ---------------------------------------------------------------------------
// Builtin bundles (d = 1), each with its analytic kernel for self-test.
// ---------------------------------------------------------------------------

struct Bundle {
  std::string name;
  Problem problem;
  std::function<double(double)> kernel_exact;  // at the estimator coordinate
  std::function<double(double)> g_exact;
  std::function<double(double)> eta_exact;
  // Maps a user probe to the estimator coordinate (identity except where the
  // kernel is naturally indexed multiplicatively).
  std::function<double(double)> probe_map;
  std::string note;
};

inline Bundle make_dehaan_bundle(double gamma) {
  Bundle b;
  b.name = "dehaan";
  b.problem.dim = 1;
  b.problem.f = [gamma](const Vec<double>& y) -> Vec<double> {
    if (!(y[0] > 0)) throw DomainViolation("dehaan primary needs positive argument");
    return {std::log(y[0]) * expm1_over(gamma * std::log(y[0]))};
  };
  b.problem.phi = [](const Vec<double>& y) { return y[0]; };
  b.problem.h = [gamma](const Vec<double>& y) { return std::pow(y[0], gamma); };
  // With phi = id the estimator compares f at s(1+z) and s, so the limit at
  // coordinate z is the multiplicative kernel at 1+z; probes map via x-1.
  b.kernel_exact = [gamma](double z) {
    return std::log1p(z) * expm1_over(gamma * std::log1p(z));
  };
  b.g_exact = [gamma](double z) { return pow1p(z, gamma); };
  b.eta_exact = [](double z) { return 1.0 + z; };
  b.probe_map = [](double x) { return x - 1.0; };
  b.note = "U(t)=(t^g-1)/g, a(t)=t^g; kernel at probe x is (x^g-1)/g";
  return b;
}

inline const Bundle& builtin_bundle(const std::string& name) {
  static const Bundle log_bundle = [] {
    Bundle b;
    b.name = "log";
    b.problem.dim = 1;
    b.problem.f = [](const Vec<double>& y) -> Vec<double> {
      if (!(y[0] > 0)) throw DomainViolation("log primary needs positive argument");
      return {std::log(y[0])};
    };
    b.problem.phi = [](const Vec<double>& y) { return y[0]; };
    b.problem.h = [](const Vec<double>&) { return 1.0; };
    b.kernel_exact = [](double x) { return std::log1p(x); };
    b.g_exact = [](double) { return 1.0; };
    b.eta_exact = [](double x) { return 1.0 + x; };
    b.probe_map = [](double x) { return x; };
    b.note = "f=log, phi=id, h=1; kernel log(1+x)";
    return b;
  }();
  static const Bundle exp_bundle = [] {
    Bundle b;
    b.name = "exp";
    b.problem.dim = 1;
    b.problem.f = [](const Vec<double>& y) -> Vec<double> { return {std::exp(y[0])}; };
    b.problem.phi = [](const Vec<double>&) { return 1.0; };
    b.problem.h = [](const Vec<double>& y) { return std::exp(y[0]); };
    b.kernel_exact = [](double x) { return std::expm1(x); };
    b.g_exact = [](double x) { return std::exp(x); };
    b.eta_exact = [](double) { return 1.0; };
    b.probe_map = [](double x) { return x; };
    b.note = "f=h=exp, phi=1; kernel e^x-1";
    return b;
  }();
  static const Bundle dehaan_bundle = make_dehaan_bundle(0.5);

  if (name == "log") return log_bundle;
  if (name == "exp") return exp_bundle;
  if (name == "dehaan") return dehaan_bundle;
  throw ParseError("unknown bundle '" + name + "'; builtins: log, exp, dehaan");
}

inline std::vector<std::string> builtin_names() { return {"log", "exp", "dehaan"}; }

}  // namespace popa::grv
