#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "popa/group.hpp"
#include "popa/linalg.hpp"
#include "popa/numeric.hpp"
#include "popa/radial.hpp"
#include "popa/report.hpp"
#include "popa/rng.hpp"
#include "popa/sampling.hpp"

namespace popa {

/// Continuous homomorphisms K: G_rho(X) -> G_sigma(Y) come in five validated
/// families. Each family formula satisfies K(x o_rho y) = K(x) o_sigma K(y)
/// exactly when its sufficiency constraint holds:
///
///   Zero                 K == 0
///   Linear   K(x) = Mx            with sigma(Mx) = rho(x), or M = 0
///   Power    K(x) = ((1+rho(x))^gamma - 1) v   with sigma(v) = 1
///   Log      K(x) = log(1+rho(x)) b            with sigma(b) = 0
///   Exp      K(x) = (e^{kap(x)} - 1) c         with sigma(c) = 1, rho == 0
///
/// The constraints come from expanding the homomorphy equation symbolically;
/// hom_validate is the arbiter and the residual sweep the oracle.
enum class HomFamily { Zero, Linear, Power, Log, Exp };

inline std::string family_name(HomFamily f) {
  switch (f) {
    case HomFamily::Zero: return "zero";
    case HomFamily::Linear: return "linear";
    case HomFamily::Power: return "power";
    case HomFamily::Log: return "log";
    default: return "exp";
  }
}

inline HomFamily family_from_name(const std::string& name) {
  if (name == "zero") return HomFamily::Zero;
  if (name == "linear") return HomFamily::Linear;
  if (name == "power") return HomFamily::Power;
  if (name == "log") return HomFamily::Log;
  if (name == "exp") return HomFamily::Exp;
  throw ParseError("unknown homomorphism family '" + name + "'");
}

struct HomSpec {
  HomFamily family = HomFamily::Zero;
  LinFunc<double> rho;    // functional on the domain X
  LinFunc<double> sigma;  // functional on the range Y
  Matrix m;               // Linear
  Vec<double> v;          // Power
  double gamma = 0.0;     // Power
  Vec<double> b;          // Log
  Vec<double> c;          // Exp
  LinFunc<double> kap;    // Exp
  bool validated = false;

  std::size_t dim_x() const { return rho.dim(); }
  std::size_t dim_y() const { return sigma.dim(); }
};

inline constexpr double kHomConstraintTol = 1e-10;

inline Report hom_validate(HomSpec& spec) {
  Report rep;
  rep.check = "homomorphism family constraints";
  rep.tolerance = kHomConstraintTol;
  auto fail = [&](const std::string& msg) {
    rep.pass = false;
    rep.notes.push_back(msg);
  };
  const std::size_t dx = spec.dim_x(), dy = spec.dim_y();
  if (dx == 0 || dx > kMaxDim || dy == 0 || dy > kMaxDim)
    fail("dimensions out of range");

  switch (spec.family) {
    case HomFamily::Zero:
      break;
    case HomFamily::Linear: {
      if (spec.m.rows != dy || spec.m.cols != dx) {
        fail("matrix shape mismatch");
        break;
      }
      if (spec.m.is_zero()) break;
      // sigma(M e_j) must equal rho_j for every basis direction.
      for (std::size_t j = 0; j < dx && rep.pass; ++j) {
        double sj = 0;
        for (std::size_t i = 0; i < dy; ++i) sj += spec.sigma.coeffs[i] * spec.m(i, j);
        const double gap = std::fabs(sj - spec.rho.coeffs[j]);
        rep.max_residual = std::max(rep.max_residual, gap);
        if (gap > kHomConstraintTol)
          fail("sigma∘M differs from rho in column " + std::to_string(j) +
               " by " + scalar_traits<double>::str(gap));
      }
      break;
    }
    case HomFamily::Power: {
      if (spec.v.size() != dy) { fail("direction v has wrong length"); break; }
      const double gap = std::fabs(spec.sigma(spec.v) - 1.0);
      rep.max_residual = std::max(rep.max_residual, gap);
      if (gap > kHomConstraintTol) fail("constraint sigma(v) = 1 violated by " +
                                        scalar_traits<double>::str(gap));
      break;
    }
    case HomFamily::Log: {
      if (spec.b.size() != dy) { fail("direction b has wrong length"); break; }
      const double gap = std::fabs(spec.sigma(spec.b));
      rep.max_residual = std::max(rep.max_residual, gap);
      if (gap > kHomConstraintTol) fail("constraint sigma(b) = 0 violated by " +
                                        scalar_traits<double>::str(gap));
      break;
    }
    case HomFamily::Exp: {
      if (spec.c.size() != dy || spec.kap.dim() != dx) {
        fail("exp parameters have wrong length");
        break;
      }
      const double gap = std::fabs(spec.sigma(spec.c) - 1.0);
      rep.max_residual = std::max(rep.max_residual, gap);
      if (gap > kHomConstraintTol) fail("constraint sigma(c) = 1 violated by " +
                                        scalar_traits<double>::str(gap));
      double rho_norm = 0;
      for (double r : spec.rho.coeffs) rho_norm = std::max(rho_norm, std::fabs(r));
      if (rho_norm > kHomConstraintTol)
        fail("exp family requires rho == 0 on the domain (|rho| = " +
             scalar_traits<double>::str(rho_norm) + ")");
      break;
    }
  }
  spec.validated = rep.pass;
  return rep;
}

inline Vec<double> hom_eval(const HomSpec& spec, const Vec<double>& x) {
  if (!spec.validated) throw Unvalidated("evaluate requires a validated spec");
  if (x.size() != spec.dim_x()) throw DimensionMismatch("hom argument length");
  const double r = spec.rho(x);
  if (!(1.0 + r > 0.0)) throw NonMember("hom argument off the domain group");
  switch (spec.family) {
    case HomFamily::Zero:
      return vzero<double>(spec.dim_y());
    case HomFamily::Linear:
      return matvec(spec.m, x);
    case HomFamily::Power:
      return vscale(pow1p_m1(r, spec.gamma), spec.v);
    case HomFamily::Log:
      return vscale(std::log1p(r), spec.b);
    default:
      return vscale(std::expm1(spec.kap(x)), spec.c);
  }
}

using HomFn = std::function<Vec<double>(const Vec<double>&)>;

inline HomFn as_callable(HomSpec spec) {
  if (!spec.validated) throw Unvalidated("callable requires a validated spec");
  return [spec = std::move(spec)](const Vec<double>& x) { return hom_eval(spec, x); };
}

// ---------------------------------------------------------------------------
// Constructors
// ---------------------------------------------------------------------------

inline HomSpec make_zero_hom(LinFunc<double> rho, LinFunc<double> sigma) {
  HomSpec s;
  s.family = HomFamily::Zero;
  s.rho = std::move(rho);
  s.sigma = std::move(sigma);
  Report rep = hom_validate(s);
  if (!rep.pass) throw ConstraintViolation(rep.notes.empty() ? "invalid" : rep.notes[0]);
  return s;
}

inline HomSpec make_linear_hom(LinFunc<double> rho, LinFunc<double> sigma, Matrix m) {
  HomSpec s;
  s.family = HomFamily::Linear;
  s.rho = std::move(rho);
  s.sigma = std::move(sigma);
  s.m = std::move(m);
  Report rep = hom_validate(s);
  if (!rep.pass) throw ConstraintViolation(rep.notes.empty() ? "invalid" : rep.notes[0]);
  return s;
}

inline HomSpec make_power_hom(LinFunc<double> rho, LinFunc<double> sigma, Vec<double> v,
                              double gamma) {
  HomSpec s;
  s.family = HomFamily::Power;
  s.rho = std::move(rho);
  s.sigma = std::move(sigma);
  s.v = std::move(v);
  s.gamma = gamma;
  Report rep = hom_validate(s);
  if (!rep.pass) throw ConstraintViolation(rep.notes.empty() ? "invalid" : rep.notes[0]);
  return s;
}

inline HomSpec make_log_hom(LinFunc<double> rho, LinFunc<double> sigma, Vec<double> b) {
  HomSpec s;
  s.family = HomFamily::Log;
  s.rho = std::move(rho);
  s.sigma = std::move(sigma);
  s.b = std::move(b);
  Report rep = hom_validate(s);
  if (!rep.pass) throw ConstraintViolation(rep.notes.empty() ? "invalid" : rep.notes[0]);
  return s;
}

/// Exp family: domain functional is identically zero by construction.
inline HomSpec make_exp_hom(LinFunc<double> sigma, Vec<double> c, LinFunc<double> kap) {
  HomSpec s;
  s.family = HomFamily::Exp;
  s.rho = LinFunc<double>(Vec<double>(kap.dim(), 0.0));
  s.sigma = std::move(sigma);
  s.c = std::move(c);
  s.kap = std::move(kap);
  Report rep = hom_validate(s);
  if (!rep.pass) throw ConstraintViolation(rep.notes.empty() ? "invalid" : rep.notes[0]);
  return s;
}

/// Radial constructor: given the image K(u) of a direction u with
/// rho(u) = 1, the whole ray behaviour is pinned. tau = sigma(K(u)) != 0
/// yields the Power family with gamma = log(1+tau)/log 2 and v = K(u)/tau;
/// tau -> 0 collapses to the Log family with b = K(u)/log 2.
inline HomSpec make_radial_hom(LinFunc<double> rho, LinFunc<double> sigma,
                               const Vec<double>& u, const Vec<double>& ku,
                               double tau_branch = 1e-8) {
  if (std::fabs(rho(u) - 1.0) > kHomConstraintTol)
    throw ConstraintViolation("radial constructor needs rho(u) = 1");
  const double tau = sigma(ku);
  if (std::fabs(tau) < tau_branch)
    return make_log_hom(std::move(rho), std::move(sigma),
                        vscale(1.0 / std::log(2.0), ku));
  return make_power_hom(std::move(rho), std::move(sigma), vscale(1.0 / tau, ku),
                        std::log1p(tau) / std::log(2.0));
}

// ---------------------------------------------------------------------------
// Residual oracle
// ---------------------------------------------------------------------------

struct ResidualReport : Report {
  Vec<double> argmax_x, argmax_y;
};

/// Worst componentwise deviation of K(x o_rho y) from K(x) o_sigma K(y)
/// over the given member pairs, with the offending pair retained.
inline ResidualReport hom_residual(const HomFn& k, const PopaCtx<double>& ctx_x,
                                   const PopaCtx<double>& ctx_y,
                                   const std::vector<std::pair<Vec<double>, Vec<double>>>& pairs) {
  ResidualReport rep;
  rep.check = "homomorphy residual";
  rep.samples = pairs.size();
  for (const auto& [x, y] : pairs) {
    const Vec<double> lhs = k(circle(ctx_x, x, y));
    const Vec<double> rhs = circle_unchecked(ctx_y, k(x), k(y));
    const double gap = scalar_traits<double>::to_double(vnorm_inf(vsub(lhs, rhs)));
    if (gap > rep.max_residual) {
      rep.max_residual = gap;
      rep.argmax_x = x;
      rep.argmax_y = y;
    }
  }
  return rep;
}

inline ResidualReport hom_residual_sweep(const HomFn& k, const PopaCtx<double>& ctx_x,
                                         const PopaCtx<double>& ctx_y, std::size_t n_pairs,
                                         std::uint64_t seed, double tol = 1e-9) {
  ResidualReport total = chunked_reduce(
      seed, n_pairs, 512, ResidualReport{},
      [&](std::size_t begin, std::size_t end, Rng& rng) {
        ResidualReport part;
        for (std::size_t i = begin; i < end; ++i) {
          const Vec<double> x = random_member(ctx_x, rng);
          const Vec<double> y = random_member(ctx_x, rng);
          const Vec<double> lhs = k(circle(ctx_x, x, y));
          const Vec<double> rhs = circle_unchecked(ctx_y, k(x), k(y));
          const double gap = scalar_traits<double>::to_double(vnorm_inf(vsub(lhs, rhs)));
          if (gap > part.max_residual) {
            part.max_residual = gap;
            part.argmax_x = x;
            part.argmax_y = y;
          }
        }
        return part;
      },
      [](ResidualReport a, ResidualReport b) {
        if (b.max_residual > a.max_residual) return b;
        return a;
      });
  total.check = "homomorphy residual sweep";
  total.samples = n_pairs;
  total.seed = seed;
  total.tolerance = tol;
  total.pass = total.max_residual <= tol;
  return total;
}

// ---------------------------------------------------------------------------
// Radial indices
// ---------------------------------------------------------------------------

/// The additive index gamma(x) = log(1 + sigma(K(x)))/log 2. It satisfies
/// gamma(a o b) = gamma(a) + gamma(b) because eta_sigma∘K is multiplicative.
inline double extract_gamma(const HomFn& k, const PopaCtx<double>& ctx_x,
                            const PopaCtx<double>& ctx_y, const Vec<double>& x) {
  if (!is_member(ctx_x, x)) throw NonMember("index probe off the domain group");
  if (ctx_x.rho(x) == 0.0) throw NullDirection("index needs rho(x) != 0");
  const double s = ctx_y.rho(k(x));
  if (!(1.0 + s > 0.0)) throw NonMember("image off the range group");
  return std::log1p(s) / std::log(2.0);
}

/// For a null direction u (rho(u) = 0) the image of the whole line through u
/// stays on the ray of K(u): K(xi*u) = lambda * K(u). Returns lambda and
/// verifies collinearity.
inline double radial_lambda(const HomFn& k, const PopaCtx<double>& ctx_x,
                            const PopaCtx<double>& ctx_y, const Vec<double>& u,
                            double xi, double tol = 1e-9) {
  if (ctx_x.rho(u) != 0.0)
    throw DomainViolation("radial factor is defined for null directions only");
  const Vec<double> ku = k(u);
  const double ku_norm = scalar_traits<double>::to_double(vnorm_inf(ku));
  if (ku_norm == 0.0) throw ZeroImage("direction maps to 0; the ray factor is undefined");
  const Vec<double> kxi = k(vscale(xi, u));
  if (!is_member(ctx_y, kxi)) throw NonMember("image off the range group");
  const double lambda = vdot(kxi, ku) / vdot(ku, ku);
  const Vec<double> gap = vsub(kxi, vscale(lambda, ku));
  const double worst = scalar_traits<double>::to_double(vnorm_inf(gap));
  if (worst > tol * (1.0 + scalar_traits<double>::to_double(vnorm_inf(kxi))))
    throw NotCollinear("image leaves the ray of K(u) by " +
                       scalar_traits<double>::str(worst));
  return lambda;
}

/// Coefficients a_1..a_n of the circle iterates: a_1 = 1 and
/// a_{k+1} = 1 + (1+tau) a_k, so x^{o n} = a_n(rho(x)) x on a ray and
/// K(n u) = a_n(sigma(K(u))) K(u) on null directions. Closed form
/// ((1+tau)^n - 1)/tau, reading n at tau = 0.
inline std::vector<double> circle_iterates(double tau, int n) {
  if (n < 1) throw DomainViolation("need n >= 1");
  std::vector<double> a(static_cast<std::size_t>(n));
  a[0] = 1.0;
  for (int k = 1; k < n; ++k) a[static_cast<std::size_t>(k)] = 1.0 + (1.0 + tau) * a[static_cast<std::size_t>(k - 1)];
  return a;
}

// ---------------------------------------------------------------------------
// Additive/radial factorization
// ---------------------------------------------------------------------------

/// For u with rho(u) = 1, every homomorphism factors through the projection
/// pi_u(x) = x - rho(x) u and the ray map mu_u(t) = K((t-1)u):
///   A_u(x+y) = A_u(x) o_sigma A_u(y),  mu_u(st) = mu_u(s) o_sigma mu_u(t),
///   K(x) = A_u(x) o_sigma mu_u(1 + rho(x)).
/// The report carries the worst residual of each identity over seeded draws.
struct SplitReport : Report {
  double additive_residual = 0.0;
  double multiplicative_residual = 0.0;
  double reconstruction_residual = 0.0;
};

inline SplitReport additive_radial_split(const HomFn& k, const PopaCtx<double>& ctx_x,
                                         const PopaCtx<double>& ctx_y, const Vec<double>& u,
                                         std::size_t n_samples = 200,
                                         std::uint64_t seed = 0, double tol = 1e-9) {
  check_dim(ctx_x, u);
  if (std::fabs(ctx_x.rho(u) - 1.0) > 1e-12)
    throw NotUnitDirection("split direction needs rho(u) = 1");

  auto a_u = [&](const Vec<double>& x) { return k(vaxpy(x, -ctx_x.rho(x), u)); };
  auto mu_u = [&](double t) { return k(vscale(t - 1.0, u)); };

  SplitReport rep;
  rep.check = "additive/radial factorization";
  rep.tolerance = tol;
  rep.seed = seed;
  Rng rng(derive_seed(seed, 0));
  for (std::size_t i = 0; i < n_samples; ++i) {
    const Vec<double> x = random_member(ctx_x, rng);
    const Vec<double> y = random_member(ctx_x, rng);
    const double s = rng.uniform(0.2, 4.0);
    const double t = rng.uniform(0.2, 4.0);

    const double add_gap = vrel_gap(a_u(vadd(x, y)),
                                    circle_unchecked(ctx_y, a_u(x), a_u(y)));
    const double mul_gap = vrel_gap(mu_u(s * t),
                                    circle_unchecked(ctx_y, mu_u(s), mu_u(t)));
    const double rec_gap = vrel_gap(k(x),
                                    circle_unchecked(ctx_y, a_u(x), mu_u(1.0 + ctx_x.rho(x))));
    rep.additive_residual = std::max(rep.additive_residual, add_gap);
    rep.multiplicative_residual = std::max(rep.multiplicative_residual, mul_gap);
    rep.reconstruction_residual = std::max(rep.reconstruction_residual, rec_gap);
    ++rep.samples;
  }
  rep.max_residual = std::max({rep.additive_residual, rep.multiplicative_residual,
                               rep.reconstruction_residual});
  rep.pass = rep.max_residual <= tol;
  return rep;
}

// ---------------------------------------------------------------------------
// Null-space splitting
// ---------------------------------------------------------------------------

/// Splits the null space of rho into V0 = directions K sends into the null
/// space of sigma, plus (when the image is not null) a single transversal w
/// rescaled so sigma(K(w)) = 1. proj0 + proj1 restrict to the identity on
/// the null space.
struct NullSplit {
  std::vector<Vec<double>> basis_v0;
  std::optional<Vec<double>> w;
  Matrix proj0, proj1;
};

inline NullSplit null_split(const HomFn& k, const PopaCtx<double>& ctx_x,
                            const PopaCtx<double>& ctx_y, double zero_tol = 1e-8) {
  const std::size_t d = ctx_x.dim;
  const std::vector<Vec<double>> nb = nullspace_of_functional(ctx_x.rho);

  // ell(nu) = log(1 + sigma(K(nu))): the linear functional on the null space
  // whose kernel is V0.
  std::vector<double> ell(nb.size());
  std::size_t pivot = nb.size();
  double best = 0;
  for (std::size_t i = 0; i < nb.size(); ++i) {
    const Vec<double> knu = k(nb[i]);
    const double s = ctx_y.rho(knu);
    const double scale = 1.0 + scalar_traits<double>::to_double(vnorm_inf(knu));
    ell[i] = std::fabs(s) <= zero_tol * scale ? 0.0 : std::log1p(s);
    if (std::fabs(ell[i]) > best) {
      best = std::fabs(ell[i]);
      pivot = i;
    }
  }

  NullSplit split;
  split.proj0 = Matrix(d, d);
  split.proj1 = Matrix(d, d);

  if (pivot == nb.size()) {
    // Entire null space maps into the null space of sigma.
    split.basis_v0 = nb;
    if (ctx_x.rho.is_zero()) {
      split.proj0 = Matrix::identity(d);
    } else {
      // Project onto N(rho) along u = rho/|rho|^2 (rho(u) = 1).
      Vec<double> u = ctx_x.rho.coeffs;
      const double nn = vdot(u, u);
      for (auto& ci : u) ci /= nn;
      Matrix p = Matrix::identity(d);
      for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = 0; j < d; ++j) p(i, j) -= u[i] * ctx_x.rho.coeffs[j];
      split.proj0 = p;
    }
    return split;
  }

  for (std::size_t i = 0; i < nb.size(); ++i) {
    if (i == pivot) continue;
    split.basis_v0.push_back(vaxpy(nb[i], -ell[i] / ell[pivot], nb[pivot]));
  }
  // Rescale so sigma(K(w)) = 1; on the ray the image coordinate is
  // e^{t ell} - 1, so t = log 2 / ell does it.
  split.w = vscale(std::log(2.0) / ell[pivot], nb[pivot]);

  // Assemble projections from the basis {V0, w, (u if rho != 0)} of X.
  std::vector<Vec<double>> columns = split.basis_v0;
  columns.push_back(*split.w);
  if (!ctx_x.rho.is_zero()) {
    Vec<double> u = ctx_x.rho.coeffs;
    const double nn = vdot(u, u);
    for (auto& ci : u) ci /= nn;
    columns.push_back(u);
  }
  if (columns.size() != d) throw Error("null split basis does not span");
  Matrix basis(d, d);
  for (std::size_t j = 0; j < d; ++j)
    for (std::size_t i = 0; i < d; ++i) basis(i, j) = columns[j][i];
  const Matrix basis_inv = inverse(basis);
  const std::size_t n0 = split.basis_v0.size();
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j) {
      double p0 = 0, p1 = 0;
      for (std::size_t t = 0; t < n0; ++t) p0 += basis(i, t) * basis_inv(t, j);
      p1 = basis(i, n0) * basis_inv(n0, j);
      split.proj0(i, j) = p0;
      split.proj1(i, j) = p1;
    }
  return split;
}

// ---------------------------------------------------------------------------
// Classification
// ---------------------------------------------------------------------------

struct ClassifiedHom {
  HomFamily family = HomFamily::Zero;
  HomSpec spec;
  double fit_residual = 0.0;   // worst gap between the fit and the probes
  double probe_residual = 0.0; // homomorphy residual of the black box
  std::vector<std::string> probe_log;
};

struct ClassifyOptions {
  std::size_t n_probes = 64;
  std::uint64_t seed = 2024;
  double hom_tol = 1e-8;        // probe homomorphy gate
  double sigma_zero_tol = 1e-8; // threshold for sigma(K(nu)) == 0
  double gamma_tol = 1e-6;      // index consistency across probes
};

/// Decides which family a black-box homomorphism belongs to and fits its
/// parameters. The dichotomy is driven by sigma∘K on a null-space basis:
/// all zero sends us to the linear/power/log side, any nonzero value to the
/// exponential side (which forces rho == 0 for genuine homomorphisms).
inline ClassifiedHom classify_hom(const HomFn& k, const PopaCtx<double>& ctx_x,
                                  const PopaCtx<double>& ctx_y,
                                  ClassifyOptions opt = {}) {
  ClassifiedHom out;
  const std::size_t dx = ctx_x.dim, dy = ctx_y.dim;

  const ResidualReport probe =
      hom_residual_sweep(k, ctx_x, ctx_y, opt.n_probes * 4, derive_seed(opt.seed, 17),
                         opt.hom_tol);
  out.probe_residual = probe.max_residual;
  if (!probe.pass)
    throw NotHomomorphic("probe residual " +
                         scalar_traits<double>::str(probe.max_residual) +
                         " exceeds " + scalar_traits<double>::str(opt.hom_tol));
  out.probe_log.push_back("probe residual " +
                          scalar_traits<double>::str(probe.max_residual));

  Rng rng(derive_seed(opt.seed, 1));
  std::vector<Vec<double>> probes;
  double k_scale = 0.0;
  for (std::size_t i = 0; i < opt.n_probes; ++i) {
    probes.push_back(random_member(ctx_x, rng));
    k_scale = std::max(k_scale,
                       scalar_traits<double>::to_double(vnorm_inf(k(probes.back()))));
  }

  if (k_scale <= 1e-10) {
    out.family = HomFamily::Zero;
    out.spec = make_zero_hom(ctx_x.rho, ctx_y.rho);
    out.probe_log.push_back("all probes map to 0");
    return out;
  }

  const std::vector<Vec<double>> nb = nullspace_of_functional(ctx_x.rho);
  bool image_null = true;
  for (const auto& nu : nb) {
    const Vec<double> knu = k(nu);
    const double s = ctx_y.rho(knu);
    if (std::fabs(s) >
        opt.sigma_zero_tol * (1.0 + scalar_traits<double>::to_double(vnorm_inf(knu)))) {
      image_null = false;
      break;
    }
  }

  if (!image_null) {
    // Exponential side. A homomorphism landing here has rho == 0.
    if (!ctx_x.rho.is_zero())
      throw NotHomomorphic("null space maps off the null space while rho != 0");
    LinFunc<double> kap{Vec<double>(dx, 0.0)};
    for (std::size_t j = 0; j < dx; ++j)
      kap.coeffs[j] = std::log1p(ctx_y.rho(k(vbasis<double>(dx, j))));
    // Recover c from the probe with the strongest image coordinate.
    Vec<double> c;
    double best = 0;
    for (const auto& x : probes) {
      const double w = std::expm1(kap(x));
      if (std::fabs(w) > best) {
        best = std::fabs(w);
        c = vscale(1.0 / w, k(x));
      }
    }
    if (c.empty()) throw InconsistentIndex("no probe exposes the exponential ray");
    out.family = HomFamily::Exp;
    out.spec = make_exp_hom(ctx_y.rho, c, kap);
    out.probe_log.push_back("null-space image is a ray: exponential family");
  } else {
    // Linear / power / log side: try the linear least-squares fit first.
    Matrix m(dy, dx);
    {
      Matrix design(probes.size(), dx);
      for (std::size_t i = 0; i < probes.size(); ++i)
        for (std::size_t j = 0; j < dx; ++j) design(i, j) = probes[i][j];
      for (std::size_t r = 0; r < dy; ++r) {
        Vec<double> rhs(probes.size());
        for (std::size_t i = 0; i < probes.size(); ++i) rhs[i] = k(probes[i])[r];
        const LstsqResult fit = lstsq(design, rhs);
        for (std::size_t j = 0; j < dx; ++j) m(r, j) = fit.x[j];
      }
    }
    double lin_gap = 0;
    for (const auto& x : probes) lin_gap = std::max(lin_gap, vrel_gap(matvec(m, x), k(x)));
    if (lin_gap <= 1e-7) {
      out.family = HomFamily::Linear;
      out.spec = make_linear_hom(ctx_x.rho, ctx_y.rho, m);
      out.probe_log.push_back("linear fit residual " + scalar_traits<double>::str(lin_gap));
    } else {
      // Index per probe: gamma_hat = log(1+sigma(K(x)))/log(1+rho(x)).
      std::vector<double> gammas;
      std::vector<Vec<double>> useful;
      for (const auto& x : probes) {
        const double r = ctx_x.rho(x);
        if (std::fabs(r) < 0.1) continue;
        gammas.push_back(std::log1p(ctx_y.rho(k(x))) / std::log1p(r));
        useful.push_back(x);
      }
      if (gammas.empty()) throw InconsistentIndex("no probe leaves the null space");
      double gmin = gammas[0], gmax = gammas[0], gsum = 0;
      for (double g : gammas) {
        gmin = std::min(gmin, g);
        gmax = std::max(gmax, g);
        gsum += g;
      }
      if (gmax - gmin > opt.gamma_tol)
        throw InconsistentIndex("index varies across probes by " +
                                scalar_traits<double>::str(gmax - gmin));
      const double gamma = gsum / static_cast<double>(gammas.size());
      if (std::fabs(gamma) <= opt.gamma_tol) {
        // sigma∘K vanishes identically: logarithmic ray.
        Vec<double> b = vzero<double>(dy);
        for (std::size_t i = 0; i < useful.size(); ++i)
          b = vaxpy(b, 1.0 / (std::log1p(ctx_x.rho(useful[i])) *
                              static_cast<double>(useful.size())),
                    k(useful[i]));
        out.family = HomFamily::Log;
        out.spec = make_log_hom(ctx_x.rho, ctx_y.rho, b);
        out.probe_log.push_back("index 0: logarithmic family");
      } else {
        Vec<double> v = vzero<double>(dy);
        for (std::size_t i = 0; i < useful.size(); ++i)
          v = vaxpy(v, 1.0 / (pow1p_m1(ctx_x.rho(useful[i]), gamma) *
                              static_cast<double>(useful.size())),
                    k(useful[i]));
        out.family = HomFamily::Power;
        out.spec = make_power_hom(ctx_x.rho, ctx_y.rho, v, gamma);
        out.probe_log.push_back("index " + scalar_traits<double>::str(gamma) +
                                ": power family");
      }
    }
  }

  for (const auto& x : probes)
    out.fit_residual = std::max(out.fit_residual, vrel_gap(hom_eval(out.spec, x), k(x)));
  return out;
}

// ---------------------------------------------------------------------------
// Range-functional fit
// ---------------------------------------------------------------------------

/// Recovers the range functional sigma from an injective kernel K and its
/// auxiliary g via least squares on sigma(K(x)) = g(x) - 1. Rank deficiency
/// is flagged, not fatal: the minimum-norm solution is returned.
struct SigmaFit {
  LinFunc<double> sigma;
  double residual = 0.0;
  bool rank_deficient = false;
};

inline SigmaFit fit_range_functional(const HomFn& k,
                                     const std::function<double(const Vec<double>&)>& g,
                                     const std::vector<Vec<double>>& samples) {
  if (samples.size() < 2) throw DomainViolation("need at least two samples");
  std::vector<Vec<double>> images;
  images.reserve(samples.size());
  for (const auto& x : samples) images.push_back(k(x));
  const std::size_t dy = images[0].size();

  double scale = 1.0;
  for (const auto& y : images)
    scale = std::max(scale, scalar_traits<double>::to_double(vnorm_inf(y)));
  for (std::size_t i = 0; i < images.size(); ++i)
    for (std::size_t j = i + 1; j < images.size(); ++j)
      if (scalar_traits<double>::to_double(vnorm_inf(vsub(images[i], images[j]))) <=
          1e-12 * scale)
        throw NotInjective("samples " + std::to_string(i) + " and " + std::to_string(j) +
                           " have equal images");

  Matrix design(images.size(), dy);
  Vec<double> rhs(images.size());
  for (std::size_t i = 0; i < images.size(); ++i) {
    const double gi = g(samples[i]);
    if (!(gi > 0.0)) throw DomainViolation("auxiliary must be positive on samples");
    for (std::size_t j = 0; j < dy; ++j) design(i, j) = images[i][j];
    rhs[i] = gi - 1.0;
  }
  const LstsqResult fit = lstsq(design, rhs);
  SigmaFit out;
  out.sigma = LinFunc<double>(fit.x);
  out.rank_deficient = fit.rank < dy;
  for (std::size_t i = 0; i < images.size(); ++i)
    out.residual = std::max(out.residual, std::fabs(out.sigma(images[i]) - rhs[i]));
  return out;
}

}  // namespace popa
