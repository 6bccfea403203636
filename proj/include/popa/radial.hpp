#pragma once

#include <algorithm>
#include <cstddef>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "popa/group.hpp"
#include "popa/report.hpp"

namespace popa {

/// Radial subgroup <u>_rho = {t*u : eta(t*u) > 0}: a half-line (or full line
/// when rho(u) = 0) of the linear span of u. Unbounded sides are nullopt.
template <class S>
struct HalfLine {
  Vec<S> direction;
  std::optional<S> lo;  // open lower bound for t
  std::optional<S> hi;  // open upper bound for t
};

template <class S>
HalfLine<S> halfline(const PopaCtx<S>& ctx, const Vec<S>& u) {
  check_dim(ctx, u);
  if (vis_zero(u)) throw ZeroDirection("half-line of the zero vector");
  HalfLine<S> h;
  h.direction = u;
  const S r = ctx.rho(u);
  if (r > S{}) {
    h.lo = S(-1) / r;
  } else if (r < S{}) {
    h.hi = S(-1) / r;
  }
  return h;
}

/// u = z/rho(z), the representative of z's ray with rho(u) = 1.
template <class S>
Vec<S> normalize_direction(const PopaCtx<S>& ctx, const Vec<S>& z) {
  check_dim(ctx, z);
  const S r = ctx.rho(z);
  if (r == S{}) throw NullDirection("direction lies in the null space of rho");
  Vec<S> u(ctx.dim);
  for (std::size_t i = 0; i < ctx.dim; ++i) u[i] = z[i] / r;
  return u;
}

enum class WitnessCase { Case1, Case2 };

/// One letter of a circle word. Every letter is a scalar multiple of one of
/// the input generators, so it lies in that generator's radial subgroup.
template <class S>
struct WitnessLetter {
  Vec<S> element;
  std::size_t generator = 0;  // index of the generator this letter scales
  S scale{};                  // element == scale * generator
};

/// Circle word expressing u+v inside the group: evaluating the word
/// left-to-right under o reproduces the target sum.
template <class S>
struct Witness {
  std::vector<WitnessLetter<S>> word;
  WitnessCase case_tag = WitnessCase::Case1;
  std::optional<S> delta;  // Case2 only: (1-rho(v))/(1+rho(u))
  Vec<S> target;
};

template <class S>
Vec<S> evaluate_witness_word(const PopaCtx<S>& ctx,
                             const std::vector<WitnessLetter<S>>& word) {
  Vec<S> acc = identity(ctx);
  for (const auto& letter : word) acc = circle(ctx, acc, letter.element);
  return acc;
}

namespace detail {

template <class S>
void check_witness_evaluation(const PopaCtx<S>& ctx,
                              const std::vector<WitnessLetter<S>>& word,
                              const Vec<S>& target) {
  const Vec<S> got = evaluate_witness_word(ctx, word);
  if constexpr (scalar_traits<S>::exact) {
    if (!(got == target)) throw Error("witness word fails to reproduce its target");
  } else {
    if (vrel_gap(got, target) > 1e-12)
      throw Error("witness word reproduces its target only to " +
                  std::to_string(vrel_gap(got, target)));
  }
}

}  // namespace detail

/// Expresses u+v as u o (scaled v-letter). Case 1 uses the direct letter
/// v/(1+rho(u)); Case 2 routes through the inverse of -v when v itself is
/// off the group, with delta = (1-rho(v))/(1+rho(u)). Case 1 wins ties:
/// it needs no inversion and conditions better.
template <class S>
Witness<S> sum_witness(const PopaCtx<S>& ctx, const Vec<S>& u, const Vec<S>& v) {
  check_dim(ctx, u);
  check_dim(ctx, v);
  if (!is_member(ctx, u)) throw NoCase("summand u is not a group member");
  const Vec<S> target = vadd(u, v);
  if (!is_member(ctx, target)) throw NoCase("sum u+v is not a group member");

  const S eu = eta(ctx, u);
  Witness<S> w;
  w.target = target;
  w.word.push_back({u, 0, S(1)});

  if (is_member(ctx, v)) {
    w.case_tag = WitnessCase::Case1;
    const S scale = S(1) / eu;
    w.word.push_back({vscale(scale, v), 1, scale});
  } else if (is_member(ctx, vscale(S(-1), v))) {
    w.case_tag = WitnessCase::Case2;
    const S ev_neg = S(1) - ctx.rho(v);  // eta(-v)
    w.delta = ev_neg / eu;
    const Vec<S> neg_v_inv = inverse(ctx, vscale(S(-1), v));  // = v/(1-rho(v))
    const S scale = *w.delta / ev_neg;
    w.word.push_back({vscale(*w.delta, neg_v_inv), 1, scale});
  } else {
    throw NoCase("neither v nor -v is a group member");
  }

  detail::check_witness_evaluation(ctx, w.word, target);
  return w;
}

/// Witness for a linear combination a_1*u_1 + ... + a_n*u_n, built by
/// iterating the two-case sum step over a permutation whose prefix sums all
/// stay inside the group. The lexicographically first valid permutation is
/// chosen, for determinism.
template <class S>
struct NaryWitness {
  std::vector<WitnessLetter<S>> word;
  std::vector<std::size_t> permutation;
  std::vector<WitnessCase> step_cases;
  Vec<S> target;
};

template <class S>
NaryWitness<S> nary_sum_witness(const PopaCtx<S>& ctx,
                                const std::vector<std::pair<S, Vec<S>>>& terms) {
  const std::size_t n = terms.size();
  if (n == 0) throw Error("empty linear combination");
  if (n > 8) throw Error("combination too long for permutation search");
  for (const auto& [alpha, gen] : terms) check_dim(ctx, gen);

  std::vector<Vec<S>> scaled(n);
  for (std::size_t i = 0; i < n; ++i) scaled[i] = vscale(terms[i].first, terms[i].second);

  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  do {
    Vec<S> partial = vzero<S>(ctx.dim);
    bool ok = true;
    for (std::size_t k = 0; k < n && ok; ++k) {
      partial = vadd(partial, scaled[perm[k]]);
      ok = is_member(ctx, partial);
    }
    if (!ok) continue;

    NaryWitness<S> w;
    w.permutation = perm;
    w.word.push_back({scaled[perm[0]], perm[0], terms[perm[0]].first});
    Vec<S> acc = scaled[perm[0]];
    for (std::size_t k = 1; k < n; ++k) {
      Witness<S> step = sum_witness(ctx, acc, scaled[perm[k]]);
      const WitnessLetter<S>& letter = step.word[1];
      w.word.push_back({letter.element, perm[k], letter.scale * terms[perm[k]].first});
      w.step_cases.push_back(step.case_tag);
      acc = step.target;
    }
    w.target = acc;
    detail::check_witness_evaluation(ctx, w.word, w.target);
    return w;
  } while (std::next_permutation(perm.begin(), perm.end()));

  throw NoCase("no ordering keeps every partial sum inside the group");
}

/// Outcome of the abelian-subgroup classification: a commutative family
/// either sits inside the null space of rho (circle = plain addition there)
/// or on a single ray with rho(u) = 1.
template <class S>
struct AbelianClass {
  enum class Kind { Null, Ray };
  Kind kind = Kind::Null;
  Vec<S> ray_direction;  // Ray only; satisfies rho(u) = 1
};

/// x o y = y o x holds iff the commutation defect rho(x)y - rho(y)x
/// vanishes; the two expressions differ by exactly that vector.
template <class S>
Vec<S> commutation_defect(const PopaCtx<S>& ctx, const Vec<S>& x, const Vec<S>& y) {
  check_dim(ctx, x);
  check_dim(ctx, y);
  return vsub(vscale(ctx.rho(x), y), vscale(ctx.rho(y), x));
}

template <class S>
AbelianClass<S> classify_abelian(const PopaCtx<S>& ctx, const std::vector<Vec<S>>& gens,
                                 double tol = 1e-10) {
  for (const auto& x : gens)
    if (!is_member(ctx, x)) throw NonMember("generator is not a group member");
  for (std::size_t i = 0; i < gens.size(); ++i)
    for (std::size_t j = i + 1; j < gens.size(); ++j) {
      const S defect = vnorm_inf(commutation_defect(ctx, gens[i], gens[j]));
      const bool bad = scalar_traits<S>::exact
                           ? !(defect == S{})
                           : scalar_traits<S>::to_double(defect) > tol;
      if (bad)
        throw NotCommutative("generators " + std::to_string(i) + " and " +
                             std::to_string(j) + " do not commute (defect " +
                             scalar_traits<S>::str(defect) + ")");
    }

  AbelianClass<S> result;
  std::optional<std::size_t> pivot;
  for (std::size_t i = 0; i < gens.size(); ++i) {
    const S r = ctx.rho(gens[i]);
    const bool nonzero = scalar_traits<S>::exact
                             ? !(r == S{})
                             : std::fabs(scalar_traits<S>::to_double(r)) > tol;
    if (nonzero) { pivot = i; break; }
  }
  if (!pivot) {
    result.kind = AbelianClass<S>::Kind::Null;
    return result;
  }

  result.kind = AbelianClass<S>::Kind::Ray;
  result.ray_direction = normalize_direction(ctx, gens[*pivot]);
  // Commutativity pins every generator to the ray: x = rho(x)*u.
  for (std::size_t i = 0; i < gens.size(); ++i) {
    const Vec<S> expected = vscale(ctx.rho(gens[i]), result.ray_direction);
    const S gap = vnorm_inf(vsub(gens[i], expected));
    const bool bad = scalar_traits<S>::exact
                         ? !(gap == S{})
                         : scalar_traits<S>::to_double(gap) > tol;
    if (bad)
      throw NotCommutative("generator " + std::to_string(i) +
                           " leaves the common ray (gap " +
                           scalar_traits<S>::str(gap) + ")");
  }
  return result;
}

/// Checks the ray isomorphism (s*u) o (t*u) = (s + t + s*t*rho(u))*u, the
/// identity that makes every radial subgroup a scalar circle group.
template <class S>
Report scalar_iso_check(const PopaCtx<S>& ctx, const Vec<S>& u,
                        const std::vector<std::pair<S, S>>& pairs) {
  check_dim(ctx, u);
  if (vis_zero(u)) throw ZeroDirection("ray check needs a nonzero direction");
  Report rep;
  rep.check = "radial scalar isomorphism";
  rep.tolerance = scalar_traits<S>::exact ? 0.0 : 1e-12;
  const S ru = ctx.rho(u);
  for (const auto& [s, t] : pairs) {
    const Vec<S> su = vscale(s, u);
    const Vec<S> tu = vscale(t, u);
    if (!is_member(ctx, su) || !is_member(ctx, tu)) {
      rep.pass = false;
      rep.notes.push_back("pair (" + scalar_traits<S>::str(s) + ", " +
                          scalar_traits<S>::str(t) + ") leaves the half-line");
      continue;
    }
    const Vec<S> lhs = circle(ctx, su, tu);
    const Vec<S> rhs = vscale(s + t + s * t * ru, u);
    const double gap = scalar_traits<S>::to_double(vnorm_inf(vsub(lhs, rhs)));
    rep.max_residual = std::max(rep.max_residual, gap);
    ++rep.samples;
  }
  if (rep.max_residual > rep.tolerance) rep.pass = false;
  return rep;
}

}  // namespace popa
