#include <catch2/catch_amalgamated.hpp>

#include "popa/numeric.hpp"
#include "popa/radial.hpp"
#include "popa/sampling.hpp"

using namespace popa;

namespace {
const PopaCtx<double> kCtx = make_ctx<double>({1.0, 0.0});
const PopaCtx<Rational> kCtxQ = make_ctx<Rational>({Rational(1), Rational(0)});
}

TEST_CASE("half-line intervals follow the sign of rho(u)") {
  const auto pos = halfline(kCtx, {2.0, 0.0});
  REQUIRE(pos.lo.has_value());
  CHECK(*pos.lo == -0.5);
  CHECK_FALSE(pos.hi.has_value());

  const auto null = halfline(kCtx, {0.0, 1.0});
  CHECK_FALSE(null.lo.has_value());
  CHECK_FALSE(null.hi.has_value());

  const auto neg = halfline(kCtx, {-1.0, 0.0});
  CHECK_FALSE(neg.lo.has_value());
  REQUIRE(neg.hi.has_value());
  CHECK(*neg.hi == 1.0);

  CHECK_THROWS_AS(halfline(kCtx, {0.0, 0.0}), ZeroDirection);
}

TEST_CASE("direction normalization") {
  CHECK(normalize_direction(kCtx, {2.0, 6.0}) == Vec<double>{1.0, 3.0});
  CHECK(normalize_direction(kCtx, {1.0, 0.0}) == Vec<double>{1.0, 0.0});
  CHECK_THROWS_AS(normalize_direction(kCtx, {0.0, 1.0}), NullDirection);
}

TEST_CASE("sum witness, direct case") {
  const auto w = sum_witness(kCtx, {1.0, 0.0}, {2.0, 0.0});
  CHECK(w.case_tag == WitnessCase::Case1);
  REQUIRE(w.word.size() == 2);
  CHECK(w.word[1].element == Vec<double>{1.0, 0.0});
  CHECK(evaluate_witness_word(kCtx, w.word) == Vec<double>{3.0, 0.0});

  const auto trivial = sum_witness(kCtx, {1.0, 0.5}, {0.0, 0.0});
  CHECK(trivial.case_tag == WitnessCase::Case1);
  CHECK(evaluate_witness_word(kCtx, trivial.word) == Vec<double>{1.0, 0.5});
}

TEST_CASE("sum witness, inverse route") {
  // eta(v) = -2 < 0, so v itself is off the group and -v carries the letter.
  const auto w = sum_witness(kCtxQ, {Rational(4), Rational(0)}, {Rational(-3), Rational(0)});
  CHECK(w.case_tag == WitnessCase::Case2);
  REQUIRE(w.delta.has_value());
  CHECK(*w.delta == Rational(4, 5));
  REQUIRE(w.word.size() == 2);
  CHECK(w.word[1].element == Vec<Rational>{Rational(-3, 5), Rational(0)});
  CHECK(evaluate_witness_word(kCtxQ, w.word) == Vec<Rational>{Rational(1), Rational(0)});
}

TEST_CASE("sum witness preconditions") {
  CHECK_THROWS_AS(sum_witness(kCtx, {-2.0, 0.0}, {1.0, 0.0}), NoCase);   // u off group
  CHECK_THROWS_AS(sum_witness(kCtx, {1.0, 0.0}, {-4.0, 0.0}), NoCase);   // sum off group
}

TEST_CASE("witness letters stay on generator half-lines") {
  Rng rng(37);
  const auto ctx = make_ctx<Rational>({Rational(1), Rational(-1, 2)});
  int case2_seen = 0;
  for (int i = 0; i < 400; ++i) {
    const auto u = random_member_q(ctx, rng);
    const auto v = random_vec_q(ctx.dim, rng);
    if (!is_member(ctx, vadd(u, v))) continue;
    const auto w = sum_witness(ctx, u, v);
    REQUIRE(evaluate_witness_word(ctx, w.word) == vadd(u, v));
    REQUIRE(w.word[0].element == vscale(w.word[0].scale, u));
    REQUIRE(w.word[1].element == vscale(w.word[1].scale, v));
    REQUIRE(is_member(ctx, w.word[1].element));
    if (w.case_tag == WitnessCase::Case2) ++case2_seen;
  }
  CHECK(case2_seen > 0);
}

TEST_CASE("n-ary witness reproduces linear combinations") {
  Rng rng(41);
  const auto ctx = make_ctx<Rational>({Rational(1), Rational(1, 3)});
  int built = 0;
  for (int i = 0; i < 200 && built < 60; ++i) {
    std::vector<std::pair<Rational, Vec<Rational>>> terms;
    const int n = 2 + static_cast<int>(rng.uniform_int(0, 2));
    Vec<Rational> sum = vzero<Rational>(ctx.dim);
    for (int k = 0; k < n; ++k) {
      terms.emplace_back(random_rational(rng, 3, 2), random_member_q(ctx, rng, 3, 2));
      sum = vadd(sum, vscale(terms.back().first, terms.back().second));
    }
    if (!is_member(ctx, sum)) continue;
    try {
      const auto w = nary_sum_witness(ctx, terms);
      REQUIRE(w.target == sum);
      REQUIRE(w.word.size() == terms.size());
      for (const auto& letter : w.word)
        REQUIRE(letter.element == vscale(letter.scale, terms[letter.generator].second));
      ++built;
    } catch (const NoCase&) {
      // No ordering keeps the partial sums inside the group; skip.
    }
  }
  CHECK(built >= 40);
}

TEST_CASE("n-ary witness picks the lexicographically first valid ordering") {
  // alpha*u alone is off the group, so any valid ordering must start with v.
  const auto ctx = make_ctx<Rational>({Rational(1), Rational(0)});
  std::vector<std::pair<Rational, Vec<Rational>>> terms = {
      {Rational(1), {Rational(-3), Rational(0)}},  // eta = -2: off the group
      {Rational(1), {Rational(4), Rational(0)}},
  };
  const auto w = nary_sum_witness(ctx, terms);
  CHECK(w.permutation == std::vector<std::size_t>{1, 0});
  CHECK(w.target == Vec<Rational>{Rational(1), Rational(0)});
}

TEST_CASE("commutation defect matches the circle difference") {
  Rng rng(43);
  for (int i = 0; i < 200; ++i) {
    const auto x = random_member(kCtx, rng);
    const auto y = random_member(kCtx, rng);
    const auto defect = commutation_defect(kCtx, x, y);
    const auto diff = vsub(circle(kCtx, x, y), circle(kCtx, y, x));
    CHECK(vrel_gap(defect, diff) <= 1e-13);
  }
}

TEST_CASE("abelian classification") {
  const std::vector<Vec<double>> null_gens = {{0.0, 1.0}, {0.0, 2.0}};
  const auto null_class = classify_abelian(kCtx, null_gens);
  CHECK(null_class.kind == AbelianClass<double>::Kind::Null);

  const std::vector<Vec<double>> ray_gens = {{1.0, 0.0}, {2.0, 0.0}};
  const auto ray_class = classify_abelian(kCtx, ray_gens);
  REQUIRE(ray_class.kind == AbelianClass<double>::Kind::Ray);
  CHECK(ray_class.ray_direction == Vec<double>{1.0, 0.0});

  const std::vector<Vec<double>> bad = {{0.0, 1.0}, {1.0, 0.0}};
  CHECK_THROWS_AS(classify_abelian(kCtx, bad), NotCommutative);
}

TEST_CASE("eta is multiplicative on a classified ray") {
  const std::vector<Vec<double>> gens = {{0.5, 0.0}, {2.0, 0.0}, {-0.25, 0.0}};
  const auto cls = classify_abelian(kCtx, gens);
  REQUIRE(cls.kind == AbelianClass<double>::Kind::Ray);
  for (const auto& x : gens)
    for (const auto& y : gens)
      CHECK(rel_gap(eta(kCtx, circle(kCtx, x, y)), eta(kCtx, x) * eta(kCtx, y)) <= 1e-14);
}

TEST_CASE("ray isomorphism with the scalar circle group") {
  const Vec<double> u{1.0, 0.0};
  Rng rng(47);
  std::vector<std::pair<double, double>> pairs = {{1.0, 1.0}, {0.0, 0.7}};
  for (int i = 0; i < 100; ++i)
    pairs.emplace_back(rng.uniform(-0.4, 2.0), rng.uniform(-0.4, 2.0));
  const auto rep = scalar_iso_check(kCtx, u, pairs);
  CHECK(rep.pass);
  CHECK(rep.max_residual <= 1e-12);

  // rho(u) = 0 reduces the ray to plain addition.
  const Vec<double> nu{0.0, 1.0};
  const auto rep0 = scalar_iso_check(kCtx, nu, {{0.3, 0.4}, {-1.0, 2.0}});
  CHECK(rep0.pass);
}

TEST_CASE("commutation criterion equivalence on random data") {
  Rng rng(53);
  for (int i = 0; i < 300; ++i) {
    const auto x = random_member(kCtx, rng);
    // Half the draws lie on x's ray (commuting), half are free draws.
    Vec<double> y;
    if (i % 2 == 0) {
      y = vscale(rng.uniform(-0.4, 1.5), x);
      if (!is_member(kCtx, y)) continue;
    } else {
      y = random_member(kCtx, rng);
    }
    const bool defect_zero =
        scalar_traits<double>::to_double(vnorm_inf(commutation_defect(kCtx, x, y))) <= 1e-10;
    const bool commutes = vrel_gap(circle(kCtx, x, y), circle(kCtx, y, x)) <= 1e-10;
    CHECK(defect_zero == commutes);
  }
}
