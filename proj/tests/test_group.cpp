#include <catch2/catch_amalgamated.hpp>

#include "popa/group.hpp"
#include "popa/homs.hpp"
#include "popa/numeric.hpp"
#include "popa/sampling.hpp"

using namespace popa;

namespace {
const PopaCtx<double> kCtx2 = make_ctx<double>({1.0, 0.0});
}

TEST_CASE("eta evaluates 1 + rho(x)") {
  CHECK(eta(kCtx2, {1.0, 2.0}) == 2.0);
  CHECK(eta(kCtx2, {0.0, 0.0}) == 1.0);
  CHECK(eta(kCtx2, {-2.0, 5.0}) == -1.0);  // value reported even off the group
  CHECK_THROWS_AS(eta(kCtx2, {1.0}), DimensionMismatch);
}

TEST_CASE("membership is eta above the guard") {
  CHECK(is_member(kCtx2, {1.0, 2.0}));
  CHECK(is_member(kCtx2, {0.0, 0.0}));
  CHECK_FALSE(is_member(kCtx2, {-2.0, 5.0}));
}

TEST_CASE("circle product on fixed points") {
  CHECK(circle(kCtx2, {1.0, 2.0}, {3.0, 4.0}) == Vec<double>{7.0, 10.0});
  const Vec<double> x{0.3, -0.7};
  CHECK(circle(kCtx2, x, identity(kCtx2)) == x);
  CHECK(circle(kCtx2, identity(kCtx2), x) == x);
  CHECK_THROWS_AS(circle(kCtx2, {-2.0, 0.0}, {0.0, 0.0}), NonMember);

  const auto additive = make_ctx<double>({0.0, 0.0});
  CHECK(circle(additive, {1.0, 2.0}, {3.0, 4.0}) == Vec<double>{4.0, 6.0});
}

TEST_CASE("inverse on fixed points") {
  CHECK(inverse(kCtx2, {1.0, 2.0}) == Vec<double>{-0.5, -1.0});
  CHECK(circle(kCtx2, {1.0, 2.0}, inverse(kCtx2, {1.0, 2.0})) == Vec<double>{0.0, 0.0});
  CHECK(inverse(kCtx2, identity(kCtx2)) == identity(kCtx2));
  const auto additive = make_ctx<double>({0.0, 0.0});
  CHECK(inverse(additive, {1.0, 2.0}) == Vec<double>{-1.0, -2.0});
  CHECK_THROWS_AS(inverse(kCtx2, {-2.0, 0.0}), NonMember);
}

TEST_CASE("context validation") {
  CHECK_THROWS_AS(make_ctx<double>(std::vector<double>{}), DimensionMismatch);
  CHECK_THROWS_AS(make_ctx<double>(std::vector<double>(17, 1.0)), DimensionMismatch);
  CHECK_THROWS_AS(make_ctx<double>({1.0}, 1.5), DomainViolation);
  const double bad = std::numeric_limits<double>::quiet_NaN();
  CHECK_THROWS_AS(make_ctx<double>({bad}), DomainViolation);
}

TEST_CASE("group laws hold exactly in the rational kind") {
  const auto ctx = make_ctx<Rational>({Rational(1), Rational(-1, 2), Rational(2, 3)});
  Rng rng(11);
  const auto zero = identity(ctx);
  for (int i = 0; i < 300; ++i) {
    const auto x = random_member_q(ctx, rng);
    const auto y = random_member_q(ctx, rng);
    const auto z = random_member_q(ctx, rng);
    const auto xy = circle(ctx, x, y);
    REQUIRE(is_member(ctx, xy));
    REQUIRE(circle(ctx, xy, z) == circle(ctx, x, circle(ctx, y, z)));
    REQUIRE(eta(ctx, xy) == eta(ctx, x) * eta(ctx, y));
    const auto xinv = inverse(ctx, x);
    REQUIRE(circle(ctx, x, xinv) == zero);
    REQUIRE(circle(ctx, xinv, x) == zero);
    REQUIRE(eta(ctx, xinv) * eta(ctx, x) == Rational(1));
  }
}

TEST_CASE("group laws hold to 1e-12 in floating point") {
  for (std::size_t d : {std::size_t{1}, std::size_t{2}, std::size_t{5}}) {
    Rng rng(23 + d);
    std::vector<double> coeffs(d);
    for (auto& c : coeffs) c = rng.uniform(-1.0, 1.0);
    coeffs[0] = 1.0;
    const auto ctx = make_ctx<double>(coeffs);
    for (int i = 0; i < 2000; ++i) {
      const auto x = random_member(ctx, rng);
      const auto y = random_member(ctx, rng);
      const auto z = random_member(ctx, rng);
      CHECK(vrel_gap(circle(ctx, circle(ctx, x, y), z),
                     circle(ctx, x, circle(ctx, y, z))) <= 1e-12);
      CHECK(rel_gap(eta(ctx, circle(ctx, x, y)), eta(ctx, x) * eta(ctx, y)) <= 1e-12);
      CHECK(vrel_gap(circle(ctx, x, inverse(ctx, x)), identity(ctx)) <= 1e-12);
    }
  }
}

TEST_CASE("fixed probe shows non-commutativity for d >= 2") {
  const Vec<double> x{1.0, 0.0};
  const Vec<double> y{0.0, 1.0};
  CHECK(circle(kCtx2, x, y) != circle(kCtx2, y, x));
  CHECK(circle(kCtx2, x, y) == Vec<double>{1.0, 2.0});
  CHECK(circle(kCtx2, y, x) == Vec<double>{1.0, 1.0});
}
