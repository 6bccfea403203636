#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "popa/haar.hpp"

using namespace popa;

namespace {
const PopaCtx<double> kCtx1 = make_ctx<double>(std::vector<double>{1.0});
const PopaCtx<double> kCtx2 = make_ctx<double>({1.0, 0.0});

// Deterministic trapezoid quadrature as an independent check for 1-d boxes.
double quad_1d(double lo, double hi, int n, double (*f)(double)) {
  double acc = 0.5 * (f(lo) + f(hi));
  for (int i = 1; i < n; ++i) acc += f(lo + (hi - lo) * i / n);
  return acc * (hi - lo) / n;
}
}  // namespace

TEST_CASE("density values") {
  CHECK(haar::density(kCtx2, {1.0, 2.0}, haar::Side::Right) == 0.5);
  CHECK(haar::density(kCtx2, {0.0, 0.0}, haar::Side::Right) == 1.0);
  CHECK(haar::density(kCtx2, {1.0, 2.0}, haar::Side::Left) == 0.25);
  CHECK_THROWS_AS(haar::density(kCtx2, {-2.0, 0.0}, haar::Side::Right), NonMember);
}

TEST_CASE("box validation") {
  CHECK_THROWS_AS(haar::measure_mc({kCtx1, {{-2.0}, {1.0}}, haar::Side::Right, 1000, 1}),
                  BoxOutsideDomain);
  CHECK_THROWS_AS(haar::measure_mc({kCtx1, {{0.0}, {1.0}}, haar::Side::Right, 10, 1}),
                  DomainViolation);  // n too small
}

TEST_CASE("unit interval measure matches the quadrature oracle") {
  const auto est = haar::measure_mc({kCtx1, {{0.0}, {1.0}}, haar::Side::Right, 200000, 42});
  const double oracle = quad_1d(0.0, 1.0, 20000, +[](double x) { return 1.0 / (1.0 + x); });
  CHECK(std::fabs(oracle - std::log(2.0)) <= 1e-8);
  CHECK(std::fabs(est.value - std::log(2.0)) <= 3.0 * est.std_error);
  CHECK(est.std_error > 0.0);
}

TEST_CASE("translated interval keeps its measure") {
  // (0,1) o 1/2 = (1/2, 2) and the right measure of both is log 2.
  haar::Job job{kCtx1, {{0.0}, {1.0}}, haar::Side::Right, 200000, 7};
  const auto moved = haar::translated_measure_mc(job, {0.5}, haar::Side::Right);
  CHECK(std::fabs(moved.value - std::log(2.0)) <= 3.0 * moved.std_error);

  // Direct estimate over the image interval agrees.
  const auto direct =
      haar::measure_mc({kCtx1, {{0.5}, {2.0}}, haar::Side::Right, 200000, 8});
  const double oracle = quad_1d(0.5, 2.0, 20000, +[](double x) { return 1.0 / (1.0 + x); });
  CHECK(std::fabs(oracle - std::log(2.0)) <= 1e-8);
  CHECK(std::fabs(direct.value - std::log(2.0)) <= 3.0 * direct.std_error);
}

TEST_CASE("flat group gives the exact volume") {
  const auto flat = make_ctx<double>(std::vector<double>{0.0, 0.0});
  const auto est =
      haar::measure_mc({flat, {{0.0, 0.0}, {2.0, 0.5}}, haar::Side::Right, 1000, 3});
  CHECK(est.value == 1.0);
  CHECK(est.std_error == 0.0);
}

TEST_CASE("identity translation reproduces the estimate bit for bit") {
  haar::Job job{kCtx2, {{0.0, 0.0}, {1.0, 1.0}}, haar::Side::Right, 10000, 11};
  const auto base = haar::measure_mc(job);
  const auto moved = haar::translated_measure_mc(job, {0.0, 0.0}, haar::Side::Right);
  CHECK(base.value == moved.value);
  CHECK(base.std_error == moved.std_error);
}

TEST_CASE("matched sides are invariant, the mismatched side is not") {
  const std::size_t n = 100000;
  haar::Box box{{0.0, 0.0}, {1.0, 1.0}};
  const Vec<double> a{0.5, 0.2};

  const auto right = haar::invariance_check(kCtx2, box, a, haar::Side::Right, n, 21);
  CHECK(right.pass);
  const auto left = haar::invariance_check(kCtx2, box, a, haar::Side::Left, n, 22);
  CHECK(left.pass);

  // Exponent-1 density against a left translation misses by eta(a)^(d-1).
  haar::Job wrong{kCtx2, box, haar::Side::Right, n, 23};
  const auto base = haar::measure_mc(wrong);
  const auto moved = haar::translated_measure_mc(wrong, a, haar::Side::Left);
  const double dev = std::fabs(base.value - moved.value);
  CHECK(dev > 5.0 * std::hypot(base.std_error, moved.std_error));
  CHECK(moved.value / base.value == Catch::Approx(1.5).margin(1e-10));
}

TEST_CASE("estimates are deterministic in the seed") {
  haar::Job job{kCtx2, {{0.0, 0.0}, {1.0, 1.0}}, haar::Side::Left, 50000, 5};
  const auto a = haar::measure_mc(job);
  const auto b = haar::measure_mc(job);
  CHECK(a.value == b.value);
  CHECK(a.std_error == b.std_error);
}
