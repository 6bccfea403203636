#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "popa/evt.hpp"
#include "popa/rng.hpp"

using namespace popa;

TEST_CASE("kernel values at pinned points") {
  CHECK(evt::evt_E({1.0, 1.0}, 2.0) == Catch::Approx(1.0).margin(1e-14));
  CHECK(evt::evt_E({1.0, 0.0}, std::exp(1.0)) == Catch::Approx(1.0).margin(1e-14));
  CHECK(evt::evt_E({2.0, -1.0}, 2.0) == Catch::Approx(1.0).margin(1e-14));
  CHECK_THROWS_AS(evt::evt_E({1.0, 1.0}, 0.0), DomainViolation);
}

TEST_CASE("auxiliary values") {
  CHECK(evt::evt_A(1.0, 3.0) == 3.0);
  CHECK(evt::evt_A(0.0, 7.0) == 1.0);
  CHECK(evt::evt_A(0.5, 4.0) == Catch::Approx(2.0).margin(1e-14));
}

TEST_CASE("Goldie residual vanishes for closed forms") {
  Rng rng(17);
  std::vector<std::pair<double, double>> pairs = {{1.0, 2.3}};  // E(1) = 0 edge
  for (int i = 0; i < 1000; ++i)
    pairs.emplace_back(rng.uniform(0.25, 4.0), rng.uniform(0.25, 4.0));
  for (const auto& p : {evt::EvtParams{1, 1}, {1, 0}, {2, 0.5}, {2, -1}, {0.5, 2}}) {
    const auto rep = evt::evt_goldie_residual(p, pairs);
    INFO("kappa=" << p.kappa << " gamma=" << p.gamma);
    CHECK(rep.max_residual <= 1e-12);
  }
}

TEST_CASE("GEV distribution function") {
  CHECK(evt::gev_cdf(0.0, 0.0) == Catch::Approx(std::exp(-1.0)).margin(1e-15));
  CHECK(evt::gev_cdf(1.0, -1.0) == 0.0);
  CHECK(evt::gev_cdf(-1.0, 1.0) == 1.0);
  CHECK(evt::gev_cdf(1.0, -2.0) == 0.0);   // below the lower endpoint
  CHECK(evt::gev_cdf(-1.0, 2.0) == 1.0);   // above the upper endpoint
}

TEST_CASE("GEV is monotone with range [0,1] and continuous in gamma") {
  for (double gamma : {-1.0, -0.1, 0.0, 0.1, 1.0}) {
    double prev = -1.0;
    for (int i = 0; i < 1000; ++i) {
      const double x = -8.0 + 16.0 * i / 999.0;
      const double f = evt::gev_cdf(gamma, x);
      REQUIRE(f >= 0.0);
      REQUIRE(f <= 1.0);
      REQUIRE(f + 1e-15 >= prev);
      prev = f;
    }
  }
  for (int i = 0; i <= 200; ++i) {
    const double x = -5.0 + 10.0 * i / 200.0;
    CHECK(std::fabs(evt::gev_cdf(1e-6, x) - evt::gev_cdf(0.0, x)) <= 1e-5);
    CHECK(std::fabs(evt::gev_cdf(-1e-6, x) - evt::gev_cdf(0.0, x)) <= 1e-5);
  }
}

TEST_CASE("fit recovers noiseless parameters") {
  for (const auto& truth : {evt::EvtParams{2.0, 0.5}, {1.0, 0.0}}) {
    std::vector<std::pair<double, double>> samples;
    for (int t = 1; t <= 10; ++t) samples.emplace_back(t, evt::evt_E(truth, t));
    const auto fit = evt::fit_E(samples);
    CHECK_FALSE(fit.degenerate);
    CHECK(fit.params.kappa == Catch::Approx(truth.kappa).margin(1e-3));
    CHECK(fit.params.gamma == Catch::Approx(truth.gamma).margin(1e-3));
    CHECK(fit.residual <= 1e-6);
  }
}

TEST_CASE("degenerate fits are flagged") {
  std::vector<std::pair<double, double>> zeros = {{1.0, 0.0}, {2.0, 0.0}, {3.0, 0.0}};
  const auto fit = evt::fit_E(zeros);
  CHECK(fit.degenerate);
  CHECK(fit.params.kappa == 0.0);
  CHECK_THROWS_AS(evt::fit_E({{1.0, 0.0}, {2.0, 1.0}}), DomainViolation);  // < 3 samples
}
