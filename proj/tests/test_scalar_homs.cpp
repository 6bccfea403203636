#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "popa/scalar_homs.hpp"

using namespace popa;

TEST_CASE("domains of the scalar groups") {
  const auto fin = ext_domain(ExtParam::fin(1.0));
  CHECK(fin.lo == -1.0);
  CHECK(std::isinf(fin.hi));
  CHECK(std::isinf(ext_domain(ExtParam::zero()).lo));
  CHECK(ext_domain(ExtParam::inf()).lo == 0.0);
  CHECK_THROWS_AS(ExtParam::fin(-1.0), DomainViolation);
}

TEST_CASE("scalar circle operation per parameter kind") {
  CHECK(ext_circle(ExtParam::fin(1.0), 2.0, 3.0) == 11.0);
  CHECK(ext_circle(ExtParam::zero(), 2.0, 3.0) == 5.0);
  CHECK(ext_circle(ExtParam::inf(), 2.0, 3.0) == 6.0);
  CHECK_THROWS_AS(ext_circle(ExtParam::inf(), -1.0, 2.0), DomainViolation);
}

TEST_CASE("table values at pinned points") {
  CHECK(scalar_hom_eval({ExtParam::fin(1.0), ExtParam::fin(1.0), 1.0}, 3.0) ==
        Catch::Approx(3.0).margin(1e-14));
  CHECK(scalar_hom_eval({ExtParam::zero(), ExtParam::inf(), 2.0}, 1.0) ==
        Catch::Approx(std::exp(2.0)).margin(1e-12));
  CHECK(scalar_hom_eval({ExtParam::zero(), ExtParam::zero(), 5.0}, 0.0) == 0.0);
  // log/exp rows
  CHECK(scalar_hom_eval({ExtParam::inf(), ExtParam::zero(), 3.0}, std::exp(1.0)) ==
        Catch::Approx(3.0).margin(1e-12));
  CHECK(scalar_hom_eval({ExtParam::fin(1.0), ExtParam::inf(), 2.0}, 1.0) ==
        Catch::Approx(4.0).margin(1e-12));
  CHECK_THROWS_AS(scalar_hom_eval({ExtParam::inf(), ExtParam::zero(), 1.0}, -1.0),
                  DomainViolation);
}

TEST_CASE("every cell is a homomorphism to 1e-10") {
  const std::vector<ExtParam> params = {ExtParam::zero(), ExtParam::fin(0.7), ExtParam::inf()};
  std::uint64_t stream = 0;
  for (const auto& r : params)
    for (const auto& s : params)
      for (double kappa : {0.5, 1.0, 2.0, -1.0, -2.5}) {
        const auto rep = scalar_hom_residual_sweep({r, s, kappa}, 1000, 1000 + ++stream);
        INFO("rho=" << r.str() << " sigma=" << s.str() << " kappa=" << kappa);
        CHECK(rep.pass);
      }
}

TEST_CASE("identity at the neutral element") {
  const std::vector<ExtParam> params = {ExtParam::zero(), ExtParam::fin(2.0), ExtParam::inf()};
  for (const auto& r : params)
    for (const auto& s : params) {
      const double neutral_in = r.kind == ExtParam::Kind::Inf ? 1.0 : 0.0;
      const double neutral_out = s.kind == ExtParam::Kind::Inf ? 1.0 : 0.0;
      CHECK(scalar_hom_eval({r, s, 1.7}, neutral_in) ==
            Catch::Approx(neutral_out).margin(1e-14));
    }
}

TEST_CASE("cross-cell continuity at sigma -> 0") {
  CHECK(cell_continuity_gap(ExtParam::fin(1.0), 1.0, 1.0, 1e-8) <= 1e-6);
  CHECK(std::fabs(scalar_hom_eval({ExtParam::fin(1.0), ExtParam::fin(1e-8), 1.0}, 1.0) -
                  std::log(2.0)) <= 1e-6);
  CHECK(cell_continuity_gap(ExtParam::fin(1.0), 0.0, 1.0, 1e-8) == 0.0);
  CHECK(std::fabs(scalar_hom_eval({ExtParam::inf(), ExtParam::fin(1e-8), 3.0}, std::exp(1.0)) -
                  3.0) <= 1e-6);
}

TEST_CASE("composition multiplies the exponents") {
  const ScalarHom first{ExtParam::fin(0.5), ExtParam::fin(2.0), 1.3};
  const ScalarHom second{ExtParam::fin(2.0), ExtParam::fin(0.8), -0.6};
  const ScalarHom direct{ExtParam::fin(0.5), ExtParam::fin(0.8), 1.3 * -0.6};
  for (int i = 0; i < 100; ++i) {
    const double t = -1.8 + 0.05 * i;
    const double composed = scalar_hom_eval(second, scalar_hom_eval(first, t));
    CHECK(rel_gap(composed, scalar_hom_eval(direct, t)) <= 1e-10);
  }
}

TEST_CASE("strict monotonicity for positive kappa") {
  const std::vector<ExtParam> params = {ExtParam::zero(), ExtParam::fin(1.5), ExtParam::inf()};
  for (const auto& r : params)
    for (const auto& s : params) {
      const ScalarHom m{r, s, 0.8};
      const Interval dom = ext_domain(r);
      const double lo = std::isinf(dom.lo) ? -3.0 : dom.lo * 0.9 + 0.01;
      double prev = scalar_hom_eval(m, lo);
      for (int i = 1; i <= 64; ++i) {
        const double t = lo + (4.0 - lo) * i / 64.0;
        const double cur = scalar_hom_eval(m, t);
        CHECK(cur > prev);
        prev = cur;
      }
    }
}

TEST_CASE("kappa = 0 collapses to the constant neutral map") {
  const ScalarHom m{ExtParam::fin(1.0), ExtParam::fin(2.0), 0.0};
  CHECK(scalar_hom_eval(m, 3.0) == 0.0);
  const ScalarHom minf{ExtParam::fin(1.0), ExtParam::inf(), 0.0};
  CHECK(scalar_hom_eval(minf, 3.0) == 1.0);
}
