#include <catch2/catch_amalgamated.hpp>

#include <fstream>
#include <sstream>

#include "popa/json_io.hpp"

using namespace popa;

namespace {
std::string slurp(const std::string& path) {
  std::ifstream in(path);
  REQUIRE(in.good());
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}
}  // namespace

TEST_CASE("shipped schema files match the embedded copies") {
  CHECK(slurp(std::string(POPA_SCHEMA_DIR) + "/homspec.schema.json") ==
        homspec_schema_text());
  CHECK(slurp(std::string(POPA_SCHEMA_DIR) + "/report.schema.json") ==
        report_schema_text());
}

TEST_CASE("hom specs round-trip through JSON") {
  const auto specs = {
      make_power_hom(LinFunc<double>({1.0, 0.0}), LinFunc<double>({1.0, 0.0}),
                     {1.0, 0.0}, 2.0),
      make_linear_hom(LinFunc<double>({1.0, 0.0}), LinFunc<double>({1.0, 0.0}),
                      Matrix::identity(2)),
      make_log_hom(LinFunc<double>({1.0, 0.0}), LinFunc<double>({1.0, 0.0}), {0.0, 3.0}),
      make_exp_hom(LinFunc<double>({1.0, 0.0}), {1.0, 0.0},
                   LinFunc<double>({0.7, -0.2})),
      make_zero_hom(LinFunc<double>({1.0}), LinFunc<double>({1.0})),
  };
  for (const auto& spec : specs) {
    const HomSpec back = homspec_from_json(homspec_to_json(spec));
    CHECK(back.family == spec.family);
    CHECK(back.rho.coeffs == spec.rho.coeffs);
    CHECK(back.sigma.coeffs == spec.sigma.coeffs);
    CHECK(back.validated);
    // The round-tripped spec evaluates identically.
    Rng rng(1);
    const auto ctx = make_ctx<double>(spec.rho.coeffs);
    for (int i = 0; i < 10; ++i) {
      const auto x = random_member(ctx, rng);
      CHECK(hom_eval(back, x) == hom_eval(spec, x));
    }
  }
}

TEST_CASE("schema violations are rejected on load") {
  json bad = json::parse(R"({"family":"power","rho":[1,0]})");
  CHECK_THROWS_AS(homspec_from_json(bad), ParseError);  // missing sigma

  json wrong_enum = json::parse(R"({"family":"cubic","rho":[1],"sigma":[1]})");
  CHECK_THROWS_AS(homspec_from_json(wrong_enum), ParseError);

  json wrong_type = json::parse(R"({"family":"power","rho":"x","sigma":[1]})");
  CHECK_THROWS_AS(homspec_from_json(wrong_type), ParseError);

  json missing_field = json::parse(R"({"family":"power","rho":[1,0],"sigma":[1,0]})");
  CHECK_THROWS_AS(homspec_from_json(missing_field), ParseError);  // no v/gamma

  json bad_constraint =
      json::parse(R"({"family":"power","rho":[1,0],"sigma":[1,0],"v":[0.5,0],"gamma":2})");
  CHECK_THROWS_AS(homspec_from_json(bad_constraint), ConstraintViolation);
}

TEST_CASE("reports satisfy the report schema") {
  json report;
  report["command"] = "bo";
  report["inputs_digest"] = "00";
  report["seed"] = 7;
  report["pass"] = true;
  report["metrics"] = json::object();
  report["wall_ms"] = 1.5;
  const json schema = json::parse(report_schema_text());
  CHECK(validate_document(report, schema).empty());

  report.erase("seed");
  CHECK_FALSE(validate_document(report, schema).empty());
}

TEST_CASE("witnesses serialize with exact scalars") {
  const auto ctx = make_ctx<Rational>({Rational(1), Rational(0)});
  const auto w = sum_witness(ctx, {Rational(4), Rational(0)}, {Rational(-3), Rational(0)});
  const json j = witness_to_json(w);
  CHECK(j["case"] == "case2");
  CHECK(j["delta"] == "4/5");
  CHECK(j["word"][1]["element"][0] == "-3/5");
  CHECK(j["target"][0] == "1");
}
