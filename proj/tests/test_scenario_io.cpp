#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <string>

#include "afrelay/scenario.hpp"

using namespace afrelay;

namespace {

const char* kFigure2Gamma05 = R"(# outage family at gamma = 0.5
[alphabet]
gains = 0 1 10

[power]
budget = 1

[states]
0 0 0 0      0.25
0 0 10 10    0.25
1 1 0 0      0.25
1 1 10 10    0.25

[arrivals]
kind = bernoulli
lambda = 0.25

[sim]
horizon = 1000000
seeds = 1 2 3
checkpoints = 1000

[solver]
tolerance = 1e-9
)";

int line_of(const char* text, const std::string& needle) {
  const std::string s(text);
  const auto pos = s.find(needle);
  REQUIRE(pos != std::string::npos);
  int line = 1;
  for (std::size_t i = 0; i < pos; ++i) line += s[i] == '\n';
  return line;
}

}  // namespace

TEST_CASE("parse the bundled outage scenario") {
  const Scenario sc = parse_scenario_text(kFigure2Gamma05);
  CHECK(sc.alphabet.size() == 3);
  REQUIRE(sc.support.size() == 4);
  CHECK(sc.support[0].state == FadingState{0, 0, 0, 0});
  CHECK(sc.support[3].state == FadingState{1, 1, 10, 10});
  CHECK(sc.support[3].probability == 0.25);
  CHECK(sc.power == 1.0);
  CHECK(sc.arrivals.kind == ArrivalKind::BernoulliBatch);
  CHECK(sc.arrivals.lambda == 0.25);
  CHECK(sc.sim.horizon == 1'000'000);
  CHECK(sc.sim.seeds == std::vector<std::uint64_t>{1, 2, 3});
  CHECK(sc.tolerance == 1e-9);
}

TEST_CASE("bundled scenario file loads") {
  const Scenario sc = load_scenario(std::string(SCENARIO_DIR) +
                                    "/figure2_gamma05.scn");
  CHECK(sc.support.size() == 4);
  CHECK_THROWS_AS(load_scenario(std::string(SCENARIO_DIR) + "/missing.scn"),
                  ScenarioError);
}

TEST_CASE("round trip is the identity") {
  const Scenario first = parse_scenario_text(kFigure2Gamma05);
  const std::string text = scenario_to_text(first);
  const Scenario second = parse_scenario_text(text);
  CHECK(first == second);
  CHECK(scenario_to_text(second) == text);
}

TEST_CASE("states listed out of order are canonicalized") {
  Scenario sc = parse_scenario_text(
      "[alphabet]\ngains = 0 1\n[power]\nbudget = 1\n"
      "[states]\n1 1 1 1 0.5\n0 0 0 0 0.5\n");
  CHECK(sc.support[0].state == FadingState{0, 0, 0, 0});
}

TEST_CASE("probability sum violations are rejected") {
  const std::string text =
      "[alphabet]\ngains = 0 1\n[power]\nbudget = 1\n"
      "[states]\n0 0 1 1 0.5\n1 1 1 1 0.4\n";
  CHECK_THROWS_WITH_AS(parse_scenario_text(text),
                       doctest::Contains("probabilities sum to"), ParseError);
}

TEST_CASE("gains outside the alphabet are rejected with their line") {
  const char* text =
      "[alphabet]\ngains = 0 1\n[power]\nbudget = 1\n"
      "[states]\n0 0 1 1 0.5\n0 0 7 1 0.5\n";
  try {
    parse_scenario_text(text);
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(std::string(e.what()).find("7") != std::string::npos);
    CHECK(e.line() == line_of(text, "0 0 7 1"));
  }
}

TEST_CASE("unknown keys and sections are rejected") {
  CHECK_THROWS_WITH_AS(
      parse_scenario_text("[alphabet]\ngains = 1\n[power]\nbudget = 1\n"
                          "[states]\n1 1 1 1 1.0\n[sim]\nhorizno = 5\n"),
      doctest::Contains("unknown key 'horizno'"), ParseError);
  CHECK_THROWS_WITH_AS(parse_scenario_text("[bogus]\nx = 1\n"),
                       doctest::Contains("unknown section 'bogus'"),
                       ParseError);
  CHECK_THROWS_WITH_AS(
      parse_scenario_text("[alphabet]\ngains = 1\n[arrivals]\nkind = pareto\n"),
      doctest::Contains("unknown arrival kind"), ParseError);
}

TEST_CASE("structural errors carry line numbers") {
  CHECK_THROWS_AS(parse_scenario_text("x = 1\n"), ParseError);
  CHECK_THROWS_AS(parse_scenario_text("[alphabet\ngains = 1\n"), ParseError);
  CHECK_THROWS_AS(parse_scenario_text("[alphabet]\ngains = 1\n[power]\n"
                                      "budget = 1\n[states]\n1 1 1 0.5\n"),
                  ParseError);  // four tokens, not five
  CHECK_THROWS_AS(parse_scenario_text("[alphabet]\ngains = abc\n"), ParseError);
  CHECK_THROWS_AS(parse_scenario_text(""), ParseError);  // missing sections
  CHECK_THROWS_AS(
      parse_scenario_text("[alphabet]\ngains = 1\n[power]\nbudget = 1\n"
                          "[states]\n1 1 1 1 0.5\n1 1 1 1 0.5\n"),
      ParseError);  // duplicate state
}

TEST_CASE("arrival spec defaults and validation") {
  ArrivalSpec spec;
  spec.kind = ArrivalKind::BernoulliBatch;
  spec.lambda = 0.25;
  CHECK(spec.effective_bound() == 0.5);
  CHECK(spec.batch_probability() == doctest::Approx(0.5));
  spec.bound = 1.0;  // explicit batch size
  CHECK(spec.effective_bound() == 1.0);
  CHECK(spec.batch_probability() == doctest::Approx(0.25));
  spec.bound = 0.1;  // smaller than the mean: impossible
  CHECK_THROWS_AS(spec.validate(), ScenarioError);

  ArrivalSpec constant{ArrivalKind::Constant, 0.3, 0.0};
  CHECK(constant.effective_bound() == 0.3);
  ArrivalSpec uniform{ArrivalKind::Uniform, 0.3, 0.0};
  CHECK(uniform.effective_bound() == doctest::Approx(0.6));

  ArrivalSpec negative{ArrivalKind::Constant, -0.1, 0.0};
  CHECK_THROWS_AS(negative.validate(), ScenarioError);
}

TEST_CASE("scenario validation catches bad fields directly") {
  Scenario sc = parse_scenario_text(kFigure2Gamma05);
  sc.power = 0.0;
  CHECK_THROWS_AS(sc.validate(), ScenarioError);
  sc = parse_scenario_text(kFigure2Gamma05);
  sc.sim.seeds.clear();
  CHECK_THROWS_AS(sc.validate(), ScenarioError);
  sc = parse_scenario_text(kFigure2Gamma05);
  sc.tolerance = 0.0;
  CHECK_THROWS_AS(sc.validate(), ScenarioError);
  sc = parse_scenario_text(kFigure2Gamma05);
  CHECK(sc.probability_of(FadingState{1, 1, 10, 10}) == 0.25);
  CHECK(sc.probability_of(FadingState{1, 1, 10, 0}) == 0.0);
}
