#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstring>
#include <string>

#include "afrelay.h"

namespace {

std::string scenario_path() {
  return std::string(SCENARIO_DIR) + "/figure2_gamma05.scn";
}

struct Fixture {
  afr_scenario* scenario = nullptr;
  afr_rate_table* table = nullptr;

  Fixture() {
    REQUIRE(afr_scenario_load(scenario_path().c_str(), &scenario) == AFR_OK);
    REQUIRE(afr_rate_table_build(scenario, &table) == AFR_OK);
  }
  ~Fixture() {
    afr_rate_table_free(table);
    afr_scenario_free(scenario);
  }
};

std::size_t count_lines(const char* s) {
  std::size_t n = 0;
  for (; *s; ++s) n += *s == '\n';
  return n;
}

}  // namespace

TEST_CASE("scenario accessors") {
  Fixture fx;
  CHECK(afr_scenario_lambda(fx.scenario) == 0.25);
  CHECK(afr_scenario_horizon(fx.scenario) == 1'000'000);
  CHECK(afr_scenario_seed_count(fx.scenario) == 3);
  CHECK(afr_scenario_seed(fx.scenario, 2) == 3);
  CHECK(afr_scenario_tolerance(fx.scenario) == 1e-9);
  CHECK(afr_scenario_set_tolerance(fx.scenario, 1e-8) == AFR_OK);
  CHECK(afr_scenario_tolerance(fx.scenario) == 1e-8);
  CHECK(afr_scenario_set_tolerance(fx.scenario, -1.0) == AFR_ERROR_INVALID);
}

TEST_CASE("scenario format round trip") {
  Fixture fx;
  char* text1 = nullptr;
  REQUIRE(afr_scenario_format(fx.scenario, &text1) == AFR_OK);
  afr_scenario* again = nullptr;
  REQUIRE(afr_scenario_parse(text1, &again) == AFR_OK);
  char* text2 = nullptr;
  REQUIRE(afr_scenario_format(again, &text2) == AFR_OK);
  CHECK(std::strcmp(text1, text2) == 0);
  afr_string_free(text1);
  afr_string_free(text2);
  afr_scenario_free(again);
}

TEST_CASE("capacity and the direct rate entry point") {
  double c = 0.0;
  REQUIRE(afr_capacity(20.0 / 11.0, &c) == AFR_OK);
  CHECK(c == doctest::Approx(0.5 * std::log2(31.0 / 11.0)).epsilon(1e-14));
  CHECK(afr_capacity(-1.0, &c) == AFR_ERROR_INVALID);
  CHECK(std::string(afr_last_error()).find("negative") != std::string::npos);

  const double gains[4] = {1, 1, 10, 10};
  double rate = 0.0, powers[3] = {0, 0, 0};
  REQUIRE(afr_af_rate(gains, 1.0, 1e-9, &rate, powers) == AFR_OK);
  CHECK(rate == doctest::Approx(c).epsilon(1e-9));
  CHECK(powers[0] == 1.0);

  const double bad[4] = {-1, 1, 10, 10};
  CHECK(afr_af_rate(bad, 1.0, 1e-9, &rate, nullptr) == AFR_ERROR_INVALID);
  CHECK(afr_af_rate(gains, 0.0, 1e-9, &rate, nullptr) == AFR_ERROR_INVALID);
}

TEST_CASE("rate table surface") {
  Fixture fx;
  CHECK(afr_rate_table_size(fx.table) == 81);

  double gains[4], rate, powers[3];
  REQUIRE(afr_rate_table_row(fx.table, 80, gains, &rate, powers) == AFR_OK);
  CHECK(gains[0] == 10.0);  // last lexicographic state is [10,10,10,10]
  CHECK(afr_rate_table_row(fx.table, 81, gains, &rate, powers) ==
        AFR_ERROR_INVALID);

  const double worked[4] = {1, 1, 10, 10};
  REQUIRE(afr_rate_table_lookup(fx.table, worked, &rate) == AFR_OK);
  CHECK(rate == doctest::Approx(0.5 * std::log2(31.0 / 11.0)).epsilon(1e-9));

  const double outside[4] = {1, 1, 7, 10};
  CHECK(afr_rate_table_lookup(fx.table, outside, &rate) == AFR_ERROR_INVALID);

  char* csv = nullptr;
  REQUIRE(afr_rate_table_csv(fx.table, &csv) == AFR_OK);
  CHECK(count_lines(csv) == 82);
  afr_string_free(csv);

  csv = nullptr;
  REQUIRE(afr_rate_table_support_csv(fx.table, fx.scenario, &csv) == AFR_OK);
  CHECK(count_lines(csv) == 5);  // header + 4 support states
  afr_string_free(csv);
}

TEST_CASE("region, baseline and supportability") {
  Fixture fx;
  afr_region* min_form = nullptr;
  afr_region* eq_form = nullptr;
  REQUIRE(afr_region_solve(fx.scenario, fx.table, AFR_FORM_MIN, &min_form) ==
          AFR_OK);
  REQUIRE(afr_region_solve(fx.scenario, fx.table, AFR_FORM_EQ, &eq_form) ==
          AFR_OK);
  const double r_max = afr_region_r_max(min_form);
  CHECK(r_max == doctest::Approx(0.375 * 0.5 * std::log2(31.0 / 11.0))
                     .epsilon(1e-9));
  CHECK(afr_region_r_max(eq_form) == doctest::Approx(r_max).epsilon(1e-10));

  char* csv = nullptr;
  REQUIRE(afr_region_csv(min_form, &csv) == AFR_OK);
  CHECK(std::string(csv).find("r_max,") != std::string::npos);
  afr_string_free(csv);
  afr_region_free(min_form);
  afr_region_free(eq_form);

  double baseline = 0.0;
  REQUIRE(afr_synchronous_baseline(fx.scenario, fx.table, &baseline) == AFR_OK);
  CHECK(baseline ==
        doctest::Approx(0.125 * 0.5 * std::log2(31.0 / 11.0)).epsilon(1e-10));

  int feasible = -1;
  REQUIRE(afr_supportable(fx.scenario, fx.table, 0.28, &feasible) == AFR_OK);
  CHECK(feasible == 1);
  REQUIRE(afr_supportable(fx.scenario, fx.table, 0.30, &feasible) == AFR_OK);
  CHECK(feasible == 0);
}

TEST_CASE("simulation through the C surface") {
  Fixture fx;
  afr_sim_result* sim = nullptr;
  REQUIRE(afr_simulate(fx.scenario, fx.table, 0.2, 50'000, 1, nullptr, &sim) ==
          AFR_OK);
  CHECK(afr_sim_verdict(sim) == AFR_VERDICT_STABLE);
  CHECK(afr_sim_delivered_rate(sim) == doctest::Approx(0.2).epsilon(0.05));

  char* csv = nullptr;
  REQUIRE(afr_sim_summary_csv(sim, &csv) == AFR_OK);
  CHECK(std::string(csv).find("verdict,stable") != std::string::npos);
  afr_string_free(csv);
  afr_sim_result_free(sim);

  const double lambdas[2] = {0.1, 0.45};
  const uint64_t seeds[2] = {1, 2};
  csv = nullptr;
  REQUIRE(afr_sweep_csv(fx.scenario, fx.table, lambdas, 2, 60'000, seeds, 2,
                        &csv) == AFR_OK);
  CHECK(count_lines(csv) == 5);  // header + 4 rows
  const std::string sweep(csv);
  CHECK(sweep.find("unstable") != std::string::npos);  // 0.45 > r_max
  afr_string_free(csv);
}

TEST_CASE("figure2 through the C surface") {
  double gammas[21];
  for (int i = 0; i <= 20; ++i) gammas[i] = i * 0.05;
  char* csv = nullptr;
  REQUIRE(afr_figure2_csv(gammas, 21, 0.0, &csv) == AFR_OK);
  CHECK(count_lines(csv) == 22);
  afr_string_free(csv);

  const double bad[1] = {1.5};
  CHECK(afr_figure2_csv(bad, 1, 0.0, &csv) == AFR_ERROR_INVALID);
}

TEST_CASE("error paths set status and message") {
  afr_scenario* sc = nullptr;
  CHECK(afr_scenario_load("/nonexistent/nowhere.scn", &sc) == AFR_ERROR_IO);
  CHECK(std::string(afr_last_error()).find("cannot open") != std::string::npos);

  CHECK(afr_scenario_parse("[bogus]\nx=1\n", &sc) == AFR_ERROR_PARSE);
  CHECK(std::string(afr_last_error()).find("unknown section") !=
        std::string::npos);

  CHECK(afr_scenario_load(nullptr, &sc) == AFR_ERROR_INVALID);
  CHECK(afr_rate_table_build(nullptr, nullptr) == AFR_ERROR_INVALID);
  CHECK(afr_region_r_max(nullptr) == 0.0);
}
