#include "afrelay.h"

#include <cstdio>
#include <cstring>
#include <fstream>
#include <memory>
#include <new>
#include <string>

#include "afrelay/channel_model.hpp"
#include "afrelay/scenario.hpp"
#include "afrelay/sim.hpp"
#include "afrelay/stability_region.hpp"

using namespace afrelay;

struct afr_scenario {
  Scenario value;
};
struct afr_rate_table {
  RateTable value;
};
struct afr_region {
  RegionSolution value;
};
struct afr_sim_result {
  TrajectoryStats stats;
  StabilityVerdict verdict;
};

namespace {

thread_local std::string g_last_error;

void set_error(const std::string& message) { g_last_error = message; }

// Runs fn, translating exceptions into status codes and the thread-local
// error message.
template <typename Fn>
afr_status guarded(Fn&& fn) {
  try {
    return fn();
  } catch (const ParseError& e) {
    set_error(e.what());
    return AFR_ERROR_PARSE;
  } catch (const ScenarioError& e) {
    set_error(e.what());
    return AFR_ERROR_INVALID;
  } catch (const std::invalid_argument& e) {
    set_error(e.what());
    return AFR_ERROR_INVALID;
  } catch (const std::domain_error& e) {
    set_error(e.what());
    return AFR_ERROR_INVALID;
  } catch (const std::logic_error& e) {
    set_error(e.what());
    return AFR_ERROR_INVALID;
  } catch (const std::bad_alloc&) {
    set_error("out of memory");
    return AFR_ERROR_SOLVER;
  } catch (const std::exception& e) {
    set_error(e.what());
    return AFR_ERROR_SOLVER;
  }
}

char* copy_string(const std::string& s) {
  char* out = new char[s.size() + 1];
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

afr_status require(bool ok, const char* message) {
  if (!ok) {
    set_error(message);
    return AFR_ERROR_INVALID;
  }
  return AFR_OK;
}

}  // namespace

extern "C" {

const char* afr_last_error(void) { return g_last_error.c_str(); }

void afr_string_free(char* s) { delete[] s; }

afr_status afr_scenario_load(const char* path, afr_scenario** out) {
  if (afr_status st = require(path && out, "null argument")) return st;
  return guarded([&] {
    std::ifstream probe(path);
    if (!probe) {
      set_error(std::string("cannot open scenario file '") + path + "'");
      return AFR_ERROR_IO;
    }
    probe.close();
    *out = new afr_scenario{load_scenario(path)};
    return AFR_OK;
  });
}

afr_status afr_scenario_parse(const char* text, afr_scenario** out) {
  if (afr_status st = require(text && out, "null argument")) return st;
  return guarded([&] {
    *out = new afr_scenario{parse_scenario_text(text)};
    return AFR_OK;
  });
}

afr_status afr_scenario_format(const afr_scenario* sc, char** out_text) {
  if (afr_status st = require(sc && out_text, "null argument")) return st;
  return guarded([&] {
    *out_text = copy_string(scenario_to_text(sc->value));
    return AFR_OK;
  });
}

void afr_scenario_free(afr_scenario* sc) { delete sc; }

double afr_scenario_lambda(const afr_scenario* sc) {
  return sc ? sc->value.arrivals.lambda : 0.0;
}

uint64_t afr_scenario_horizon(const afr_scenario* sc) {
  return sc ? sc->value.sim.horizon : 0;
}

size_t afr_scenario_seed_count(const afr_scenario* sc) {
  return sc ? sc->value.sim.seeds.size() : 0;
}

uint64_t afr_scenario_seed(const afr_scenario* sc, size_t index) {
  if (!sc || index >= sc->value.sim.seeds.size()) return 0;
  return sc->value.sim.seeds[index];
}

double afr_scenario_tolerance(const afr_scenario* sc) {
  return sc ? sc->value.tolerance : 0.0;
}

afr_status afr_scenario_set_tolerance(afr_scenario* sc, double tol) {
  if (afr_status st = require(sc != nullptr, "null scenario")) return st;
  if (afr_status st = require(tol > 0.0, "tolerance must be positive")) return st;
  sc->value.tolerance = tol;
  return AFR_OK;
}

afr_status afr_capacity(double x, double* out) {
  if (afr_status st = require(out != nullptr, "null output")) return st;
  return guarded([&] {
    *out = capacity(x);
    return AFR_OK;
  });
}

afr_status afr_af_rate(const double gains[4], double power, double tolerance,
                       double* rate, double powers[3]) {
  if (afr_status st = require(gains != nullptr, "null gains")) return st;
  return guarded([&] {
    RateSolverOptions opts;
    if (tolerance > 0.0) opts.tolerance = tolerance;
    const FadingState g{gains[0], gains[1], gains[2], gains[3]};
    if (g.gs1 < 0 || g.gs2 < 0 || g.g1d < 0 || g.g2d < 0) {
      set_error("gains must be non-negative");
      return AFR_ERROR_INVALID;
    }
    const RatePoint point = af_rate(g, power, opts);
    if (rate) *rate = point.rate;
    if (powers) {
      powers[0] = point.alloc.source;
      powers[1] = point.alloc.relay1;
      powers[2] = point.alloc.relay2;
    }
    return AFR_OK;
  });
}

afr_status afr_rate_table_build(const afr_scenario* sc, afr_rate_table** out) {
  if (afr_status st = require(sc && out, "null argument")) return st;
  return guarded([&] {
    RateSolverOptions opts;
    opts.tolerance = sc->value.tolerance;
    *out = new afr_rate_table{
        RateTable(sc->value.alphabet, sc->value.power, opts)};
    return AFR_OK;
  });
}

void afr_rate_table_free(afr_rate_table* table) { delete table; }

size_t afr_rate_table_size(const afr_rate_table* table) {
  return table ? table->value.size() : 0;
}

afr_status afr_rate_table_row(const afr_rate_table* table, size_t index,
                              double gains[4], double* rate, double powers[3]) {
  if (afr_status st = require(table != nullptr, "null table")) return st;
  if (afr_status st = require(index < table->value.size(), "row out of range")) {
    return st;
  }
  const FadingState g = table->value.alphabet().state_at(index);
  const RatePoint& point = table->value.at(index);
  if (gains) {
    gains[0] = g.gs1;
    gains[1] = g.gs2;
    gains[2] = g.g1d;
    gains[3] = g.g2d;
  }
  if (rate) *rate = point.rate;
  if (powers) {
    powers[0] = point.alloc.source;
    powers[1] = point.alloc.relay1;
    powers[2] = point.alloc.relay2;
  }
  return AFR_OK;
}

afr_status afr_rate_table_lookup(const afr_rate_table* table,
                                 const double gains[4], double* rate) {
  if (afr_status st = require(table && gains && rate, "null argument")) return st;
  return guarded([&] {
    *rate = table->value.rate(FadingState{gains[0], gains[1], gains[2], gains[3]});
    return AFR_OK;
  });
}

afr_status afr_rate_table_csv(const afr_rate_table* table, char** out) {
  if (afr_status st = require(table && out, "null argument")) return st;
  return guarded([&] {
    *out = copy_string(table->value.to_csv());
    return AFR_OK;
  });
}

afr_status afr_rate_table_support_csv(const afr_rate_table* table,
                                      const afr_scenario* sc, char** out) {
  if (afr_status st = require(table && sc && out, "null argument")) return st;
  return guarded([&] {
    std::string csv = "g_s1,g_s2,g_1d,g_2d,rate,p_s,p_1,p_2\n";
    char line[256];
    for (const auto& sp : sc->value.support) {
      const RatePoint& e = table->value.at(sp.state);
      std::snprintf(line, sizeof(line),
                    "%.12g,%.12g,%.12g,%.12g,%.12g,%.12g,%.12g,%.12g\n",
                    sp.state.gs1, sp.state.gs2, sp.state.g1d, sp.state.g2d,
                    e.rate, e.alloc.source, e.alloc.relay1, e.alloc.relay2);
      csv += line;
    }
    *out = copy_string(csv);
    return AFR_OK;
  });
}

afr_status afr_region_solve(const afr_scenario* sc, const afr_rate_table* table,
                            afr_region_form form, afr_region** out) {
  if (afr_status st = require(sc && table && out, "null argument")) return st;
  return guarded([&] {
    const RegionForm rf = form == AFR_FORM_EQ ? RegionForm::Eq : RegionForm::Min;
    *out = new afr_region{
        solve_region(sc->value, table->value, rf, sc->value.tolerance)};
    return AFR_OK;
  });
}

void afr_region_free(afr_region* region) { delete region; }

double afr_region_r_max(const afr_region* region) {
  return region ? region->value.r_max : 0.0;
}

afr_status afr_region_csv(const afr_region* region, char** out) {
  if (afr_status st = require(region && out, "null argument")) return st;
  return guarded([&] {
    *out = copy_string(region_to_csv(region->value));
    return AFR_OK;
  });
}

afr_status afr_supportable(const afr_scenario* sc, const afr_rate_table* table,
                           double r, int* feasible) {
  if (afr_status st = require(sc && table && feasible, "null argument")) return st;
  return guarded([&] {
    *feasible =
        is_supportable(sc->value, table->value, r, sc->value.tolerance)
            ? 1
            : 0;
    return AFR_OK;
  });
}

afr_status afr_synchronous_baseline(const afr_scenario* sc,
                                    const afr_rate_table* table, double* out) {
  if (afr_status st = require(sc && table && out, "null argument")) return st;
  return guarded([&] {
    *out = synchronous_baseline(sc->value, table->value);
    return AFR_OK;
  });
}

afr_status afr_simulate(const afr_scenario* sc, const afr_rate_table* table,
                        double lambda, uint64_t horizon, uint64_t seed,
                        const char* event_log_path, afr_sim_result** out) {
  if (afr_status st = require(sc && table && out, "null argument")) return st;
  return guarded([&] {
    ArrivalSpec arrivals = sc->value.arrivals;
    arrivals.lambda = lambda;
    if (arrivals.bound > 0.0 && arrivals.bound < lambda) arrivals.bound = 0.0;
    const std::uint64_t h = horizon == 0 ? sc->value.sim.horizon : horizon;

    std::ofstream log;
    std::ostream* log_ptr = nullptr;
    if (event_log_path) {
      log.open(event_log_path, std::ios::binary);
      if (!log) {
        set_error(std::string("cannot open event log '") + event_log_path + "'");
        return AFR_ERROR_IO;
      }
      log_ptr = &log;
    }

    auto result = std::make_unique<afr_sim_result>();
    result->stats = run_trajectory(sc->value, table->value, arrivals, h, seed,
                                   SchedulerOptions{}, log_ptr);
    result->verdict = classify_stability(result->stats, lambda);
    *out = result.release();
    return AFR_OK;
  });
}

void afr_sim_result_free(afr_sim_result* result) { delete result; }

double afr_sim_delivered_rate(const afr_sim_result* result) {
  return result ? result->stats.delivered_rate() : 0.0;
}

double afr_sim_backlog_slope(const afr_sim_result* result) {
  return result ? result->verdict.backlog_slope : 0.0;
}

afr_verdict afr_sim_verdict(const afr_sim_result* result) {
  if (!result) return AFR_VERDICT_INCONCLUSIVE;
  switch (result->verdict.verdict) {
    case Verdict::Stable: return AFR_VERDICT_STABLE;
    case Verdict::Unstable: return AFR_VERDICT_UNSTABLE;
    case Verdict::Inconclusive: break;
  }
  return AFR_VERDICT_INCONCLUSIVE;
}

afr_status afr_sim_summary_csv(const afr_sim_result* result, char** out) {
  if (afr_status st = require(result && out, "null argument")) return st;
  return guarded([&] {
    *out = copy_string(trajectory_summary_csv(result->stats, result->verdict));
    return AFR_OK;
  });
}

afr_status afr_sweep_csv(const afr_scenario* sc, const afr_rate_table* table,
                         const double* lambdas, size_t n_lambdas,
                         uint64_t horizon, const uint64_t* seeds,
                         size_t n_seeds, char** out) {
  if (afr_status st =
          require(sc && table && out && (lambdas || n_lambdas == 0) &&
                      (seeds || n_seeds == 0),
                  "null argument")) {
    return st;
  }
  return guarded([&] {
    const std::vector<double> ls(lambdas, lambdas + n_lambdas);
    const std::vector<std::uint64_t> ss(seeds, seeds + n_seeds);
    const std::uint64_t h = horizon == 0 ? sc->value.sim.horizon : horizon;
    const SweepResult result =
        sweep_lambda(sc->value, table->value, ls, h, ss);
    *out = copy_string(sweep_to_csv(result));
    return AFR_OK;
  });
}

afr_status afr_figure2_csv(const double* gammas, size_t n_gammas,
                           double tolerance, char** out) {
  if (afr_status st = require(out && (gammas || n_gammas == 0), "null argument")) {
    return st;
  }
  return guarded([&] {
    const std::vector<double> gs(gammas, gammas + n_gammas);
    const double tol = tolerance > 0.0 ? tolerance : 1e-9;
    *out = copy_string(figure2_to_csv(figure2(gs, tol)));
    return AFR_OK;
  });
}

}  // extern "C"
