// Command-line front end over the afrelay C API: reproduces the rate table,
// the stability-region boundary, the synchronous baseline, single
// trajectories, lambda sweeps and the outage-family comparison data.
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "afrelay.h"

namespace {

struct CliError {
  int code;
  std::string message;
};

int exit_code_for(afr_status status) {
  switch (status) {
    case AFR_OK:
      return 0;
    case AFR_ERROR_PARSE:
    case AFR_ERROR_INVALID:
      return 2;
    default:
      return 3;
  }
}

void check(afr_status status) {
  if (status != AFR_OK) {
    throw CliError{exit_code_for(status), afr_last_error()};
  }
}

struct ScenarioHandle {
  afr_scenario* ptr = nullptr;
  ~ScenarioHandle() { afr_scenario_free(ptr); }
};

struct TableHandle {
  afr_rate_table* ptr = nullptr;
  ~TableHandle() { afr_rate_table_free(ptr); }
};

struct RegionHandle {
  afr_region* ptr = nullptr;
  ~RegionHandle() { afr_region_free(ptr); }
};

struct SimHandle {
  afr_sim_result* ptr = nullptr;
  ~SimHandle() { afr_sim_result_free(ptr); }
};

struct OwnedString {
  char* ptr = nullptr;
  ~OwnedString() { afr_string_free(ptr); }
};

void load_scenario(const std::string& path, double tolerance,
                   ScenarioHandle& scenario) {
  check(afr_scenario_load(path.c_str(), &scenario.ptr));
  if (tolerance > 0.0) {
    check(afr_scenario_set_tolerance(scenario.ptr, tolerance));
  }
}

// "a:b:step" inclusive grid, or a comma-separated value list.
std::vector<double> parse_grid(const std::string& spec) {
  std::vector<double> out;
  const auto c1 = spec.find(':');
  if (c1 != std::string::npos) {
    const auto c2 = spec.find(':', c1 + 1);
    if (c2 == std::string::npos) {
      throw CliError{2, "grid must be start:end:step, got '" + spec + "'"};
    }
    const double start = std::atof(spec.substr(0, c1).c_str());
    const double end = std::atof(spec.substr(c1 + 1, c2 - c1 - 1).c_str());
    const double step = std::atof(spec.substr(c2 + 1).c_str());
    if (!(step > 0.0) || end < start) {
      throw CliError{2, "bad grid '" + spec + "'"};
    }
    for (double v = start; v <= end + 0.5 * step; v += step) {
      out.push_back(std::min(v, end));
    }
    return out;
  }
  std::size_t pos = 0;
  while (pos <= spec.size()) {
    const auto comma = spec.find(',', pos);
    const std::string tok =
        spec.substr(pos, comma == std::string::npos ? spec.size() - pos
                                                    : comma - pos);
    if (!tok.empty()) out.push_back(std::atof(tok.c_str()));
    if (comma == std::string::npos) break;
    pos = comma + 1;
  }
  if (out.empty()) throw CliError{2, "empty grid '" + spec + "'"};
  return out;
}

// --out wins; otherwise fall back to default_name inside AFRELAY_OUT_DIR
// (stdout when there is no default file).
void emit(const std::string& out_path, const char* default_name,
          const std::string& content) {
  std::string target = out_path;
  if (target.empty() && default_name) {
    const char* dir = std::getenv("AFRELAY_OUT_DIR");
    target = dir && *dir ? std::string(dir) + "/" + default_name : default_name;
  }
  if (target.empty()) {
    std::cout << content;
    return;
  }
  std::ofstream file(target, std::ios::binary);
  if (!file) throw CliError{3, "cannot write '" + target + "'"};
  file << content;
  std::cerr << "wrote " << target << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"amplify-and-forward relay network toolkit"};
  app.require_subcommand(1);

  std::string scenario_path, out_path, log_path;
  std::string form = "min", gammas = "0:1:0.05", lambdas, seeds_csv;
  double tolerance = 0.0, lambda = -1.0;
  std::uint64_t horizon = 0, seed = 0;
  bool full_table = false, relative = false, have_seed = false,
       have_lambda = false;

  auto add_common = [&](CLI::App* sub, bool needs_scenario) {
    if (needs_scenario) {
      sub->add_option("scenario", scenario_path, "scenario file")->required();
    }
    sub->add_option("--out", out_path, "output file (default: stdout/CSV name)");
    sub->add_option("--tolerance", tolerance, "solver tolerance override");
    sub->add_option("--seed", seed, "RNG seed")->each([&](const std::string&) {
      have_seed = true;
    });
  };

  auto* rate_cmd = app.add_subcommand("rate", "per-state AF rates");
  add_common(rate_cmd, true);
  rate_cmd->add_flag("--full", full_table, "all |F|^4 states, not just support");

  auto* region_cmd = app.add_subcommand("region", "stability region boundary");
  add_common(region_cmd, true);
  region_cmd->add_option("--form", form, "LP form: min, eq or both")
      ->check(CLI::IsMember({"min", "eq", "both"}));

  auto* baseline_cmd =
      app.add_subcommand("baseline", "synchronous combining average");
  add_common(baseline_cmd, true);

  auto* sim_cmd = app.add_subcommand("simulate", "run one trajectory");
  add_common(sim_cmd, true);
  sim_cmd->add_option("--lambda", lambda, "mean arrival rate (bits/slot)")
      ->each([&](const std::string&) { have_lambda = true; });
  sim_cmd->add_option("--horizon", horizon, "slots to simulate");
  sim_cmd->add_option("--log", log_path, "write a per-slot event log CSV");

  auto* sweep_cmd = app.add_subcommand("sweep", "stability verdicts on a lambda grid");
  add_common(sweep_cmd, true);
  sweep_cmd->add_option("--lambdas", lambdas, "grid start:end:step or list")
      ->required();
  sweep_cmd->add_flag("--relative", relative,
                      "lambdas are fractions of the LP r_max");
  sweep_cmd->add_option("--horizon", horizon, "slots per trajectory");
  sweep_cmd->add_option("--seeds", seeds_csv, "comma-separated seed list");

  auto* fig2_cmd =
      app.add_subcommand("figure2", "asynchronous vs synchronous comparison");
  add_common(fig2_cmd, false);
  fig2_cmd->add_option("--gammas", gammas, "outage grid start:end:step or list");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (fig2_cmd->parsed()) {
      const std::vector<double> grid = parse_grid(gammas);
      OwnedString csv;
      check(afr_figure2_csv(grid.data(), grid.size(), tolerance, &csv.ptr));
      emit(out_path, "figure2.csv", csv.ptr);
      return 0;
    }

    ScenarioHandle scenario;
    load_scenario(scenario_path, tolerance, scenario);
    TableHandle table;
    check(afr_rate_table_build(scenario.ptr, &table.ptr));

    if (rate_cmd->parsed()) {
      OwnedString csv;
      if (full_table) {
        check(afr_rate_table_csv(table.ptr, &csv.ptr));
      } else {
        check(afr_rate_table_support_csv(table.ptr, scenario.ptr, &csv.ptr));
      }
      emit(out_path, nullptr, csv.ptr);
    } else if (region_cmd->parsed()) {
      if (form == "both") {
        std::string out = "form,r_max\n";
        for (const auto& [name, f] :
             {std::pair{"min", AFR_FORM_MIN}, std::pair{"eq", AFR_FORM_EQ}}) {
          RegionHandle region;
          check(afr_region_solve(scenario.ptr, table.ptr, f, &region.ptr));
          char line[64];
          std::snprintf(line, sizeof(line), "%s,%.12g\n", name,
                        afr_region_r_max(region.ptr));
          out += line;
        }
        emit(out_path, nullptr, out);
      } else {
        RegionHandle region;
        check(afr_region_solve(scenario.ptr, table.ptr,
                               form == "eq" ? AFR_FORM_EQ : AFR_FORM_MIN,
                               &region.ptr));
        OwnedString csv;
        check(afr_region_csv(region.ptr, &csv.ptr));
        emit(out_path, nullptr, csv.ptr);
      }
    } else if (baseline_cmd->parsed()) {
      double value = 0.0;
      check(afr_synchronous_baseline(scenario.ptr, table.ptr, &value));
      char buf[80];
      std::snprintf(buf, sizeof(buf), "metric,value\nsynchronous_baseline,%.12g\n",
                    value);
      emit(out_path, nullptr, buf);
    } else if (sim_cmd->parsed()) {
      const double l =
          have_lambda ? lambda : afr_scenario_lambda(scenario.ptr);
      const std::uint64_t s =
          have_seed ? seed : afr_scenario_seed(scenario.ptr, 0);
      SimHandle sim;
      check(afr_simulate(scenario.ptr, table.ptr, l, horizon, s,
                         log_path.empty() ? nullptr : log_path.c_str(),
                         &sim.ptr));
      OwnedString csv;
      check(afr_sim_summary_csv(sim.ptr, &csv.ptr));
      emit(out_path, nullptr, csv.ptr);
    } else if (sweep_cmd->parsed()) {
      std::vector<double> grid = parse_grid(lambdas);
      if (relative) {
        RegionHandle region;
        check(afr_region_solve(scenario.ptr, table.ptr, AFR_FORM_MIN,
                               &region.ptr));
        const double r_max = afr_region_r_max(region.ptr);
        for (double& v : grid) v *= r_max;
      }
      std::vector<std::uint64_t> seed_list;
      if (!seeds_csv.empty()) {
        for (double v : parse_grid(seeds_csv)) {
          seed_list.push_back(static_cast<std::uint64_t>(v));
        }
      } else if (have_seed) {
        seed_list.push_back(seed);
      } else {
        const std::size_t n = afr_scenario_seed_count(scenario.ptr);
        for (std::size_t i = 0; i < n; ++i) {
          seed_list.push_back(afr_scenario_seed(scenario.ptr, i));
        }
      }
      OwnedString csv;
      check(afr_sweep_csv(scenario.ptr, table.ptr, grid.data(), grid.size(),
                          horizon, seed_list.data(), seed_list.size(),
                          &csv.ptr));
      emit(out_path, "sweep.csv", csv.ptr);
    }
    return 0;
  } catch (const CliError& e) {
    std::cerr << "error: " << e.message << "\n";
    return e.code;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
}
