#include "afrelay/sim.hpp"

#include <atomic>
#include <cassert>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <random>
#include <stdexcept>
#include <thread>

namespace afrelay {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Uniform in [0,1) from the raw engine; avoids std::uniform_real_distribution
// so identical seeds give identical draws on every standard library.
double uniform01(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

class FadingSampler {
 public:
  explicit FadingSampler(const Scenario& scenario) {
    double cum = 0.0;
    for (const auto& sp : scenario.support) {
      cum += sp.probability;
      cdf_.push_back(cum);
      states_.push_back(sp.state);
    }
  }

  const FadingState& draw(std::mt19937_64& rng) const {
    const double u = uniform01(rng);
    for (std::size_t i = 0; i < cdf_.size(); ++i) {
      if (u < cdf_[i]) return states_[i];
    }
    return states_.back();
  }

 private:
  std::vector<double> cdf_;
  std::vector<FadingState> states_;
};

class ArrivalSampler {
 public:
  explicit ArrivalSampler(const ArrivalSpec& spec)
      : kind_(spec.kind),
        lambda_(spec.lambda),
        bound_(spec.effective_bound()),
        batch_prob_(spec.batch_probability()) {}

  double draw(std::mt19937_64& rng) const {
    switch (kind_) {
      case ArrivalKind::Constant:
        return lambda_;
      case ArrivalKind::BernoulliBatch:
        return uniform01(rng) < batch_prob_ ? bound_ : 0.0;
      case ArrivalKind::Uniform:
        return uniform01(rng) * bound_;
    }
    return 0.0;
  }

 private:
  ArrivalKind kind_;
  double lambda_;
  double bound_;
  double batch_prob_;
};

void write_event(std::ostream& out, const RateTable& rates,
                 const SlotRecord& rec) {
  const char* kind = rec.action.kind == ActionKind::SourceTransmit ? "source"
                     : rec.action.kind == ActionKind::RelayTransmit ? "relay"
                                                                    : "idle";
  FadingState g;
  if (rec.action.kind != ActionKind::Idle) {
    g = rates.alphabet().state_at(rec.action.state_index);
  }
  char line[512];
  std::snprintf(line, sizeof(line),
                "%llu,%.12g,%.12g,%.12g,%.12g,%s,%.12g,%.12g,%.12g,%.12g,"
                "%.12g,%.12g,%.12g,%.12g\n",
                static_cast<unsigned long long>(rec.slot), rec.fading.gs1,
                rec.fading.gs2, rec.fading.g1d, rec.fading.g2d, kind, g.gs1,
                g.gs2, g.g1d, g.g2d, rec.action.bits_moved, rec.source_bits,
                rec.weighted_backlog, rec.lyapunov);
  out << line;
}

}  // namespace

Trajectory::Trajectory(const RateTable& rates, SchedulerOptions options)
    : rates_(&rates), options_(options) {}

Action Trajectory::step(const FadingState& f, double arrival_bits) {
  arrived_ += arrival_bits;
  queues_.source_bits += arrival_bits;

  Action action = backpressure_decide(f, queues_, *rates_, options_);
#ifndef NDEBUG
  if (action.kind == ActionKind::SourceTransmit) {
    assert(matches_source(f, rates_->alphabet().state_at(action.state_index)));
  } else if (action.kind == ActionKind::RelayTransmit) {
    assert(matches_destination(f, rates_->alphabet().state_at(action.state_index)));
  }
#endif
  const double moved = apply_action(queues_, action, *rates_);
  if (action.kind == ActionKind::RelayTransmit) delivered_ += moved;

  if (observer_) {
    SlotRecord rec;
    rec.slot = queues_.slot;
    rec.fading = f;
    rec.action = action;
    rec.arrived_bits = arrival_bits;
    rec.source_bits = queues_.source_bits;
    rec.weighted_backlog = queues_.total_weighted_backlog(*rates_);
    rec.lyapunov = lyapunov_value(queues_, *rates_);
    observer_(rec);
  }
  ++queues_.slot;
  return action;
}

TrajectoryStats run_trajectory(const Scenario& scenario, const RateTable& rates,
                               const ArrivalSpec& arrivals,
                               std::uint64_t horizon, std::uint64_t seed,
                               const SchedulerOptions& options,
                               std::ostream* event_log) {
  scenario.validate();
  arrivals.validate();

  std::mt19937_64 fading_rng(splitmix64(seed ^ 0x66616465ULL));
  std::mt19937_64 arrival_rng(splitmix64(seed ^ 0x61727273ULL));
  const FadingSampler fading(scenario);
  const ArrivalSampler arrival(arrivals);

  Trajectory traj(rates, options);
  if (event_log) {
    *event_log << event_log_header();
    traj.set_observer([event_log, &rates](const SlotRecord& rec) {
      write_event(*event_log, rates, rec);
    });
  }

  TrajectoryStats stats;
  stats.horizon = horizon;
  stats.seed = seed;
  stats.lambda = arrivals.lambda;
  const std::uint64_t interval =
      std::max<std::uint64_t>(1, horizon / scenario.sim.checkpoints);
  stats.checkpoints.reserve(scenario.sim.checkpoints + 1);

  for (std::uint64_t t = 0; t < horizon; ++t) {
    const FadingState& f = fading.draw(fading_rng);
    traj.step(f, arrival.draw(arrival_rng));
    if ((t + 1) % interval == 0 || t + 1 == horizon) {
      Checkpoint cp;
      cp.slot = t + 1;
      cp.backlog_bits = traj.queues().total_weighted_backlog(rates);
      cp.lyapunov = lyapunov_value(traj.queues(), rates);
      if (!stats.checkpoints.empty() && stats.checkpoints.back().slot == cp.slot) {
        stats.checkpoints.back() = cp;
      } else {
        stats.checkpoints.push_back(cp);
      }
    }
  }
  stats.arrived_bits = traj.arrived_bits();
  stats.delivered_bits = traj.delivered_bits();
  return stats;
}

const char* verdict_name(Verdict verdict) {
  switch (verdict) {
    case Verdict::Stable: return "stable";
    case Verdict::Unstable: return "unstable";
    case Verdict::Inconclusive: return "inconclusive";
  }
  return "?";
}

StabilityVerdict classify_stability(const TrajectoryStats& stats, double lambda,
                                    const StabilityThresholds& thresholds) {
  StabilityVerdict out;
  out.delivered_rate = stats.delivered_rate();
  if (stats.horizon < thresholds.min_horizon || stats.checkpoints.size() < 10) {
    return out;  // inconclusive: not enough signal to fit a slope
  }

  // Least-squares slope of backlog vs slot over the last half of the series.
  const std::size_t n = stats.checkpoints.size();
  const std::size_t start = n / 2;
  double sx = 0.0, sy = 0.0;
  const std::size_t count = n - start;
  for (std::size_t i = start; i < n; ++i) {
    sx += static_cast<double>(stats.checkpoints[i].slot);
    sy += stats.checkpoints[i].backlog_bits;
  }
  const double mx = sx / count, my = sy / count;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = start; i < n; ++i) {
    const double dx = static_cast<double>(stats.checkpoints[i].slot) - mx;
    sxy += dx * (stats.checkpoints[i].backlog_bits - my);
    sxx += dx * dx;
  }
  out.backlog_slope = sxx > 0.0 ? sxy / sxx : 0.0;

  const bool slope_ok = out.backlog_slope < thresholds.slope_fraction * lambda + 1e-9;
  const bool delivery_ok = out.delivered_rate >= thresholds.delivery_fraction * lambda;
  out.verdict = slope_ok && delivery_ok ? Verdict::Stable : Verdict::Unstable;
  return out;
}

SweepResult sweep_lambda(const Scenario& scenario, const RateTable& rates,
                         const std::vector<double>& lambdas,
                         std::uint64_t horizon,
                         const std::vector<std::uint64_t>& seeds,
                         const SchedulerOptions& options,
                         const StabilityThresholds& thresholds) {
  SweepResult result;
  result.rows.resize(lambdas.size() * seeds.size());
  if (result.rows.empty()) return result;

  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next.fetch_add(1); i < result.rows.size();
         i = next.fetch_add(1)) {
      const std::size_t li = i / seeds.size();
      const std::size_t si = i % seeds.size();
      ArrivalSpec arrivals = scenario.arrivals;
      arrivals.lambda = lambdas[li];
      if (arrivals.bound > 0.0 && arrivals.bound < arrivals.lambda) {
        arrivals.bound = 0.0;  // fall back to the derived batch size
      }
      const TrajectoryStats stats = run_trajectory(
          scenario, rates, arrivals, horizon, seeds[si], options);
      const StabilityVerdict verdict =
          classify_stability(stats, lambdas[li], thresholds);
      result.rows[i] = {lambdas[li], seeds[si], verdict.backlog_slope,
                        verdict.delivered_rate, verdict.verdict};
    }
  };

  const std::size_t n_threads =
      std::min<std::size_t>(std::max(1u, std::thread::hardware_concurrency()),
                            result.rows.size());
  std::vector<std::thread> pool;
  for (std::size_t i = 1; i < n_threads; ++i) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();

  for (std::size_t li = 0; li < lambdas.size(); ++li) {
    std::size_t stable = 0, unstable = 0;
    for (std::size_t si = 0; si < seeds.size(); ++si) {
      const Verdict v = result.rows[li * seeds.size() + si].verdict;
      stable += v == Verdict::Stable;
      unstable += v == Verdict::Unstable;
    }
    Verdict majority = Verdict::Inconclusive;
    if (2 * stable > seeds.size()) majority = Verdict::Stable;
    else if (2 * unstable > seeds.size()) majority = Verdict::Unstable;
    result.summary.push_back({lambdas[li], majority});
  }
  return result;
}

Scenario outage_scenario(double gamma) {
  if (!(gamma >= 0.0 && gamma <= 1.0)) {
    throw std::invalid_argument("outage_scenario: gamma must lie in [0,1]");
  }
  const double bar = 1.0 - gamma;
  Scenario sc;
  sc.alphabet = Alphabet({0.0, 1.0, 10.0});
  sc.power = 1.0;
  auto add = [&sc](const FadingState& f, double p) {
    if (p > 0.0) sc.support.push_back({f, p});
  };
  add({0.0, 0.0, 0.0, 0.0}, gamma * gamma);
  add({0.0, 0.0, 10.0, 10.0}, gamma * bar);
  add({1.0, 1.0, 0.0, 0.0}, bar * gamma);
  add({1.0, 1.0, 10.0, 10.0}, bar * bar);
  sc.validate();
  return sc;
}

std::vector<Figure2Row> figure2(const std::vector<double>& gammas,
                                double lp_tolerance) {
  for (double g : gammas) {
    if (!(g >= 0.0 && g <= 1.0)) {
      throw std::invalid_argument("figure2: gamma values must lie in [0,1]");
    }
  }
  RateSolverOptions rate_opts;
  rate_opts.tolerance = lp_tolerance;
  const RateTable rates(Alphabet({0.0, 1.0, 10.0}), 1.0, rate_opts);
  const double r_star = rates.rate(FadingState{1.0, 1.0, 10.0, 10.0});

  std::vector<Figure2Row> rows;
  rows.reserve(gammas.size());
  for (double gamma : gammas) {
    const Scenario sc = outage_scenario(gamma);
    const double bar = 1.0 - gamma;
    Figure2Row row;
    row.gamma = gamma;
    row.r_sync = synchronous_baseline(sc, rates);
    row.r_async_formula = (0.5 * bar * bar + gamma * bar) * r_star;
    row.r_max_lp = solve_region(sc, rates, RegionForm::Min, lp_tolerance).r_max;
    rows.push_back(row);
  }
  return rows;
}

std::string figure2_to_csv(const std::vector<Figure2Row>& rows) {
  std::string out = "gamma,r_sync,r_async_formula,r_max_lp\n";
  char line[160];
  for (const auto& r : rows) {
    std::snprintf(line, sizeof(line), "%.12g,%.12g,%.12g,%.12g\n", r.gamma,
                  r.r_sync, r.r_async_formula, r.r_max_lp);
    out += line;
  }
  return out;
}

std::string sweep_to_csv(const SweepResult& result) {
  std::string out = "lambda,seed,backlog_slope,delivered_rate,verdict\n";
  char line[160];
  for (const auto& r : result.rows) {
    std::snprintf(line, sizeof(line), "%.12g,%llu,%.12g,%.12g,%s\n", r.lambda,
                  static_cast<unsigned long long>(r.seed), r.backlog_slope,
                  r.delivered_rate, verdict_name(r.verdict));
    out += line;
  }
  return out;
}

std::string trajectory_summary_csv(const TrajectoryStats& stats,
                                   const StabilityVerdict& verdict) {
  char buf[512];
  std::snprintf(buf, sizeof(buf),
                "metric,value\n"
                "horizon,%llu\n"
                "seed,%llu\n"
                "lambda,%.12g\n"
                "arrived_bits,%.12g\n"
                "delivered_bits,%.12g\n"
                "delivered_rate,%.12g\n"
                "backlog_slope,%.12g\n"
                "final_backlog,%.12g\n"
                "verdict,%s\n",
                static_cast<unsigned long long>(stats.horizon),
                static_cast<unsigned long long>(stats.seed), stats.lambda,
                stats.arrived_bits, stats.delivered_bits,
                stats.delivered_rate(), verdict.backlog_slope,
                stats.checkpoints.empty() ? 0.0
                                          : stats.checkpoints.back().backlog_bits,
                verdict_name(verdict.verdict));
  return buf;
}

std::string event_log_header() {
  return "slot,f_s1,f_s2,f_1d,f_2d,action,g_s1,g_s2,g_1d,g_2d,bits_moved,"
         "q_s,weighted_backlog,lyapunov\n";
}

}  // namespace afrelay
