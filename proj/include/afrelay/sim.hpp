#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "afrelay/scenario.hpp"
#include "afrelay/scheduler.hpp"
#include "afrelay/stability_region.hpp"

namespace afrelay {

struct Checkpoint {
  std::uint64_t slot = 0;
  double backlog_bits = 0.0;  // q_s + sum over n,g of r_g * Q_n^g
  double lyapunov = 0.0;
};

struct TrajectoryStats {
  std::uint64_t horizon = 0;
  std::uint64_t seed = 0;
  double lambda = 0.0;
  double arrived_bits = 0.0;
  double delivered_bits = 0.0;
  std::vector<Checkpoint> checkpoints;

  double delivered_rate() const {
    return horizon == 0 ? 0.0 : delivered_bits / static_cast<double>(horizon);
  }
};

struct SlotRecord {
  std::uint64_t slot = 0;
  FadingState fading;
  Action action;
  double arrived_bits = 0.0;
  double source_bits = 0.0;
  double weighted_backlog = 0.0;
  double lyapunov = 0.0;
};

// Single-trajectory step engine. The scheduler side sees only the realized
// fading state each slot, never the distribution it was drawn from.
class Trajectory {
 public:
  explicit Trajectory(const RateTable& rates, SchedulerOptions options = {});

  Action step(const FadingState& f, double arrival_bits);

  const QueueState& queues() const { return queues_; }
  const RateTable& rates() const { return *rates_; }
  double arrived_bits() const { return arrived_; }
  double delivered_bits() const { return delivered_; }

  using Observer = std::function<void(const SlotRecord&)>;
  void set_observer(Observer observer) { observer_ = std::move(observer); }

 private:
  const RateTable* rates_;
  SchedulerOptions options_;
  QueueState queues_;
  double arrived_ = 0.0;
  double delivered_ = 0.0;
  Observer observer_;
};

// Drives one seeded trajectory: per slot draw the fading state and the
// arrival batch, enqueue, decide, apply. Fading and arrivals use independent
// generator streams derived from the seed, so runs are bit-reproducible.
// Writes a per-slot CSV record to `event_log` when given.
TrajectoryStats run_trajectory(const Scenario& scenario, const RateTable& rates,
                               const ArrivalSpec& arrivals,
                               std::uint64_t horizon, std::uint64_t seed,
                               const SchedulerOptions& options = {},
                               std::ostream* event_log = nullptr);

enum class Verdict { Stable, Unstable, Inconclusive };

const char* verdict_name(Verdict verdict);

struct StabilityVerdict {
  Verdict verdict = Verdict::Inconclusive;
  double backlog_slope = 0.0;  // bits/slot, least squares over the tail
  double delivered_rate = 0.0;
};

struct StabilityThresholds {
  double slope_fraction = 0.05;     // stable needs slope < this * lambda
  double delivery_fraction = 0.95;  // and delivered rate >= this * lambda
  std::uint64_t min_horizon = 10'000;
};

// Empirical proxy for stochastic stability over a finite horizon. The slope
// is fitted over the last half of the checkpoints to skip the transient.
StabilityVerdict classify_stability(const TrajectoryStats& stats, double lambda,
                                    const StabilityThresholds& thresholds = {});

struct SweepRow {
  double lambda = 0.0;
  std::uint64_t seed = 0;
  double backlog_slope = 0.0;
  double delivered_rate = 0.0;
  Verdict verdict = Verdict::Inconclusive;
};

struct SweepSummary {
  double lambda = 0.0;
  Verdict majority = Verdict::Inconclusive;
};

struct SweepResult {
  std::vector<SweepRow> rows;          // lambda-major, seed-minor
  std::vector<SweepSummary> summary;   // majority vote per lambda
};

// Runs every (lambda, seed) pair, in parallel across hardware threads.
SweepResult sweep_lambda(const Scenario& scenario, const RateTable& rates,
                         const std::vector<double>& lambdas,
                         std::uint64_t horizon,
                         const std::vector<std::uint64_t>& seeds,
                         const SchedulerOptions& options = {},
                         const StabilityThresholds& thresholds = {});

struct Figure2Row {
  double gamma = 0.0;
  double r_sync = 0.0;            // synchronous per-state averaging
  double r_async_formula = 0.0;   // closed form for this outage family
  double r_max_lp = 0.0;          // LP boundary
};

// The two-gain outage family: states [0,0,0,0], [0,0,10,10], [1,1,0,0] and
// [1,1,10,10] with probabilities g^2, g(1-g), (1-g)g and (1-g)^2, P = 1.
Scenario outage_scenario(double gamma);

std::vector<Figure2Row> figure2(const std::vector<double>& gammas,
                                double lp_tolerance = 1e-9);

std::string figure2_to_csv(const std::vector<Figure2Row>& rows);
std::string sweep_to_csv(const SweepResult& result);
std::string trajectory_summary_csv(const TrajectoryStats& stats,
                                   const StabilityVerdict& verdict);
std::string event_log_header();

}  // namespace afrelay
