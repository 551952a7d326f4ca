#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "afrelay/fading.hpp"

namespace afrelay {

// Half the spectral efficiency of a unit-noise Gaussian channel at SNR x,
// in bits per block. Throws std::domain_error for negative x.
double capacity(double snr);

struct PowerAllocation {
  double source = 0.0;
  double relay1 = 0.0;
  double relay2 = 0.0;

  friend bool operator==(const PowerAllocation&, const PowerAllocation&) = default;
};

// End-to-end AF rate achieved over state g by a fixed power split: the
// source signal is amplified once per relay and recombined coherently at
// the destination, so the effective SNR is
//   p_s (sqrt(g_s1 c_1) + sqrt(g_s2 c_2))^2 / (c_1 + c_2 + 1)
// with c_n = g_nd p_n / (g_sn p_s + 1).
double af_objective(const FadingState& g, const PowerAllocation& alloc);

struct RatePoint {
  double rate = 0.0;
  PowerAllocation alloc;
};

struct RateSolverOptions {
  double tolerance = 1e-9;  // absolute convergence target on the rate
  int slice_samples = 200;  // bracket scan resolution along each boundary slice
  int guard_grid_steps = 50;  // 3-D safety grid, step = power/guard_grid_steps
};

// Best achievable AF rate over state g with per-node budget `power`, and an
// allocation attaining it. The source always runs at full power; the two
// boundary slices relay1=power and relay2=power are refined by golden
// section, and a coarse 3-D grid guards against the slice search missing an
// interior optimum.
RatePoint af_rate(const FadingState& g, double power,
                  const RateSolverOptions& options = {});

// AF rates for every state of the alphabet, in lexicographic state order.
class RateTable {
 public:
  RateTable(Alphabet alphabet, double power,
            const RateSolverOptions& options = {});

  const Alphabet& alphabet() const { return alphabet_; }
  double power() const { return power_; }
  std::size_t size() const { return entries_.size(); }

  const RatePoint& at(std::size_t state_index) const {
    return entries_.at(state_index);
  }
  const RatePoint& at(const FadingState& g) const {
    return entries_[alphabet_.state_index(g)];
  }
  double rate(std::size_t state_index) const { return at(state_index).rate; }
  double rate(const FadingState& g) const { return at(g).rate; }

  // Indices of states with positive rate, lexicographic.
  const std::vector<std::size_t>& positive_states() const { return positive_; }

  // Positive-rate states a packet could be encoded for (source side) or
  // drained from (destination side) while f holds.
  const std::vector<std::size_t>& source_candidates(const FadingState& f) const;
  const std::vector<std::size_t>& destination_candidates(const FadingState& f) const;

  // Columns: g_s1,g_s2,g_1d,g_2d,rate,p_s,p_1,p_2
  std::string to_csv() const;

 private:
  Alphabet alphabet_;
  double power_;
  std::vector<RatePoint> entries_;
  std::vector<std::size_t> positive_;
  std::vector<std::vector<std::size_t>> by_prefix_;  // keyed by (i_s1, i_s2)
  std::vector<std::vector<std::size_t>> by_suffix_;  // keyed by (i_1d, i_2d)
};

}  // namespace afrelay
