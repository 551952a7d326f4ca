#pragma once

#include <optional>
#include <string>
#include <vector>

#include "afrelay/channel_model.hpp"
#include "afrelay/scenario.hpp"

namespace afrelay {

// Fraction of the slots with realized state `realized` spent moving packets
// encoded for `packet_state` (source side or relay side).
struct SharingEntry {
  FadingState realized;
  FadingState packet_state;
  double fraction = 0.0;
};

struct TimeSharing {
  std::vector<SharingEntry> source;  // nonzero a fractions
  std::vector<SharingEntry> relay;   // nonzero b fractions

  double source_fraction(const FadingState& f, const FadingState& g) const;
  double relay_fraction(const FadingState& f, const FadingState& g) const;
};

// Long-run bit flow into and out of the virtual queue of one packet state.
struct QueueFlow {
  FadingState packet_state;
  double fill_rate = 0.0;   // bits/slot entering via source transmissions
  double drain_rate = 0.0;  // bits/slot leaving via relay transmissions
};

// Two equivalent LP characterizations of the boundary rate: `Min` maximizes
// the sum over packet states of min(fill, drain); `Eq` maximizes total fill
// subject to fill <= drain per packet state.
enum class RegionForm { Min, Eq };

struct RegionSolution {
  double r_max = 0.0;
  RegionForm form = RegionForm::Min;
  TimeSharing sharing;
  std::vector<QueueFlow> flows;
};

RegionSolution solve_region(const Scenario& scenario, const RateTable& rates,
                            RegionForm form, double tol = 1e-9);

// Feasibility of supporting end-to-end rate `r`: total fill equals r and
// every virtual queue's fill equals its drain, within the time-sharing
// budget. Returns the witness fractions when feasible.
std::optional<TimeSharing> is_supportable(const Scenario& scenario,
                                          const RateTable& rates, double r,
                                          double tol = 1e-9);

// Conventional AF reference: each state used end-to-end with a half/half
// receive-transmit split, averaged over the distribution.
double synchronous_baseline(const Scenario& scenario, const RateTable& rates);

// Columns: kind,f_s1,f_s2,f_1d,f_2d,g_s1,g_s2,g_1d,g_2d,value
// with one r_max row followed by the nonzero fractions.
std::string region_to_csv(const RegionSolution& solution);

}  // namespace afrelay
