#pragma once

// Test-only reference computations. Each oracle re-derives its quantity from
// first principles (own formula transcription, plain exhaustive search) so it
// stays independent of the library's optimization and LP paths.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <random>
#include <vector>

#include "afrelay/channel_model.hpp"
#include "afrelay/scenario.hpp"

namespace oracle {

// End-to-end AF rate at a fixed power split, written out independently.
inline double rate_at(const afrelay::FadingState& g, double ps, double p1,
                      double p2) {
  const double c1 = g.g1d * p1 / (g.gs1 * ps + 1.0);
  const double c2 = g.g2d * p2 / (g.gs2 * ps + 1.0);
  const double amp = std::sqrt(g.gs1 * c1) + std::sqrt(g.gs2 * c2);
  const double snr = ps * amp * amp / (c1 + c2 + 1.0);
  return 0.5 * std::log2(1.0 + snr);
}

// Full 3-D grid max over the power box at step P/steps.
inline double grid_rate(const afrelay::FadingState& g, double P, int steps) {
  double best = 0.0;
  for (int i = 0; i <= steps; ++i) {
    for (int j = 0; j <= steps; ++j) {
      for (int k = 0; k <= steps; ++k) {
        best = std::max(
            best, rate_at(g, P * i / steps, P * j / steps, P * k / steps));
      }
    }
  }
  return best;
}

// Single-relay cascade maximum with relay 2 disconnected.
inline double cascade_rate(double gs1, double g1d, double P, int steps = 400) {
  double best = 0.0;
  for (int i = 0; i <= steps; ++i) {
    for (int j = 0; j <= steps; ++j) {
      best = std::max(best,
                      rate_at({gs1, 0.0, g1d, 0.0}, P * i / steps,
                              P * j / steps, 0.0));
    }
  }
  return best;
}

// Boundary rate by exhaustive search for scenarios whose only productive
// packet state is `g`: enumerates every source/relay fraction on a 1/steps
// grid, honouring the per-state time budget and the source/destination
// matching rules.
inline double exhaustive_r_max(const afrelay::Scenario& sc,
                               const afrelay::FadingState& g, double rate,
                               int steps) {
  struct Node {
    double prob;
    bool can_fill, can_drain;
  };
  std::vector<Node> nodes;
  for (const auto& sp : sc.support) {
    nodes.push_back({sp.probability, afrelay::matches_source(sp.state, g),
                     afrelay::matches_destination(sp.state, g)});
  }
  double best = 0.0;
  std::function<void(std::size_t, double, double)> visit =
      [&](std::size_t i, double fill, double drain) {
        if (i == nodes.size()) {
          best = std::max(best, std::min(fill, drain));
          return;
        }
        const Node& nd = nodes[i];
        const int a_max = nd.can_fill ? steps : 0;
        for (int a = 0; a <= a_max; ++a) {
          const int b_max = nd.can_drain ? steps - a : 0;
          const double fill_i = fill + nd.prob * rate * a / steps;
          for (int b = 0; b <= b_max; ++b) {
            visit(i + 1, fill_i, drain + nd.prob * rate * b / steps);
          }
        }
      };
  visit(0, 0.0, 0.0);
  return best;
}

// Random small scenario for the LP equivalence property: alphabet of up to 3
// gains, a handful of support states, probabilities summing to 1 exactly.
inline afrelay::Scenario random_scenario(std::mt19937_64& rng) {
  static const std::vector<double> pool = {0.0, 0.5, 1.0, 2.0, 10.0};
  afrelay::Scenario sc;

  std::vector<double> gains = pool;
  std::shuffle(gains.begin(), gains.end(), rng);
  gains.resize(2 + rng() % 2);
  sc.alphabet = afrelay::Alphabet(gains);

  const std::size_t total = sc.alphabet.num_states();
  const std::size_t count = 2 + rng() % 4;
  std::vector<std::size_t> picks;
  while (picks.size() < std::min(count, total)) {
    const std::size_t idx = rng() % total;
    if (std::find(picks.begin(), picks.end(), idx) == picks.end()) {
      picks.push_back(idx);
    }
  }
  std::sort(picks.begin(), picks.end());

  std::vector<double> weights;
  double total_weight = 0.0;
  for (std::size_t i = 0; i < picks.size(); ++i) {
    weights.push_back(0.1 + static_cast<double>(rng() % 1000) / 1000.0);
    total_weight += weights.back();
  }
  double assigned = 0.0;
  for (std::size_t i = 0; i < picks.size(); ++i) {
    double p = weights[i] / total_weight;
    if (i + 1 == picks.size()) p = 1.0 - assigned;
    assigned += p;
    sc.support.push_back({sc.alphabet.state_at(picks[i]), p});
  }
  sc.power = 0.5 + static_cast<double>(rng() % 3) * 0.5;
  sc.validate();
  return sc;
}

}  // namespace oracle
