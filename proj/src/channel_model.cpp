#include "afrelay/channel_model.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace afrelay {

double capacity(double snr) {
  if (snr < 0.0) {
    throw std::domain_error("capacity: negative SNR");
  }
  return 0.5 * std::log2(1.0 + snr);
}

namespace {

// Effective end-to-end SNR of the combined two-relay AF path. capacity() is
// strictly increasing, so the power optimization runs on this instead.
inline double af_snr(const FadingState& g, double ps, double p1, double p2) {
  const double c1 = g.g1d * p1 / (g.gs1 * ps + 1.0);
  const double c2 = g.g2d * p2 / (g.gs2 * ps + 1.0);
  const double amp = std::sqrt(g.gs1 * c1) + std::sqrt(g.gs2 * c2);
  return ps * amp * amp / (c1 + c2 + 1.0);
}

// Maximize fn over [lo, hi] by golden section down to interval width xtol;
// returns the evaluated pair (x, fn(x)).
template <typename Fn>
std::pair<double, double> golden_max(const Fn& fn, double lo, double hi,
                                     double xtol) {
  constexpr double kInvPhi = 0.6180339887498949;
  double a = lo, b = hi;
  double c = b - (b - a) * kInvPhi;
  double d = a + (b - a) * kInvPhi;
  double fc = fn(c);
  double fd = fn(d);
  while (b - a > xtol) {
    if (fc > fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - (b - a) * kInvPhi;
      fc = fn(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + (b - a) * kInvPhi;
      fd = fn(d);
    }
  }
  const double x = 0.5 * (a + b);
  return {x, fn(x)};
}

// Coarse scan to bracket the argmax, then golden refinement inside it.
template <typename Fn>
std::pair<double, double> line_max(const Fn& fn, double lo, double hi,
                                   int samples, double xtol) {
  double best_x = lo;
  double best_f = fn(lo);
  for (int i = 1; i <= samples; ++i) {
    const double x = lo + (hi - lo) * i / samples;
    const double f = fn(x);
    if (f > best_f) {
      best_f = f;
      best_x = x;
    }
  }
  const double step = (hi - lo) / samples;
  auto [x, f] = golden_max(fn, std::max(lo, best_x - step),
                           std::min(hi, best_x + step), xtol);
  return f > best_f ? std::pair{x, f} : std::pair{best_x, best_f};
}

}  // namespace

double af_objective(const FadingState& g, const PowerAllocation& alloc) {
  if (alloc.source < 0.0 || alloc.relay1 < 0.0 || alloc.relay2 < 0.0) {
    throw std::invalid_argument("af_objective: negative power");
  }
  return capacity(af_snr(g, alloc.source, alloc.relay1, alloc.relay2));
}

RatePoint af_rate(const FadingState& g, double power,
                  const RateSolverOptions& options) {
  if (!(power > 0.0)) {
    throw std::invalid_argument("af_rate: power budget must be positive");
  }
  // No usable relay path: the objective is identically zero.
  if ((g.gs1 <= 0.0 && g.gs2 <= 0.0) || (g.g1d <= 0.0 && g.g2d <= 0.0)) {
    return {0.0, {power, power, power}};
  }

  const double P = power;
  const double xtol = std::clamp(options.tolerance, 1e-13, 1e-7) * P;

  PowerAllocation best_alloc{P, P, P};
  double best_snr = -1.0;
  auto consider = [&](const PowerAllocation& alloc, double snr) {
    if (snr > best_snr) {
      best_snr = snr;
      best_alloc = alloc;
    }
  };

  // Full source power, one relay at the budget, the other swept.
  auto [p2, s2] = line_max([&](double x) { return af_snr(g, P, P, x); }, 0.0,
                           P, options.slice_samples, xtol);
  consider({P, P, p2}, s2);
  auto [p1, s1] = line_max([&](double x) { return af_snr(g, P, x, P); }, 0.0,
                           P, options.slice_samples, xtol);
  consider({P, p1, P}, s1);

  // Safety net: coarse 3-D grid over the whole box.
  const int steps = options.guard_grid_steps;
  PowerAllocation grid_alloc = best_alloc;
  double grid_snr = -1.0;
  for (int i = 0; i <= steps; ++i) {
    const double ps = P * i / steps;
    for (int j = 0; j <= steps; ++j) {
      const double q1 = P * j / steps;
      for (int k = 0; k <= steps; ++k) {
        const double snr = af_snr(g, ps, q1, P * k / steps);
        if (snr > grid_snr) {
          grid_snr = snr;
          grid_alloc = {ps, q1, P * k / steps};
        }
      }
    }
  }
  // Translate the rate tolerance into an SNR margin before comparing.
  const double snr_margin =
      10.0 * options.tolerance * 2.0 * std::log(2.0) * (1.0 + best_snr);
  if (grid_snr > best_snr + snr_margin) {
    // The slice heuristic missed; polish the grid point coordinate-wise.
    PowerAllocation a = grid_alloc;
    for (int sweep = 0; sweep < 4; ++sweep) {
      a.source = golden_max([&](double x) { return af_snr(g, x, a.relay1, a.relay2); },
                            0.0, P, xtol).first;
      a.relay1 = golden_max([&](double x) { return af_snr(g, a.source, x, a.relay2); },
                            0.0, P, xtol).first;
      a.relay2 = golden_max([&](double x) { return af_snr(g, a.source, a.relay1, x); },
                            0.0, P, xtol).first;
    }
    consider(a, af_snr(g, a.source, a.relay1, a.relay2));
    consider(grid_alloc, grid_snr);
  }

  if (best_snr <= 0.0) return {0.0, {P, P, P}};
  return {capacity(best_snr), best_alloc};
}

RateTable::RateTable(Alphabet alphabet, double power,
                     const RateSolverOptions& options)
    : alphabet_(std::move(alphabet)), power_(power) {
  if (alphabet_.empty()) {
    throw std::invalid_argument("rate table: empty alphabet");
  }
  const std::size_t k = alphabet_.size();
  const std::size_t total = alphabet_.num_states();
  entries_.reserve(total);
  by_prefix_.assign(k * k, {});
  by_suffix_.assign(k * k, {});
  for (std::size_t idx = 0; idx < total; ++idx) {
    const FadingState g = alphabet_.state_at(idx);
    entries_.push_back(af_rate(g, power_, options));
    if (entries_.back().rate > 0.0) {
      positive_.push_back(idx);
      by_prefix_[idx / (k * k)].push_back(idx);
      by_suffix_[idx % (k * k)].push_back(idx);
    }
  }
}

const std::vector<std::size_t>& RateTable::source_candidates(
    const FadingState& f) const {
  const std::size_t k = alphabet_.size();
  return by_prefix_[alphabet_.index_of(f.gs1) * k + alphabet_.index_of(f.gs2)];
}

const std::vector<std::size_t>& RateTable::destination_candidates(
    const FadingState& f) const {
  const std::size_t k = alphabet_.size();
  return by_suffix_[alphabet_.index_of(f.g1d) * k + alphabet_.index_of(f.g2d)];
}

std::string RateTable::to_csv() const {
  std::string out = "g_s1,g_s2,g_1d,g_2d,rate,p_s,p_1,p_2\n";
  char line[256];
  for (std::size_t idx = 0; idx < entries_.size(); ++idx) {
    const FadingState g = alphabet_.state_at(idx);
    const RatePoint& e = entries_[idx];
    std::snprintf(line, sizeof(line),
                  "%.12g,%.12g,%.12g,%.12g,%.12g,%.12g,%.12g,%.12g\n", g.gs1,
                  g.gs2, g.g1d, g.g2d, e.rate, e.alloc.source, e.alloc.relay1,
                  e.alloc.relay2);
    out += line;
  }
  return out;
}

}  // namespace afrelay
