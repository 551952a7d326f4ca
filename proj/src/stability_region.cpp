#include "afrelay/stability_region.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>

#include "afrelay/simplex.hpp"

namespace afrelay {

namespace {

constexpr double kDust = 1e-12;  // drop solver noise from reported fractions

// Index plan for the region LPs: one a-variable per (support f, productive g)
// pair allowed by the source-side match, one b-variable per destination-side
// match, laid out g-major so constraint rows are easy to assemble.
struct VariablePlan {
  struct PerState {
    std::size_t state_index = 0;  // into the rate table
    double rate = 0.0;
    std::vector<std::size_t> a_support;  // support indices with source match
    std::vector<std::size_t> b_support;  // support indices with dest match
    std::size_t a_base = 0;              // first a-variable column
    std::size_t b_base = 0;              // first b-variable column
  };
  std::vector<PerState> states;
  std::size_t num_vars = 0;

  VariablePlan(const Scenario& scenario, const RateTable& rates) {
    for (std::size_t idx : rates.positive_states()) {
      const FadingState g = rates.alphabet().state_at(idx);
      PerState ps;
      ps.state_index = idx;
      ps.rate = rates.rate(idx);
      for (std::size_t s = 0; s < scenario.support.size(); ++s) {
        const FadingState& f = scenario.support[s].state;
        if (matches_source(f, g)) ps.a_support.push_back(s);
        if (matches_destination(f, g)) ps.b_support.push_back(s);
      }
      // States the schedule can never fill or never drain contribute nothing.
      if (ps.a_support.empty() || ps.b_support.empty()) continue;
      ps.a_base = num_vars;
      num_vars += ps.a_support.size();
      ps.b_base = num_vars;
      num_vars += ps.b_support.size();
      states.push_back(std::move(ps));
    }
  }
};

// Shared time budget: for every support state f, the a and b fractions of
// all packet states sum to at most one.
void add_budget_rows(const VariablePlan& plan, const Scenario& scenario,
                     std::size_t num_vars, lp::Problem& prob) {
  for (std::size_t s = 0; s < scenario.support.size(); ++s) {
    lp::Constraint row;
    row.coeffs.assign(num_vars, 0.0);
    row.relation = lp::Relation::LessEq;
    row.rhs = 1.0;
    bool any = false;
    for (const auto& ps : plan.states) {
      for (std::size_t i = 0; i < ps.a_support.size(); ++i) {
        if (ps.a_support[i] == s) row.coeffs[ps.a_base + i] = 1.0, any = true;
      }
      for (std::size_t i = 0; i < ps.b_support.size(); ++i) {
        if (ps.b_support[i] == s) row.coeffs[ps.b_base + i] = 1.0, any = true;
      }
    }
    if (any) prob.constraints.push_back(std::move(row));
  }
}

RegionSolution extract(const VariablePlan& plan, const Scenario& scenario,
                       const RateTable& rates, RegionForm form,
                       const std::vector<double>& x, double objective) {
  RegionSolution sol;
  sol.form = form;
  sol.r_max = std::max(0.0, objective);
  for (const auto& ps : plan.states) {
    const FadingState g = rates.alphabet().state_at(ps.state_index);

    double fill = 0.0, drain = 0.0;
    for (std::size_t i = 0; i < ps.a_support.size(); ++i) {
      fill += scenario.support[ps.a_support[i]].probability *
              x[ps.a_base + i] * ps.rate;
    }
    for (std::size_t i = 0; i < ps.b_support.size(); ++i) {
      drain += scenario.support[ps.b_support[i]].probability *
               x[ps.b_base + i] * ps.rate;
    }
    // An optimal vertex may overfill or overdrain a queue (only the min
    // counts); scaling the heavier side down restores the flow-conservation
    // equalities without touching the objective or the time budgets.
    const double target = std::min(fill, drain);
    const double a_scale = fill > kDust ? target / fill : 0.0;
    const double b_scale = drain > kDust ? target / drain : 0.0;

    QueueFlow flow;
    flow.packet_state = g;
    for (std::size_t i = 0; i < ps.a_support.size(); ++i) {
      const auto& sp = scenario.support[ps.a_support[i]];
      const double frac = x[ps.a_base + i] * a_scale;
      flow.fill_rate += sp.probability * frac * ps.rate;
      if (frac > kDust) sol.sharing.source.push_back({sp.state, g, frac});
    }
    for (std::size_t i = 0; i < ps.b_support.size(); ++i) {
      const auto& sp = scenario.support[ps.b_support[i]];
      const double frac = x[ps.b_base + i] * b_scale;
      flow.drain_rate += sp.probability * frac * ps.rate;
      if (frac > kDust) sol.sharing.relay.push_back({sp.state, g, frac});
    }
    if (flow.fill_rate > kDust || flow.drain_rate > kDust) {
      sol.flows.push_back(flow);
    }
  }
  return sol;
}

[[noreturn]] void report_solver_failure(lp::Status status) {
  const char* what = status == lp::Status::Infeasible    ? "infeasible"
                     : status == lp::Status::Unbounded   ? "unbounded"
                                                         : "iteration limit";
  throw std::runtime_error(std::string("region LP did not converge: ") + what);
}

}  // namespace

double TimeSharing::source_fraction(const FadingState& f,
                                    const FadingState& g) const {
  for (const auto& e : source) {
    if (e.realized == f && e.packet_state == g) return e.fraction;
  }
  return 0.0;
}

double TimeSharing::relay_fraction(const FadingState& f,
                                   const FadingState& g) const {
  for (const auto& e : relay) {
    if (e.realized == f && e.packet_state == g) return e.fraction;
  }
  return 0.0;
}

RegionSolution solve_region(const Scenario& scenario, const RateTable& rates,
                            RegionForm form, double tol) {
  scenario.validate();
  const VariablePlan plan(scenario, rates);
  if (plan.states.empty()) {
    RegionSolution sol;
    sol.form = form;
    return sol;  // nothing can ever be delivered
  }

  lp::Problem prob;
  const std::size_t extra = form == RegionForm::Min ? plan.states.size() : 0;
  prob.num_vars = plan.num_vars + extra;
  prob.objective.assign(prob.num_vars, 0.0);

  if (form == RegionForm::Min) {
    // maximize sum of epigraph variables t_g with t_g <= fill_g, t_g <= drain_g
    for (std::size_t gi = 0; gi < plan.states.size(); ++gi) {
      const auto& ps = plan.states[gi];
      const std::size_t t_col = plan.num_vars + gi;
      prob.objective[t_col] = 1.0;

      lp::Constraint fill;
      fill.coeffs.assign(prob.num_vars, 0.0);
      fill.relation = lp::Relation::LessEq;
      fill.rhs = 0.0;
      fill.coeffs[t_col] = 1.0;
      for (std::size_t i = 0; i < ps.a_support.size(); ++i) {
        fill.coeffs[ps.a_base + i] =
            -scenario.support[ps.a_support[i]].probability * ps.rate;
      }
      prob.constraints.push_back(std::move(fill));

      lp::Constraint drain;
      drain.coeffs.assign(prob.num_vars, 0.0);
      drain.relation = lp::Relation::LessEq;
      drain.rhs = 0.0;
      drain.coeffs[t_col] = 1.0;
      for (std::size_t i = 0; i < ps.b_support.size(); ++i) {
        drain.coeffs[ps.b_base + i] =
            -scenario.support[ps.b_support[i]].probability * ps.rate;
      }
      prob.constraints.push_back(std::move(drain));
    }
  } else {
    // maximize total fill subject to fill_g <= drain_g
    for (const auto& ps : plan.states) {
      lp::Constraint bal;
      bal.coeffs.assign(prob.num_vars, 0.0);
      bal.relation = lp::Relation::LessEq;
      bal.rhs = 0.0;
      for (std::size_t i = 0; i < ps.a_support.size(); ++i) {
        const double w = scenario.support[ps.a_support[i]].probability * ps.rate;
        prob.objective[ps.a_base + i] = w;
        bal.coeffs[ps.a_base + i] = w;
      }
      for (std::size_t i = 0; i < ps.b_support.size(); ++i) {
        bal.coeffs[ps.b_base + i] =
            -scenario.support[ps.b_support[i]].probability * ps.rate;
      }
      prob.constraints.push_back(std::move(bal));
    }
  }

  add_budget_rows(plan, scenario, prob.num_vars, prob);

  const lp::Solution lps = lp::maximize(prob, tol);
  if (lps.status != lp::Status::Optimal) report_solver_failure(lps.status);
  return extract(plan, scenario, rates, form, lps.x, lps.objective);
}

std::optional<TimeSharing> is_supportable(const Scenario& scenario,
                                          const RateTable& rates, double r,
                                          double tol) {
  if (r < 0.0) throw std::invalid_argument("is_supportable: negative rate");
  if (r <= tol) return TimeSharing{};  // zero rate needs no transmissions

  scenario.validate();
  const VariablePlan plan(scenario, rates);
  if (plan.states.empty()) return std::nullopt;

  lp::Problem prob;
  prob.num_vars = plan.num_vars;
  prob.objective.assign(prob.num_vars, 0.0);

  lp::Constraint total;
  total.coeffs.assign(prob.num_vars, 0.0);
  total.relation = lp::Relation::Equal;
  total.rhs = r;

  for (const auto& ps : plan.states) {
    lp::Constraint bal;
    bal.coeffs.assign(prob.num_vars, 0.0);
    bal.relation = lp::Relation::Equal;
    bal.rhs = 0.0;
    for (std::size_t i = 0; i < ps.a_support.size(); ++i) {
      const double w = scenario.support[ps.a_support[i]].probability * ps.rate;
      total.coeffs[ps.a_base + i] = w;
      bal.coeffs[ps.a_base + i] = w;
    }
    for (std::size_t i = 0; i < ps.b_support.size(); ++i) {
      bal.coeffs[ps.b_base + i] =
          -scenario.support[ps.b_support[i]].probability * ps.rate;
    }
    prob.constraints.push_back(std::move(bal));
  }
  prob.constraints.push_back(std::move(total));
  add_budget_rows(plan, scenario, prob.num_vars, prob);

  const lp::Solution lps = lp::maximize(prob, tol);
  if (lps.status == lp::Status::Infeasible) return std::nullopt;
  if (lps.status != lp::Status::Optimal) report_solver_failure(lps.status);
  return extract(plan, scenario, rates, RegionForm::Eq, lps.x, r).sharing;
}

double synchronous_baseline(const Scenario& scenario, const RateTable& rates) {
  double sum = 0.0;
  for (const auto& sp : scenario.support) {
    sum += sp.probability * rates.rate(sp.state);
  }
  return 0.5 * sum;
}

std::string region_to_csv(const RegionSolution& solution) {
  std::string out =
      "kind,f_s1,f_s2,f_1d,f_2d,g_s1,g_s2,g_1d,g_2d,value\n";
  char line[256];
  std::snprintf(line, sizeof(line), "r_max,,,,,,,,,%.12g\n", solution.r_max);
  out += line;
  auto emit = [&](const char* kind, const SharingEntry& e) {
    std::snprintf(line, sizeof(line),
                  "%s,%.12g,%.12g,%.12g,%.12g,%.12g,%.12g,%.12g,%.12g,%.12g\n",
                  kind, e.realized.gs1, e.realized.gs2, e.realized.g1d,
                  e.realized.g2d, e.packet_state.gs1, e.packet_state.gs2,
                  e.packet_state.g1d, e.packet_state.g2d, e.fraction);
    out += line;
  };
  for (const auto& e : solution.sharing.source) emit("a", e);
  for (const auto& e : solution.sharing.relay) emit("b", e);
  return out;
}

}  // namespace afrelay
