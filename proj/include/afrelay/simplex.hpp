#pragma once

#include <cstddef>
#include <vector>

namespace afrelay::lp {

enum class Relation { LessEq, Equal, GreaterEq };

struct Constraint {
  std::vector<double> coeffs;  // dense, one per variable
  Relation relation = Relation::LessEq;
  double rhs = 0.0;
};

// maximize objective . x  subject to the constraints and x >= 0
struct Problem {
  std::size_t num_vars = 0;
  std::vector<double> objective;
  std::vector<Constraint> constraints;
};

enum class Status { Optimal, Infeasible, Unbounded, IterationLimit };

struct Solution {
  Status status = Status::Optimal;
  double objective = 0.0;
  std::vector<double> x;
};

// Two-phase dense tableau simplex. Dantzig pricing with a Bland fallback
// after stalls; `tol` is both the feasibility and the pivot tolerance.
Solution maximize(const Problem& problem, double tol = 1e-9);

}  // namespace afrelay::lp
