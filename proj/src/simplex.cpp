#include "afrelay/simplex.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace afrelay::lp {

namespace {

class Tableau {
 public:
  Tableau(const Problem& p, double tol) : tol_(tol), n_(p.num_vars) {
    const std::size_t m = p.constraints.size();

    // Column layout: structural | slack/surplus | artificial.
    std::size_t n_slack = 0;
    for (const auto& c : p.constraints) {
      if (c.relation != Relation::Equal) ++n_slack;
    }
    slack_start_ = n_;
    art_start_ = n_ + n_slack;

    // Artificials are needed where the slack cannot seed the basis: equality
    // rows and (after rhs normalization) surplus rows.
    std::size_t n_art = 0;
    for (const auto& c : p.constraints) {
      Relation rel = c.relation;
      if (c.rhs < 0.0) rel = flipped(rel);
      if (rel != Relation::LessEq) ++n_art;
    }
    cols_ = art_start_ + n_art;

    rows_.assign(m + 1, std::vector<double>(cols_ + 1, 0.0));
    basis_.assign(m, 0);

    std::size_t slack = slack_start_;
    std::size_t art = art_start_;
    for (std::size_t i = 0; i < m; ++i) {
      const auto& c = p.constraints[i];
      if (c.coeffs.size() != n_) {
        throw std::invalid_argument("lp: constraint width mismatch");
      }
      const double sign = c.rhs < 0.0 ? -1.0 : 1.0;
      Relation rel = sign < 0.0 ? flipped(c.relation) : c.relation;
      auto& row = rows_[i];
      for (std::size_t j = 0; j < n_; ++j) row[j] = sign * c.coeffs[j];
      row[cols_] = sign * c.rhs;

      if (rel == Relation::LessEq) {
        row[slack] = 1.0;
        basis_[i] = slack++;
      } else if (rel == Relation::GreaterEq) {
        row[slack] = -1.0;
        ++slack;
        row[art] = 1.0;
        basis_[i] = art++;
      } else {
        row[art] = 1.0;
        basis_[i] = art++;
      }
    }
  }

  Solution run(const Problem& p) {
    Solution sol;

    if (art_start_ < cols_) {
      // Phase 1: maximize -(sum of artificials).
      auto& obj = rows_.back();
      for (std::size_t j = art_start_; j < cols_; ++j) obj[j] = 1.0;
      price_out();
      Status st = iterate(/*allow_artificial=*/true);
      if (st != Status::Optimal) {
        sol.status = st == Status::Unbounded ? Status::Infeasible : st;
        return sol;
      }
      if (rows_.back()[cols_] < -10.0 * tol_) {
        sol.status = Status::Infeasible;
        return sol;
      }
      evict_artificials();
    }

    // Phase 2 with the real objective, priced out over the current basis.
    auto& obj = rows_.back();
    std::fill(obj.begin(), obj.end(), 0.0);
    for (std::size_t j = 0; j < n_ && j < p.objective.size(); ++j) {
      obj[j] = -p.objective[j];
    }
    price_out();
    Status st = iterate(/*allow_artificial=*/false);
    sol.status = st;
    if (st != Status::Optimal) return sol;

    sol.objective = rows_.back()[cols_];
    sol.x.assign(n_, 0.0);
    for (std::size_t i = 0; i + 1 < rows_.size(); ++i) {
      if (basis_[i] < n_) sol.x[basis_[i]] = std::max(0.0, rows_[i][cols_]);
    }
    return sol;
  }

 private:
  static Relation flipped(Relation r) {
    if (r == Relation::LessEq) return Relation::GreaterEq;
    if (r == Relation::GreaterEq) return Relation::LessEq;
    return Relation::Equal;
  }

  // Zero the objective row over all basic columns.
  void price_out() {
    auto& obj = rows_.back();
    for (std::size_t i = 0; i + 1 < rows_.size(); ++i) {
      const double coeff = obj[basis_[i]];
      if (coeff == 0.0) continue;
      const auto& row = rows_[i];
      for (std::size_t j = 0; j <= cols_; ++j) obj[j] -= coeff * row[j];
      obj[basis_[i]] = 0.0;
    }
  }

  void pivot(std::size_t r, std::size_t s) {
    auto& prow = rows_[r];
    const double inv = 1.0 / prow[s];
    for (std::size_t j = 0; j <= cols_; ++j) prow[j] *= inv;
    prow[s] = 1.0;
    for (std::size_t i = 0; i < rows_.size(); ++i) {
      if (i == r) continue;
      auto& row = rows_[i];
      const double factor = row[s];
      if (std::fabs(factor) < 1e-13) {
        row[s] = 0.0;
        continue;
      }
      for (std::size_t j = 0; j <= cols_; ++j) row[j] -= factor * prow[j];
      row[s] = 0.0;
    }
    basis_[r] = s;
  }

  Status iterate(bool allow_artificial) {
    const std::size_t m = rows_.size() - 1;
    const std::size_t enter_limit = allow_artificial ? cols_ : art_start_;
    const std::size_t max_iters = 10000 + 50 * (m + cols_);
    auto& obj = rows_.back();

    double last_value = obj[cols_];
    std::size_t stalled = 0;
    for (std::size_t iter = 0; iter < max_iters; ++iter) {
      // Entering column: Dantzig, or Bland once the objective stalls.
      const bool bland = stalled > 2 * (m + cols_);
      std::size_t s = cols_;
      double best = -tol_;
      for (std::size_t j = 0; j < enter_limit; ++j) {
        if (obj[j] < best) {
          best = obj[j];
          s = j;
          if (bland) break;
        }
      }
      if (s == cols_) return Status::Optimal;

      // Ratio test; ties to the smallest basis index for anti-cycling.
      std::size_t r = m;
      double best_ratio = std::numeric_limits<double>::infinity();
      for (std::size_t i = 0; i < m; ++i) {
        const double a = rows_[i][s];
        if (a <= tol_) continue;
        const double ratio = rows_[i][cols_] / a;
        if (ratio < best_ratio - 1e-12 ||
            (ratio < best_ratio + 1e-12 && (r == m || basis_[i] < basis_[r]))) {
          best_ratio = ratio;
          r = i;
        }
      }
      if (r == m) return Status::Unbounded;

      pivot(r, s);
      if (obj[cols_] > last_value + tol_) {
        last_value = obj[cols_];
        stalled = 0;
      } else {
        ++stalled;
      }
    }
    return Status::IterationLimit;
  }

  // After phase 1, swap artificial columns out of the basis where possible;
  // rows that resist are redundant and harmless (their rhs is ~0).
  void evict_artificials() {
    const std::size_t m = rows_.size() - 1;
    for (std::size_t i = 0; i < m; ++i) {
      if (basis_[i] < art_start_) continue;
      for (std::size_t j = 0; j < art_start_; ++j) {
        if (std::fabs(rows_[i][j]) > tol_) {
          pivot(i, j);
          break;
        }
      }
    }
  }

  double tol_;
  std::size_t n_;
  std::size_t slack_start_ = 0;
  std::size_t art_start_ = 0;
  std::size_t cols_ = 0;
  std::vector<std::vector<double>> rows_;  // constraints then objective
  std::vector<std::size_t> basis_;
};

}  // namespace

Solution maximize(const Problem& problem, double tol) {
  if (problem.objective.size() > problem.num_vars) {
    throw std::invalid_argument("lp: objective wider than variable count");
  }
  if (problem.num_vars == 0) {
    Solution sol;
    for (const auto& c : problem.constraints) {
      const bool ok = c.relation == Relation::LessEq  ? c.rhs >= -tol
                      : c.relation == Relation::Equal ? std::fabs(c.rhs) <= tol
                                                      : c.rhs <= tol;
      if (!ok) {
        sol.status = Status::Infeasible;
        return sol;
      }
    }
    return sol;
  }
  Tableau t(problem, tol);
  return t.run(problem);
}

}  // namespace afrelay::lp
