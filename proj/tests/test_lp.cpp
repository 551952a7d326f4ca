#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "afrelay/simplex.hpp"

using namespace afrelay::lp;

namespace {

Problem make(std::size_t n, std::vector<double> c,
             std::vector<std::tuple<std::vector<double>, Relation, double>> rows) {
  Problem p;
  p.num_vars = n;
  p.objective = std::move(c);
  for (auto& [coeffs, rel, rhs] : rows) {
    p.constraints.push_back({std::move(coeffs), rel, rhs});
  }
  return p;
}

}  // namespace

TEST_CASE("box maximum") {
  const auto p = make(2, {1, 1},
                      {{{1, 0}, Relation::LessEq, 1},
                       {{0, 1}, Relation::LessEq, 2}});
  const auto s = maximize(p);
  REQUIRE(s.status == Status::Optimal);
  CHECK(s.objective == doctest::Approx(3.0).epsilon(1e-12));
  CHECK(s.x[0] == doctest::Approx(1.0));
  CHECK(s.x[1] == doctest::Approx(2.0));
}

TEST_CASE("two constraints, interior vertex") {
  // max 3x+2y s.t. x+y <= 4, x <= 2 -> (2,2), value 10
  const auto p = make(2, {3, 2},
                      {{{1, 1}, Relation::LessEq, 4},
                       {{1, 0}, Relation::LessEq, 2}});
  const auto s = maximize(p);
  REQUIRE(s.status == Status::Optimal);
  CHECK(s.objective == doctest::Approx(10.0));
  CHECK(s.x[0] == doctest::Approx(2.0));
  CHECK(s.x[1] == doctest::Approx(2.0));
}

TEST_CASE("equality row") {
  // max x s.t. x + y = 1 -> x=1, y=0
  const auto p = make(2, {1, 0}, {{{1, 1}, Relation::Equal, 1}});
  const auto s = maximize(p);
  REQUIRE(s.status == Status::Optimal);
  CHECK(s.objective == doctest::Approx(1.0));
  CHECK(s.x[1] == doctest::Approx(0.0));
}

TEST_CASE("greater-equal row") {
  // max -x s.t. x >= 3 -> x = 3
  const auto p = make(1, {-1}, {{{1}, Relation::GreaterEq, 3}});
  const auto s = maximize(p);
  REQUIRE(s.status == Status::Optimal);
  CHECK(s.objective == doctest::Approx(-3.0));
  CHECK(s.x[0] == doctest::Approx(3.0));
}

TEST_CASE("negative rhs is normalized") {
  // max x s.t. -x <= -2 (x >= 2), x <= 5
  const auto p = make(1, {1},
                      {{{-1}, Relation::LessEq, -2},
                       {{1}, Relation::LessEq, 5}});
  const auto s = maximize(p);
  REQUIRE(s.status == Status::Optimal);
  CHECK(s.objective == doctest::Approx(5.0));
}

TEST_CASE("infeasible box") {
  const auto p = make(1, {1},
                      {{{1}, Relation::LessEq, 1},
                       {{1}, Relation::GreaterEq, 2}});
  CHECK(maximize(p).status == Status::Infeasible);
}

TEST_CASE("inconsistent equalities") {
  const auto p = make(2, {1, 0},
                      {{{1, 1}, Relation::Equal, 1},
                       {{1, 1}, Relation::Equal, 2}});
  CHECK(maximize(p).status == Status::Infeasible);
}

TEST_CASE("redundant equality passes phase 1") {
  const auto p = make(2, {1, 1},
                      {{{1, 1}, Relation::Equal, 1},
                       {{2, 2}, Relation::Equal, 2}});
  const auto s = maximize(p);
  REQUIRE(s.status == Status::Optimal);
  CHECK(s.objective == doctest::Approx(1.0));
}

TEST_CASE("unbounded") {
  const auto p = make(2, {1, 0}, {{{0, 1}, Relation::LessEq, 1}});
  CHECK(maximize(p).status == Status::Unbounded);
}

TEST_CASE("zero variables feasibility check") {
  Problem p;
  p.num_vars = 0;
  p.constraints.push_back({{}, Relation::LessEq, 1.0});
  CHECK(maximize(p).status == Status::Optimal);
  p.constraints.push_back({{}, Relation::GreaterEq, 1.0});
  CHECK(maximize(p).status == Status::Infeasible);
}

TEST_CASE("random feasible programs return feasible optima") {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 1 + rng() % 4;
    const std::size_t m = 1 + rng() % 4;
    Problem p;
    p.num_vars = n;
    for (std::size_t j = 0; j < n; ++j) {
      p.objective.push_back(static_cast<double>(rng() % 21) / 10.0 - 1.0);
    }
    for (std::size_t i = 0; i < m; ++i) {
      Constraint c;
      c.relation = Relation::LessEq;
      c.rhs = static_cast<double>(rng() % 10 + 1) / 2.0;
      for (std::size_t j = 0; j < n; ++j) {
        c.coeffs.push_back(static_cast<double>(rng() % 11) / 5.0);
      }
      p.constraints.push_back(std::move(c));
    }
    // box row so no zero column can make the program unbounded
    p.constraints.push_back(
        {std::vector<double>(n, 1.0), Relation::LessEq, 10.0});
    const auto s = maximize(p);
    REQUIRE(s.status == Status::Optimal);  // x=0 always feasible
    CHECK(s.objective >= -1e-9);
    for (const auto& c : p.constraints) {
      double lhs = 0.0;
      for (std::size_t j = 0; j < n; ++j) lhs += c.coeffs[j] * s.x[j];
      CHECK(lhs <= c.rhs + 1e-7);
    }
    for (double v : s.x) CHECK(v >= -1e-9);
  }
}
