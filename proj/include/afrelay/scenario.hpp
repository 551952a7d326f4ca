#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "afrelay/fading.hpp"

namespace afrelay {

enum class ArrivalKind { Constant, BernoulliBatch, Uniform };

// I.i.d. per-slot arrival process with mean `lambda` bits and bounded
// support. Bernoulli batches default to size 2*lambda (probability 1/2);
// an explicit bound sets the batch size instead.
struct ArrivalSpec {
  ArrivalKind kind = ArrivalKind::BernoulliBatch;
  double lambda = 0.0;
  double bound = 0.0;  // 0 = derive from kind and lambda

  double effective_bound() const;
  double batch_probability() const;  // bernoulli only
  void validate() const;

  friend bool operator==(const ArrivalSpec&, const ArrivalSpec&) = default;
};

struct SimConfig {
  std::uint64_t horizon = 1'000'000;
  std::vector<std::uint64_t> seeds = {1, 2, 3};
  std::size_t checkpoints = 1000;

  friend bool operator==(const SimConfig&, const SimConfig&) = default;
};

struct SupportPoint {
  FadingState state;
  double probability = 0.0;

  friend bool operator==(const SupportPoint&, const SupportPoint&) = default;
};

// A fully specified experiment: gain alphabet, joint state distribution,
// power budget, arrival process and simulation defaults.
struct Scenario {
  Alphabet alphabet;
  std::vector<SupportPoint> support;  // lexicographic, positive probability
  double power = 1.0;
  ArrivalSpec arrivals;
  SimConfig sim;
  double tolerance = 1e-9;

  void validate() const;  // throws ScenarioError
  double probability_of(const FadingState& f) const;

  friend bool operator==(const Scenario&, const Scenario&) = default;
};

class ScenarioError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& message, int line)
      : std::runtime_error(message + " (line " + std::to_string(line) + ")"),
        line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

Scenario parse_scenario_text(std::string_view text);
Scenario load_scenario(const std::string& path);
std::string scenario_to_text(const Scenario& scenario);

}  // namespace afrelay
