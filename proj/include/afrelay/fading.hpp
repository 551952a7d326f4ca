#pragma once

#include <compare>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace afrelay {

// Link power gains of one slot: source->relay1, source->relay2,
// relay1->destination, relay2->destination.
struct FadingState {
  double gs1 = 0.0;
  double gs2 = 0.0;
  double g1d = 0.0;
  double g2d = 0.0;

  friend auto operator<=>(const FadingState&, const FadingState&) = default;

  double operator[](std::size_t i) const {
    switch (i) {
      case 0: return gs1;
      case 1: return gs2;
      case 2: return g1d;
      default: return g2d;
    }
  }

  std::string str() const;
};

// A packet encoded for state g can leave the source while f holds iff the
// source-side gains match.
inline bool matches_source(const FadingState& f, const FadingState& g) {
  return g.gs1 == f.gs1 && g.gs2 == f.gs2;
}

// A packet encoded for state g can reach the destination while f holds iff
// the relay-side gains match.
inline bool matches_destination(const FadingState& f, const FadingState& g) {
  return g.g1d == f.g1d && g.g2d == f.g2d;
}

// Finite gain alphabet; sorted and duplicate-free. States are enumerated in
// lexicographic order of their four components.
class Alphabet {
 public:
  Alphabet() = default;
  explicit Alphabet(std::vector<double> gains);

  std::size_t size() const { return gains_.size(); }
  bool empty() const { return gains_.empty(); }
  double operator[](std::size_t i) const { return gains_[i]; }
  const std::vector<double>& gains() const { return gains_; }

  bool contains(double gain) const;
  // Index of an exact member; throws std::invalid_argument otherwise.
  std::size_t index_of(double gain) const;

  std::size_t num_states() const {
    const std::size_t k = gains_.size();
    return k * k * k * k;
  }
  FadingState state_at(std::size_t index) const;
  std::size_t state_index(const FadingState& state) const;

  friend bool operator==(const Alphabet&, const Alphabet&) = default;

 private:
  std::vector<double> gains_;
};

}  // namespace afrelay
