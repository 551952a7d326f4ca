#include "afrelay/fading.hpp"

#include <algorithm>
#include <cstdio>

namespace afrelay {

std::string FadingState::str() const {
  char buf[96];
  std::snprintf(buf, sizeof(buf), "[%g,%g,%g,%g]", gs1, gs2, g1d, g2d);
  return buf;
}

Alphabet::Alphabet(std::vector<double> gains) : gains_(std::move(gains)) {
  if (gains_.empty()) {
    throw std::invalid_argument("alphabet: must contain at least one gain");
  }
  for (double g : gains_) {
    if (!(g >= 0.0)) {
      throw std::invalid_argument("alphabet: gains must be non-negative");
    }
  }
  std::sort(gains_.begin(), gains_.end());
  gains_.erase(std::unique(gains_.begin(), gains_.end()), gains_.end());
}

bool Alphabet::contains(double gain) const {
  return std::binary_search(gains_.begin(), gains_.end(), gain);
}

std::size_t Alphabet::index_of(double gain) const {
  auto it = std::lower_bound(gains_.begin(), gains_.end(), gain);
  if (it == gains_.end() || *it != gain) {
    throw std::invalid_argument("alphabet: gain " + std::to_string(gain) +
                                " is not a member");
  }
  return static_cast<std::size_t>(it - gains_.begin());
}

FadingState Alphabet::state_at(std::size_t index) const {
  const std::size_t k = gains_.size();
  if (index >= num_states()) {
    throw std::out_of_range("alphabet: state index out of range");
  }
  FadingState s;
  s.g2d = gains_[index % k];
  index /= k;
  s.g1d = gains_[index % k];
  index /= k;
  s.gs2 = gains_[index % k];
  index /= k;
  s.gs1 = gains_[index];
  return s;
}

std::size_t Alphabet::state_index(const FadingState& state) const {
  const std::size_t k = gains_.size();
  return ((index_of(state.gs1) * k + index_of(state.gs2)) * k +
          index_of(state.g1d)) *
             k +
         index_of(state.g2d);
}

}  // namespace afrelay
