#pragma once

#include <array>
#include <cstdint>
#include <deque>
#include <map>

#include "afrelay/channel_model.hpp"

namespace afrelay {

// One stored "packet": a signal snapshot encoded for a specific state. Only
// the useful bit payload travels with it; when the source had fewer bits
// than the encoding rate, the payload is smaller than the nominal rate.
struct Packet {
  double payload_bits = 0.0;
  std::uint64_t birth_slot = 0;

  friend bool operator==(const Packet&, const Packet&) = default;
};

// Source bit backlog plus the per-relay virtual packet queues, keyed by the
// packet state's table index. Queues materialize lazily; both relays always
// hold identical copies because every broadcast reaches both.
struct QueueState {
  double source_bits = 0.0;
  std::uint64_t slot = 0;
  std::array<std::map<std::size_t, std::deque<Packet>>, 2> relay;

  std::size_t packet_count(int relay_index, std::size_t state_index) const {
    const auto& queues = relay[relay_index];
    const auto it = queues.find(state_index);
    return it == queues.end() ? 0 : it->second.size();
  }
  // Q_1^g + Q_2^g, the quantity the back-pressure weights use.
  std::size_t pair_count(std::size_t state_index) const {
    return packet_count(0, state_index) + packet_count(1, state_index);
  }
  bool symmetric() const;
  double total_weighted_backlog(const RateTable& rates) const;

  friend bool operator==(const QueueState&, const QueueState&) = default;
};

enum class ActionKind { SourceTransmit, RelayTransmit, Idle };

struct Action {
  ActionKind kind = ActionKind::Idle;
  std::size_t state_index = 0;  // packet state, meaningless for Idle
  double bits_moved = 0.0;      // filled in by apply_action
};

struct SchedulerOptions {
  // Padded mode creates the packet even when the source backlog is short of
  // the encoding rate; strict mode idles instead.
  bool padded_packets = true;
};

// Rate-weighted differential backlog of sending a fresh packet for state g.
inline double source_weight(double source_bits, std::size_t pair_count,
                            double rate) {
  return (source_bits - rate * static_cast<double>(pair_count)) * rate;
}

// Rate-weighted backlog released by draining one packet of state g.
inline double relay_weight(std::size_t pair_count, double rate) {
  return rate * rate * static_cast<double>(pair_count);
}

double source_weight(const FadingState& g, const QueueState& queues,
                     const RateTable& rates);
double relay_weight(const FadingState& g, const QueueState& queues,
                    const RateTable& rates);

// The back-pressure rule: pick the best source-eligible and best
// destination-eligible packet state (lexicographically smallest on ties),
// then transmit on the side with the larger weight, source winning ties.
// Idle when no strictly positive weight exists on either side.
Action backpressure_decide(const FadingState& f, const QueueState& queues,
                           const RateTable& rates,
                           const SchedulerOptions& options = {});

// Executes the action. Source transmissions move min(q_s, r_g) bits into one
// new packet on both relays; relay transmissions pop the oldest packet from
// both copies and return its payload as delivered bits. Throws
// std::logic_error on a relay transmit against an empty queue.
double apply_action(QueueState& queues, Action& action, const RateTable& rates);

// Diagnostic drift potential: Q_s^2 + sum over relays and states of
// (r_g * Q_n^g)^2.
double lyapunov_value(const QueueState& queues, const RateTable& rates);

}  // namespace afrelay
