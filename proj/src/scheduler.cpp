#include "afrelay/scheduler.hpp"

#include <algorithm>
#include <stdexcept>

namespace afrelay {

bool QueueState::symmetric() const {
  const auto& q1 = relay[0];
  const auto& q2 = relay[1];
  for (const auto& [idx, packets] : q1) {
    const auto it = q2.find(idx);
    const std::size_t other = it == q2.end() ? 0 : it->second.size();
    if (packets.size() != other) return false;
  }
  for (const auto& [idx, packets] : q2) {
    if (!packets.empty() && q1.find(idx) == q1.end()) return false;
  }
  return true;
}

double QueueState::total_weighted_backlog(const RateTable& rates) const {
  double total = source_bits;
  for (const auto& queues : relay) {
    for (const auto& [idx, packets] : queues) {
      total += rates.rate(idx) * static_cast<double>(packets.size());
    }
  }
  return total;
}

double source_weight(const FadingState& g, const QueueState& queues,
                     const RateTable& rates) {
  const std::size_t idx = rates.alphabet().state_index(g);
  return source_weight(queues.source_bits, queues.pair_count(idx),
                       rates.rate(idx));
}

double relay_weight(const FadingState& g, const QueueState& queues,
                    const RateTable& rates) {
  const std::size_t idx = rates.alphabet().state_index(g);
  return relay_weight(queues.pair_count(idx), rates.rate(idx));
}

Action backpressure_decide(const FadingState& f, const QueueState& queues,
                           const RateTable& rates,
                           const SchedulerOptions& options) {
  // Candidate lists are lexicographic, so keeping strict improvements only
  // leaves the smallest state on ties.
  double best_source = 0.0;
  std::size_t best_source_idx = 0;
  bool have_source = false;
  for (std::size_t idx : rates.source_candidates(f)) {
    const double w =
        source_weight(queues.source_bits, queues.pair_count(idx), rates.rate(idx));
    if (!have_source || w > best_source) {
      best_source = w;
      best_source_idx = idx;
      have_source = true;
    }
  }

  double best_relay = 0.0;
  std::size_t best_relay_idx = 0;
  bool have_relay = false;
  for (std::size_t idx : rates.destination_candidates(f)) {
    const double w = relay_weight(queues.pair_count(idx), rates.rate(idx));
    if (!have_relay || w > best_relay) {
      best_relay = w;
      best_relay_idx = idx;
      have_relay = true;
    }
  }

  // Nothing with strictly positive weight: moving a packet would shrink the
  // drift potential by nothing, so the slot stays idle.
  const double top = std::max(have_source ? best_source : 0.0,
                              have_relay ? best_relay : 0.0);
  if (top <= 0.0) return {};

  if (have_source && best_source >= best_relay) {
    if (!options.padded_packets &&
        queues.source_bits < rates.rate(best_source_idx)) {
      return {};
    }
    return {ActionKind::SourceTransmit, best_source_idx, 0.0};
  }
  return {ActionKind::RelayTransmit, best_relay_idx, 0.0};
}

double apply_action(QueueState& queues, Action& action, const RateTable& rates) {
  switch (action.kind) {
    case ActionKind::Idle:
      action.bits_moved = 0.0;
      return 0.0;
    case ActionKind::SourceTransmit: {
      const double rate = rates.rate(action.state_index);
      const double moved = std::min(queues.source_bits, rate);
      queues.source_bits -= moved;
      const Packet packet{moved, queues.slot};
      queues.relay[0][action.state_index].push_back(packet);
      queues.relay[1][action.state_index].push_back(packet);
      action.bits_moved = moved;
      return moved;
    }
    case ActionKind::RelayTransmit: {
      auto q1 = queues.relay[0].find(action.state_index);
      auto q2 = queues.relay[1].find(action.state_index);
      if (q1 == queues.relay[0].end() || q1->second.empty() ||
          q2 == queues.relay[1].end() || q2->second.empty()) {
        throw std::logic_error("apply_action: relay transmit on empty queue");
      }
      const double delivered = q1->second.front().payload_bits;
      q1->second.pop_front();
      q2->second.pop_front();
      action.bits_moved = delivered;
      return delivered;
    }
  }
  return 0.0;
}

double lyapunov_value(const QueueState& queues, const RateTable& rates) {
  double value = queues.source_bits * queues.source_bits;
  for (const auto& relay_queues : queues.relay) {
    for (const auto& [idx, packets] : relay_queues) {
      const double weighted =
          rates.rate(idx) * static_cast<double>(packets.size());
      value += weighted * weighted;
    }
  }
  return value;
}

}  // namespace afrelay
