// Copyright 2026 the sleepsim authors. Licensed under the Apache License,
// Version 2.0. See the LICENSE file at the root of this distribution or at
// http://www.apache.org/licenses/LICENSE-2.0

#include "sleepsim/engine.hpp"

#include <algorithm>
#include <limits>
#include <string>

namespace sleepsim {

namespace {

constexpr int kNeverCrashes = std::numeric_limits<int>::max();

// Per-run crash lookup: crash round per player (kNeverCrashes if none) and a
// flat n*n membership bitmap for delivery masks of crashing players.
struct CrashIndex {
  std::uint32_t n = 0;
  std::vector<int> crash_round;
  std::vector<char> mask_bits; // [victim * n + recipient]

  CrashIndex(std::uint32_t n_players, const CrashSchedule& schedule)
      : n(n_players), crash_round(n_players, kNeverCrashes) {
    if (!schedule.crashes.empty()) {
      mask_bits.assign(static_cast<std::size_t>(n) * n, 0);
      for (const auto& c : schedule.crashes) {
        crash_round[c.victim] = c.round;
        for (PlayerId m : c.delivery_mask) {
          mask_bits[static_cast<std::size_t>(c.victim) * n + m] = 1;
        }
      }
    }
  }

  bool mask_allows(PlayerId victim, PlayerId recipient) const {
    return mask_bits[static_cast<std::size_t>(victim) * n + recipient] != 0;
  }
};

// Classifies one message; returns nullopt when delivered.
std::optional<LossReason> loss_of(const Message& m, const CrashIndex& index,
                                  int round,
                                  const std::vector<char>& awake_flag) {
  if (!awake_flag[m.recipient]) return LossReason::RecipientAsleep;
  const int sender_crash = index.crash_round[m.sender];
  if (sender_crash < round) return LossReason::SenderAlreadyCrashed;
  if (sender_crash == round && !index.mask_allows(m.sender, m.recipient)) {
    return LossReason::SenderCrashMask;
  }
  return std::nullopt;
}

// Shared simulation loop. When Record is false, per-round traces are not
// retained (message lists are still routed so inboxes and metrics agree).
template <bool Record>
RunResult run_impl(Protocol& protocol, std::uint32_t n, std::uint32_t f,
                   const CrashSchedule& schedule) {
  if (n < 1) throw InvalidConfig("run: n must be >= 1");
  if (f >= n) throw InvalidConfig("run: need f < n");
  schedule.validate(n, f);
  const int horizon = protocol.horizon();
  if (horizon < 1) throw InvalidConfig("run: protocol horizon must be >= 1");

  const CrashIndex index(n, schedule);

  RunResult result;
  if constexpr (Record) {
    result.traces.reserve(static_cast<std::size_t>(horizon));
  }
  result.metrics.awake_rounds.assign(n, 0);
  result.metrics.rounds = horizon;

  std::vector<char> awake_flag(n, 0);
  std::vector<std::vector<Value>> inbox(n);
  std::vector<PlayerId> awake;
  std::vector<Message> sent;

  for (int round = 1; round <= horizon; ++round) {
    RoundTrace tr;
    tr.round = round;
    awake.clear();
    sent.clear();

    // Wake-ups: a player participates until the end of its crash round.
    for (PlayerId p = 0; p < n; ++p) {
      const bool alive = index.crash_round[p] >= round;
      const bool is_awake = alive && protocol.wakes(p, round);
      awake_flag[p] = is_awake ? 1 : 0;
      if (is_awake) {
        awake.push_back(p);
        ++result.metrics.awake_rounds[p];
      }
    }

    // Sends, in ascending player order.
    for (PlayerId p : awake) protocol.send_messages(p, round, sent);

    // Routing.
    for (const Message& m : sent) {
      if (m.sender >= n || m.recipient >= n) {
        throw InvalidConfig("protocol emitted message with player id outside "
                            "[0, " + std::to_string(n) + ")");
      }
      if (const auto reason = loss_of(m, index, round, awake_flag)) {
        if constexpr (Record) tr.lost.push_back({m, *reason});
      } else {
        if constexpr (Record) tr.delivered.push_back(m);
        inbox[m.recipient].push_back(m.payload);
      }
    }
    result.metrics.total_messages += sent.size();

    // Receives: every awake player hears its inbox (possibly empty), except a
    // player crashing this round, which never processes the round's input.
    for (PlayerId p : awake) {
      if (index.crash_round[p] != round) {
        protocol.receive(p, round, std::span<const Value>(inbox[p]));
      }
      inbox[p].clear();
    }

    if constexpr (Record) {
      tr.awake = awake;
      tr.sent = sent;
      for (PlayerId p = 0; p < n; ++p) {
        if (index.crash_round[p] == round) tr.crashes.push_back(p);
      }
      result.traces.push_back(std::move(tr));
    }
  }

  result.decisions.assign(n, std::nullopt);
  for (PlayerId p = 0; p < n; ++p) {
    if (index.crash_round[p] == kNeverCrashes) {
      result.decisions[p] = protocol.decide(p);
    }
  }
  result.metrics.max_awake = 0;
  for (std::uint32_t w : result.metrics.awake_rounds) {
    result.metrics.max_awake = std::max(result.metrics.max_awake, w);
  }
  return result;
}

} // namespace

RunResult run(Protocol& protocol, std::uint32_t n, std::uint32_t f,
              const CrashSchedule& schedule) {
  return run_impl<true>(protocol, n, f, schedule);
}

RunResult run_metrics_only(Protocol& protocol, std::uint32_t n, std::uint32_t f,
                           const CrashSchedule& schedule) {
  return run_impl<false>(protocol, n, f, schedule);
}

std::pair<std::vector<Message>, std::vector<LostMessage>> apply_crash_semantics(
    const std::vector<Message>& sent, const CrashSchedule& schedule, int round,
    const std::vector<PlayerId>& awake) {
  PlayerId max_id = 0;
  for (const auto& m : sent) max_id = std::max({max_id, m.sender, m.recipient});
  for (const auto& c : schedule.crashes) {
    max_id = std::max(max_id, c.victim);
    for (PlayerId m : c.delivery_mask) max_id = std::max(max_id, m);
  }
  for (PlayerId p : awake) max_id = std::max(max_id, p);

  const std::uint32_t n = max_id + 1;
  const CrashIndex index(n, schedule);
  std::vector<char> awake_flag(n, 0);
  for (PlayerId p : awake) awake_flag[p] = 1;

  std::pair<std::vector<Message>, std::vector<LostMessage>> out;
  for (const Message& m : sent) {
    if (const auto reason = loss_of(m, index, round, awake_flag)) {
      out.second.push_back({m, *reason});
    } else {
      out.first.push_back(m);
    }
  }
  return out;
}

} // namespace sleepsim
