// Copyright 2026 the sleepsim authors. Licensed under the Apache License,
// Version 2.0. See the LICENSE file at the root of this distribution or at
// http://www.apache.org/licenses/LICENSE-2.0

#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "sleepsim/schedule.hpp"
#include "sleepsim/types.hpp"

namespace sleepsim {

// A synchronous sleeping-model protocol, driven by the engine one round at a
// time. Implementations keep all per-player state internally; the engine only
// asks scheduling/messaging questions. A player that is asleep in a round
// neither sends nor receives; messages addressed to it are lost for good.
class Protocol {
 public:
  virtual ~Protocol() = default;

  // Total number of rounds (players decide after the last one).
  virtual int horizon() const = 0;

  // Whether player p chooses to be awake in `round` (1-based). The engine
  // additionally forces crashed players asleep from the round after their
  // crash onward.
  virtual bool wakes(PlayerId p, int round) const = 0;

  // Append p's outgoing messages for this round to `out`. Called only when p
  // is awake. Implementations fill sender/recipient/round/payload.
  virtual void send_messages(PlayerId p, int round,
                             std::vector<Message>& out) = 0;

  // Deliver this round's payloads to p (possibly empty; still called so a
  // protocol can act on silence). Called only for awake players that did not
  // crash this round.
  virtual void receive(PlayerId p, int round,
                       std::span<const Value> payloads) = 0;

  // p's decision after the final round. Only queried for players that never
  // crashed.
  virtual Value decide(PlayerId p) const = 0;
};

struct RunResult {
  // Per player; nullopt for crashed players.
  std::vector<std::optional<Value>> decisions;
  std::vector<RoundTrace> traces;
  RunMetrics metrics;

  friend bool operator==(const RunResult&, const RunResult&) = default;
};

// Simulates `protocol` for its full horizon over n players under `schedule`.
// Wake-ups, sends, routing, receives and crash bookkeeping are all evaluated
// in ascending player order, so identical arguments yield identical results.
// Throws InvalidConfig on bad parameters or an invalid schedule.
RunResult run(Protocol& protocol, std::uint32_t n, std::uint32_t f,
              const CrashSchedule& schedule);

// Same simulation without retaining per-round traces: decisions and metrics
// only. Intended for large-scale energy measurements where the full message
// log would dominate memory.
RunResult run_metrics_only(Protocol& protocol, std::uint32_t n,
                           std::uint32_t f, const CrashSchedule& schedule);

// Routes one round's sent messages under the crash schedule: a message is
// delivered iff its recipient is awake, its sender has not crashed in an
// earlier round, and — when the sender crashes exactly in `round` — the
// recipient appears in the sender's delivery mask. Loss reasons follow that
// precedence. `awake` must be sorted ascending. Exposed for direct testing;
// run() applies the same semantics.
std::pair<std::vector<Message>, std::vector<LostMessage>> apply_crash_semantics(
    const std::vector<Message>& sent, const CrashSchedule& schedule, int round,
    const std::vector<PlayerId>& awake);

} // namespace sleepsim
