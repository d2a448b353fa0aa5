// Copyright 2026 the sleepsim authors. Licensed under the Apache License,
// Version 2.0. See the LICENSE file at the root of this distribution or at
// http://www.apache.org/licenses/LICENSE-2.0

#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "sleepsim/types.hpp"

namespace sleepsim {

struct CheckContext {
  ProtocolKind kind = ProtocolKind::MultiValue;
  std::uint32_t n = 0;
  std::uint32_t f = 0;
  // Binary committee size; 0 means the default ceil(sqrt(n)). Ignored for
  // multi-value.
  std::uint32_t k = 0;
  std::vector<Value> inputs;
};

// Validates a finished run purely from its trace and decision vector.
// Returns one Violation per broken invariant instance, in deterministic
// order; empty means the run is clean. Violation names (stable):
//   malformed_trace      shape errors: bad ids, round tags, unsorted awake,
//                        sends from players not listed awake
//   conservation         |sent| != |delivered| + |lost| in some round
//   termination          wrong round count, or decisions present/absent for
//                        the wrong players
//   agreement            two surviving players decided differently
//   validity             a decision is no player's input
//   crash_budget         more than f crashes, or a player crashing twice
//   post_crash_silence   a crashed player awake or sending afterwards
//   sleep_isolation      a message delivered to a player not awake
//   crash_free_oracle    no crashes but decisions differ from max/OR of inputs
//   energy_cap           a player exceeded the protocol's awake-round bound
//   message_cap          total sent exceeds the protocol's message bound
//   message_count_exact  multi-value crash-free run sent a different total
//                        than its closed-form count
//   y_monotone           multi-value: a player's sent payloads decreased, or
//                        its round-1 payload differs from its input, or its
//                        decision undercuts a payload it already sent
//   value_provenance     multi-value: a sent payload is no player's input
//   ones_on_wire         binary: a payload other than 1 was sent
//   activation_count     binary: forwarding rounds in [2, f] exceed two
//                        bursts or 2*ceil((f+1)/k) rounds total
//   informed_decision    binary: a surviving player's decision contradicts
//                        what it heard and its input
//   informed_broadcast   binary: a player informed by round f failed to
//                        broadcast in round f+1
//   p_growth             binary, mixed inputs: someone decided 1 although the
//                        set of players the 1-wave was addressed to (plus the
//                        largest-id input-1 player) never exceeded f players
std::vector<Violation> check_run(
    const std::vector<RoundTrace>& traces,
    const std::vector<std::optional<Value>>& decisions,
    const CheckContext& ctx);

} // namespace sleepsim
