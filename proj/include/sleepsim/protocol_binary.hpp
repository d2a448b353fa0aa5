// Copyright 2026 the sleepsim authors. Licensed under the Apache License,
// Version 2.0. See the LICENSE file at the root of this distribution or at
// http://www.apache.org/licenses/LICENSE-2.0

#pragma once

#include <cstdint>
#include <vector>

#include "sleepsim/committees.hpp"
#include "sleepsim/engine.hpp"
#include "sleepsim/types.hpp"

namespace sleepsim {

// Binary OR-consensus over f+1 rounds: f committees of k = ceil(sqrt(n))
// players (k overridable for parameter sweeps) relay the token 1; zeros are
// never sent. Round 1: everyone wakes; players with input 1 send 1 to
// committee 1.
// Rounds h in [2, f]: a player holding forwarding budget wakes, decrements
// it, and sends 1 to committee h; members of committee h wake to listen, and
// on first hearing a 1 set their estimate and arm a fresh budget of
// ceil((f+1)/k) rounds. Round f+1: everyone wakes; players whose estimate or
// input is 1 broadcast 1; every player decides 1 iff it heard a 1 or its own
// input is 1.
class BinaryConsensus : public Protocol {
 public:
  // inputs must be n values in {0,1}. k = 0 picks ceil(sqrt(n)).
  BinaryConsensus(std::uint32_t n, std::uint32_t f, std::vector<Value> inputs,
                  std::uint32_t k = 0);

  int horizon() const override { return static_cast<int>(f_) + 1; }
  bool wakes(PlayerId p, int round) const override;
  void send_messages(PlayerId p, int round,
                     std::vector<Message>& out) override;
  void receive(PlayerId p, int round,
               std::span<const Value> payloads) override;
  Value decide(PlayerId p) const override;

  std::uint32_t committee_size() const { return k_; }

  // Rounds of forwarding a newly informed player arms: ceil((f+1)/k).
  std::uint32_t activation_span() const { return span_; }

  // Empty table when f = 0.
  const CommitteeTable& table() const { return table_; }

  // Cap on any player's awake rounds with committee size k:
  // 2 + ceil(f*k/n) + 2*ceil((f+1)/k) for f >= 1, and 2 for f = 0 (the
  // single-round degenerate case).
  static std::uint64_t energy_bound_k(std::uint32_t n, std::uint32_t f,
                                      std::uint32_t k);

  // energy_bound_k at the default k = ceil(sqrt(n)).
  static std::uint64_t energy_bound(std::uint32_t n, std::uint32_t f);

  // Loose global cap on total messages: 4*n^2.
  static std::uint64_t message_bound(std::uint32_t n);

 private:
  std::uint32_t n_;
  std::uint32_t f_;
  std::uint32_t k_;
  std::uint32_t span_;
  std::vector<char> input_;          // X in {0,1}
  std::vector<char> estimate_;       // Y in {0,1}
  std::vector<std::uint32_t> budget_; // remaining forwarding rounds (T)
  CommitteeTable table_;
};

} // namespace sleepsim
