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

// Multi-value consensus over f+1 rounds: f committees of f+1 players relay a
// running maximum. Round 1: everyone wakes and sends its value to committee 1.
// Rounds 2..f: committee h-1 wakes and forwards its estimate to committee h,
// whose members fold the max of what they hear into their estimate. Round
// f+1: everyone wakes, committee f broadcasts, and every player decides the
// max it has seen. With f = 0 the single round degenerates to everyone
// broadcasting and deciding the max.
class MultiValueConsensus : public Protocol {
 public:
  // inputs.size() must equal n; requires f < n.
  MultiValueConsensus(std::uint32_t n, std::uint32_t f,
                      std::vector<Value> inputs);

  int horizon() const override { return static_cast<int>(f_) + 1; }
  bool wakes(PlayerId p, int round) const override;
  void send_messages(PlayerId p, int round,
                     std::vector<Message>& out) override;
  void receive(PlayerId p, int round,
               std::span<const Value> payloads) override;
  Value decide(PlayerId p) const override;

  // Empty table when f = 0.
  const CommitteeTable& table() const { return table_; }

  // Cap on any player's awake rounds: 2 + 2*ceil(f*(f+1)/n).
  static std::uint64_t energy_bound(std::uint32_t n, std::uint32_t f);

  // Exact crash-free message count: n(f+1) + (f-1)(f+1)^2 + (f+1)n for
  // f >= 1; n^2 for the broadcast round at f = 0. Crashes only ever remove
  // sends, so this is also an upper bound for faulty runs.
  static std::uint64_t message_bound(std::uint32_t n, std::uint32_t f);

 private:
  void send_to_committee(PlayerId p, std::uint32_t d, int round,
                         std::vector<Message>& out) const;
  void broadcast(PlayerId p, int round, std::vector<Message>& out) const;

  std::uint32_t n_;
  std::uint32_t f_;
  std::vector<Value> estimate_; // running max, seeded with the inputs
  CommitteeTable table_;
};

} // namespace sleepsim
