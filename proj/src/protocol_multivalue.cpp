// Copyright 2026 the sleepsim authors. Licensed under the Apache License,
// Version 2.0. See the LICENSE file at the root of this distribution or at
// http://www.apache.org/licenses/LICENSE-2.0

#include "sleepsim/protocol_multivalue.hpp"

#include <algorithm>
#include <string>

namespace sleepsim {

MultiValueConsensus::MultiValueConsensus(std::uint32_t n, std::uint32_t f,
                                         std::vector<Value> inputs)
    : n_(n), f_(f), estimate_(std::move(inputs)) {
  if (n < 1) throw InvalidConfig("multi-value: n must be >= 1");
  if (f >= n) throw InvalidConfig("multi-value: need f < n");
  if (estimate_.size() != n) {
    throw InvalidConfig("multi-value: expected " + std::to_string(n) +
                        " inputs, got " + std::to_string(estimate_.size()));
  }
  if (f_ >= 1) table_ = join_committees(n, f, f + 1);
}

bool MultiValueConsensus::wakes(PlayerId p, int round) const {
  if (round == 1 || round == horizon()) return true;
  const auto d = static_cast<std::uint32_t>(round);
  return table_.contains(d - 1, p) || table_.contains(d, p);
}

void MultiValueConsensus::send_messages(PlayerId p, int round,
                                        std::vector<Message>& out) {
  if (f_ == 0) {
    broadcast(p, round, out);
    return;
  }
  if (round == 1) {
    send_to_committee(p, 1, round, out);
  } else if (round <= static_cast<int>(f_)) {
    if (table_.contains(static_cast<std::uint32_t>(round) - 1, p)) {
      send_to_committee(p, static_cast<std::uint32_t>(round), round, out);
    }
  } else if (table_.contains(f_, p)) {
    broadcast(p, round, out);
  }
}

void MultiValueConsensus::receive(PlayerId p, int /*round*/,
                                  std::span<const Value> payloads) {
  for (Value v : payloads) estimate_[p] = std::max(estimate_[p], v);
}

Value MultiValueConsensus::decide(PlayerId p) const { return estimate_[p]; }

std::uint64_t MultiValueConsensus::energy_bound(std::uint32_t n,
                                                std::uint32_t f) {
  return 2 + 2 * ceil_div(static_cast<std::uint64_t>(f) * (f + 1), n);
}

std::uint64_t MultiValueConsensus::message_bound(std::uint32_t n,
                                                 std::uint32_t f) {
  const auto n64 = static_cast<std::uint64_t>(n);
  if (f == 0) return n64 * n64;
  const auto b = static_cast<std::uint64_t>(f) + 1;
  return n64 * b + (f - 1) * b * b + b * n64;
}

void MultiValueConsensus::send_to_committee(PlayerId p, std::uint32_t d,
                                            int round,
                                            std::vector<Message>& out) const {
  for (PlayerId q : table_.committee(d)) {
    out.push_back({p, q, round, estimate_[p]});
  }
}

void MultiValueConsensus::broadcast(PlayerId p, int round,
                                    std::vector<Message>& out) const {
  for (PlayerId q = 0; q < n_; ++q) {
    out.push_back({p, q, round, estimate_[p]});
  }
}

} // namespace sleepsim
