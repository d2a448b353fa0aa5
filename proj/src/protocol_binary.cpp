// Copyright 2026 the sleepsim authors. Licensed under the Apache License,
// Version 2.0. See the LICENSE file at the root of this distribution or at
// http://www.apache.org/licenses/LICENSE-2.0

#include "sleepsim/protocol_binary.hpp"

#include <string>

namespace sleepsim {

BinaryConsensus::BinaryConsensus(std::uint32_t n, std::uint32_t f,
                                 std::vector<Value> inputs, std::uint32_t k)
    : n_(n), f_(f), k_(k == 0 ? ceil_sqrt(n) : k) {
  if (n < 1) throw InvalidConfig("binary: n must be >= 1");
  if (f >= n) throw InvalidConfig("binary: need f < n");
  if (k_ < 1 || k_ > n) {
    throw InvalidConfig("binary: committee size k must be in [1, n]; got " +
                        std::to_string(k_));
  }
  if (inputs.size() != n) {
    throw InvalidConfig("binary: expected " + std::to_string(n) +
                        " inputs, got " + std::to_string(inputs.size()));
  }
  span_ = static_cast<std::uint32_t>(ceil_div(f_ + 1, k_));
  input_.assign(n, 0);
  for (PlayerId p = 0; p < n; ++p) {
    if (inputs[p] > 1) {
      throw InvalidConfig("binary: inputs must be 0 or 1; player " +
                          std::to_string(p) + " has " +
                          std::to_string(inputs[p]));
    }
    input_[p] = static_cast<char>(inputs[p]);
  }
  estimate_.assign(n, 0);
  // Input-1 players start armed: they forward into committees 1..span.
  budget_.assign(n, 0);
  for (PlayerId p = 0; p < n; ++p) {
    if (input_[p]) budget_[p] = span_;
  }
  if (f_ >= 1) table_ = join_committees(n, f, k_);
}

bool BinaryConsensus::wakes(PlayerId p, int round) const {
  if (round == 1 || round == horizon()) return true;
  return budget_[p] > 0 ||
         table_.contains(static_cast<std::uint32_t>(round), p);
}

void BinaryConsensus::send_messages(PlayerId p, int round,
                                    std::vector<Message>& out) {
  if (round == horizon()) {
    if (estimate_[p] || input_[p]) {
      for (PlayerId q = 0; q < n_; ++q) out.push_back({p, q, round, 1});
    }
    return;
  }
  if (round == 1) {
    if (input_[p]) {
      for (PlayerId q : table_.committee(1)) out.push_back({p, q, round, 1});
    }
    return;
  }
  if (budget_[p] > 0) {
    --budget_[p];
    for (PlayerId q : table_.committee(static_cast<std::uint32_t>(round))) {
      out.push_back({p, q, round, 1});
    }
  }
}

void BinaryConsensus::receive(PlayerId p, int round,
                              std::span<const Value> payloads) {
  if (round == horizon()) {
    if (!payloads.empty() || input_[p]) estimate_[p] = 1;
    return;
  }
  if (!payloads.empty() && !estimate_[p]) {
    estimate_[p] = 1;
    budget_[p] = span_;
  }
}

Value BinaryConsensus::decide(PlayerId p) const { return estimate_[p]; }

std::uint64_t BinaryConsensus::energy_bound_k(std::uint32_t n, std::uint32_t f,
                                              std::uint32_t k) {
  if (f == 0) return 2;
  return 2 + ceil_div(static_cast<std::uint64_t>(f) * k, n) +
         2 * ceil_div(static_cast<std::uint64_t>(f) + 1, k);
}

std::uint64_t BinaryConsensus::energy_bound(std::uint32_t n, std::uint32_t f) {
  return energy_bound_k(n, f, ceil_sqrt(n));
}

std::uint64_t BinaryConsensus::message_bound(std::uint32_t n) {
  return 4ULL * n * n;
}

} // namespace sleepsim
