// Copyright 2026 the sleepsim authors. Licensed under the Apache License,
// Version 2.0. See the LICENSE file at the root of this distribution or at
// http://www.apache.org/licenses/LICENSE-2.0

#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace sleepsim {

using PlayerId = std::uint32_t;
using Value = std::uint64_t;

enum class ProtocolKind { MultiValue, Binary };

std::string to_string(ProtocolKind kind);
ProtocolKind protocol_kind_from_string(const std::string& s);

// Why a routed message did not reach its recipient.
enum class LossReason {
  RecipientAsleep,      // recipient was not awake this round
  SenderAlreadyCrashed, // sender crashed in an earlier round
  SenderCrashMask,      // sender crashes this round; recipient not in its delivery mask
};

std::string to_string(LossReason reason);
LossReason loss_reason_from_string(const std::string& s);

struct Message {
  PlayerId sender = 0;
  PlayerId recipient = 0;
  int round = 0;
  Value payload = 0;

  friend bool operator==(const Message&, const Message&) = default;
};

struct LostMessage {
  Message msg;
  LossReason reason = LossReason::RecipientAsleep;

  friend bool operator==(const LostMessage&, const LostMessage&) = default;
};

// Everything observable about one simulated round. Player lists are sorted
// ascending; message lists are in deterministic engine emission order.
struct RoundTrace {
  int round = 0;
  std::vector<PlayerId> awake;
  std::vector<Message> sent;
  std::vector<Message> delivered;
  std::vector<LostMessage> lost;
  std::vector<PlayerId> crashes;

  friend bool operator==(const RoundTrace&, const RoundTrace&) = default;
};

struct RunMetrics {
  std::vector<std::uint32_t> awake_rounds; // per player
  std::uint32_t max_awake = 0;             // energy: max over players
  std::uint64_t total_messages = 0;        // total sent across all rounds
  int rounds = 0;

  friend bool operator==(const RunMetrics&, const RunMetrics&) = default;
};

struct Violation {
  std::string name;   // stable snake_case category, e.g. "agreement"
  std::string detail; // human-readable specifics

  friend bool operator==(const Violation&, const Violation&) = default;
};

// A malformed configuration (bad n/f/k, inputs of wrong arity, ...).
class InvalidConfig : public std::runtime_error {
 public:
  explicit InvalidConfig(const std::string& what) : std::runtime_error(what) {}
};

// Exhaustive schedule enumeration would exceed its configured budget.
class SpaceTooLarge : public std::runtime_error {
 public:
  explicit SpaceTooLarge(const std::string& what) : std::runtime_error(what) {}
};

// File/stream I/O failure or unparseable artifact.
class IoFailure : public std::runtime_error {
 public:
  explicit IoFailure(const std::string& what) : std::runtime_error(what) {}
};

constexpr std::uint64_t ceil_div(std::uint64_t num, std::uint64_t den) {
  return (num + den - 1) / den;
}

// Smallest k with k*k >= n.
constexpr std::uint32_t ceil_sqrt(std::uint32_t n) {
  std::uint32_t k = 0;
  while (static_cast<std::uint64_t>(k) * k < n) ++k;
  return k;
}

} // namespace sleepsim
