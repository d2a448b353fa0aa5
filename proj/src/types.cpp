// Copyright 2026 the sleepsim authors. Licensed under the Apache License,
// Version 2.0. See the LICENSE file at the root of this distribution or at
// http://www.apache.org/licenses/LICENSE-2.0

#include "sleepsim/types.hpp"

namespace sleepsim {

std::string to_string(ProtocolKind kind) {
  switch (kind) {
    case ProtocolKind::MultiValue: return "multi";
    case ProtocolKind::Binary: return "binary";
  }
  return "unknown";
}

ProtocolKind protocol_kind_from_string(const std::string& s) {
  if (s == "multi" || s == "multivalue" || s == "multi-value") {
    return ProtocolKind::MultiValue;
  }
  if (s == "binary" || s == "bin") return ProtocolKind::Binary;
  throw InvalidConfig("unknown protocol kind: " + s);
}

std::string to_string(LossReason reason) {
  switch (reason) {
    case LossReason::RecipientAsleep: return "recipient_asleep";
    case LossReason::SenderAlreadyCrashed: return "sender_already_crashed";
    case LossReason::SenderCrashMask: return "sender_crash_mask";
  }
  return "unknown";
}

LossReason loss_reason_from_string(const std::string& s) {
  if (s == "recipient_asleep") return LossReason::RecipientAsleep;
  if (s == "sender_already_crashed") return LossReason::SenderAlreadyCrashed;
  if (s == "sender_crash_mask") return LossReason::SenderCrashMask;
  throw IoFailure("unknown loss reason: " + s);
}

} // namespace sleepsim
