// Copyright 2026 the sleepsim authors. Licensed under the Apache License,
// Version 2.0. See the LICENSE file at the root of this distribution or at
// http://www.apache.org/licenses/LICENSE-2.0

#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "sleepsim/checker.hpp"
#include "sleepsim/engine.hpp"
#include "sleepsim/schedule.hpp"
#include "sleepsim/types.hpp"

namespace sleepsim {

// Everything recorded about one simulated trial.
struct TrialRecord {
  std::uint64_t trial = 0;
  ProtocolKind kind = ProtocolKind::MultiValue;
  std::uint32_t n = 0;
  std::uint32_t f = 0;
  std::uint32_t k = 0; // committee size in force (f+1 for multi-value)
  std::string adversary;
  std::vector<Value> inputs;
  CrashSchedule schedule;
  std::vector<RoundTrace> traces;
  std::vector<std::optional<Value>> decisions;
  RunMetrics metrics;
  std::vector<Violation> violations;

  CheckContext check_context() const;

  friend bool operator==(const TrialRecord&, const TrialRecord&) = default;
};

// JSONL layout, three object shapes distinguished by key:
//   header  {"trial", "protocol", "n", "f", "k", "inputs", "adversary",
//            "schedule": [[round, victim, [mask...]], ...]}
//   round   {"round", "awake", "sent": [[sender, recipient, payload], ...],
//            "delivered": likewise, "lost": [[s, r, p, reason], ...],
//            "crashes"}
//   result  {"decisions" (null for crashed players), "max_awake",
//            "mean_awake", "messages", "rounds",
//            "violations": [{"name", "detail"}, ...]}
// One trial = header, its rounds in order, then its result line.
void write_trial_jsonl(std::ostream& out, const TrialRecord& record);

// Parses a whole stream of concatenated trials. Throws IoFailure on
// malformed input.
std::vector<TrialRecord> read_trials_jsonl(std::istream& in);

std::vector<TrialRecord> load_trials_jsonl(const std::string& path);

// Metrics CSV. Columns: trial,n,f,k,protocol,adversary,max_awake,mean_awake,
// messages,rounds,decision_agree,decision_value,violations.
std::string metrics_csv_header();
std::string metrics_csv_row(const TrialRecord& record);

} // namespace sleepsim
