// Copyright 2026 the sleepsim authors. Licensed under the Apache License,
// Version 2.0. See the LICENSE file at the root of this distribution or at
// http://www.apache.org/licenses/LICENSE-2.0

#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "sleepsim/adversary.hpp"
#include "sleepsim/checker.hpp"
#include "sleepsim/schedule.hpp"
#include "sleepsim/trace_io.hpp"
#include "sleepsim/types.hpp"

namespace sleepsim {

enum class InputMode { Explicit, AllZero, AllOne, OneHot, OneHotAll, Random };

// How trial input vectors are produced. Text forms:
//   all0 | all1 | onehot:I | onehot:all | rand:SEED | list:v0,v1,... | v0,v1,...
// onehot:all rotates the hot player with the trial index; rand derives a
// fresh vector per trial from (seed, trial).
struct InputSpec {
  InputMode mode = InputMode::AllZero;
  std::vector<Value> values; // Explicit
  PlayerId hot = 0;          // OneHot
  std::uint64_t seed = 0;    // Random

  static InputSpec parse(const std::string& text);
  std::string describe() const;

  // True when every trial sees the same vector (required by the exhaustive
  // adversary, whose enumeration is input-specific).
  bool trial_invariant() const {
    return mode != InputMode::OneHotAll && mode != InputMode::Random;
  }

  std::vector<Value> materialize(std::uint32_t n, ProtocolKind kind,
                                 std::uint64_t trial) const;
};

enum class AdversaryMode { None, Random, Chain, Exhaustive, File };

// Which schedule family to run. Text forms:
//   none | rand:SEED:COUNT | chain | exhaustive | exhaustive:BUDGET | file:PATH
struct AdversarySpec {
  AdversaryMode mode = AdversaryMode::None;
  std::uint64_t seed = 0;
  std::uint64_t count = 1;          // Random only
  std::uint64_t budget = 1'000'000; // Exhaustive only
  std::string path;                 // File only

  static AdversarySpec parse(const std::string& text);
  std::string describe() const;
};

struct ExperimentConfig {
  ProtocolKind kind = ProtocolKind::MultiValue;
  std::uint32_t n = 4;
  std::uint32_t f = 1;
  std::uint32_t k = 0; // binary committee-size override; 0 = ceil(sqrt(n))
  InputSpec inputs;
  AdversarySpec adversary;
  std::uint64_t trials = 1; // trial count when the adversary is `none`
  bool check = true;
  unsigned jobs = 0; // 0 = $SLEEPSIM_JOBS, else hardware concurrency
  std::string trace_path;
  std::string metrics_path;
  std::string summary_path;
};

// Optional stream overrides; when set they take precedence over the
// corresponding paths in the config.
struct ExperimentSinks {
  std::ostream* trace = nullptr;
  std::ostream* metrics = nullptr;
  std::ostream* summary = nullptr;
};

struct ExperimentResult {
  std::uint64_t trials = 0;
  std::uint64_t violations_total = 0;
  std::map<std::string, std::uint64_t> violations_by_name;
  std::uint32_t max_awake = 0;   // max over trials of per-trial max
  double mean_awake = 0.0;       // mean over trials of per-trial mean
  std::uint64_t max_messages = 0;
  std::uint64_t min_messages = 0;
  bool all_agree = true; // every trial's surviving decisions were uniform
};

// Runs one trial end to end: build protocol, simulate, check. `trial`,
// `adversary` only label the record.
TrialRecord simulate_trial(ProtocolKind kind, std::uint32_t n, std::uint32_t f,
                           std::uint32_t k, const std::vector<Value>& inputs,
                           const CrashSchedule& schedule, bool check,
                           std::uint64_t trial = 0,
                           const std::string& adversary = "none");

// Runs the configured trial set, streams trace JSONL / metrics CSV / summary
// JSON to the configured sinks, and aggregates. Trials execute across
// `jobs` worker threads; outputs and aggregates are in trial order and
// independent of the job count. Throws InvalidConfig / SpaceTooLarge /
// IoFailure.
ExperimentResult run_experiment(const ExperimentConfig& config,
                                const ExperimentSinks& sinks = {});

struct SweepConfig {
  ProtocolKind kind = ProtocolKind::Binary;
  std::vector<std::uint32_t> ns;
  std::vector<std::uint32_t> fs;
  std::vector<std::uint32_t> ks; // binary committee sizes; empty = default
  InputSpec inputs;
  AdversarySpec adversary;
  std::uint64_t trials = 1;
  bool check = true;
  unsigned jobs = 0;
  std::string csv_path;
  std::string summary_path;
};

struct SweepRow {
  std::uint32_t n = 0;
  std::uint32_t f = 0;
  std::uint32_t k = 0;
  std::uint64_t trials = 0;
  std::uint32_t max_awake = 0;
  double mean_awake = 0.0;
  std::uint64_t max_messages = 0;
  std::uint64_t violations = 0;
  std::uint64_t energy_bound = 0;
};

struct SweepBest {
  std::uint32_t n = 0;
  std::uint32_t f = 0;
  std::uint32_t k = 0; // committee size minimizing measured max_awake
  std::uint32_t max_awake = 0;
};

struct SweepResult {
  std::vector<SweepRow> rows;
  std::vector<SweepBest> best; // per (n, f), binary only
  std::uint64_t violations_total = 0;
};

// Grid-runs the cross product of ns x fs x ks (ks collapses to {default} for
// multi-value), skipping combinations with f >= n or k > n. CSV columns:
// n,f,k,protocol,adversary,trials,max_awake,mean_awake,max_messages,
// violations,energy_bound.
SweepResult run_sweep(const SweepConfig& config,
                      const ExperimentSinks& sinks = {});

// Effective worker count: explicit value, else $SLEEPSIM_JOBS, else hardware
// concurrency; always >= 1.
unsigned resolve_jobs(unsigned requested);

} // namespace sleepsim
