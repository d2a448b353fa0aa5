// Copyright 2026 the sleepsim authors. Licensed under the Apache License,
// Version 2.0. See the LICENSE file at the root of this distribution or at
// http://www.apache.org/licenses/LICENSE-2.0

#pragma once

#include <cstdint>
#include <deque>
#include <functional>
#include <limits>
#include <memory>
#include <optional>
#include <random>
#include <vector>

#include "sleepsim/committees.hpp"
#include "sleepsim/schedule.hpp"
#include "sleepsim/types.hpp"

namespace sleepsim {

// A deterministic stream of crash schedules. Given identical constructor
// arguments, next() yields an identical sequence.
class ScheduleStream {
 public:
  virtual ~ScheduleStream() = default;

  // The next schedule, or nullopt when the stream is exhausted.
  virtual std::optional<CrashSchedule> next() = 0;
};

// Emits `count` empty schedules (crash-free baseline).
class CrashFreeSchedules : public ScheduleStream {
 public:
  explicit CrashFreeSchedules(std::uint64_t count);
  std::optional<CrashSchedule> next() override;

 private:
  std::uint64_t remaining_;
};

// `count` pseudo-random schedules. Per schedule: the number of crashes is
// uniform on [0, f]; victims are sampled without replacement; each crash
// round is uniform on [1, f+1]; each delivery mask is a uniform subset of all
// players (entries outside the victim's addressed set are inert, so this is a
// uniform subset of every addressed set). Schedule i derives its own rng from
// (seed, i), making the stream order-independent.
class RandomSchedules : public ScheduleStream {
 public:
  RandomSchedules(std::uint32_t n, std::uint32_t f, std::uint64_t seed,
                  std::uint64_t count);
  std::optional<CrashSchedule> next() override;

  // The i-th schedule of the stream, independent of cursor state.
  CrashSchedule at(std::uint64_t index) const;

 private:
  std::uint32_t n_;
  std::uint32_t f_;
  std::uint64_t seed_;
  std::uint64_t count_;
  std::uint64_t next_index_ = 0;
};

// Targets the committee relay: for every (initial holder h, committee slot j)
// it emits one maximal chain that crashes the current value holder each round
// while delivering only to the player in slot j of the next committee —
// crash h in round 1 with mask {C_1[j]}, crash C_1[j] in round 2 with mask
// {C_2[j]}, and so on, stopping when the next victim has already crashed in
// this chain or the crash budget f is spent. Emits n * b schedules (b =
// committee size); none for f = 0.
class ChainCutterSchedules : public ScheduleStream {
 public:
  // k: committee size override for the binary protocol (0 = ceil(sqrt(n)));
  // ignored for multi-value, whose committees have size f+1.
  ChainCutterSchedules(std::uint32_t n, std::uint32_t f, ProtocolKind kind,
                       std::uint32_t k = 0);
  std::optional<CrashSchedule> next() override;

 private:
  std::uint32_t n_;
  std::uint32_t f_;
  std::uint32_t b_ = 0;
  CommitteeTable table_;
  std::uint64_t next_index_ = 0; // holder * b + slot
};

struct ExhaustiveCaps {
  // Upper bound on crashes per schedule (clamped to f).
  std::uint32_t max_victims = std::numeric_limits<std::uint32_t>::max();
  // Max schedules emitted before SpaceTooLarge is thrown.
  std::uint64_t budget = 1'000'000;
};

// Depth-first enumeration of every semantically distinct schedule with at
// most min(f, caps.max_victims) crashes against a fixed protocol run:
// schedules are extended in canonical (round, victim) lexicographic order and
// delivery masks range over all subsets of the victim's actually addressed
// recipients in that round, obtained by simulating the parent schedule.
// The empty schedule is emitted first. Throws SpaceTooLarge when the emission
// count would exceed caps.budget or a single extension's mask space alone
// exceeds it.
class ExhaustiveSchedules : public ScheduleStream {
 public:
  // simulate: runs the protocol under a schedule, returning the round traces.
  using SimulateFn = std::function<std::vector<RoundTrace>(const CrashSchedule&)>;

  ExhaustiveSchedules(SimulateFn simulate, std::uint32_t n, std::uint32_t f,
                      int horizon, ExhaustiveCaps caps = {});
  std::optional<CrashSchedule> next() override;

  std::uint64_t emitted() const { return emitted_; }

 private:
  void expand(const CrashSchedule& schedule);

  SimulateFn simulate_;
  std::uint32_t n_;
  std::uint32_t f_;
  int horizon_;
  ExhaustiveCaps caps_;
  std::uint64_t emitted_ = 0;
  std::deque<CrashSchedule> pending_; // front = next to emit (DFS preorder)
  bool started_ = false;
};

// Uniform integer on [0, bound), unbiased, stable across platforms.
std::uint64_t bounded_uniform(std::mt19937_64& rng, std::uint64_t bound);

// Stateless seed mixer (splitmix64 step) for deriving per-index streams.
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t index);

} // namespace sleepsim
