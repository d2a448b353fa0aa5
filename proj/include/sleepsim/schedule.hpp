// Copyright 2026 the sleepsim authors. Licensed under the Apache License,
// Version 2.0. See the LICENSE file at the root of this distribution or at
// http://www.apache.org/licenses/LICENSE-2.0

#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "sleepsim/types.hpp"

namespace sleepsim {

// One crash event: `victim` crashes in `round`. Messages it sends that round
// reach only recipients listed in `delivery_mask` (ids outside the victim's
// addressed set are inert). An empty mask drops all of its final sends.
struct Crash {
  int round = 1;
  PlayerId victim = 0;
  std::vector<PlayerId> delivery_mask;

  friend bool operator==(const Crash&, const Crash&) = default;
};

struct CrashSchedule {
  std::vector<Crash> crashes;

  bool empty() const { return crashes.empty(); }

  // Sorts crashes by (round, victim) and each mask ascending, dropping
  // duplicate mask entries. Two schedules are semantically equal iff their
  // canonical forms compare equal.
  void canonicalize();

  // Throws InvalidConfig unless: every round >= 1, every victim < n, victims
  // pairwise distinct, at most f crashes, mask ids < n.
  void validate(std::uint32_t n, std::uint32_t f) const;

  friend bool operator==(const CrashSchedule&, const CrashSchedule&) = default;
};

// Canonical text form, one crash per line: "<round> <victim> [mask ids...]".
// Blank lines and lines starting with '#' are ignored on parse.
std::string to_text(const CrashSchedule& schedule);
CrashSchedule schedule_from_text(const std::string& text);

CrashSchedule load_schedule(const std::string& path);
void save_schedule(const CrashSchedule& schedule, const std::string& path);

} // namespace sleepsim
