// Copyright 2026 the sleepsim authors. Licensed under the Apache License,
// Version 2.0. See the LICENSE file at the root of this distribution or at
// http://www.apache.org/licenses/LICENSE-2.0

#include "sleepsim/schedule.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>
#include <unordered_set>

namespace sleepsim {

void CrashSchedule::canonicalize() {
  for (auto& c : crashes) {
    std::sort(c.delivery_mask.begin(), c.delivery_mask.end());
    c.delivery_mask.erase(
        std::unique(c.delivery_mask.begin(), c.delivery_mask.end()),
        c.delivery_mask.end());
  }
  std::sort(crashes.begin(), crashes.end(), [](const Crash& x, const Crash& y) {
    if (x.round != y.round) return x.round < y.round;
    return x.victim < y.victim;
  });
}

void CrashSchedule::validate(std::uint32_t n, std::uint32_t f) const {
  if (crashes.size() > f) {
    throw InvalidConfig("schedule has " + std::to_string(crashes.size()) +
                        " crashes but f=" + std::to_string(f));
  }
  std::unordered_set<PlayerId> seen;
  for (const auto& c : crashes) {
    if (c.round < 1) {
      throw InvalidConfig("crash round must be >= 1; got " +
                          std::to_string(c.round));
    }
    if (c.victim >= n) {
      throw InvalidConfig("crash victim " + std::to_string(c.victim) +
                          " outside [0, " + std::to_string(n) + ")");
    }
    if (!seen.insert(c.victim).second) {
      throw InvalidConfig("player " + std::to_string(c.victim) +
                          " crashes more than once");
    }
    for (PlayerId m : c.delivery_mask) {
      if (m >= n) {
        throw InvalidConfig("mask id " + std::to_string(m) + " outside [0, " +
                            std::to_string(n) + ")");
      }
    }
  }
}

std::string to_text(const CrashSchedule& schedule) {
  std::ostringstream out;
  for (const auto& c : schedule.crashes) {
    out << c.round << ' ' << c.victim;
    auto mask = c.delivery_mask;
    std::sort(mask.begin(), mask.end());
    for (PlayerId m : mask) out << ' ' << m;
    out << '\n';
  }
  return out.str();
}

CrashSchedule schedule_from_text(const std::string& text) {
  CrashSchedule schedule;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto start = line.find_first_not_of(" \t\r");
    if (start == std::string::npos || line[start] == '#') continue;
    std::istringstream fields(line);
    Crash c;
    if (!(fields >> c.round >> c.victim)) {
      throw IoFailure("schedule line " + std::to_string(lineno) +
                      ": expected '<round> <victim> [mask...]'");
    }
    PlayerId m = 0;
    while (fields >> m) c.delivery_mask.push_back(m);
    if (!fields.eof()) {
      throw IoFailure("schedule line " + std::to_string(lineno) +
                      ": trailing non-numeric content");
    }
    schedule.crashes.push_back(std::move(c));
  }
  return schedule;
}

CrashSchedule load_schedule(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoFailure("cannot open schedule file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return schedule_from_text(buf.str());
}

void save_schedule(const CrashSchedule& schedule, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IoFailure("cannot write schedule file: " + path);
  out << to_text(schedule);
  if (!out) throw IoFailure("failed writing schedule file: " + path);
}

} // namespace sleepsim
