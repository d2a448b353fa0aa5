// Copyright 2026 the sleepsim authors. Licensed under the Apache License,
// Version 2.0. See the LICENSE file at the root of this distribution or at
// http://www.apache.org/licenses/LICENSE-2.0

#include "sleepsim/adversary.hpp"

#include <algorithm>
#include <limits>
#include <string>

namespace sleepsim {

std::uint64_t bounded_uniform(std::mt19937_64& rng, std::uint64_t bound) {
  if (bound == 0) {
    throw InvalidConfig("bounded_uniform: bound must be positive");
  }
  // Rejection sampling: drop the low sliver that would bias the modulus.
  const std::uint64_t threshold = (0ULL - bound) % bound;
  for (;;) {
    const std::uint64_t r = rng();
    if (r >= threshold) return r % bound;
  }
}

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t index) {
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (index + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

CrashFreeSchedules::CrashFreeSchedules(std::uint64_t count)
    : remaining_(count) {}

std::optional<CrashSchedule> CrashFreeSchedules::next() {
  if (remaining_ == 0) return std::nullopt;
  --remaining_;
  return CrashSchedule{};
}

RandomSchedules::RandomSchedules(std::uint32_t n, std::uint32_t f,
                                 std::uint64_t seed, std::uint64_t count)
    : n_(n), f_(f), seed_(seed), count_(count) {
  if (n < 1) throw InvalidConfig("random schedules: n must be >= 1");
  if (f >= n) throw InvalidConfig("random schedules: need f < n");
  if (count < 1) throw InvalidConfig("random schedules: count must be >= 1");
}

CrashSchedule RandomSchedules::at(std::uint64_t index) const {
  std::mt19937_64 rng(mix_seed(seed_, index));
  CrashSchedule schedule;
  const auto crash_count =
      static_cast<std::uint32_t>(bounded_uniform(rng, f_ + 1ULL));
  if (crash_count == 0) return schedule;

  std::vector<PlayerId> ids(n_);
  for (PlayerId p = 0; p < n_; ++p) ids[p] = p;
  for (std::uint32_t i = 0; i < crash_count; ++i) {
    const auto j =
        i + static_cast<std::uint32_t>(bounded_uniform(rng, n_ - i));
    std::swap(ids[i], ids[j]);
    Crash c;
    c.victim = ids[i];
    c.round = 1 + static_cast<int>(bounded_uniform(rng, f_ + 1ULL));
    for (PlayerId p = 0; p < n_; ++p) {
      if (rng() & 1ULL) c.delivery_mask.push_back(p);
    }
    schedule.crashes.push_back(std::move(c));
  }
  schedule.canonicalize();
  return schedule;
}

std::optional<CrashSchedule> RandomSchedules::next() {
  if (next_index_ >= count_) return std::nullopt;
  return at(next_index_++);
}

ChainCutterSchedules::ChainCutterSchedules(std::uint32_t n, std::uint32_t f,
                                           ProtocolKind kind, std::uint32_t k)
    : n_(n), f_(f) {
  if (n < 1) throw InvalidConfig("chain cutter: n must be >= 1");
  if (f >= n) throw InvalidConfig("chain cutter: need f < n");
  if (f_ >= 1) {
    b_ = kind == ProtocolKind::MultiValue ? f + 1
                                          : (k == 0 ? ceil_sqrt(n) : k);
    if (b_ < 1 || b_ > n) {
      throw InvalidConfig("chain cutter: committee size " +
                          std::to_string(b_) + " outside [1, n]");
    }
    table_ = join_committees(n, f, b_);
  }
}

std::optional<CrashSchedule> ChainCutterSchedules::next() {
  if (f_ == 0) return std::nullopt; // no committees, no chains
  if (next_index_ >= static_cast<std::uint64_t>(n_) * b_) return std::nullopt;
  const auto holder = static_cast<PlayerId>(next_index_ / b_);
  const auto slot = static_cast<std::uint32_t>(next_index_ % b_);
  ++next_index_;

  CrashSchedule schedule;
  std::vector<char> crashed(n_, 0);
  schedule.crashes.push_back({1, holder, {table_.committee(1)[slot]}});
  crashed[holder] = 1;
  for (std::uint32_t t = 2; t <= f_; ++t) {
    const PlayerId victim = table_.committee(t - 1)[slot];
    if (crashed[victim]) break;
    schedule.crashes.push_back({static_cast<int>(t), victim,
                                {table_.committee(t)[slot]}});
    crashed[victim] = 1;
  }
  return schedule;
}

ExhaustiveSchedules::ExhaustiveSchedules(SimulateFn simulate, std::uint32_t n,
                                         std::uint32_t f, int horizon,
                                         ExhaustiveCaps caps)
    : simulate_(std::move(simulate)), n_(n), f_(f), horizon_(horizon),
      caps_(caps) {
  if (n < 1) throw InvalidConfig("exhaustive schedules: n must be >= 1");
  if (f >= n) throw InvalidConfig("exhaustive schedules: need f < n");
  if (horizon < 1) {
    throw InvalidConfig("exhaustive schedules: horizon must be >= 1");
  }
  if (!simulate_) {
    throw InvalidConfig("exhaustive schedules: simulate callback required");
  }
  caps_.max_victims = std::min(caps_.max_victims, f_);
}

std::optional<CrashSchedule> ExhaustiveSchedules::next() {
  if (!started_) {
    started_ = true;
    pending_.push_back(CrashSchedule{});
  }
  if (pending_.empty()) return std::nullopt;
  if (++emitted_ > caps_.budget) {
    throw SpaceTooLarge("exhaustive schedule enumeration exceeded budget of " +
                        std::to_string(caps_.budget) + " schedules");
  }
  CrashSchedule schedule = std::move(pending_.front());
  pending_.pop_front();
  expand(schedule);
  return schedule;
}

void ExhaustiveSchedules::expand(const CrashSchedule& schedule) {
  if (schedule.crashes.size() >= caps_.max_victims) return;

  // First extension must be lexicographically above the last crash so every
  // schedule is generated exactly once, in canonical order.
  int from_round = 1;
  PlayerId from_victim = 0;
  if (!schedule.crashes.empty()) {
    from_round = schedule.crashes.back().round;
    from_victim = schedule.crashes.back().victim + 1;
  }

  std::vector<char> crashed(n_, 0);
  for (const auto& c : schedule.crashes) crashed[c.victim] = 1;

  const std::vector<RoundTrace> traces = simulate_(schedule);

  std::vector<CrashSchedule> children;
  std::vector<PlayerId> addressed;
  for (int r = from_round; r <= horizon_; ++r) {
    for (PlayerId v = (r == from_round ? from_victim : 0); v < n_; ++v) {
      if (crashed[v]) continue;

      addressed.clear();
      for (const Message& m : traces[static_cast<std::size_t>(r - 1)].sent) {
        if (m.sender == v) addressed.push_back(m.recipient);
      }
      std::sort(addressed.begin(), addressed.end());
      addressed.erase(std::unique(addressed.begin(), addressed.end()),
                      addressed.end());

      const auto bits = static_cast<std::uint32_t>(addressed.size());
      if (bits >= 63 || (1ULL << bits) > caps_.budget) {
        throw SpaceTooLarge(
            "exhaustive schedules: " + std::to_string(bits) +
            "-recipient delivery mask space exceeds budget of " +
            std::to_string(caps_.budget));
      }
      for (std::uint64_t mask = 0; mask < (1ULL << bits); ++mask) {
        CrashSchedule child = schedule;
        Crash c;
        c.round = r;
        c.victim = v;
        for (std::uint32_t i = 0; i < bits; ++i) {
          if (mask & (1ULL << i)) c.delivery_mask.push_back(addressed[i]);
        }
        child.crashes.push_back(std::move(c));
        children.push_back(std::move(child));
      }
    }
  }
  // Depth-first preorder: the first child must be emitted immediately next.
  for (auto it = children.rbegin(); it != children.rend(); ++it) {
    pending_.push_front(std::move(*it));
  }
}

} // namespace sleepsim
