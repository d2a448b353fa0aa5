// Copyright 2026 the sleepsim authors. Licensed under the Apache License,
// Version 2.0. See the LICENSE file at the root of this distribution or at
// http://www.apache.org/licenses/LICENSE-2.0

#include "sleepsim/committees.hpp"

#include <algorithm>
#include <limits>
#include <string>

namespace sleepsim {

const std::vector<PlayerId>& CommitteeTable::committee(std::uint32_t d) const {
  if (d < 1 || d > a_) {
    throw InvalidConfig("committee index " + std::to_string(d) +
                        " outside [1, " + std::to_string(a_) + "]");
  }
  return members_[d - 1];
}

bool CommitteeTable::contains(std::uint32_t d, PlayerId p) const {
  if (d < 1 || d > a_ || p >= n_) return false;
  return member_bits_[static_cast<std::size_t>(d - 1) * n_ + p] != 0;
}

const std::vector<std::uint32_t>& CommitteeTable::memberships(PlayerId p) const {
  if (p >= n_) {
    throw InvalidConfig("player id " + std::to_string(p) + " outside [0, " +
                        std::to_string(n_) + ")");
  }
  return of_player_[p];
}

std::uint32_t CommitteeTable::max_memberships() const {
  std::uint32_t best = 0;
  for (const auto& ds : of_player_) {
    best = std::max(best, static_cast<std::uint32_t>(ds.size()));
  }
  return best;
}

std::uint32_t CommitteeTable::min_membership_gap() const {
  std::uint32_t best = std::numeric_limits<std::uint32_t>::max();
  for (const auto& ds : of_player_) {
    for (std::size_t i = 1; i < ds.size(); ++i) {
      best = std::min(best, ds[i] - ds[i - 1]);
    }
  }
  return best;
}

CommitteeTable join_committees(std::uint32_t n, std::uint32_t a,
                               std::uint32_t b) {
  if (n < 1) throw InvalidConfig("join_committees: n must be >= 1");
  if (a < 1) throw InvalidConfig("join_committees: a must be >= 1");
  if (b < 1 || b > n) {
    throw InvalidConfig("join_committees: b must be in [1, n]; got b=" +
                        std::to_string(b) + ", n=" + std::to_string(n));
  }

  CommitteeTable t;
  t.n_ = n;
  t.a_ = a;
  t.b_ = b;
  t.members_.assign(a, {});
  for (auto& c : t.members_) c.reserve(b);
  t.of_player_.assign(n, {});
  t.member_bits_.assign(static_cast<std::size_t>(a) * n, 0);

  for (std::uint64_t i = 1; i <= static_cast<std::uint64_t>(a) * b; ++i) {
    const PlayerId p = static_cast<PlayerId>(i % n);
    const std::uint32_t d = static_cast<std::uint32_t>(ceil_div(i, b));
    t.members_[d - 1].push_back(p);
    auto& bit = t.member_bits_[static_cast<std::size_t>(d - 1) * n + p];
    if (!bit) {
      bit = 1;
      t.of_player_[p].push_back(d);
    }
  }
  // Slot order visits committees in increasing d, so of_player_ is sorted.
  return t;
}

} // namespace sleepsim
