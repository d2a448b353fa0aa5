// Copyright 2026 the sleepsim authors. Licensed under the Apache License,
// Version 2.0. See the LICENSE file at the root of this distribution or at
// http://www.apache.org/licenses/LICENSE-2.0

#pragma once

#include <cstdint>
#include <vector>

#include "sleepsim/types.hpp"

namespace sleepsim {

// Round-robin assignment of n players to a committees of size b each.
// Committee indices are 1-based (d in [1, a]); player ids are 0-based.
// Slot i in [1, a*b] holds player (i mod n) and belongs to committee
// ceil(i / b). With b <= n the b consecutive slots of one committee hold
// b distinct players; the same player routinely recurs across committees.
class CommitteeTable {
 public:
  CommitteeTable() = default;

  std::uint32_t players() const { return n_; }
  std::uint32_t count() const { return a_; }
  std::uint32_t size() const { return b_; }

  // Members of committee d (1-based), in slot order. d must be in [1, a].
  const std::vector<PlayerId>& committee(std::uint32_t d) const;

  // True iff player p sits in committee d; false for d outside [1, a].
  bool contains(std::uint32_t d, PlayerId p) const;

  // Sorted committee indices containing p.
  const std::vector<std::uint32_t>& memberships(PlayerId p) const;

  // Max number of committees any single player belongs to.
  std::uint32_t max_memberships() const;

  // Min gap d2 - d1 over consecutive memberships d1 < d2 of any player.
  // Returns UINT32_MAX when no player has two memberships.
  std::uint32_t min_membership_gap() const;

 private:
  friend CommitteeTable join_committees(std::uint32_t n, std::uint32_t a,
                                        std::uint32_t b);

  std::uint32_t n_ = 0;
  std::uint32_t a_ = 0;
  std::uint32_t b_ = 0;
  std::vector<std::vector<PlayerId>> members_;        // [d-1] -> slot-ordered
  std::vector<std::vector<std::uint32_t>> of_player_; // [p] -> sorted d's
  std::vector<char> member_bits_;                     // [(d-1)*n + p]
};

// Builds the table. Requires n >= 1, a >= 1, 1 <= b <= n.
CommitteeTable join_committees(std::uint32_t n, std::uint32_t a,
                               std::uint32_t b);

} // namespace sleepsim
