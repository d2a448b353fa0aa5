// Copyright 2026 the sleepsim authors. Licensed under the Apache License,
// Version 2.0. See the LICENSE file at the root of this distribution or at
// http://www.apache.org/licenses/LICENSE-2.0

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdint>
#include <set>
#include <vector>

#include "sleepsim/adversary.hpp"
#include "sleepsim/engine.hpp"
#include "sleepsim/protocol_multivalue.hpp"
#include "sleepsim/schedule.hpp"
#include "sleepsim/types.hpp"

using namespace sleepsim;

namespace {

std::vector<CrashSchedule> drain(ScheduleStream& stream) {
  std::vector<CrashSchedule> out;
  while (auto s = stream.next()) out.push_back(std::move(*s));
  return out;
}

ExhaustiveSchedules::SimulateFn mv_simulate(std::uint32_t n, std::uint32_t f,
                                            std::vector<Value> inputs) {
  return [n, f, inputs = std::move(inputs)](const CrashSchedule& schedule) {
    MultiValueConsensus protocol(n, f, inputs);
    return run(protocol, n, f, schedule).traces;
  };
}

} // namespace

TEST_CASE("crash-free stream emits exactly `count` empty schedules") {
  CrashFreeSchedules stream(3);
  const auto all = drain(stream);
  REQUIRE(all.size() == 3);
  for (const auto& s : all) CHECK(s.empty());
}

TEST_CASE("random stream: deterministic, order-independent, within bounds") {
  RandomSchedules a(16, 8, 42, 200);
  RandomSchedules b(16, 8, 42, 200);
  const auto sa = drain(a);
  const auto sb = drain(b);
  REQUIRE(sa.size() == 200);
  CHECK(sa == sb);

  // at(i) matches the i-th element of the sequential stream.
  RandomSchedules c(16, 8, 42, 200);
  CHECK(c.at(0) == sa[0]);
  CHECK(c.at(137) == sa[137]);
  CHECK(c.at(199) == sa[199]);

  bool crashing = false;
  bool quiet = false;
  for (const auto& s : sa) {
    s.validate(16, 8);  // rounds in range, victims distinct, <= f crashes
    for (const auto& crash : s.crashes) {
      CHECK(crash.round >= 1);
      CHECK(crash.round <= 9);
    }
    (s.empty() ? quiet : crashing) = true;
  }
  CHECK(crashing);  // a 200-draw with no crashes would be broken sampling
  CHECK(quiet);

  // A different seed gives a different sequence.
  RandomSchedules d(16, 8, 43, 200);
  CHECK(drain(d) != sa);
}

TEST_CASE("chain cutter follows the committee relay, one chain per slot") {
  // Multi-value, n=4, f=2: committees of size 3, C1 = {1,2,3}, C2 = {0,1,2}.
  ChainCutterSchedules stream(4, 2, ProtocolKind::MultiValue);
  const auto all = drain(stream);
  REQUIRE(all.size() == 4 * 3);  // n * committee size

  // First chain: crash holder 0 in round 1 delivering only to C1 slot 0
  // (player 1), then crash player 1 in round 2 delivering only to C2 slot 0
  // (player 0).
  REQUIRE(all[0].crashes.size() == 2);
  CHECK(all[0].crashes[0] == Crash{1, 0, {1}});
  CHECK(all[0].crashes[1] == Crash{2, 1, {0}});

  // Holder 1, slot 0: the round-2 victim would be player 1 again; the chain
  // stops after the first crash.
  REQUIRE(all[3].crashes.size() == 1);
  CHECK(all[3].crashes[0] == Crash{1, 1, {1}});

  for (const auto& s : all) s.validate(4, 2);
}

TEST_CASE("chain cutter is empty at f=0 and sized by k for binary") {
  ChainCutterSchedules none(4, 0, ProtocolKind::Binary);
  CHECK(drain(none).empty());

  ChainCutterSchedules bin(16, 3, ProtocolKind::Binary);  // k = 4
  CHECK(drain(bin).size() == 16 * 4);

  ChainCutterSchedules wide(16, 3, ProtocolKind::Binary, 8);
  CHECK(drain(wide).size() == 16 * 8);
}

TEST_CASE("exhaustive stream: hand-counted space for n=2, f=1 relay") {
  // Crash-free run: both rounds have both players sending to both players,
  // so every (round, victim) extension has a 2-recipient addressed set and
  // 4 masks. Schedules: empty + 2 rounds * 2 victims * 4 masks = 17.
  ExhaustiveSchedules stream(mv_simulate(2, 1, {5, 7}), 2, 1, 2);
  const auto all = drain(stream);
  REQUIRE(all.size() == 17);

  CHECK(all[0].empty());
  // Depth-first, lexicographic: round 1 victim 0 first, masks in subset
  // order {}, {0}, {1}, {0,1}.
  REQUIRE(all[1].crashes.size() == 1);
  CHECK(all[1].crashes[0] == Crash{1, 0, {}});
  CHECK(all[2].crashes[0] == Crash{1, 0, {0}});
  CHECK(all[3].crashes[0] == Crash{1, 0, {1}});
  CHECK(all[4].crashes[0] == Crash{1, 0, {0, 1}});
  CHECK(all[5].crashes[0] == Crash{1, 1, {}});

  // Round-2 extensions follow all round-1-victim-1 schedules.
  CHECK(all[9].crashes[0] == Crash{2, 0, {}});
  CHECK(all[13].crashes[0] == Crash{2, 1, {}});

  // All distinct.
  std::set<std::string> seen;
  for (const auto& s : all) CHECK(seen.insert(to_text(s)).second);
}

TEST_CASE("exhaustive stream honors the crash budget f") {
  // n=2, f=1: no schedule may contain two crashes.
  ExhaustiveSchedules stream(mv_simulate(2, 1, {5, 7}), 2, 1, 2);
  while (auto s = stream.next()) {
    CHECK(s->crashes.size() <= 1);
    s->validate(2, 1);
  }

  // n=3, f=2 admits two-crash schedules.
  ExhaustiveSchedules deeper(mv_simulate(3, 2, {5, 7, 9}), 3, 2, 3,
                             {.budget = 2'000'000});
  bool saw_two = false;
  while (auto s = deeper.next()) {
    CHECK(s->crashes.size() <= 2);
    s->validate(3, 2);
    if (s->crashes.size() == 2) saw_two = true;
  }
  CHECK(saw_two);
}

TEST_CASE("exhaustive stream throws SpaceTooLarge past its budget") {
  ExhaustiveSchedules stream(mv_simulate(2, 1, {5, 7}), 2, 1, 2,
                             {.budget = 5});
  for (int i = 0; i < 5; ++i) REQUIRE(stream.next().has_value());
  CHECK_THROWS_AS(stream.next(), SpaceTooLarge);
}

TEST_CASE("max_victims cap prunes deeper schedules") {
  ExhaustiveSchedules stream(mv_simulate(3, 2, {5, 7, 9}), 3, 2, 3,
                             {.max_victims = 1, .budget = 2'000'000});
  while (auto s = stream.next()) CHECK(s->crashes.size() <= 1);
}

TEST_CASE("bounded_uniform is unbiased over a small range and deterministic") {
  std::mt19937_64 rng(7);
  std::vector<std::uint64_t> counts(5, 0);
  for (int i = 0; i < 50'000; ++i) ++counts[bounded_uniform(rng, 5)];
  for (const auto c : counts) {
    CHECK(c > 9'500);
    CHECK(c < 10'500);
  }
  CHECK_THROWS_AS(bounded_uniform(rng, 0), InvalidConfig);

  std::mt19937_64 r1(99), r2(99);
  for (int i = 0; i < 100; ++i) {
    CHECK(bounded_uniform(r1, 1000) == bounded_uniform(r2, 1000));
  }
}

TEST_CASE("mix_seed separates indices and seeds") {
  CHECK(mix_seed(1, 0) != mix_seed(1, 1));
  CHECK(mix_seed(1, 0) != mix_seed(2, 0));
  CHECK(mix_seed(1, 5) == mix_seed(1, 5));
}

TEST_CASE("stream constructors validate their parameters") {
  CHECK_THROWS_AS(RandomSchedules(4, 4, 1, 10), InvalidConfig);
  CHECK_THROWS_AS(RandomSchedules(4, 1, 1, 0), InvalidConfig);
  CHECK_THROWS_AS(ChainCutterSchedules(4, 4, ProtocolKind::Binary),
                  InvalidConfig);
  CHECK_THROWS_AS(ChainCutterSchedules(4, 2, ProtocolKind::Binary, 9),
                  InvalidConfig);
  CHECK_THROWS_AS(
      ExhaustiveSchedules(nullptr, 2, 1, 2), InvalidConfig);
}
