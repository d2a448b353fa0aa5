// Copyright 2026 the sleepsim authors. Licensed under the Apache License,
// Version 2.0. See the LICENSE file at the root of this distribution or at
// http://www.apache.org/licenses/LICENSE-2.0

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cstdint>
#include <string>
#include <vector>

#include "sleepsim/adversary.hpp"
#include "sleepsim/checker.hpp"
#include "sleepsim/engine.hpp"
#include "sleepsim/protocol_binary.hpp"
#include "sleepsim/protocol_multivalue.hpp"
#include "sleepsim/types.hpp"

using namespace sleepsim;

namespace {

struct Run {
  RunResult result;
  CheckContext ctx;

  std::vector<Violation> check() const {
    return check_run(result.traces, result.decisions, ctx);
  }
};

Run run_mv(std::uint32_t n, std::uint32_t f, std::vector<Value> inputs,
           CrashSchedule schedule = {}) {
  MultiValueConsensus protocol(n, f, inputs);
  return {run(protocol, n, f, schedule),
          {ProtocolKind::MultiValue, n, f, 0, std::move(inputs)}};
}

Run run_bin(std::uint32_t n, std::uint32_t f, std::vector<Value> inputs,
            CrashSchedule schedule = {}, std::uint32_t k = 0) {
  BinaryConsensus protocol(n, f, inputs, k);
  return {run(protocol, n, f, schedule),
          {ProtocolKind::Binary, n, f, k, std::move(inputs)}};
}

bool has(const std::vector<Violation>& violations, const std::string& name) {
  return std::any_of(violations.begin(), violations.end(),
                     [&](const Violation& v) { return v.name == name; });
}

// Drops every sent+delivered message of `sender` in one round, keeping the
// trace conservation-consistent.
void erase_sends(RoundTrace& tr, PlayerId sender) {
  auto drop = [&](std::vector<Message>& msgs) {
    msgs.erase(std::remove_if(msgs.begin(), msgs.end(),
                              [&](const Message& m) {
                                return m.sender == sender;
                              }),
               msgs.end());
  };
  drop(tr.sent);
  drop(tr.delivered);
}

} // namespace

TEST_CASE("clean runs produce no violations at all") {
  CHECK(run_mv(4, 2, {3, 1, 4, 2}).check().empty());
  CHECK(run_mv(4, 0, {9, 2, 5, 5}).check().empty());
  CHECK(run_bin(4, 2, {0, 1, 0, 0}).check().empty());
  CHECK(run_bin(4, 0, {0, 0, 1, 0}).check().empty());
  CHECK(run_bin(16, 8, std::vector<Value>(16, 1)).check().empty());

  CrashSchedule schedule;
  schedule.crashes.push_back({1, 2, {3}});
  CHECK(run_mv(4, 2, {3, 1, 4, 2}, schedule).check().empty());
  CHECK(run_bin(4, 2, {0, 0, 1, 0}, schedule).check().empty());
}

TEST_CASE("clean across random adversaries, both protocols") {
  RandomSchedules schedules(16, 8, 2026, 300);
  std::uint64_t idx = 0;
  while (auto s = schedules.next()) {
    CAPTURE(idx);
    std::vector<Value> mv_in(16);
    for (PlayerId p = 0; p < 16; ++p) mv_in[p] = (p * 5 + 1) % 7;
    CHECK(run_mv(16, 8, mv_in, *s).check().empty());

    std::vector<Value> bin_in(16, 0);
    bin_in[idx % 16] = 1;
    CHECK(run_bin(16, 8, bin_in, *s).check().empty());
    ++idx;
  }
}

TEST_CASE("malformed_trace: round labels, unsorted awake, sleeping sender") {
  auto r = run_mv(4, 2, {3, 1, 4, 2});
  SUBCASE("bad round label") {
    r.result.traces[1].round = 7;
    CHECK(has(r.check(), "malformed_trace"));
  }
  SUBCASE("awake list out of order") {
    std::swap(r.result.traces[0].awake[0], r.result.traces[0].awake[1]);
    CHECK(has(r.check(), "malformed_trace"));
  }
  SUBCASE("send from a player not listed awake") {
    auto& tr = r.result.traces[1];
    tr.awake.erase(std::remove(tr.awake.begin(), tr.awake.end(), 1),
                   tr.awake.end());
    CHECK(has(r.check(), "malformed_trace"));
  }
}

TEST_CASE("conservation: a delivered message vanishes") {
  auto r = run_mv(4, 2, {3, 1, 4, 2});
  r.result.traces[0].delivered.pop_back();
  const auto v = r.check();
  CHECK(has(v, "conservation"));
}

TEST_CASE("termination: missing rounds and mismatched decisions") {
  SUBCASE("trace too short") {
    auto r = run_mv(4, 2, {3, 1, 4, 2});
    r.result.traces.pop_back();
    CHECK(has(r.check(), "termination"));
  }
  SUBCASE("survivor without a decision") {
    auto r = run_mv(4, 2, {3, 1, 4, 2});
    r.result.decisions[2] = std::nullopt;
    CHECK(has(r.check(), "termination"));
  }
  SUBCASE("crashed player with a decision") {
    CrashSchedule schedule;
    schedule.crashes.push_back({1, 2, {}});
    auto r = run_mv(4, 2, {3, 1, 4, 2}, schedule);
    r.result.decisions[2] = 4;
    CHECK(has(r.check(), "termination"));
  }
}

TEST_CASE("agreement: two survivors decide differently") {
  auto r = run_mv(4, 2, {3, 1, 4, 2});
  r.result.decisions[3] = 3;  // an input, so validity stays quiet
  const auto v = r.check();
  CHECK(has(v, "agreement"));
  CHECK_FALSE(has(v, "validity"));
}

TEST_CASE("validity: a decision outside the input set") {
  auto r = run_mv(4, 2, {3, 1, 4, 2});
  for (auto& d : r.result.decisions) d = 6;  // consistent but invented
  const auto v = r.check();
  CHECK(has(v, "validity"));
  CHECK_FALSE(has(v, "agreement"));
}

TEST_CASE("crash_budget: duplicate and excess crashes") {
  CrashSchedule schedule;
  schedule.crashes.push_back({1, 2, {}});
  auto r = run_mv(4, 2, {3, 1, 4, 2}, schedule);
  SUBCASE("same player crashes twice") {
    r.result.traces[1].crashes.push_back(2);
    CHECK(has(r.check(), "crash_budget"));
  }
  SUBCASE("more crashes than f") {
    r.result.traces[1].crashes.push_back(0);
    r.result.traces[2].crashes.push_back(1);
    r.result.decisions[0] = std::nullopt;  // keep termination quiet
    r.result.decisions[1] = std::nullopt;
    CHECK(has(r.check(), "crash_budget"));
  }
}

TEST_CASE("post_crash_silence: the dead walk again") {
  CrashSchedule schedule;
  schedule.crashes.push_back({1, 2, {}});
  auto r = run_mv(4, 2, {3, 1, 4, 2}, schedule);
  SUBCASE("awake after crashing") {
    auto& awake = r.result.traces[2].awake;
    awake.insert(std::lower_bound(awake.begin(), awake.end(), PlayerId{2}), 2);
    CHECK(has(r.check(), "post_crash_silence"));
  }
  SUBCASE("sending after crashing") {
    auto& tr = r.result.traces[2];
    auto& awake = tr.awake;
    awake.insert(std::lower_bound(awake.begin(), awake.end(), PlayerId{2}), 2);
    tr.sent.push_back({2, 0, 3, 4});
    tr.lost.push_back({{2, 0, 3, 4}, LossReason::RecipientAsleep});
    CHECK(has(r.check(), "post_crash_silence"));
  }
}

TEST_CASE("sleep_isolation: delivery to a sleeping player") {
  auto r = run_bin(4, 2, {0, 1, 0, 0});
  // Round 2's awake set is full, so move a delivery to a fabricated sleeper.
  auto& tr = r.result.traces[1];
  tr.awake.erase(std::remove(tr.awake.begin(), tr.awake.end(), 3),
                 tr.awake.end());
  CHECK(has(r.check(), "sleep_isolation"));
}

TEST_CASE("crash_free_oracle: wrong uniform decision without crashes") {
  SUBCASE("multi-value must decide the max") {
    auto r = run_mv(4, 2, {3, 1, 4, 2});
    for (auto& d : r.result.decisions) d = 3;  // valid input, wrong max
    const auto v = r.check();
    CHECK(has(v, "crash_free_oracle"));
    CHECK_FALSE(has(v, "agreement"));
  }
  SUBCASE("binary must decide the OR") {
    auto r = run_bin(4, 2, {0, 1, 0, 0});
    for (auto& d : r.result.decisions) d = 0;
    CHECK(has(r.check(), "crash_free_oracle"));
  }
}

TEST_CASE("energy_cap: forged extra awake rounds exceed the bound") {
  auto r = run_mv(4, 2, {3, 1, 4, 2});
  // Bound is 6; pad the trace with four extra rounds of player 0 awake.
  for (int round = 4; round <= 7; ++round) {
    RoundTrace tr;
    tr.round = round;
    tr.awake = {0};
    r.result.traces.push_back(tr);
  }
  CHECK(has(r.check(), "energy_cap"));
}

TEST_CASE("message caps: too many messages, or the wrong exact count") {
  SUBCASE("multi-value exceeding the closed form") {
    auto r = run_mv(4, 2, {3, 1, 4, 2});
    auto& tr = r.result.traces[0];
    for (int i = 0; i < 3; ++i) {
      tr.sent.push_back({0, 1, 1, 3});
      tr.delivered.push_back({0, 1, 1, 3});
    }
    CHECK(has(r.check(), "message_cap"));
  }
  SUBCASE("multi-value crash-free undershooting the closed form") {
    auto r = run_mv(4, 2, {3, 1, 4, 2});
    erase_sends(r.result.traces[1], 3);
    const auto v = r.check();
    CHECK(has(v, "message_count_exact"));
    CHECK_FALSE(has(v, "message_cap"));
  }
  SUBCASE("binary exceeding 4n^2") {
    auto r = run_bin(2, 1, {1, 0});
    auto& tr = r.result.traces.back();
    for (int i = 0; i < 20; ++i) {
      tr.sent.push_back({0, 1, 2, 1});
      tr.delivered.push_back({0, 1, 2, 1});
    }
    CHECK(has(r.check(), "message_cap"));
  }
}

TEST_CASE("y_monotone: openings, decreases, and underdecided values") {
  SUBCASE("round-1 payload differs from the sender's input") {
    auto r = run_mv(4, 2, {3, 1, 4, 2});
    r.result.traces[0].sent[0].payload = 1;  // player 0's input is 3
    r.result.traces[0].delivered[0].payload = 1;
    CHECK(has(r.check(), "y_monotone"));
  }
  SUBCASE("a later payload decreases") {
    auto r = run_mv(4, 2, {3, 1, 4, 2});
    // Player 2 relayed 4 in round 1; forge its round-2 payload down to 3.
    for (auto* msgs : {&r.result.traces[1].sent, &r.result.traces[1].delivered}) {
      for (auto& m : *msgs) {
        if (m.sender == 2) m.payload = 3;
      }
    }
    CHECK(has(r.check(), "y_monotone"));
  }
  SUBCASE("decision below the last sent value") {
    auto r = run_mv(4, 2, {3, 1, 4, 2});
    r.result.decisions[1] = 1;
    CHECK(has(r.check(), "y_monotone"));
  }
}

TEST_CASE("value_provenance: an invented payload on the wire") {
  auto r = run_mv(4, 2, {3, 1, 4, 2});
  r.result.traces[1].sent[0].payload = 99;
  r.result.traces[1].delivered[0].payload = 99;
  CHECK(has(r.check(), "value_provenance"));
}

TEST_CASE("ones_on_wire: binary payload other than 1") {
  auto r = run_bin(4, 2, {0, 1, 0, 0});
  r.result.traces[0].sent[0].payload = 0;
  r.result.traces[0].delivered[0].payload = 0;
  CHECK(has(r.check(), "ones_on_wire"));
}

TEST_CASE("activation_count: more forwarding bursts than budgets allow") {
  // Synthetic n=16, f=12, k=4 trace: player 0 sends in rounds 2,4,...,12 —
  // six bursts where two activations allow at most two.
  CheckContext ctx{ProtocolKind::Binary, 16, 12, 4,
                   std::vector<Value>(16, 0)};
  std::vector<RoundTrace> traces(13);
  for (int round = 1; round <= 13; ++round) {
    auto& tr = traces[static_cast<std::size_t>(round - 1)];
    tr.round = round;
    tr.awake = {0};
    if (round >= 2 && round <= 12 && round % 2 == 0) {
      tr.sent.push_back({0, 1, round, 1});
      tr.lost.push_back({{0, 1, round, 1}, LossReason::RecipientAsleep});
    }
  }
  const std::vector<std::optional<Value>> decisions(16, Value{0});
  const auto v = check_run(traces, decisions, ctx);
  CHECK(has(v, "activation_count"));
}

TEST_CASE("informed_decision: deciding against the evidence") {
  SUBCASE("heard a 1 but decided 0") {
    auto r = run_bin(4, 2, {0, 1, 0, 0});
    r.result.decisions[0] = 0;
    CHECK(has(r.check(), "informed_decision"));
  }
  SUBCASE("heard nothing, input 0, yet decided 1") {
    auto r = run_bin(4, 2, {0, 0, 0, 0});
    for (auto& d : r.result.decisions) d = 1;
    CHECK(has(r.check(), "informed_decision"));
  }
}

TEST_CASE("informed_broadcast: an informed survivor keeps quiet") {
  auto r = run_bin(4, 2, {0, 1, 0, 0});
  // Player 0 was informed in round 2; erase its final-round broadcast.
  erase_sends(r.result.traces[2], 0);
  CHECK(has(r.check(), "informed_broadcast"));
}

TEST_CASE("p_growth: a 1-decision whose wave never left f players") {
  auto r = run_bin(4, 2, {0, 1, 0, 0});
  // Shrink the recorded wave: drop round 2 entirely and player 1's send to
  // player 2 in round 1; the aimed set collapses to {1} although everyone
  // still decides 1.
  auto& r1 = r.result.traces[0];
  auto keep = [&](const Message& m) { return m.recipient != 2; };
  std::vector<Message> sent, delivered;
  for (const auto& m : r1.sent) {
    if (keep(m)) sent.push_back(m);
  }
  for (const auto& m : r1.delivered) {
    if (keep(m)) delivered.push_back(m);
  }
  r1.sent = sent;
  r1.delivered = delivered;
  auto& r2 = r.result.traces[1];
  r2.sent.clear();
  r2.delivered.clear();
  r2.lost.clear();
  const auto v = r.check();
  CHECK(has(v, "p_growth"));
}

TEST_CASE("the p_growth wave counts addressed players, not deliveries") {
  // One committee member of the 1-wave crashes immediately: the wave still
  // reached f+1 = 3 distinct addressees on the wire, so a clean execution in
  // which everyone decides 1 must stay clean even though one addressee never
  // processed its delivery.
  CrashSchedule schedule;
  schedule.crashes.push_back({1, 2, {}});
  const auto r = run_bin(4, 2, {0, 1, 0, 0}, schedule);
  CHECK(r.check().empty());
}

TEST_CASE("context shape errors are rejected") {
  auto r = run_mv(4, 2, {3, 1, 4, 2});
  CheckContext bad = r.ctx;
  bad.inputs.pop_back();
  CHECK_THROWS_AS(check_run(r.result.traces, r.result.decisions, bad),
                  InvalidConfig);
}
