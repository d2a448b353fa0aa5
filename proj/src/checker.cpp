// Copyright 2026 the sleepsim authors. Licensed under the Apache License,
// Version 2.0. See the LICENSE file at the root of this distribution or at
// http://www.apache.org/licenses/LICENSE-2.0

#include "sleepsim/checker.hpp"

#include <algorithm>
#include <limits>
#include <string>

#include "sleepsim/protocol_binary.hpp"
#include "sleepsim/protocol_multivalue.hpp"

namespace sleepsim {

namespace {

constexpr int kNever = std::numeric_limits<int>::max();

std::string player(PlayerId p) { return "player " + std::to_string(p); }
std::string round_tag(int r) { return "round " + std::to_string(r); }

class Checks {
 public:
  Checks(const std::vector<RoundTrace>& traces,
         const std::vector<std::optional<Value>>& decisions,
         const CheckContext& ctx)
      : traces_(traces), decisions_(decisions), ctx_(ctx),
        horizon_(static_cast<int>(ctx.f) + 1) {}

  std::vector<Violation> run() {
    if (ctx_.n < 1 || ctx_.f >= ctx_.n ||
        ctx_.inputs.size() != ctx_.n || decisions_.size() != ctx_.n) {
      throw InvalidConfig("check_run: inconsistent context shape");
    }
    sorted_inputs_ = ctx_.inputs;
    std::sort(sorted_inputs_.begin(), sorted_inputs_.end());

    check_shape();
    collect_crashes();
    check_structure();
    check_decisions();
    check_energy();
    check_messages();
    if (ctx_.kind == ProtocolKind::MultiValue) {
      check_multivalue();
    } else {
      check_binary();
    }
    return std::move(violations_);
  }

 private:
  void flag(const char* name, std::string detail) {
    violations_.push_back({name, std::move(detail)});
  }

  bool is_input(Value v) const {
    return std::binary_search(sorted_inputs_.begin(), sorted_inputs_.end(), v);
  }

  bool was_awake(std::size_t round_idx, PlayerId p) const {
    const auto& aw = traces_[round_idx].awake;
    return std::binary_search(aw.begin(), aw.end(), p);
  }

  void check_shape() {
    if (static_cast<int>(traces_.size()) != horizon_) {
      flag("termination", "expected " + std::to_string(horizon_) +
                              " rounds, trace has " +
                              std::to_string(traces_.size()));
    }
    for (std::size_t i = 0; i < traces_.size(); ++i) {
      const auto& tr = traces_[i];
      const int expect = static_cast<int>(i) + 1;
      if (tr.round != expect) {
        flag("malformed_trace", round_tag(expect) + " labeled " +
                                    std::to_string(tr.round));
      }
      if (!std::is_sorted(tr.awake.begin(), tr.awake.end()) ||
          std::adjacent_find(tr.awake.begin(), tr.awake.end()) !=
              tr.awake.end()) {
        flag("malformed_trace",
             "awake list not strictly ascending in " + round_tag(expect));
      }
      for (PlayerId p : tr.awake) {
        if (p >= ctx_.n) {
          flag("malformed_trace", player(p) + " awake but outside [0, n)");
        }
      }
      auto check_msg = [&](const Message& m, const char* what) {
        if (m.sender >= ctx_.n || m.recipient >= ctx_.n) {
          flag("malformed_trace", std::string(what) + " message with id "
                                      "outside [0, n) in " + round_tag(expect));
        } else if (m.round != expect) {
          flag("malformed_trace", std::string(what) + " message tagged " +
                                      round_tag(m.round) + " inside " +
                                      round_tag(expect));
        }
      };
      for (const auto& m : tr.sent) {
        check_msg(m, "sent");
        if (m.sender < ctx_.n && !was_awake(i, m.sender)) {
          flag("malformed_trace", player(m.sender) + " sent in " +
                                      round_tag(expect) + " while not awake");
        }
      }
      for (const auto& m : tr.delivered) check_msg(m, "delivered");
      for (const auto& l : tr.lost) check_msg(l.msg, "lost");
    }
  }

  void collect_crashes() {
    crashed_at_.assign(ctx_.n, kNever);
    std::uint64_t total = 0;
    for (const auto& tr : traces_) {
      for (PlayerId p : tr.crashes) {
        ++total;
        if (p >= ctx_.n) {
          flag("malformed_trace", "crash of " + player(p) + " outside [0, n)");
          continue;
        }
        if (crashed_at_[p] != kNever) {
          flag("crash_budget", player(p) + " crashes more than once");
        } else {
          crashed_at_[p] = tr.round;
        }
      }
    }
    if (total > ctx_.f) {
      flag("crash_budget", std::to_string(total) + " crashes exceed f=" +
                               std::to_string(ctx_.f));
    }
    any_crash_ = total > 0;
  }

  void check_structure() {
    for (std::size_t i = 0; i < traces_.size(); ++i) {
      const auto& tr = traces_[i];
      const int r = static_cast<int>(i) + 1;
      if (tr.sent.size() != tr.delivered.size() + tr.lost.size()) {
        flag("conservation",
             round_tag(r) + ": " + std::to_string(tr.sent.size()) +
                 " sent != " + std::to_string(tr.delivered.size()) +
                 " delivered + " + std::to_string(tr.lost.size()) + " lost");
      }
      for (const auto& m : tr.delivered) {
        if (m.recipient < ctx_.n && !was_awake(i, m.recipient)) {
          flag("sleep_isolation", round_tag(r) + ": delivery to sleeping " +
                                      player(m.recipient));
        }
      }
      for (PlayerId p : tr.awake) {
        if (p < ctx_.n && crashed_at_[p] < r) {
          flag("post_crash_silence", player(p) + " awake in " + round_tag(r) +
                                         " after crashing in " +
                                         round_tag(crashed_at_[p]));
        }
      }
      for (const auto& m : tr.sent) {
        if (m.sender < ctx_.n && crashed_at_[m.sender] < r) {
          flag("post_crash_silence", player(m.sender) + " sent in " +
                                         round_tag(r) + " after crashing in " +
                                         round_tag(crashed_at_[m.sender]));
        }
      }
    }
  }

  void check_decisions() {
    std::optional<Value> first;
    PlayerId first_p = 0;
    for (PlayerId p = 0; p < ctx_.n; ++p) {
      const bool crashed = crashed_at_[p] != kNever;
      const bool decided = decisions_[p].has_value();
      if (crashed && decided) {
        flag("termination", player(p) + " decided despite crashing in " +
                                round_tag(crashed_at_[p]));
      }
      if (!crashed && !decided) {
        flag("termination", player(p) + " never crashed yet has no decision");
      }
      if (!decided) continue;
      const Value v = *decisions_[p];
      if (!is_input(v)) {
        flag("validity", player(p) + " decided " + std::to_string(v) +
                             ", which is no player's input");
      }
      if (!first) {
        first = v;
        first_p = p;
      } else if (*first != v) {
        flag("agreement", player(first_p) + " decided " +
                              std::to_string(*first) + " but " + player(p) +
                              " decided " + std::to_string(v));
      }
    }
    if (!any_crash_) {
      Value expect = 0;
      if (ctx_.kind == ProtocolKind::MultiValue) {
        expect = *std::max_element(ctx_.inputs.begin(), ctx_.inputs.end());
      } else {
        for (Value v : ctx_.inputs) expect |= (v != 0 ? 1 : 0);
      }
      for (PlayerId p = 0; p < ctx_.n; ++p) {
        if (decisions_[p] && *decisions_[p] != expect) {
          flag("crash_free_oracle",
               "crash-free run: " + player(p) + " decided " +
                   std::to_string(*decisions_[p]) + ", expected " +
                   std::to_string(expect));
        }
      }
    }
  }

  void check_energy() {
    std::vector<std::uint32_t> awake(ctx_.n, 0);
    for (const auto& tr : traces_) {
      for (PlayerId p : tr.awake) {
        if (p < ctx_.n) ++awake[p];
      }
    }
    const std::uint64_t bound =
        ctx_.kind == ProtocolKind::MultiValue
            ? MultiValueConsensus::energy_bound(ctx_.n, ctx_.f)
            : BinaryConsensus::energy_bound_k(ctx_.n, ctx_.f, committee_size());
    for (PlayerId p = 0; p < ctx_.n; ++p) {
      if (awake[p] > bound) {
        flag("energy_cap", player(p) + " awake " + std::to_string(awake[p]) +
                               " rounds, cap " + std::to_string(bound));
      }
    }
  }

  void check_messages() {
    std::uint64_t total = 0;
    for (const auto& tr : traces_) total += tr.sent.size();
    if (ctx_.kind == ProtocolKind::MultiValue) {
      const std::uint64_t exact =
          MultiValueConsensus::message_bound(ctx_.n, ctx_.f);
      if (total > exact) {
        flag("message_cap", std::to_string(total) + " messages sent, cap " +
                                std::to_string(exact));
      } else if (!any_crash_ && total != exact) {
        flag("message_count_exact",
             "crash-free run sent " + std::to_string(total) + " messages, "
             "closed form says " + std::to_string(exact));
      }
    } else {
      const std::uint64_t cap = BinaryConsensus::message_bound(ctx_.n);
      if (total > cap) {
        flag("message_cap", std::to_string(total) + " messages sent, cap " +
                                std::to_string(cap));
      }
    }
  }

  void check_multivalue() {
    std::vector<Value> last_sent(ctx_.n, 0);
    std::vector<char> sent_any(ctx_.n, 0);
    for (std::size_t i = 0; i < traces_.size(); ++i) {
      const int r = static_cast<int>(i) + 1;
      for (const auto& m : traces_[i].sent) {
        if (m.sender >= ctx_.n) continue;
        if (!is_input(m.payload)) {
          flag("value_provenance", player(m.sender) + " sent " +
                                       std::to_string(m.payload) + " in " +
                                       round_tag(r) +
                                       ", which is no player's input");
        }
        if (r == 1 && m.payload != ctx_.inputs[m.sender]) {
          flag("y_monotone", player(m.sender) + " opened with " +
                                 std::to_string(m.payload) +
                                 " instead of its input " +
                                 std::to_string(ctx_.inputs[m.sender]));
        }
        if (sent_any[m.sender] && m.payload < last_sent[m.sender]) {
          flag("y_monotone", player(m.sender) + " sent " +
                                 std::to_string(m.payload) + " in " +
                                 round_tag(r) + " after sending " +
                                 std::to_string(last_sent[m.sender]));
        }
        last_sent[m.sender] = m.payload;
        sent_any[m.sender] = 1;
      }
    }
    for (PlayerId p = 0; p < ctx_.n; ++p) {
      if (decisions_[p] && sent_any[p] && *decisions_[p] < last_sent[p]) {
        flag("y_monotone", player(p) + " decided " +
                               std::to_string(*decisions_[p]) +
                               " below its last sent value " +
                               std::to_string(last_sent[p]));
      }
    }
  }

  std::uint32_t committee_size() const {
    return ctx_.k == 0 ? ceil_sqrt(ctx_.n) : ctx_.k;
  }

  void check_binary() {
    for (std::size_t i = 0; i < traces_.size(); ++i) {
      for (const auto& m : traces_[i].sent) {
        if (m.payload != 1) {
          flag("ones_on_wire", player(m.sender) + " sent payload " +
                                   std::to_string(m.payload) + " in " +
                                   round_tag(static_cast<int>(i) + 1));
        }
      }
    }

    // Forwarding bursts: rounds in [2, f] where a player sends. A player
    // arms a budget of span rounds at most twice (input 1, plus one
    // activation on first hearing a 1), so: at most 2 bursts, at most
    // 2 * span sending rounds.
    const std::uint32_t span =
        static_cast<std::uint32_t>(ceil_div(ctx_.f + 1ULL, committee_size()));
    std::vector<std::vector<char>> sent_in(
        ctx_.n, std::vector<char>(traces_.size() + 1, 0));
    for (std::size_t i = 0; i < traces_.size(); ++i) {
      for (const auto& m : traces_[i].sent) {
        if (m.sender < ctx_.n) sent_in[m.sender][i + 1] = 1;
      }
    }
    for (PlayerId p = 0; p < ctx_.n; ++p) {
      std::uint32_t bursts = 0;
      std::uint32_t total = 0;
      bool in_burst = false;
      for (int r = 2; r <= static_cast<int>(ctx_.f) &&
                      r <= static_cast<int>(traces_.size());
           ++r) {
        if (sent_in[p][static_cast<std::size_t>(r)]) {
          ++total;
          if (!in_burst) {
            ++bursts;
            in_burst = true;
          }
        } else {
          in_burst = false;
        }
      }
      if (bursts > 2 || total > 2 * span) {
        flag("activation_count",
             player(p) + " forwarded in " + std::to_string(total) +
                 " rounds across " + std::to_string(bursts) +
                 " bursts (caps: " + std::to_string(2 * span) + ", 2)");
      }
    }

    // What each player actually processed: a delivery in the crash round is
    // received but never acted on.
    std::vector<char> heard_early(ctx_.n, 0); // processed a 1 in rounds <= f
    std::vector<char> heard_final(ctx_.n, 0); // got a 1 in round f+1
    for (std::size_t i = 0; i < traces_.size(); ++i) {
      const int r = static_cast<int>(i) + 1;
      for (const auto& m : traces_[i].delivered) {
        if (m.recipient >= ctx_.n || m.payload != 1) continue;
        if (crashed_at_[m.recipient] <= r) continue;
        if (r <= static_cast<int>(ctx_.f)) {
          heard_early[m.recipient] = 1;
        } else {
          heard_final[m.recipient] = 1;
        }
      }
    }

    for (PlayerId p = 0; p < ctx_.n; ++p) {
      const bool input_one = ctx_.inputs[p] != 0;
      if (decisions_[p]) {
        const Value expect =
            (heard_early[p] || heard_final[p] || input_one) ? 1 : 0;
        if (*decisions_[p] != expect) {
          flag("informed_decision",
               player(p) + " decided " + std::to_string(*decisions_[p]) +
                   " but its inbox history implies " + std::to_string(expect));
        }
      }
      // Anyone alive entering round f+1 that is informed must broadcast.
      if (crashed_at_[p] >= horizon_ && (heard_early[p] || input_one) &&
          traces_.size() == static_cast<std::size_t>(horizon_)) {
        const auto& final_tr = traces_.back();
        const bool sent_final =
            std::any_of(final_tr.sent.begin(), final_tr.sent.end(),
                        [&](const Message& m) { return m.sender == p; });
        if (!sent_final) {
          flag("informed_broadcast",
               player(p) + " was informed by round " +
                   std::to_string(ctx_.f) + " but sent nothing in round " +
                   std::to_string(horizon_));
        }
      }
    }

    check_informed_growth();
  }

  // With mixed inputs, a decision of 1 requires the tracked set of players
  // the 1-wave was aimed at to outgrow the crash budget: P_1 = {largest-id
  // input-1 player}, P_{r+1} = P_r plus everyone a 1-valued message was
  // addressed to in round r (delivered or not — a masked or wasted send still
  // counts as aimed). Counting only deliveries would make the flag fire on
  // correct runs, e.g. a single early crash of an input-0 committee member
  // keeps it out of a delivery-based set while everyone still decides 1.
  void check_informed_growth() {
    bool any_one = false;
    bool any_zero = false;
    for (Value v : ctx_.inputs) ((v != 0) ? any_one : any_zero) = true;
    if (!any_one || !any_zero) return;

    std::vector<char> aimed(ctx_.n, 0);
    for (PlayerId p = ctx_.n; p-- > 0;) {
      if (ctx_.inputs[p] != 0) {
        aimed[p] = 1;
        break;
      }
    }
    for (std::size_t i = 0;
         i < traces_.size() && i < static_cast<std::size_t>(ctx_.f); ++i) {
      for (const auto& m : traces_[i].sent) {
        if (m.payload == 1 && m.recipient < ctx_.n) aimed[m.recipient] = 1;
      }
    }
    std::uint64_t size = 0;
    for (char c : aimed) size += c;

    const bool decided_one =
        std::any_of(decisions_.begin(), decisions_.end(),
                    [](const std::optional<Value>& d) { return d && *d == 1; });
    if (decided_one && size <= ctx_.f) {
      flag("p_growth", "a player decided 1 yet the 1-wave only ever targeted " +
                           std::to_string(size) + " <= f players");
    }
  }

  const std::vector<RoundTrace>& traces_;
  const std::vector<std::optional<Value>>& decisions_;
  const CheckContext& ctx_;
  const int horizon_;
  std::vector<Value> sorted_inputs_;
  std::vector<int> crashed_at_;
  bool any_crash_ = false;
  std::vector<Violation> violations_;
};

} // namespace

std::vector<Violation> check_run(
    const std::vector<RoundTrace>& traces,
    const std::vector<std::optional<Value>>& decisions,
    const CheckContext& ctx) {
  return Checks(traces, decisions, ctx).run();
}

} // namespace sleepsim
