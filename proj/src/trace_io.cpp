// Copyright 2026 the sleepsim authors. Licensed under the Apache License,
// Version 2.0. See the LICENSE file at the root of this distribution or at
// http://www.apache.org/licenses/LICENSE-2.0

#include "sleepsim/trace_io.hpp"

#include <fstream>
#include <ostream>
#include <sstream>

#include <json.hpp>

namespace sleepsim {

namespace {

using nlohmann::json;

json messages_to_json(const std::vector<Message>& msgs) {
  json arr = json::array();
  for (const auto& m : msgs) {
    arr.push_back(json::array({m.sender, m.recipient, m.payload}));
  }
  return arr;
}

json lost_to_json(const std::vector<LostMessage>& msgs) {
  json arr = json::array();
  for (const auto& l : msgs) {
    arr.push_back(json::array(
        {l.msg.sender, l.msg.recipient, l.msg.payload, to_string(l.reason)}));
  }
  return arr;
}

Message message_from_json(const json& j, int round) {
  if (!j.is_array() || j.size() < 3) {
    throw IoFailure("trace: message must be [sender, recipient, payload]");
  }
  Message m;
  m.sender = j.at(0).get<PlayerId>();
  m.recipient = j.at(1).get<PlayerId>();
  m.payload = j.at(2).get<Value>();
  m.round = round;
  return m;
}

double mean_awake(const RunMetrics& m) {
  if (m.awake_rounds.empty()) return 0.0;
  double sum = 0;
  for (auto w : m.awake_rounds) sum += w;
  return sum / static_cast<double>(m.awake_rounds.size());
}

json parse_line(const std::string& line, std::uint64_t lineno) {
  json j = json::parse(line, nullptr, false);
  if (j.is_discarded() || !j.is_object()) {
    throw IoFailure("trace line " + std::to_string(lineno) +
                    ": not a JSON object");
  }
  return j;
}

} // namespace

CheckContext TrialRecord::check_context() const {
  CheckContext ctx;
  ctx.kind = kind;
  ctx.n = n;
  ctx.f = f;
  ctx.k = kind == ProtocolKind::Binary ? k : 0;
  ctx.inputs = inputs;
  return ctx;
}

void write_trial_jsonl(std::ostream& out, const TrialRecord& record) {
  json header;
  header["trial"] = record.trial;
  header["protocol"] = to_string(record.kind);
  header["n"] = record.n;
  header["f"] = record.f;
  header["k"] = record.k;
  header["inputs"] = record.inputs;
  header["adversary"] = record.adversary;
  json sched = json::array();
  for (const auto& c : record.schedule.crashes) {
    sched.push_back(json::array({c.round, c.victim, c.delivery_mask}));
  }
  header["schedule"] = std::move(sched);
  out << header.dump() << '\n';

  for (const auto& tr : record.traces) {
    json round;
    round["round"] = tr.round;
    round["awake"] = tr.awake;
    round["sent"] = messages_to_json(tr.sent);
    round["delivered"] = messages_to_json(tr.delivered);
    round["lost"] = lost_to_json(tr.lost);
    round["crashes"] = tr.crashes;
    out << round.dump() << '\n';
  }

  json result;
  json decisions = json::array();
  for (const auto& d : record.decisions) {
    if (d) {
      decisions.push_back(*d);
    } else {
      decisions.push_back(nullptr);
    }
  }
  result["decisions"] = std::move(decisions);
  result["max_awake"] = record.metrics.max_awake;
  result["mean_awake"] = mean_awake(record.metrics);
  result["messages"] = record.metrics.total_messages;
  result["rounds"] = record.metrics.rounds;
  json viols = json::array();
  for (const auto& v : record.violations) {
    viols.push_back({{"name", v.name}, {"detail", v.detail}});
  }
  result["violations"] = std::move(viols);
  out << result.dump() << '\n';
  if (!out) throw IoFailure("trace stream write failed");
}

std::vector<TrialRecord> read_trials_jsonl(std::istream& in) {
  std::vector<TrialRecord> records;
  TrialRecord current;
  bool open = false;
  std::string line;
  std::uint64_t lineno = 0;

  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    const json j = parse_line(line, lineno);

    if (j.contains("protocol")) {
      if (open) {
        throw IoFailure("trace line " + std::to_string(lineno) +
                        ": new header before previous trial's result");
      }
      current = TrialRecord{};
      current.trial = j.at("trial").get<std::uint64_t>();
      current.kind = protocol_kind_from_string(j.at("protocol").get<std::string>());
      current.n = j.at("n").get<std::uint32_t>();
      current.f = j.at("f").get<std::uint32_t>();
      current.k = j.at("k").get<std::uint32_t>();
      current.inputs = j.at("inputs").get<std::vector<Value>>();
      current.adversary = j.at("adversary").get<std::string>();
      for (const auto& cj : j.at("schedule")) {
        if (!cj.is_array() || cj.size() != 3) {
          throw IoFailure("trace line " + std::to_string(lineno) +
                          ": schedule entry must be [round, victim, [mask]]");
        }
        Crash c;
        c.round = cj.at(0).get<int>();
        c.victim = cj.at(1).get<PlayerId>();
        c.delivery_mask = cj.at(2).get<std::vector<PlayerId>>();
        current.schedule.crashes.push_back(std::move(c));
      }
      open = true;
    } else if (j.contains("round")) {
      if (!open) {
        throw IoFailure("trace line " + std::to_string(lineno) +
                        ": round object outside any trial");
      }
      RoundTrace tr;
      tr.round = j.at("round").get<int>();
      tr.awake = j.at("awake").get<std::vector<PlayerId>>();
      for (const auto& mj : j.at("sent")) {
        tr.sent.push_back(message_from_json(mj, tr.round));
      }
      for (const auto& mj : j.at("delivered")) {
        tr.delivered.push_back(message_from_json(mj, tr.round));
      }
      for (const auto& lj : j.at("lost")) {
        if (!lj.is_array() || lj.size() != 4) {
          throw IoFailure("trace line " + std::to_string(lineno) +
                          ": lost entry must be [s, r, p, reason]");
        }
        LostMessage l;
        l.msg = message_from_json(lj, tr.round);
        l.reason = loss_reason_from_string(lj.at(3).get<std::string>());
        tr.lost.push_back(std::move(l));
      }
      tr.crashes = j.at("crashes").get<std::vector<PlayerId>>();
      current.traces.push_back(std::move(tr));
    } else if (j.contains("decisions")) {
      if (!open) {
        throw IoFailure("trace line " + std::to_string(lineno) +
                        ": result object outside any trial");
      }
      for (const auto& dj : j.at("decisions")) {
        if (dj.is_null()) {
          current.decisions.push_back(std::nullopt);
        } else {
          current.decisions.push_back(dj.get<Value>());
        }
      }
      current.metrics.max_awake = j.at("max_awake").get<std::uint32_t>();
      current.metrics.total_messages = j.at("messages").get<std::uint64_t>();
      current.metrics.rounds = j.at("rounds").get<int>();
      current.metrics.awake_rounds.assign(current.n, 0);
      for (const auto& tr : current.traces) {
        for (PlayerId p : tr.awake) {
          if (p < current.n) ++current.metrics.awake_rounds[p];
        }
      }
      for (const auto& vj : j.at("violations")) {
        current.violations.push_back({vj.at("name").get<std::string>(),
                                      vj.at("detail").get<std::string>()});
      }
      records.push_back(std::move(current));
      current = TrialRecord{};
      open = false;
    } else {
      throw IoFailure("trace line " + std::to_string(lineno) +
                      ": object is neither header, round, nor result");
    }
  }
  if (open) throw IoFailure("trace ends mid-trial (missing result line)");
  return records;
}

std::vector<TrialRecord> load_trials_jsonl(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoFailure("cannot open trace file: " + path);
  return read_trials_jsonl(in);
}

std::string metrics_csv_header() {
  return "trial,n,f,k,protocol,adversary,max_awake,mean_awake,messages,rounds,"
         "decision_agree,decision_value,violations";
}

std::string metrics_csv_row(const TrialRecord& r) {
  bool agree = true;
  std::optional<Value> common;
  for (const auto& d : r.decisions) {
    if (!d) continue;
    if (!common) {
      common = *d;
    } else if (*common != *d) {
      agree = false;
    }
  }
  std::ostringstream row;
  row << r.trial << ',' << r.n << ',' << r.f << ',' << r.k << ','
      << to_string(r.kind) << ',' << r.adversary << ','
      << r.metrics.max_awake << ',' << mean_awake(r.metrics) << ','
      << r.metrics.total_messages << ',' << r.metrics.rounds << ','
      << (agree ? 1 : 0) << ',';
  if (agree && common) row << *common;
  row << ',' << r.violations.size();
  return row.str();
}

} // namespace sleepsim
