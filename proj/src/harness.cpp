// Copyright 2026 the sleepsim authors. Licensed under the Apache License,
// Version 2.0. See the LICENSE file at the root of this distribution or at
// http://www.apache.org/licenses/LICENSE-2.0

#include "sleepsim/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cctype>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "sleepsim/engine.hpp"
#include "sleepsim/protocol_binary.hpp"
#include "sleepsim/protocol_multivalue.hpp"

namespace sleepsim {

namespace {

using nlohmann::json;

bool all_digits(const std::string& s) {
  return !s.empty() &&
         std::all_of(s.begin(), s.end(),
                     [](unsigned char c) { return std::isdigit(c); });
}

std::uint64_t parse_u64(const std::string& s, const std::string& what) {
  if (!all_digits(s)) {
    throw InvalidConfig(what + ": expected a non-negative integer, got '" +
                        s + "'");
  }
  return std::stoull(s);
}

std::vector<Value> parse_value_list(const std::string& s) {
  std::vector<Value> values;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    values.push_back(parse_u64(item, "input list entry"));
  }
  if (values.empty()) throw InvalidConfig("input list is empty");
  return values;
}

bool decisions_agree(const std::vector<std::optional<Value>>& decisions) {
  std::optional<Value> common;
  for (const auto& d : decisions) {
    if (!d) continue;
    if (!common) {
      common = *d;
    } else if (*common != *d) {
      return false;
    }
  }
  return true;
}

// Adapts a pre-materialized schedule list to the stream interface.
class FixedSchedules : public ScheduleStream {
 public:
  explicit FixedSchedules(std::vector<CrashSchedule> schedules)
      : schedules_(std::move(schedules)) {}

  std::optional<CrashSchedule> next() override {
    if (cursor_ >= schedules_.size()) return std::nullopt;
    return schedules_[cursor_++];
  }

 private:
  std::vector<CrashSchedule> schedules_;
  std::size_t cursor_ = 0;
};

std::uint32_t committee_size_in_force(ProtocolKind kind, std::uint32_t n,
                                      std::uint32_t f, std::uint32_t k) {
  if (kind == ProtocolKind::MultiValue) return f >= 1 ? f + 1 : 0;
  return k == 0 ? ceil_sqrt(n) : k;
}

std::unique_ptr<ScheduleStream> make_stream(const ExperimentConfig& config) {
  const auto& adv = config.adversary;
  switch (adv.mode) {
    case AdversaryMode::None:
      if (config.trials < 1) {
        throw InvalidConfig("trials must be >= 1");
      }
      return std::make_unique<CrashFreeSchedules>(config.trials);
    case AdversaryMode::Random:
      return std::make_unique<RandomSchedules>(config.n, config.f, adv.seed,
                                               adv.count);
    case AdversaryMode::Chain:
      return std::make_unique<ChainCutterSchedules>(config.n, config.f,
                                                    config.kind, config.k);
    case AdversaryMode::Exhaustive: {
      if (!config.inputs.trial_invariant()) {
        throw InvalidConfig(
            "exhaustive adversary needs a fixed input vector; '" +
            config.inputs.describe() + "' varies per trial");
      }
      const auto inputs = config.inputs.materialize(config.n, config.kind, 0);
      auto simulate = [kind = config.kind, n = config.n, f = config.f,
                       k = config.k, inputs](const CrashSchedule& schedule) {
        auto record =
            simulate_trial(kind, n, f, k, inputs, schedule, /*check=*/false);
        return std::move(record.traces);
      };
      ExhaustiveCaps caps;
      caps.budget = adv.budget;
      return std::make_unique<ExhaustiveSchedules>(
          std::move(simulate), config.n, config.f,
          static_cast<int>(config.f) + 1, caps);
    }
    case AdversaryMode::File: {
      auto schedule = load_schedule(adv.path);
      schedule.validate(config.n, config.f);
      return std::make_unique<FixedSchedules>(
          std::vector<CrashSchedule>{std::move(schedule)});
    }
  }
  throw InvalidConfig("unknown adversary mode");
}

json summary_json(const ExperimentConfig& config,
                  const ExperimentResult& result) {
  json j;
  j["protocol"] = to_string(config.kind);
  j["n"] = config.n;
  j["f"] = config.f;
  const std::uint32_t k =
      committee_size_in_force(config.kind, config.n, config.f, config.k);
  j["k"] = k;
  j["inputs"] = config.inputs.describe();
  j["adversary"] = config.adversary.describe();
  j["trials"] = result.trials;
  j["rounds"] = config.f + 1;
  j["energy_bound"] =
      config.kind == ProtocolKind::MultiValue
          ? MultiValueConsensus::energy_bound(config.n, config.f)
          : BinaryConsensus::energy_bound_k(config.n, config.f, k);
  j["message_bound"] =
      config.kind == ProtocolKind::MultiValue
          ? MultiValueConsensus::message_bound(config.n, config.f)
          : BinaryConsensus::message_bound(config.n);
  j["max_awake"] = result.max_awake;
  j["mean_awake"] = result.mean_awake;
  j["max_messages"] = result.max_messages;
  j["min_messages"] = result.min_messages;
  j["violations_total"] = result.violations_total;
  json by_name = json::object();
  for (const auto& [name, count] : result.violations_by_name) {
    by_name[name] = count;
  }
  j["violations_by_name"] = std::move(by_name);
  j["all_agree"] = result.all_agree;

  if (config.f >= 1) {
    const auto table = join_committees(
        config.n, config.f,
        config.kind == ProtocolKind::MultiValue ? config.f + 1 : k);
    json cj;
    cj["count"] = table.count();
    cj["size"] = table.size();
    cj["max_memberships"] = table.max_memberships();
    const std::uint32_t gap = table.min_membership_gap();
    const bool has_gap = gap != std::numeric_limits<std::uint32_t>::max();
    cj["min_gap"] = has_gap ? json(gap) : json(nullptr);
    if (config.kind == ProtocolKind::Binary) {
      // The relay analysis wants consecutive memberships spaced by at least
      // the committee size; the round-robin assignment only guarantees
      // floor(n/k). Report whether this run's parameters actually meet the
      // stronger requirement.
      cj["required_gap"] = k;
      cj["gap_ok"] = !has_gap || gap >= k;
    }
    j["committee"] = std::move(cj);
  }
  return j;
}

} // namespace

InputSpec InputSpec::parse(const std::string& text) {
  InputSpec spec;
  if (text == "all0") {
    spec.mode = InputMode::AllZero;
  } else if (text == "all1") {
    spec.mode = InputMode::AllOne;
  } else if (text == "onehot:all") {
    spec.mode = InputMode::OneHotAll;
  } else if (text.rfind("onehot:", 0) == 0) {
    spec.mode = InputMode::OneHot;
    spec.hot = static_cast<PlayerId>(
        parse_u64(text.substr(7), "onehot player id"));
  } else if (text.rfind("rand:", 0) == 0) {
    spec.mode = InputMode::Random;
    spec.seed = parse_u64(text.substr(5), "input seed");
  } else if (text.rfind("list:", 0) == 0) {
    spec.mode = InputMode::Explicit;
    spec.values = parse_value_list(text.substr(5));
  } else if (text.find(',') != std::string::npos || all_digits(text)) {
    spec.mode = InputMode::Explicit;
    spec.values = parse_value_list(text);
  } else {
    throw InvalidConfig(
        "unrecognized input spec '" + text +
        "' (expected all0|all1|onehot:I|onehot:all|rand:SEED|list:v0,v1,...)");
  }
  return spec;
}

std::string InputSpec::describe() const {
  switch (mode) {
    case InputMode::Explicit: return "list";
    case InputMode::AllZero: return "all0";
    case InputMode::AllOne: return "all1";
    case InputMode::OneHot: return "onehot:" + std::to_string(hot);
    case InputMode::OneHotAll: return "onehot:all";
    case InputMode::Random: return "rand:" + std::to_string(seed);
  }
  return "unknown";
}

std::vector<Value> InputSpec::materialize(std::uint32_t n, ProtocolKind kind,
                                          std::uint64_t trial) const {
  switch (mode) {
    case InputMode::Explicit:
      if (values.size() != n) {
        throw InvalidConfig("explicit input list has " +
                            std::to_string(values.size()) +
                            " entries, expected n=" + std::to_string(n));
      }
      return values;
    case InputMode::AllZero:
      return std::vector<Value>(n, 0);
    case InputMode::AllOne:
      return std::vector<Value>(n, 1);
    case InputMode::OneHot: {
      if (hot >= n) {
        throw InvalidConfig("onehot player " + std::to_string(hot) +
                            " outside [0, n)");
      }
      std::vector<Value> v(n, 0);
      v[hot] = 1;
      return v;
    }
    case InputMode::OneHotAll: {
      std::vector<Value> v(n, 0);
      v[static_cast<PlayerId>(trial % n)] = 1;
      return v;
    }
    case InputMode::Random: {
      std::mt19937_64 rng(mix_seed(seed ^ 0x5eed1092u, trial));
      std::vector<Value> v(n);
      for (auto& x : v) {
        x = kind == ProtocolKind::Binary
                ? (rng() & 1ULL)
                : bounded_uniform(rng, 2ULL * n + 1);
      }
      return v;
    }
  }
  throw InvalidConfig("unknown input mode");
}

AdversarySpec AdversarySpec::parse(const std::string& text) {
  AdversarySpec spec;
  if (text == "none") {
    spec.mode = AdversaryMode::None;
  } else if (text == "chain") {
    spec.mode = AdversaryMode::Chain;
  } else if (text == "exhaustive") {
    spec.mode = AdversaryMode::Exhaustive;
  } else if (text.rfind("exhaustive:", 0) == 0) {
    spec.mode = AdversaryMode::Exhaustive;
    spec.budget = parse_u64(text.substr(11), "exhaustive budget");
    if (spec.budget < 1) throw InvalidConfig("exhaustive budget must be >= 1");
  } else if (text.rfind("rand:", 0) == 0) {
    spec.mode = AdversaryMode::Random;
    const auto rest = text.substr(5);
    const auto sep = rest.find(':');
    if (sep == std::string::npos) {
      throw InvalidConfig("random adversary needs rand:SEED:COUNT, got '" +
                          text + "'");
    }
    spec.seed = parse_u64(rest.substr(0, sep), "adversary seed");
    spec.count = parse_u64(rest.substr(sep + 1), "adversary schedule count");
  } else if (text.rfind("file:", 0) == 0) {
    spec.mode = AdversaryMode::File;
    spec.path = text.substr(5);
    if (spec.path.empty()) throw InvalidConfig("file adversary needs a path");
  } else {
    throw InvalidConfig(
        "unrecognized adversary spec '" + text +
        "' (expected none|rand:SEED:COUNT|chain|exhaustive[:BUDGET]|file:PATH)");
  }
  return spec;
}

std::string AdversarySpec::describe() const {
  switch (mode) {
    case AdversaryMode::None: return "none";
    case AdversaryMode::Random: return "rand:" + std::to_string(seed);
    case AdversaryMode::Chain: return "chain";
    case AdversaryMode::Exhaustive: return "exhaustive";
    case AdversaryMode::File: return "file";
  }
  return "unknown";
}

TrialRecord simulate_trial(ProtocolKind kind, std::uint32_t n, std::uint32_t f,
                           std::uint32_t k, const std::vector<Value>& inputs,
                           const CrashSchedule& schedule, bool check,
                           std::uint64_t trial, const std::string& adversary) {
  TrialRecord record;
  record.trial = trial;
  record.kind = kind;
  record.n = n;
  record.f = f;
  record.k = committee_size_in_force(kind, n, f, k);
  record.adversary = adversary;
  record.inputs = inputs;
  record.schedule = schedule;

  RunResult result;
  if (kind == ProtocolKind::MultiValue) {
    MultiValueConsensus protocol(n, f, inputs);
    result = run(protocol, n, f, schedule);
  } else {
    BinaryConsensus protocol(n, f, inputs, k);
    result = run(protocol, n, f, schedule);
  }
  record.traces = std::move(result.traces);
  record.decisions = std::move(result.decisions);
  record.metrics = std::move(result.metrics);
  if (check) {
    record.violations =
        check_run(record.traces, record.decisions, record.check_context());
  }
  return record;
}

unsigned resolve_jobs(unsigned requested) {
  if (requested >= 1) return requested;
  if (const char* env = std::getenv("SLEEPSIM_JOBS")) {
    const std::string s(env);
    if (all_digits(s)) {
      const auto v = std::stoul(s);
      if (v >= 1) return static_cast<unsigned>(v);
    }
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw >= 1 ? hw : 1;
}

ExperimentResult run_experiment(const ExperimentConfig& config,
                                const ExperimentSinks& sinks) {
  if (config.n < 1) throw InvalidConfig("n must be >= 1");
  if (config.f >= config.n) {
    throw InvalidConfig("need f < n; got f=" + std::to_string(config.f) +
                        ", n=" + std::to_string(config.n));
  }
  if (config.kind == ProtocolKind::Binary && config.k != 0 &&
      (config.k < 1 || config.k > config.n)) {
    throw InvalidConfig("committee size k must be in [1, n]");
  }

  const unsigned jobs = resolve_jobs(config.jobs);

  std::ofstream trace_file;
  std::ostream* trace = sinks.trace;
  if (!trace && !config.trace_path.empty()) {
    trace_file.open(config.trace_path);
    if (!trace_file) {
      throw IoFailure("cannot open trace output: " + config.trace_path);
    }
    trace = &trace_file;
  }
  std::ofstream metrics_file;
  std::ostream* metrics = sinks.metrics;
  if (!metrics && !config.metrics_path.empty()) {
    metrics_file.open(config.metrics_path);
    if (!metrics_file) {
      throw IoFailure("cannot open metrics output: " + config.metrics_path);
    }
    metrics = &metrics_file;
  }
  if (metrics) *metrics << metrics_csv_header() << '\n';

  auto stream = make_stream(config);
  const std::string adversary = config.adversary.describe();

  ExperimentResult result;
  double mean_sum = 0.0;
  result.min_messages = std::numeric_limits<std::uint64_t>::max();

  const std::size_t batch_target =
      jobs == 1 ? 1 : static_cast<std::size_t>(jobs) * 32;
  std::vector<CrashSchedule> batch;
  std::vector<TrialRecord> records;
  bool exhausted = false;

  while (!exhausted) {
    batch.clear();
    while (batch.size() < batch_target) {
      auto s = stream->next();
      if (!s) {
        exhausted = true;
        break;
      }
      batch.push_back(std::move(*s));
    }
    if (batch.empty()) break;

    const std::uint64_t base = result.trials;
    records.assign(batch.size(), TrialRecord{});
    auto run_one = [&](std::size_t i) {
      const std::uint64_t trial = base + i;
      const auto inputs =
          config.inputs.materialize(config.n, config.kind, trial);
      records[i] = simulate_trial(config.kind, config.n, config.f, config.k,
                                  inputs, batch[i], config.check, trial,
                                  adversary);
    };

    if (jobs == 1 || batch.size() == 1) {
      for (std::size_t i = 0; i < batch.size(); ++i) run_one(i);
    } else {
      std::atomic<std::size_t> cursor{0};
      std::vector<std::exception_ptr> errors(jobs);
      std::vector<std::thread> workers;
      workers.reserve(jobs);
      for (unsigned w = 0; w < jobs; ++w) {
        workers.emplace_back([&, w] {
          try {
            for (;;) {
              const std::size_t i = cursor.fetch_add(1);
              if (i >= records.size()) return;
              run_one(i);
            }
          } catch (...) {
            errors[w] = std::current_exception();
          }
        });
      }
      for (auto& t : workers) t.join();
      for (const auto& e : errors) {
        if (e) std::rethrow_exception(e);
      }
    }

    for (auto& record : records) {
      if (trace) write_trial_jsonl(*trace, record);
      if (metrics) *metrics << metrics_csv_row(record) << '\n';
      ++result.trials;
      result.violations_total += record.violations.size();
      for (const auto& v : record.violations) {
        ++result.violations_by_name[v.name];
      }
      result.max_awake = std::max(result.max_awake, record.metrics.max_awake);
      double sum = 0;
      for (auto w : record.metrics.awake_rounds) sum += w;
      mean_sum += record.n > 0 ? sum / record.n : 0.0;
      result.max_messages =
          std::max(result.max_messages, record.metrics.total_messages);
      result.min_messages =
          std::min(result.min_messages, record.metrics.total_messages);
      if (!decisions_agree(record.decisions)) result.all_agree = false;
    }
  }

  if (result.trials > 0) {
    result.mean_awake = mean_sum / static_cast<double>(result.trials);
  } else {
    result.min_messages = 0;
  }

  if (metrics && !*metrics) throw IoFailure("metrics output write failed");
  if (trace && !*trace) throw IoFailure("trace output write failed");

  std::ofstream summary_file;
  std::ostream* summary = sinks.summary;
  if (!summary && !config.summary_path.empty()) {
    summary_file.open(config.summary_path);
    if (!summary_file) {
      throw IoFailure("cannot open summary output: " + config.summary_path);
    }
    summary = &summary_file;
  }
  if (summary) {
    *summary << summary_json(config, result).dump(2) << '\n';
    if (!*summary) throw IoFailure("summary output write failed");
  }
  return result;
}

SweepResult run_sweep(const SweepConfig& config, const ExperimentSinks& sinks) {
  if (config.ns.empty() || config.fs.empty()) {
    throw InvalidConfig("sweep needs at least one n and one f");
  }
  std::vector<std::uint32_t> ks = config.ks;
  if (config.kind == ProtocolKind::MultiValue || ks.empty()) {
    ks = {0}; // protocol default
  }

  std::ofstream csv_file;
  std::ostream* csv = sinks.metrics;
  if (!csv && !config.csv_path.empty()) {
    csv_file.open(config.csv_path);
    if (!csv_file) {
      throw IoFailure("cannot open sweep csv output: " + config.csv_path);
    }
    csv = &csv_file;
  }
  if (csv) {
    *csv << "n,f,k,protocol,adversary,trials,max_awake,mean_awake,"
            "max_messages,violations,energy_bound\n";
  }

  SweepResult sweep;
  for (const auto n : config.ns) {
    for (const auto f : config.fs) {
      if (f >= n) continue; // out of the model's range at this n
      for (const auto k : ks) {
        if (k > n) continue;
        ExperimentConfig point;
        point.kind = config.kind;
        point.n = n;
        point.f = f;
        point.k = k;
        point.inputs = config.inputs;
        point.adversary = config.adversary;
        point.trials = config.trials;
        point.check = config.check;
        point.jobs = config.jobs;
        const ExperimentResult res = run_experiment(point);

        SweepRow row;
        row.n = n;
        row.f = f;
        row.k = committee_size_in_force(config.kind, n, f, k);
        row.trials = res.trials;
        row.max_awake = res.max_awake;
        row.mean_awake = res.mean_awake;
        row.max_messages = res.max_messages;
        row.violations = res.violations_total;
        row.energy_bound =
            config.kind == ProtocolKind::MultiValue
                ? MultiValueConsensus::energy_bound(n, f)
                : BinaryConsensus::energy_bound_k(n, f, row.k);
        sweep.violations_total += res.violations_total;
        if (csv) {
          *csv << row.n << ',' << row.f << ',' << row.k << ','
               << to_string(config.kind) << ','
               << config.adversary.describe() << ',' << row.trials << ','
               << row.max_awake << ',' << row.mean_awake << ','
               << row.max_messages << ',' << row.violations << ','
               << row.energy_bound << '\n';
        }
        sweep.rows.push_back(row);
      }
    }
  }
  if (csv && !*csv) throw IoFailure("sweep csv write failed");

  // Per (n, f): the committee size with the lowest measured max energy.
  for (const auto n : config.ns) {
    for (const auto f : config.fs) {
      const SweepRow* best = nullptr;
      for (const auto& row : sweep.rows) {
        if (row.n != n || row.f != f) continue;
        if (!best || row.max_awake < best->max_awake ||
            (row.max_awake == best->max_awake && row.k < best->k)) {
          best = &row;
        }
      }
      if (best) {
        sweep.best.push_back({best->n, best->f, best->k, best->max_awake});
      }
    }
  }

  std::ofstream summary_file;
  std::ostream* summary = sinks.summary;
  if (!summary && !config.summary_path.empty()) {
    summary_file.open(config.summary_path);
    if (!summary_file) {
      throw IoFailure("cannot open sweep summary output: " +
                      config.summary_path);
    }
    summary = &summary_file;
  }
  if (summary) {
    json j;
    j["protocol"] = to_string(config.kind);
    j["inputs"] = config.inputs.describe();
    j["adversary"] = config.adversary.describe();
    j["violations_total"] = sweep.violations_total;
    json rows = json::array();
    for (const auto& r : sweep.rows) {
      rows.push_back({{"n", r.n},
                      {"f", r.f},
                      {"k", r.k},
                      {"trials", r.trials},
                      {"max_awake", r.max_awake},
                      {"mean_awake", r.mean_awake},
                      {"max_messages", r.max_messages},
                      {"violations", r.violations},
                      {"energy_bound", r.energy_bound}});
    }
    j["rows"] = std::move(rows);
    json best = json::array();
    for (const auto& b : sweep.best) {
      best.push_back({{"n", b.n},
                      {"f", b.f},
                      {"best_k", b.k},
                      {"max_awake", b.max_awake}});
    }
    j["best_k_per_point"] = std::move(best);
    *summary << j.dump(2) << '\n';
    if (!*summary) throw IoFailure("sweep summary write failed");
  }
  return sweep;
}

} // namespace sleepsim
