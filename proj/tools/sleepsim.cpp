// Copyright 2026 the sleepsim authors. Licensed under the Apache License,
// Version 2.0. See the LICENSE file at the root of this distribution or at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Command-line front end for the sleeping-model consensus simulator.
//
// Exit codes: 0 clean run, 1 at least one checker violation, 2 invalid
// configuration or usage, 3 I/O failure.

#include <cstdint>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "sleepsim/harness.hpp"
#include "sleepsim/protocol_binary.hpp"
#include "sleepsim/protocol_multivalue.hpp"

namespace {

constexpr int kExitClean = 0;
constexpr int kExitViolations = 1;
constexpr int kExitBadConfig = 2;
constexpr int kExitIoFailure = 3;

int run_single(const std::string& protocol, std::uint32_t n, std::uint32_t f,
               std::uint32_t k, const std::string& inputs,
               const std::string& adversary, const std::string& schedule_path,
               std::uint64_t trials, bool check, unsigned jobs,
               const std::string& trace_path, const std::string& metrics_path,
               const std::string& summary_path) {
  sleepsim::ExperimentConfig config;
  config.kind = sleepsim::protocol_kind_from_string(protocol);
  config.n = n;
  config.f = f;
  config.k = k;
  config.inputs = sleepsim::InputSpec::parse(inputs);
  config.adversary = schedule_path.empty()
                         ? sleepsim::AdversarySpec::parse(adversary)
                         : sleepsim::AdversarySpec::parse("file:" +
                                                          schedule_path);
  config.trials = trials;
  config.check = check;
  config.jobs = jobs;
  config.trace_path = trace_path;
  config.metrics_path = metrics_path;
  config.summary_path = summary_path;

  const auto result = sleepsim::run_experiment(config);
  const std::uint64_t bound =
      config.kind == sleepsim::ProtocolKind::MultiValue
          ? sleepsim::MultiValueConsensus::energy_bound(n, f)
          : sleepsim::BinaryConsensus::energy_bound_k(
                n, f, config.kind == sleepsim::ProtocolKind::Binary && k == 0
                          ? sleepsim::ceil_sqrt(n)
                          : k);
  std::cout << "protocol=" << protocol << " n=" << n << " f=" << f
            << " trials=" << result.trials
            << " max_awake=" << result.max_awake << " energy_bound=" << bound
            << " max_messages=" << result.max_messages
            << " violations=" << result.violations_total << '\n';
  for (const auto& [name, count] : result.violations_by_name) {
    std::cout << "  violation " << name << ": " << count << '\n';
  }
  return result.violations_total == 0 ? kExitClean : kExitViolations;
}

int run_sweep_cmd(const std::string& protocol,
                  const std::vector<std::uint32_t>& ns,
                  const std::vector<std::uint32_t>& fs,
                  const std::vector<std::uint32_t>& ks,
                  const std::string& inputs, const std::string& adversary,
                  std::uint64_t trials, bool check, unsigned jobs,
                  const std::string& csv_path,
                  const std::string& summary_path) {
  sleepsim::SweepConfig config;
  config.kind = sleepsim::protocol_kind_from_string(protocol);
  config.ns = ns;
  config.fs = fs;
  config.ks = ks;
  config.inputs = sleepsim::InputSpec::parse(inputs);
  config.adversary = sleepsim::AdversarySpec::parse(adversary);
  config.trials = trials;
  config.check = check;
  config.jobs = jobs;
  config.csv_path = csv_path;
  config.summary_path = summary_path;

  const auto result = sleepsim::run_sweep(config);
  for (const auto& best : result.best) {
    std::cout << "n=" << best.n << " f=" << best.f << " best_k=" << best.k
              << " max_awake=" << best.max_awake << '\n';
  }
  std::cout << "points=" << result.rows.size()
            << " violations=" << result.violations_total << '\n';
  return result.violations_total == 0 ? kExitClean : kExitViolations;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Deterministic simulator for crash-tolerant consensus in the "
      "sleeping model (energy = most rounds any player stays awake)."};

  std::string protocol = "binary";
  std::uint32_t n = 4;
  std::uint32_t f = 1;
  std::uint32_t k = 0;
  std::string inputs = "all0";
  std::string adversary = "none";
  std::string schedule_path;
  std::uint64_t trials = 1;
  bool check = true;
  unsigned jobs = 0;
  std::string trace_path;
  std::string metrics_path;
  std::string summary_path;

  app.add_option("-p,--protocol", protocol,
                 "protocol to simulate: multi or binary")
      ->capture_default_str();
  app.add_option("-n,--n", n, "number of players")->capture_default_str();
  app.add_option("-f,--f", f, "crash budget (must be < n)")
      ->capture_default_str();
  app.add_option("-k,--k", k,
                 "binary committee size override (0 = ceil(sqrt(n)))")
      ->capture_default_str();
  app.add_option("-i,--inputs", inputs,
                 "input vector: all0|all1|onehot:I|onehot:all|rand:SEED|"
                 "list:v0,v1,...")
      ->capture_default_str();
  app.add_option("-a,--adversary", adversary,
                 "crash schedule source: none|rand:SEED:COUNT|chain|"
                 "exhaustive[:BUDGET]|file:PATH")
      ->capture_default_str();
  app.add_option("--schedule", schedule_path,
                 "crash schedule file (shorthand for -a file:PATH)");
  app.add_option("-t,--trials", trials,
                 "trial count for the crash-free adversary")
      ->capture_default_str();
  app.add_flag("--check,!--no-check", check,
               "run the execution checker on every trial")
      ->capture_default_str();
  app.add_option("-j,--jobs", jobs,
                 "worker threads (0 = $SLEEPSIM_JOBS or hardware)")
      ->capture_default_str();
  app.add_option("--trace", trace_path, "write per-trial JSONL traces here");
  app.add_option("--metrics", metrics_path, "write per-trial CSV rows here");
  app.add_option("--summary", summary_path, "write a JSON summary here");

  auto* sweep = app.add_subcommand(
      "sweep", "run a grid of configurations and report the best k");
  std::vector<std::uint32_t> sweep_ns{16};
  std::vector<std::uint32_t> sweep_fs{1};
  std::vector<std::uint32_t> sweep_ks;
  std::string sweep_protocol = "binary";
  std::string sweep_inputs = "all0";
  std::string sweep_adversary = "none";
  std::uint64_t sweep_trials = 1;
  bool sweep_check = true;
  unsigned sweep_jobs = 0;
  std::string sweep_csv;
  std::string sweep_summary;
  sweep->add_option("-p,--protocol", sweep_protocol, "multi or binary")
      ->capture_default_str();
  sweep->add_option("-n,--n", sweep_ns, "player counts (comma separated)")
      ->delimiter(',')
      ->capture_default_str();
  sweep->add_option("-f,--f", sweep_fs, "crash budgets (comma separated)")
      ->delimiter(',')
      ->capture_default_str();
  sweep->add_option("-k,--k", sweep_ks,
                    "binary committee sizes (comma separated; empty = default)")
      ->delimiter(',');
  sweep->add_option("-i,--inputs", sweep_inputs, "input vector spec")
      ->capture_default_str();
  sweep->add_option("-a,--adversary", sweep_adversary,
                    "crash schedule source")
      ->capture_default_str();
  sweep->add_option("-t,--trials", sweep_trials,
                    "trial count for the crash-free adversary")
      ->capture_default_str();
  sweep->add_flag("--check,!--no-check", sweep_check,
                  "run the execution checker on every trial")
      ->capture_default_str();
  sweep->add_option("-j,--jobs", sweep_jobs, "worker threads");
  sweep->add_option("--csv", sweep_csv, "write one CSV row per grid point");
  sweep->add_option("--summary", sweep_summary, "write a JSON summary here");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitBadConfig;
  }

  try {
    if (sweep->parsed()) {
      return run_sweep_cmd(sweep_protocol, sweep_ns, sweep_fs, sweep_ks,
                           sweep_inputs, sweep_adversary, sweep_trials,
                           sweep_check, sweep_jobs, sweep_csv, sweep_summary);
    }
    return run_single(protocol, n, f, k, inputs, adversary, schedule_path,
                      trials, check, jobs, trace_path, metrics_path,
                      summary_path);
  } catch (const sleepsim::SpaceTooLarge& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitBadConfig;
  } catch (const sleepsim::InvalidConfig& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitBadConfig;
  } catch (const sleepsim::IoFailure& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitIoFailure;
  }
}
