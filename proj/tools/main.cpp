// Command line front door: verify, partition, execute, and export
// nondeterministic-transition colored Petri nets stored as net documents.

#include <CLI11.hpp>
#include <atomic>
#include <csignal>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <sstream>

#include "ntpetri/executor.hpp"
#include "ntpetri/io.hpp"

namespace {

using json = nlohmann::ordered_json;
using namespace ntpetri;

constexpr int kExitOk = 0;
constexpr int kExitCheckFailed = 1;
constexpr int kExitInputError = 2;

std::atomic<bool> g_interrupted{false};

void handle_interrupt(int) { g_interrupted.store(true); }

std::string read_input(const std::string& path) {
  if (path == "-") {
    std::ostringstream buffer;
    buffer << std::cin.rdbuf();
    return buffer.str();
  }
  std::ifstream file(path, std::ios::binary);
  if (!file) {
    throw Error("cannot open '" + path + "'");
  }
  std::ostringstream buffer;
  buffer << file.rdbuf();
  return buffer.str();
}

struct CommonOptions {
  std::string input;
  std::string format = "human";
};

struct LimitOptions {
  std::uint64_t max_states = 1'000'000;
  std::int64_t max_tokens_per_place = 10'000;
  std::uint64_t max_depth = 0;  // 0 = unlimited

  ExplorationLimits to_limits() const {
    ExplorationLimits limits;
    limits.max_states = max_states;
    limits.max_tokens_per_place = max_tokens_per_place;
    if (max_depth > 0) limits.max_depth = max_depth;
    return limits;
  }
};

void add_common(CLI::App* cmd, CommonOptions& opts,
                bool allow_dot_format = false) {
  cmd->add_option("input", opts.input,
                  "net document path, or - to read stdin")
      ->required();
  std::vector<std::string> formats = {"human", "report"};
  if (allow_dot_format) formats.push_back("dot");
  cmd->add_option("--format", opts.format, "output format")
      ->check(CLI::IsMember(formats))
      ->capture_default_str();
}

void add_limits(CLI::App* cmd, LimitOptions& opts) {
  cmd->add_option("--max-states", opts.max_states,
                  "truncate exploration beyond this many states")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  cmd->add_option("--max-tokens-per-place", opts.max_tokens_per_place,
                  "truncate exploration when a (place, color) count "
                  "exceeds this")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  cmd->add_option("--max-depth", opts.max_depth,
                  "truncate exploration beyond this many firings from the "
                  "start (0 = unlimited)");
}

json states_json(const Net& net, const std::vector<State>& states) {
  json arr = json::array();
  for (const State& s : states) {
    json entries = json::array();
    for (const auto& e : s.entries()) {
      entries.push_back(json::array({net.place_name(e.key.place),
                                     net.color_name(e.key.color), e.count}));
    }
    arr.push_back(std::move(entries));
  }
  return arr;
}

// Human output lists at most this many states per section; the report
// format always carries the full set.
constexpr std::size_t kHumanStateListCap = 10;

void print_states(const Net& net, const std::vector<State>& states) {
  const std::size_t shown = std::min(states.size(), kHumanStateListCap);
  for (std::size_t i = 0; i < shown; ++i) {
    std::cout << "  " << format_state(net, states[i]) << "\n";
  }
  if (states.size() > shown) {
    std::cout << "  ... and " << (states.size() - shown) << " more\n";
  }
}

// ---- check ----------------------------------------------------------------

struct CheckOptions {
  CommonOptions common;
  LimitOptions limits;
  std::string fail_on = "deadlock";
  std::vector<std::string> predicates;
};

std::vector<NamedPredicate> build_predicates(
    const std::vector<std::string>& specs) {
  std::vector<NamedPredicate> out;
  for (const std::string& spec : specs) {
    const auto eq = spec.find('=');
    const std::string name = spec.substr(0, eq);
    if (name == "max-total-tokens") {
      if (eq == std::string::npos) {
        throw Error("predicate max-total-tokens needs =N");
      }
      const std::int64_t bound = std::stoll(spec.substr(eq + 1));
      out.emplace_back(spec, [bound](const State& s) {
        return s.total_tokens() <= bound;
      });
    } else {
      throw Error("unknown predicate '" + name +
                  "' (available: max-total-tokens=N)");
    }
  }
  return out;
}

int cmd_check(const CheckOptions& opts) {
  auto [net, start] = parse_net(read_input(opts.common.input));
  StateGraph graph =
      compute_state_graph(net, start, opts.limits.to_limits());
  const std::vector<NamedPredicate> predicates =
      build_predicates(opts.predicates);
  AnalysisReport report = analyze(net, graph, predicates);
  const auto bound =
      state_count_bound(net.place_count(),
                        static_cast<std::uint64_t>(start.total_tokens()));

  bool predicates_ok = true;
  for (const auto& [name, violations] : report.predicate_violations) {
    if (!violations.empty()) predicates_ok = false;
  }
  bool failed = !predicates_ok;
  if (opts.fail_on == "deadlock") {
    failed = failed || !report.deadlocks.empty() || !report.truncation.empty();
  } else if (opts.fail_on == "truncation") {
    failed = failed || !report.truncation.empty();
  } else {
    failed = false;  // fail-on none
  }

  if (opts.common.format == "report") {
    json doc;
    doc["states"] = report.state_count;
    doc["edges"] = report.edge_count;
    if (report.truncation.empty()) {
      doc["status"] = "complete";
    } else {
      doc["status"] = "truncated";
      json reasons = json::array();
      for (TruncationReason r : report.truncation) {
        reasons.push_back(to_string(r));
      }
      doc["truncation"] = std::move(reasons);
    }
    doc["state_bound"] = bound.str();
    doc["net_has_cycle"] = report.net_cycle;
    doc["graph_has_cycle"] = report.graph_cycle;
    doc["deadlocks_partial"] = report.deadlocks_partial;
    doc["deadlock_states"] = states_json(net, report.deadlocks);
    json preds = json::object();
    for (const auto& [name, violations] : report.predicate_violations) {
      preds[name] = states_json(net, violations);
    }
    doc["predicate_violations"] = std::move(preds);
    doc["result"] = failed ? "fail" : "pass";
    std::cout << doc.dump(2) << "\n";
  } else {
    std::cout << "states: " << report.state_count << "\n";
    std::cout << "edges: " << report.edge_count << "\n";
    if (report.truncation.empty()) {
      std::cout << "status: complete\n";
    } else {
      std::cout << "status: truncated (";
      for (std::size_t i = 0; i < report.truncation.size(); ++i) {
        if (i) std::cout << ", ";
        std::cout << to_string(report.truncation[i]);
      }
      std::cout << ")\n";
    }
    std::cout << "state bound (p+1)^t: " << bound.str() << "\n";
    std::cout << "net cycle: " << (report.net_cycle ? "yes" : "no") << "\n";
    std::cout << "graph cycle: " << (report.graph_cycle ? "yes" : "no")
              << "\n";
    std::cout << "deadlock states"
              << (report.deadlocks_partial ? " (partial)" : "") << ": "
              << report.deadlocks.size() << "\n";
    print_states(net, report.deadlocks);
    for (const auto& [name, violations] : report.predicate_violations) {
      if (violations.empty()) {
        std::cout << "predicate " << name << ": ok\n";
      } else {
        std::cout << "predicate " << name << ": " << violations.size()
                  << " violating state(s)\n";
        print_states(net, violations);
      }
    }
    std::cout << "result: " << (failed ? "FAIL" : "PASS") << "\n";
  }
  return failed ? kExitCheckFailed : kExitOk;
}

// ---- partition ------------------------------------------------------------

int cmd_partition(const CommonOptions& opts) {
  auto [net, start] = parse_net(read_input(opts.input));
  (void)start;
  WorkClusterPartition partition = compute_work_clusters(net);
  if (opts.format == "report") {
    json doc;
    json clusters = json::array();
    for (const auto& cluster : partition.clusters) {
      json names = json::array();
      for (TransitionId t : cluster) names.push_back(net.transition(t).name());
      clusters.push_back(std::move(names));
    }
    doc["clusters"] = std::move(clusters);
    std::cout << doc.dump(2) << "\n";
  } else {
    for (std::size_t c = 0; c < partition.clusters.size(); ++c) {
      std::cout << "cluster " << c << ":";
      for (TransitionId t : partition.clusters[c]) {
        std::cout << " " << net.transition(t).name();
      }
      std::cout << "\n";
    }
  }
  return kExitOk;
}

// ---- run ------------------------------------------------------------------

struct RunOptions {
  CommonOptions common;
  LimitOptions limits;
  std::uint64_t seed = 0;
  std::int64_t firings = -1;  // <0 = run to quiescence
};

int cmd_run(const RunOptions& opts) {
  auto [net, start] = parse_net(read_input(opts.common.input));
  WorkClusterPartition partition = compute_work_clusters(net);

  ExecutionPolicy policy;
  policy.seed = opts.seed;
  policy.choice = ChoiceRule::SeededRandom;
  if (opts.firings >= 0) {
    policy.max_firings = static_cast<std::uint64_t>(opts.firings);
  }

  std::signal(SIGINT, handle_interrupt);
  Trace trace = run(net, start, partition, policy, {}, &g_interrupted);

  StateGraph graph = compute_state_graph(net, start, opts.limits.to_limits());
  const bool graph_complete = graph.complete();
  const bool conformant = graph_complete ? validate_trace(trace, graph) : false;

  if (opts.common.format == "report") {
    json doc;
    doc["firings"] = trace.events.size();
    doc["termination"] = to_string(trace.reason);
    json events = json::array();
    for (const TraceEvent& ev : trace.events) {
      json entry;
      entry["seq"] = ev.seq;
      entry["transition"] = net.transition(ev.transition).name();
      json changes = json::array();
      for (const auto& ch : ev.delta.entries()) {
        changes.push_back(json::array({net.place_name(ch.key.place),
                                       net.color_name(ch.key.color),
                                       ch.change}));
      }
      entry["delta"] = std::move(changes);
      events.push_back(std::move(entry));
    }
    doc["events"] = std::move(events);
    doc["final_state"] = states_json(net, {trace.final_state()})[0];
    doc["conformance"] =
        graph_complete ? (conformant ? "pass" : "fail") : "skipped";
    std::cout << doc.dump(2) << "\n";
  } else {
    for (const TraceEvent& ev : trace.events) {
      std::cout << "firing " << ev.seq << ": "
                << net.transition(ev.transition).name() << " "
                << format_delta(net, ev.delta) << " -> "
                << format_state(net, ev.snapshot) << "\n";
    }
    std::cout << "termination: " << to_string(trace.reason) << "\n";
    std::cout << "final state: " << format_state(net, trace.final_state())
              << "\n";
    if (graph_complete) {
      std::cout << "conformance: " << (conformant ? "pass" : "fail") << "\n";
    } else {
      std::cout << "conformance: skipped (state graph truncated)\n";
    }
  }
  return (graph_complete && !conformant) ? kExitCheckFailed : kExitOk;
}

// ---- export ---------------------------------------------------------------

struct ExportOptions {
  CommonOptions common;
  LimitOptions limits;
  std::string target = "net";
};

int cmd_export(const ExportOptions& opts) {
  auto [net, start] = parse_net(read_input(opts.common.input));
  if (opts.target == "net") {
    std::cout << net_to_dot(net);
  } else if (opts.target == "clustered-net") {
    WorkClusterPartition partition = compute_work_clusters(net);
    std::cout << net_to_dot(net, &partition);
  } else {
    StateGraph graph =
        compute_state_graph(net, start, opts.limits.to_limits());
    std::cout << state_graph_to_dot(net, graph);
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Verify and execute nondeterministic-transition colored Petri nets"};
  app.require_subcommand(1);

  CheckOptions check_opts;
  CLI::App* check =
      app.add_subcommand("check", "enumerate the state graph and analyze it");
  add_common(check, check_opts.common);
  add_limits(check, check_opts.limits);
  check->add_option("--fail-on", check_opts.fail_on,
                    "what makes the exit code 1")
      ->check(CLI::IsMember({"deadlock", "truncation", "none"}))
      ->capture_default_str();
  check->add_option("--predicate", check_opts.predicates,
                    "named state predicate, e.g. max-total-tokens=3; "
                    "violations fail the check");

  CommonOptions partition_opts;
  CLI::App* partition =
      app.add_subcommand("partition", "print the maximal work clusters");
  add_common(partition, partition_opts);

  RunOptions run_opts;
  CLI::App* run_cmd = app.add_subcommand(
      "run", "execute under the maximal partition and check the trace");
  add_common(run_cmd, run_opts.common);
  add_limits(run_cmd, run_opts.limits);
  run_cmd->add_option("--seed", run_opts.seed, "seed for firing choices")
      ->capture_default_str();
  run_cmd->add_option("--firings", run_opts.firings,
                      "stop after this many firings (unset: run to "
                      "quiescence)");

  ExportOptions export_opts;
  CLI::App* export_cmd =
      app.add_subcommand("export", "emit Graphviz DOT on stdout");
  add_common(export_cmd, export_opts.common, /*allow_dot_format=*/true);
  add_limits(export_cmd, export_opts.limits);
  export_cmd
      ->add_option("--target", export_opts.target,
                   "what to render: the net, the net with clusters, or the "
                   "state graph")
      ->check(CLI::IsMember({"net", "clustered-net", "graph"}))
      ->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help
    app.exit(e);
    return kExitInputError;
  }

  try {
    if (check->parsed()) return cmd_check(check_opts);
    if (partition->parsed()) return cmd_partition(partition_opts);
    if (run_cmd->parsed()) return cmd_run(run_opts);
    if (export_cmd->parsed()) return cmd_export(export_opts);
  } catch (const SyntaxError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInputError;
  } catch (const SemanticError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInputError;
  } catch (const VersionError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInputError;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInputError;
  }
  return kExitInputError;
}
