#pragma once

#include <atomic>
#include <cstdint>
#include <functional>
#include <optional>
#include <unordered_map>

#include "ntpetri/clusters.hpp"
#include "ntpetri/stategraph.hpp"

namespace ntpetri {

enum class ChoiceRule {
  /// Deterministic pseudo-random pick over the enabled candidates,
  /// seeded per cluster from the policy seed.
  SeededRandom,
  /// Lowest transition id, then first delta in canonical order.
  FirstEnabled,
};

struct ExecutionPolicy {
  std::uint64_t seed = 0;
  ChoiceRule choice = ChoiceRule::SeededRandom;
  /// Stop after this many firings; unset means run to quiescence.
  std::optional<std::uint64_t> max_firings;
};

enum class TerminationReason { Quiescent, FiringLimit, Stopped };

const char* to_string(TerminationReason r);

struct TraceEvent {
  std::uint64_t seq = 0;
  TransitionId transition = 0;
  StateDelta delta;
  /// Global marking after this firing; linearized at firing points.
  State snapshot;
};

struct Trace {
  State start;
  std::vector<TraceEvent> events;
  TerminationReason reason = TerminationReason::Quiescent;

  const State& final_state() const {
    return events.empty() ? start : events.back().snapshot;
  }
};

/// Invoked on the firing worker's thread; at most one in flight per
/// transition. Must return promptly and must not block indefinitely.
using TransitionCallback =
    std::function<void(TransitionId, const StateDelta&)>;

using CallbackMap = std::unordered_map<TransitionId, TransitionCallback>;

/// A worker callback threw; the run is aborted with the firings committed
/// so far (a half-fired transition would desynchronize tokens from the
/// model, so the firing itself is kept).
struct CallbackError : Error {
  CallbackError(const std::string& msg, Trace partial)
      : Error(msg), partial_trace(std::move(partial)) {}
  Trace partial_trace;
};

/// Executes the net with one worker thread per cluster. Firings are atomic:
/// the enablement check, token consumption, and all deposits of one firing
/// commit together, and trace snapshots follow that commit order. Requires
/// a partition for which validate_partition holds (throws
/// InvalidPartitionError otherwise).
Trace run(const Net& net, const State& start,
          const WorkClusterPartition& partition, const ExecutionPolicy& policy,
          const CallbackMap& callbacks = {},
          const std::atomic<bool>* stop_signal = nullptr);

/// True iff every consecutive snapshot pair of the trace is an edge of `g`
/// with matching transition and delta. Requires a Complete graph over the
/// same start (MismatchedStartError otherwise).
bool validate_trace(const Trace& t, const StateGraph& g);

}  // namespace ntpetri
