#include "ntpetri/executor.hpp"

#include <algorithm>
#include <chrono>
#include <condition_variable>
#include <mutex>
#include <random>
#include <thread>

namespace ntpetri {

const char* to_string(TerminationReason r) {
  switch (r) {
    case TerminationReason::Quiescent:
      return "quiescent";
    case TerminationReason::FiringLimit:
      return "firing_limit";
    case TerminationReason::Stopped:
      return "stopped";
  }
  return "?";
}

namespace {

constexpr std::int64_t kNoCluster = -1;

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

struct FiringRecord {
  std::uint64_t seq;
  TransitionId transition;
  StateDelta delta;
};

// Shared run state. Token counts live in a dense atomic array; all
// mutation of places owned by a cluster happens while holding that
// cluster's mutex, which is what makes a firing's check-consume-deposit
// atomic against every other firing that could touch the same places.
class Runtime {
 public:
  Runtime(const Net& net, const State& start,
          const WorkClusterPartition& partition,
          const ExecutionPolicy& policy, const CallbackMap& callbacks,
          const std::atomic<bool>* external_stop)
      : net_(net),
        partition_(partition),
        policy_(policy),
        callbacks_(callbacks),
        external_stop_(external_stop),
        colors_(net.color_count()),
        counts_(net.place_count() * net.color_count()),
        owner_(net.place_count(), kNoCluster),
        cluster_mutexes_(std::max<std::size_t>(partition.clusters.size(), 1)),
        dirty_(partition.clusters.size(), 1) {
    for (const auto& e : start.entries()) {
      counts_[slot(e.key)].store(e.count, std::memory_order_relaxed);
    }
    for (std::size_t c = 0; c < partition.clusters.size(); ++c) {
      for (TransitionId t : partition.clusters[c]) {
        for (PlaceId p : net.transition(t).input_places()) {
          owner_[p] = static_cast<std::int64_t>(c);
        }
      }
    }
    // Lock set per transition: its own cluster plus the owners of its
    // output places. Consumption only touches owned input places, so this
    // covers every counter a firing mutates that anyone ever reads.
    lock_sets_.resize(net.transition_count());
    for (std::size_t c = 0; c < partition.clusters.size(); ++c) {
      for (TransitionId t : partition.clusters[c]) {
        std::vector<std::uint32_t> locks{static_cast<std::uint32_t>(c)};
        for (PlaceId p : net.transition(t).output_places()) {
          if (p < owner_.size() && owner_[p] >= 0) {
            locks.push_back(static_cast<std::uint32_t>(owner_[p]));
          }
        }
        std::sort(locks.begin(), locks.end());
        locks.erase(std::unique(locks.begin(), locks.end()), locks.end());
        lock_sets_[t] = std::move(locks);
      }
    }
  }

  void run_workers() {
    const std::size_t k = partition_.clusters.size();
    std::vector<std::thread> workers;
    workers.reserve(k);
    for (std::size_t c = 0; c < k; ++c) {
      workers.emplace_back([this, c] { worker_loop(static_cast<std::uint32_t>(c)); });
    }
    for (auto& w : workers) w.join();
  }

  Trace build_trace(const State& start) {
    std::sort(records_.begin(), records_.end(),
              [](const FiringRecord& a, const FiringRecord& b) {
                return a.seq < b.seq;
              });
    Trace trace;
    trace.start = start;
    State current = start;
    for (FiringRecord& r : records_) {
      current = apply_delta(current, r.delta);
      trace.events.push_back(
          {r.seq, r.transition, std::move(r.delta), current});
    }
    if (failed_) {
      throw CallbackError(failure_message_, std::move(trace));
    }
    if (externally_stopped_) {
      trace.reason = TerminationReason::Stopped;
    } else if (limit_hit_) {
      trace.reason = TerminationReason::FiringLimit;
    } else {
      trace.reason = TerminationReason::Quiescent;
    }
    return trace;
  }

 private:
  std::size_t slot(TokenKey k) const { return k.place * colors_ + k.color; }

  bool stop_requested() {
    if (external_stop_ && external_stop_->load(std::memory_order_relaxed)) {
      externally_stopped_ = true;
      return true;
    }
    return externally_stopped_ || quiescent_ || limit_hit_ || failed_;
  }

  // Marking restricted to the transition's input places, read from the
  // live counters. Only call while holding the owning cluster's mutex.
  State read_inputs(const TransitionSpec& spec) const {
    std::vector<State::Entry> entries;
    for (PlaceId p : spec.input_places()) {
      for (ColorId c = 0; c < colors_; ++c) {
        const std::int64_t count =
            counts_[slot({p, c})].load(std::memory_order_relaxed);
        if (count > 0) entries.push_back({{p, c}, count});
      }
    }
    return State(std::move(entries));
  }

  enum class Attempt { Fired, NoCandidates, Retry, Stop };

  Attempt try_fire(std::uint32_t cluster, std::mt19937_64& rng) {
    // Phase 1: pick a candidate under our own mutex. Enablement and update
    // sets depend only on input places, which we own.
    TransitionId chosen_t = 0;
    StateDelta chosen_delta;
    {
      std::unique_lock own(cluster_mutexes_[cluster]);
      std::vector<std::pair<TransitionId, std::vector<StateDelta>>> candidates;
      for (TransitionId t : partition_.clusters[cluster]) {
        const TransitionSpec& spec = net_.transition(t);
        const State inputs = read_inputs(spec);
        if (enabled(spec, inputs)) {
          candidates.emplace_back(t, updates(spec, inputs));
        }
      }
      if (candidates.empty()) return Attempt::NoCandidates;
      std::size_t ti = 0, di = 0;
      if (policy_.choice == ChoiceRule::SeededRandom) {
        ti = std::uniform_int_distribution<std::size_t>(
            0, candidates.size() - 1)(rng);
        di = std::uniform_int_distribution<std::size_t>(
            0, candidates[ti].second.size() - 1)(rng);
      }
      chosen_t = candidates[ti].first;
      chosen_delta = candidates[ti].second[di];
    }

    // Phase 2: commit under the transition's full lock set (ascending
    // order; nothing else is held, so acquisition cannot deadlock).
    const TransitionSpec& spec = net_.transition(chosen_t);
    std::vector<std::unique_lock<std::mutex>> held;
    held.reserve(lock_sets_[chosen_t].size());
    for (std::uint32_t c : lock_sets_[chosen_t]) {
      held.emplace_back(cluster_mutexes_[c]);
    }

    const State inputs = read_inputs(spec);
    if (!enabled(spec, inputs)) return Attempt::Retry;
    const std::vector<StateDelta> fresh = updates(spec, inputs);
    if (std::find(fresh.begin(), fresh.end(), chosen_delta) == fresh.end()) {
      // A deposit changed the update set between the phases; re-scan.
      return Attempt::Retry;
    }

    if (policy_.max_firings) {
      // Reserve a budget slot; roll back when the limit is already spent.
      const std::uint64_t prev = fired_count_.fetch_add(1);
      if (prev >= *policy_.max_firings) {
        fired_count_.fetch_sub(1);
        held.clear();
        announce_limit();
        return Attempt::Stop;
      }
    }

    for (const auto& e : chosen_delta.entries()) {
      counts_[slot(e.key)].fetch_add(e.change, std::memory_order_relaxed);
    }
    const std::uint64_t seq =
        next_seq_.fetch_add(1, std::memory_order_relaxed);
    held.clear();  // release all locks before the slow parts

    {
      std::lock_guard lk(records_mutex_);
      records_.push_back({seq, chosen_t, chosen_delta});
    }
    notify_deposits(chosen_delta);

    if (auto it = callbacks_.find(chosen_t); it != callbacks_.end()) {
      try {
        it->second(chosen_t, chosen_delta);
      } catch (const std::exception& e) {
        announce_failure(std::string("callback for transition '") +
                         spec.name() + "' failed: " + e.what());
        return Attempt::Stop;
      } catch (...) {
        announce_failure(std::string("callback for transition '") +
                         spec.name() + "' failed");
        return Attempt::Stop;
      }
    }
    if (policy_.max_firings && fired_count_.load() >= *policy_.max_firings) {
      announce_limit();
      return Attempt::Stop;
    }
    return Attempt::Fired;
  }

  void notify_deposits(const StateDelta& delta) {
    std::vector<std::uint32_t> touched;
    for (const auto& e : delta.entries()) {
      if (e.change > 0 && e.key.place < owner_.size() &&
          owner_[e.key.place] >= 0) {
        touched.push_back(static_cast<std::uint32_t>(owner_[e.key.place]));
      }
    }
    std::sort(touched.begin(), touched.end());
    touched.erase(std::unique(touched.begin(), touched.end()), touched.end());
    if (touched.empty()) return;
    std::lock_guard lk(sleep_mutex_);
    for (std::uint32_t c : touched) dirty_[c] = 1;
    sleep_cv_.notify_all();
  }

  void announce_limit() {
    std::lock_guard lk(sleep_mutex_);
    limit_hit_ = true;
    sleep_cv_.notify_all();
  }

  void announce_failure(std::string message) {
    std::lock_guard lk(sleep_mutex_);
    if (!failed_) {
      failed_ = true;
      failure_message_ = std::move(message);
    }
    sleep_cv_.notify_all();
  }

  void worker_loop(std::uint32_t cluster) {
    std::mt19937_64 rng(splitmix64(policy_.seed) ^
                        splitmix64(0x517cc1b727220a95ULL + cluster));
    for (;;) {
      if (stop_requested()) {
        std::lock_guard lk(sleep_mutex_);
        sleep_cv_.notify_all();
        return;
      }
      {
        std::lock_guard lk(sleep_mutex_);
        dirty_[cluster] = 0;
      }
      const Attempt result = try_fire(cluster, rng);
      if (result == Attempt::Fired || result == Attempt::Retry) continue;
      if (result == Attempt::Stop) continue;  // loop exits via stop_requested

      // No candidates: sleep until a deposit touches one of our places.
      std::unique_lock lk(sleep_mutex_);
      if (dirty_[cluster]) continue;
      ++idle_;
      if (idle_ == dirty_.size() &&
          std::none_of(dirty_.begin(), dirty_.end(),
                       [](char d) { return d != 0; })) {
        quiescent_ = true;
        sleep_cv_.notify_all();
        --idle_;
        return;
      }
      if (external_stop_ != nullptr) {
        // Poll: the external flag has no way to hit our condition variable.
        sleep_cv_.wait_for(lk, std::chrono::milliseconds(20), [&] {
          return dirty_[cluster] != 0 || quiescent_ || limit_hit_ || failed_ ||
                 externally_stopped_;
        });
      } else {
        sleep_cv_.wait(lk, [&] {
          return dirty_[cluster] != 0 || quiescent_ || limit_hit_ || failed_ ||
                 externally_stopped_;
        });
      }
      --idle_;
    }
  }

  const Net& net_;
  const WorkClusterPartition& partition_;
  const ExecutionPolicy& policy_;
  const CallbackMap& callbacks_;
  const std::atomic<bool>* external_stop_;

  const std::size_t colors_;
  std::vector<std::atomic<std::int64_t>> counts_;
  std::vector<std::int64_t> owner_;  // consuming cluster per place, or -1
  std::vector<std::vector<std::uint32_t>> lock_sets_;
  std::vector<std::mutex> cluster_mutexes_;

  std::atomic<std::uint64_t> next_seq_{0};
  std::atomic<std::uint64_t> fired_count_{0};

  std::mutex records_mutex_;
  std::vector<FiringRecord> records_;

  // Sleep bookkeeping: dirty flags and idle count live under sleep_mutex_;
  // the termination flags are atomics so the hot loop can poll them.
  std::mutex sleep_mutex_;
  std::condition_variable sleep_cv_;
  std::vector<char> dirty_;
  std::size_t idle_ = 0;
  std::atomic<bool> quiescent_{false};
  std::atomic<bool> limit_hit_{false};
  std::atomic<bool> failed_{false};
  std::atomic<bool> externally_stopped_{false};
  std::string failure_message_;
};

}  // namespace

Trace run(const Net& net, const State& start,
          const WorkClusterPartition& partition, const ExecutionPolicy& policy,
          const CallbackMap& callbacks, const std::atomic<bool>* stop_signal) {
  ValidationReport report = validate_net(net);
  for (const ValidationFinding& f : report.findings) {
    if (f.severity == ValidationFinding::Severity::Error) {
      throw SemanticError("net failed validation: " + f.message);
    }
  }
  for (const auto& e : start.entries()) {
    if (e.key.place >= net.place_count() || e.key.color >= net.color_count()) {
      throw DanglingReferenceError("start marking references ids outside the net");
    }
  }
  if (!validate_partition(net, partition)) {
    throw InvalidPartitionError(
        "partition shares an input place across clusters; race-free "
        "execution requires one consuming cluster per place");
  }

  if (partition.clusters.empty()) {
    Trace trace;
    trace.start = start;
    trace.reason = TerminationReason::Quiescent;
    return trace;
  }

  Runtime runtime(net, start, partition, policy, callbacks, stop_signal);
  runtime.run_workers();
  return runtime.build_trace(start);
}

bool validate_trace(const Trace& t, const StateGraph& g) {
  if (!g.complete()) {
    throw Error("trace validation requires a Complete state graph");
  }
  if (t.start != g.start()) {
    throw MismatchedStartError(
        "trace start marking differs from the graph's start state");
  }
  State current = t.start;
  for (const TraceEvent& ev : t.events) {
    auto node = g.find(current);
    if (!node) return false;
    State next;
    try {
      next = apply_delta(current, ev.delta);
    } catch (const NegativeTokensError&) {
      return false;
    }
    if (ev.snapshot != next) return false;
    auto next_node = g.find(next);
    if (!next_node) return false;
    bool edge_found = false;
    for (const StateGraphEdge& e : g.edges_of(*node)) {
      if (e.transition == ev.transition && e.delta == ev.delta &&
          e.target == *next_node) {
        edge_found = true;
        break;
      }
    }
    if (!edge_found) return false;
    current = std::move(next);
  }
  return true;
}

}  // namespace ntpetri
