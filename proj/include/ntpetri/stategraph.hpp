#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <utility>

#include "ntpetri/net.hpp"

namespace ntpetri {

/// Exploration cutoffs; exceeding one is not an error, it truncates the
/// graph and tags the reason.
struct ExplorationLimits {
  std::uint64_t max_states = 1'000'000;
  std::optional<std::int64_t> max_tokens_per_place = 10'000;
  std::optional<std::uint64_t> max_depth;  // firings from the start state
};

enum class TruncationReason { MaxStates, MaxTokensPerPlace, MaxDepth };

const char* to_string(TruncationReason r);

struct StateGraphEdge {
  TransitionId transition = 0;
  StateDelta delta;
  std::uint32_t target = 0;  // node index

  auto operator<=>(const StateGraphEdge&) const = default;
};

/// The reachability graph over canonical markings. Nodes are sorted in
/// canonical order and edge lists are sorted, so equal inputs produce
/// byte-identical serializations regardless of visitation order.
class StateGraph {
 public:
  std::span<const State> nodes() const { return nodes_; }
  std::span<const StateGraphEdge> edges_of(std::uint32_t node) const {
    return edges_.at(node);
  }
  std::uint64_t edge_count() const;

  std::uint32_t start_index() const { return start_; }
  const State& start() const { return nodes_.at(start_); }

  bool complete() const { return truncation_.empty(); }
  std::span<const TruncationReason> truncation() const { return truncation_; }

  /// True when the node's outgoing edge list may be incomplete because a
  /// limit stopped its expansion.
  bool is_frontier(std::uint32_t node) const { return frontier_.at(node); }

  std::optional<std::uint32_t> find(const State& s) const;

 private:
  friend StateGraph compute_state_graph(const Net&, const State&,
                                        const ExplorationLimits&);
  std::vector<State> nodes_;
  std::vector<std::vector<StateGraphEdge>> edges_;
  std::vector<bool> frontier_;
  std::vector<TruncationReason> truncation_;
  std::uint32_t start_ = 0;
};

/// Explores every state reachable from `start` through enabled firings, up
/// to the given limits. Requires a net that passes validation and a start
/// marking whose ids exist in the net.
StateGraph compute_state_graph(const Net& net, const State& start,
                               const ExplorationLimits& limits = {});

/// Nodes with no outgoing edges, in canonical order. On truncated graphs
/// frontier nodes are excluded (their edges are unknown); pair the result
/// with StateGraph::complete() to know whether it is exhaustive.
std::vector<State> deadlock_states(const StateGraph& g);

bool graph_has_cycle(const StateGraph& g);

/// Cycle in the bipartite place/transition graph itself (arcs taken from
/// the transition specs; custom kinds contribute their declared places).
bool net_has_cycle(const Net& n);

/// (places + 1) ^ tokens, exactly.
boost::multiprecision::cpp_int state_count_bound(std::uint64_t places,
                                                 std::uint64_t tokens);

/// All nodes failing the predicate, in canonical order.
std::vector<State> check_predicate(const StateGraph& g,
                                   const std::function<bool(const State&)>& pred);

struct AnalysisReport {
  std::uint64_t state_count = 0;
  std::uint64_t edge_count = 0;
  std::vector<TruncationReason> truncation;
  std::vector<State> deadlocks;
  bool deadlocks_partial = false;
  bool graph_cycle = false;
  bool net_cycle = false;
  // (predicate name, failing states)
  std::vector<std::pair<std::string, std::vector<State>>> predicate_violations;
};

using NamedPredicate =
    std::pair<std::string, std::function<bool(const State&)>>;

AnalysisReport analyze(const Net& net, const StateGraph& g,
                       std::span<const NamedPredicate> predicates = {});

}  // namespace ntpetri
