#include "ntpetri/stategraph.hpp"

#include <algorithm>
#include <unordered_map>

namespace ntpetri {

const char* to_string(TruncationReason r) {
  switch (r) {
    case TruncationReason::MaxStates:
      return "max_states";
    case TruncationReason::MaxTokensPerPlace:
      return "max_tokens_per_place";
    case TruncationReason::MaxDepth:
      return "max_depth";
  }
  return "?";
}

std::uint64_t StateGraph::edge_count() const {
  std::uint64_t n = 0;
  for (const auto& es : edges_) n += es.size();
  return n;
}

std::optional<std::uint32_t> StateGraph::find(const State& s) const {
  auto it = std::lower_bound(nodes_.begin(), nodes_.end(), s);
  if (it != nodes_.end() && *it == s) {
    return static_cast<std::uint32_t>(it - nodes_.begin());
  }
  return std::nullopt;
}

namespace {

void require_valid(const Net& net, const State& start) {
  ValidationReport report = validate_net(net);
  if (!report.ok()) {
    for (const auto& f : report.findings) {
      if (f.severity == ValidationFinding::Severity::Error) {
        throw SemanticError("net failed validation: " + f.message);
      }
    }
  }
  for (const auto& e : start.entries()) {
    if (e.key.place >= net.place_count() || e.key.color >= net.color_count()) {
      throw DanglingReferenceError(
          "start marking references place " + std::to_string(e.key.place) +
          ", color " + std::to_string(e.key.color) +
          " outside the net's tables");
    }
  }
}

struct Accumulator {
  std::vector<State> nodes;
  std::vector<std::vector<StateGraphEdge>> edges;
  std::vector<bool> frontier;
  std::unordered_map<State, std::uint32_t, StateHash> index;

  std::uint32_t add(State s) {
    auto id = static_cast<std::uint32_t>(nodes.size());
    index.emplace(s, id);
    nodes.push_back(std::move(s));
    edges.emplace_back();
    frontier.push_back(false);
    return id;
  }
};

}  // namespace

StateGraph compute_state_graph(const Net& net, const State& start,
                               const ExplorationLimits& limits) {
  require_valid(net, start);

  Accumulator acc;
  std::vector<TruncationReason> truncation;
  auto mark_truncated = [&](TruncationReason r) {
    if (std::find(truncation.begin(), truncation.end(), r) ==
        truncation.end()) {
      truncation.push_back(r);
    }
  };

  const std::uint32_t start_id = acc.add(start);

  // Worklist form of the recursive construction; same visited-set
  // semantics, no call-stack depth limit.
  std::vector<std::pair<std::uint32_t, std::uint64_t>> worklist;
  worklist.push_back({start_id, 0});
  bool states_exhausted = false;

  while (!worklist.empty()) {
    auto [node, depth] = worklist.back();
    worklist.pop_back();

    if (states_exhausted) {
      // Once the node budget is gone every unexpanded state is frontier.
      acc.frontier[node] = true;
      continue;
    }
    if (limits.max_depth && depth >= *limits.max_depth) {
      const State& s = acc.nodes[node];
      bool any_enabled = false;
      for (const TransitionSpec& t : net.transitions()) {
        if (enabled(t, s)) {
          any_enabled = true;
          break;
        }
      }
      if (any_enabled) {
        mark_truncated(TruncationReason::MaxDepth);
        acc.frontier[node] = true;
      }
      continue;
    }

    // acc.nodes may reallocate while we append successors; copy.
    const State s = acc.nodes[node];
    for (TransitionId t = 0; t < net.transition_count(); ++t) {
      const TransitionSpec& spec = net.transition(t);
      if (!enabled(spec, s)) continue;
      for (const StateDelta& delta : updates(spec, s)) {
        State next = apply_delta(s, delta);
        if (limits.max_tokens_per_place) {
          bool over = false;
          for (const auto& e : next.entries()) {
            if (e.count > *limits.max_tokens_per_place) {
              over = true;
              break;
            }
          }
          if (over) {
            mark_truncated(TruncationReason::MaxTokensPerPlace);
            acc.frontier[node] = true;
            continue;
          }
        }
        auto it = acc.index.find(next);
        if (it != acc.index.end()) {
          acc.edges[node].push_back({t, delta, it->second});
          continue;
        }
        if (acc.nodes.size() >= limits.max_states) {
          mark_truncated(TruncationReason::MaxStates);
          acc.frontier[node] = true;
          states_exhausted = true;
          continue;
        }
        std::uint32_t next_id = acc.add(std::move(next));
        acc.edges[node].push_back({t, delta, next_id});
        worklist.push_back({next_id, depth + 1});
      }
    }
  }

  // Canonicalize: nodes in canonical state order, edge lists sorted.
  const auto n = static_cast<std::uint32_t>(acc.nodes.size());
  std::vector<std::uint32_t> order(n);
  for (std::uint32_t i = 0; i < n; ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::uint32_t a, std::uint32_t b) {
    return acc.nodes[a] < acc.nodes[b];
  });
  std::vector<std::uint32_t> rank(n);
  for (std::uint32_t i = 0; i < n; ++i) rank[order[i]] = i;

  StateGraph g;
  g.nodes_.resize(n);
  g.edges_.resize(n);
  g.frontier_.resize(n);
  for (std::uint32_t i = 0; i < n; ++i) {
    const std::uint32_t old = order[i];
    g.nodes_[i] = std::move(acc.nodes[old]);
    g.frontier_[i] = acc.frontier[old];
    auto& es = acc.edges[old];
    for (StateGraphEdge& e : es) e.target = rank[e.target];
    std::sort(es.begin(), es.end());
    g.edges_[i] = std::move(es);
  }
  g.start_ = rank[start_id];
  std::sort(truncation.begin(), truncation.end());
  g.truncation_ = std::move(truncation);
  return g;
}

std::vector<State> deadlock_states(const StateGraph& g) {
  std::vector<State> out;
  for (std::uint32_t i = 0; i < g.nodes().size(); ++i) {
    if (g.edges_of(i).empty() && !g.is_frontier(i)) {
      out.push_back(g.nodes()[i]);
    }
  }
  return out;
}

bool graph_has_cycle(const StateGraph& g) {
  const auto n = static_cast<std::uint32_t>(g.nodes().size());
  // 0 = unvisited, 1 = on stack, 2 = done
  std::vector<std::uint8_t> color(n, 0);
  std::vector<std::pair<std::uint32_t, std::size_t>> stack;
  for (std::uint32_t root = 0; root < n; ++root) {
    if (color[root] != 0) continue;
    color[root] = 1;
    stack.push_back({root, 0});
    while (!stack.empty()) {
      auto& [node, edge] = stack.back();
      auto edges = g.edges_of(node);
      if (edge == edges.size()) {
        color[node] = 2;
        stack.pop_back();
        continue;
      }
      const std::uint32_t next = edges[edge++].target;
      if (color[next] == 1) return true;
      if (color[next] == 0) {
        color[next] = 1;
        stack.push_back({next, 0});
      }
    }
  }
  return false;
}

bool net_has_cycle(const Net& n) {
  // Bipartite digraph: vertices [0, P) are places, [P, P+T) transitions.
  const std::size_t P = n.place_count();
  const std::size_t V = P + n.transition_count();
  std::vector<std::vector<std::uint32_t>> adj(V);
  for (TransitionId t = 0; t < n.transition_count(); ++t) {
    const TransitionSpec& spec = n.transition(t);
    const auto tv = static_cast<std::uint32_t>(P + t);
    for (PlaceId p : spec.input_places()) {
      if (p < P) adj[p].push_back(tv);
    }
    for (PlaceId p : spec.output_places()) {
      if (p < P) adj[tv].push_back(static_cast<std::uint32_t>(p));
    }
  }
  std::vector<std::uint8_t> color(V, 0);
  std::vector<std::pair<std::uint32_t, std::size_t>> stack;
  for (std::uint32_t root = 0; root < V; ++root) {
    if (color[root] != 0) continue;
    color[root] = 1;
    stack.push_back({root, 0});
    while (!stack.empty()) {
      auto& [node, edge] = stack.back();
      if (edge == adj[node].size()) {
        color[node] = 2;
        stack.pop_back();
        continue;
      }
      const std::uint32_t next = adj[node][edge++];
      if (color[next] == 1) return true;
      if (color[next] == 0) {
        color[next] = 1;
        stack.push_back({next, 0});
      }
    }
  }
  return false;
}

boost::multiprecision::cpp_int state_count_bound(std::uint64_t places,
                                                 std::uint64_t tokens) {
  boost::multiprecision::cpp_int base = places + 1;
  boost::multiprecision::cpp_int result = 1;
  for (std::uint64_t i = 0; i < tokens; ++i) result *= base;
  return result;
}

std::vector<State> check_predicate(
    const StateGraph& g, const std::function<bool(const State&)>& pred) {
  std::vector<State> out;
  for (const State& s : g.nodes()) {
    if (!pred(s)) out.push_back(s);
  }
  return out;
}

AnalysisReport analyze(const Net& net, const StateGraph& g,
                       std::span<const NamedPredicate> predicates) {
  AnalysisReport r;
  r.state_count = g.nodes().size();
  r.edge_count = g.edge_count();
  r.truncation.assign(g.truncation().begin(), g.truncation().end());
  r.deadlocks = deadlock_states(g);
  r.deadlocks_partial = !g.complete();
  r.graph_cycle = graph_has_cycle(g);
  r.net_cycle = net_has_cycle(net);
  for (const auto& [name, pred] : predicates) {
    r.predicate_violations.emplace_back(name, check_predicate(g, pred));
  }
  return r;
}

}  // namespace ntpetri
