#pragma once

#include <string>
#include <string_view>
#include <utility>

#include "ntpetri/clusters.hpp"
#include "ntpetri/stategraph.hpp"

namespace ntpetri {

/// Parses a version-"1" net document (UTF-8 JSON with keys version,
/// colors, places, transitions, marking) into a validated net and its
/// canonical start marking. Throws SyntaxError (with line/column),
/// SemanticError, or VersionError.
std::pair<Net, State> parse_net(std::string_view text);

/// Deterministic inverse of parse_net for nets without custom transitions
/// (UnserializableTransitionError otherwise): equal inputs yield
/// byte-equal documents and parse(serialize(n, s)) reproduces (n, s).
std::string serialize_net(const Net& n, const State& s);

/// Graphviz digraph of the net: places as circles, AND transitions as
/// squares, XOR transitions as diamonds, weights as edge labels (omitted
/// when 1), token colors as edge color attributes. When a partition is
/// given its clusters become subgraph boxes.
std::string net_to_dot(const Net& n, const WorkClusterPartition* partition = nullptr);

/// Graphviz digraph of a state graph; nodes carry canonical markings,
/// edges the firing transition's name.
std::string state_graph_to_dot(const Net& n, const StateGraph& g);

/// Byte-stable JSON rendering of a state graph. Node indices follow the
/// canonical node order.
std::string state_graph_to_json(const Net& n, const StateGraph& g);

}  // namespace ntpetri
