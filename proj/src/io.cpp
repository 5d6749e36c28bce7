#include "ntpetri/io.hpp"

#include <algorithm>
#include <json.hpp>
#include <sstream>

namespace ntpetri {

namespace {

using json = nlohmann::ordered_json;

[[noreturn]] void syntax_error_at(std::string_view text, std::size_t byte,
                                  const std::string& message) {
  std::size_t line = 1, column = 1;
  for (std::size_t i = 0; i + 1 < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      column = 1;
    } else {
      ++column;
    }
  }
  throw SyntaxError(message + " at line " + std::to_string(line) +
                        ", column " + std::to_string(column),
                    line, column);
}

const json& require(const json& doc, const char* key) {
  if (!doc.contains(key)) {
    throw SemanticError(std::string("missing key '") + key + "'");
  }
  return doc.at(key);
}

void reject_unknown_keys(const json& obj,
                         std::initializer_list<const char*> known,
                         const std::string& where) {
  for (const auto& [key, value] : obj.items()) {
    if (std::find_if(known.begin(), known.end(), [&](const char* k) {
          return key == k;
        }) == known.end()) {
      throw SemanticError("unknown key '" + key + "' in " + where);
    }
  }
}

std::vector<std::string> parse_names(const json& arr, const char* what) {
  if (!arr.is_array()) {
    throw SemanticError(std::string("'") + what + "' must be an array");
  }
  std::vector<std::string> names;
  for (const json& item : arr) {
    if (!item.is_string()) {
      throw SemanticError(std::string("'") + what +
                          "' entries must be strings");
    }
    names.push_back(item.get<std::string>());
  }
  return names;
}

PlaceId resolve_place(const Net& net, const json& j, const std::string& where) {
  if (!j.is_string()) {
    throw SemanticError("place reference in " + where + " must be a string");
  }
  auto id = net.find_place(j.get<std::string>());
  if (!id) {
    throw SemanticError("unknown place '" + j.get<std::string>() + "' in " +
                        where);
  }
  return *id;
}

ColorId resolve_color(const Net& net, const json& j, const std::string& where) {
  if (!j.is_string()) {
    throw SemanticError("color reference in " + where + " must be a string");
  }
  auto id = net.find_color(j.get<std::string>());
  if (!id) {
    throw SemanticError("unknown color '" + j.get<std::string>() + "' in " +
                        where);
  }
  return *id;
}

std::int64_t parse_count(const json& j, const std::string& where) {
  if (!j.is_number_integer()) {
    throw SemanticError("count in " + where + " must be an integer");
  }
  return j.get<std::int64_t>();
}

std::vector<ArcTerm> parse_terms(const Net& net, const json& arr,
                                 const std::string& where) {
  if (!arr.is_array()) {
    throw SemanticError(where + " must be an array of [place, color, weight]");
  }
  std::vector<ArcTerm> terms;
  for (const json& item : arr) {
    if (!item.is_array() || item.size() != 3) {
      throw SemanticError("entries of " + where +
                          " must be [place, color, weight] triples");
    }
    ArcTerm term;
    term.place = resolve_place(net, item[0], where);
    term.color = resolve_color(net, item[1], where);
    term.weight = parse_count(item[2], where);
    if (term.weight < 1) {
      throw SemanticError("weight in " + where + " must be >= 1, got " +
                          std::to_string(term.weight));
    }
    terms.push_back(term);
  }
  return terms;
}

TokenKey parse_key(const Net& net, const json& j, const std::string& where) {
  if (!j.is_array() || j.size() != 2) {
    throw SemanticError("entries of " + where + " must be [place, color]");
  }
  return {resolve_place(net, j[0], where), resolve_color(net, j[1], where)};
}

State parse_marking(const Net& net, const json& arr) {
  if (!arr.is_array()) {
    throw SemanticError("'marking' must be an array");
  }
  std::vector<State::Entry> entries;
  for (const json& item : arr) {
    if (!item.is_array() || item.size() != 3) {
      throw SemanticError("marking entries must be [place, color, count]");
    }
    State::Entry e;
    e.key.place = resolve_place(net, item[0], "marking");
    e.key.color = resolve_color(net, item[1], "marking");
    e.count = parse_count(item[2], "marking");
    if (e.count < 1) {
      throw SemanticError("marking counts must be >= 1, got " +
                          std::to_string(e.count));
    }
    entries.push_back(e);
  }
  std::sort(entries.begin(), entries.end());
  for (std::size_t i = 1; i < entries.size(); ++i) {
    if (entries[i].key == entries[i - 1].key) {
      throw SemanticError("marking repeats a (place, color) pair");
    }
  }
  return State(std::move(entries));
}

}  // namespace

std::pair<Net, State> parse_net(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    syntax_error_at(text, e.byte, "invalid JSON");
  }
  if (!doc.is_object()) {
    throw SemanticError("net document must be a JSON object");
  }
  reject_unknown_keys(
      doc, {"version", "colors", "places", "transitions", "marking"},
      "net document");

  const json& version = require(doc, "version");
  if (!version.is_string() || version.get<std::string>() != "1") {
    throw VersionError("unsupported net document version " + version.dump());
  }

  NetBuilder builder(parse_names(require(doc, "places"), "places"),
                     parse_names(require(doc, "colors"), "colors"));
  Net name_table = builder.build_unchecked();  // for name resolution only

  const json& transitions = require(doc, "transitions");
  if (!transitions.is_array()) {
    throw SemanticError("'transitions' must be an array");
  }
  for (const json& t : transitions) {
    if (!t.is_object()) {
      throw SemanticError("transition entries must be objects");
    }
    const json& name_j = require(t, "name");
    if (!name_j.is_string()) {
      throw SemanticError("transition names must be strings");
    }
    const std::string name = name_j.get<std::string>();
    const std::string where = "transition '" + name + "'";
    const json& kind = require(t, "kind");
    if (kind == "and") {
      reject_unknown_keys(t, {"name", "kind", "inputs", "outputs"}, where);
      builder.add_and(
          name, parse_terms(name_table, require(t, "inputs"), where),
          parse_terms(name_table, require(t, "outputs"), where));
    } else if (kind == "xor") {
      reject_unknown_keys(t, {"name", "kind", "pairs"}, where);
      const json& pairs_j = require(t, "pairs");
      if (!pairs_j.is_array()) {
        throw SemanticError("'pairs' of " + where + " must be an array");
      }
      std::vector<XorPair> pairs;
      for (const json& pj : pairs_j) {
        if (!pj.is_array() || pj.size() != 2) {
          throw SemanticError("pairs of " + where +
                              " must be [[place, color], [place, color]]");
        }
        pairs.push_back({parse_key(name_table, pj[0], where),
                         parse_key(name_table, pj[1], where)});
      }
      builder.add_xor(name, std::move(pairs));
    } else {
      throw SemanticError("unknown transition kind " + kind.dump() + " in " +
                          where + " (custom transitions are host-code only)");
    }
  }

  Net net = builder.build();
  State start = parse_marking(net, require(doc, "marking"));
  return {std::move(net), std::move(start)};
}

std::string serialize_net(const Net& n, const State& s) {
  json doc;
  doc["version"] = "1";
  doc["colors"] = n.color_names();
  doc["places"] = n.place_names();

  json transitions = json::array();
  for (const TransitionSpec& t : n.transitions()) {
    json entry;
    entry["name"] = t.name();
    switch (t.kind()) {
      case TransitionKind::And: {
        entry["kind"] = "and";
        auto terms_json = [&](const std::vector<ArcTerm>& terms) {
          json arr = json::array();
          for (const ArcTerm& term : terms) {
            arr.push_back(json::array({n.place_name(term.place),
                                       n.color_name(term.color),
                                       term.weight}));
          }
          return arr;
        };
        entry["inputs"] = terms_json(t.and_payload().inputs);
        entry["outputs"] = terms_json(t.and_payload().outputs);
        break;
      }
      case TransitionKind::Xor: {
        entry["kind"] = "xor";
        json pairs = json::array();
        for (const XorPair& q : t.xor_payload().pairs) {
          pairs.push_back(json::array(
              {json::array({n.place_name(q.input.place),
                            n.color_name(q.input.color)}),
               json::array({n.place_name(q.output.place),
                            n.color_name(q.output.color)})}));
        }
        entry["pairs"] = std::move(pairs);
        break;
      }
      case TransitionKind::Custom:
        throw UnserializableTransitionError(
            "custom transition '" + t.name() +
            "' cannot be serialized; only and/xor kinds round-trip");
    }
    transitions.push_back(std::move(entry));
  }
  doc["transitions"] = std::move(transitions);

  json marking = json::array();
  for (const auto& e : s.entries()) {
    marking.push_back(json::array(
        {n.place_name(e.key.place), n.color_name(e.key.color), e.count}));
  }
  doc["marking"] = std::move(marking);

  return doc.dump(2) + "\n";
}

namespace {

std::string dot_quote(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out + "\"";
}

// Stable palette for edge colors; id 0 of a single-color net stays black.
const char* dot_color(const Net& n, ColorId c) {
  static const char* palette[] = {"blue",   "red",  "green3", "orange",
                                  "purple", "brown", "cyan3",  "magenta",
                                  "gold3",  "gray40"};
  if (n.color_count() <= 1) return "black";
  return palette[c % (sizeof(palette) / sizeof(palette[0]))];
}

void dot_edge(std::ostream& os, const std::string& from, const std::string& to,
              const Net& n, ColorId color, std::int64_t weight) {
  os << "  " << from << " -> " << to;
  std::vector<std::string> attrs;
  if (weight != 1) attrs.push_back("label=\"" + std::to_string(weight) + "\"");
  if (n.color_count() > 1) {
    attrs.push_back(std::string("color=") + dot_color(n, color));
  }
  if (!attrs.empty()) {
    os << " [";
    for (std::size_t i = 0; i < attrs.size(); ++i) {
      if (i) os << ", ";
      os << attrs[i];
    }
    os << "]";
  }
  os << ";\n";
}

}  // namespace

std::string net_to_dot(const Net& n, const WorkClusterPartition* partition) {
  std::ostringstream os;
  os << "digraph net {\n";
  os << "  rankdir=LR;\n";
  for (PlaceId p = 0; p < n.place_count(); ++p) {
    os << "  p" << p << " [shape=circle, label=" << dot_quote(n.place_name(p))
       << "];\n";
  }
  auto transition_node = [&](std::ostream& o, TransitionId t) {
    const TransitionSpec& spec = n.transition(t);
    const char* shape = spec.kind() == TransitionKind::Xor ? "diamond" : "box";
    o << "t" << t << " [shape=" << shape
      << ", label=" << dot_quote(spec.name());
    if (spec.kind() == TransitionKind::Custom) o << ", style=dashed";
    o << "];\n";
  };
  if (partition) {
    for (std::size_t c = 0; c < partition->clusters.size(); ++c) {
      os << "  subgraph cluster_" << c << " {\n";
      os << "    label=\"cluster " << c << "\";\n";
      for (TransitionId t : partition->clusters[c]) {
        os << "    ";
        transition_node(os, t);
      }
      os << "  }\n";
    }
  } else {
    for (TransitionId t = 0; t < n.transition_count(); ++t) {
      os << "  ";
      transition_node(os, t);
    }
  }
  for (TransitionId t = 0; t < n.transition_count(); ++t) {
    const TransitionSpec& spec = n.transition(t);
    const std::string tn = "t" + std::to_string(t);
    switch (spec.kind()) {
      case TransitionKind::And:
        for (const ArcTerm& in : spec.and_payload().inputs) {
          dot_edge(os, "p" + std::to_string(in.place), tn, n, in.color,
                   in.weight);
        }
        for (const ArcTerm& out : spec.and_payload().outputs) {
          dot_edge(os, tn, "p" + std::to_string(out.place), n, out.color,
                   out.weight);
        }
        break;
      case TransitionKind::Xor:
        for (const XorPair& q : spec.xor_payload().pairs) {
          dot_edge(os, "p" + std::to_string(q.input.place), tn, n,
                   q.input.color, 1);
          dot_edge(os, tn, "p" + std::to_string(q.output.place), n,
                   q.output.color, 1);
        }
        break;
      case TransitionKind::Custom:
        for (PlaceId p : spec.custom_payload().input_places) {
          os << "  p" << p << " -> " << tn << " [style=dashed];\n";
        }
        for (PlaceId p : spec.custom_payload().output_places) {
          os << "  " << tn << " -> p" << p << " [style=dashed];\n";
        }
        break;
    }
  }
  os << "}\n";
  return os.str();
}

std::string state_graph_to_dot(const Net& n, const StateGraph& g) {
  std::ostringstream os;
  os << "digraph state_graph {\n";
  for (std::uint32_t i = 0; i < g.nodes().size(); ++i) {
    os << "  s" << i << " [label=" << dot_quote(format_state(n, g.nodes()[i]));
    if (i == g.start_index()) os << ", peripheries=2";
    if (g.is_frontier(i)) os << ", style=dashed";
    os << "];\n";
  }
  for (std::uint32_t i = 0; i < g.nodes().size(); ++i) {
    for (const StateGraphEdge& e : g.edges_of(i)) {
      os << "  s" << i << " -> s" << e.target
         << " [label=" << dot_quote(n.transition(e.transition).name())
         << "];\n";
    }
  }
  os << "}\n";
  return os.str();
}

namespace {

json state_to_json(const Net& n, const State& s) {
  json arr = json::array();
  for (const auto& e : s.entries()) {
    arr.push_back(json::array(
        {n.place_name(e.key.place), n.color_name(e.key.color), e.count}));
  }
  return arr;
}

}  // namespace

std::string state_graph_to_json(const Net& n, const StateGraph& g) {
  json doc;
  doc["start"] = g.start_index();
  if (g.complete()) {
    doc["status"] = "complete";
  } else {
    doc["status"] = "truncated";
    json reasons = json::array();
    for (TruncationReason r : g.truncation()) reasons.push_back(to_string(r));
    doc["truncation"] = std::move(reasons);
  }
  json nodes = json::array();
  for (const State& s : g.nodes()) nodes.push_back(state_to_json(n, s));
  doc["nodes"] = std::move(nodes);
  json edges = json::array();
  for (std::uint32_t i = 0; i < g.nodes().size(); ++i) {
    for (const StateGraphEdge& e : g.edges_of(i)) {
      json entry;
      entry["from"] = i;
      entry["to"] = e.target;
      entry["transition"] = n.transition(e.transition).name();
      json changes = json::array();
      for (const auto& ch : e.delta.entries()) {
        changes.push_back(json::array({n.place_name(ch.key.place),
                                       n.color_name(ch.key.color),
                                       ch.change}));
      }
      entry["delta"] = std::move(changes);
      edges.push_back(std::move(entry));
    }
  }
  doc["edges"] = std::move(edges);
  return doc.dump(2) + "\n";
}

}  // namespace ntpetri
