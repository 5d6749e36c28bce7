#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <fstream>
#include <sstream>

#include "ntpetri/io.hpp"
#include "support/generators.hpp"

using namespace ntpetri;
using namespace ntpetri::testing;

namespace {

std::string read_fixture(const std::string& name) {
  std::ifstream f(std::string(NTPETRI_FIXTURE_DIR) + "/" + name);
  REQUIRE(f.good());
  std::ostringstream buf;
  buf << f.rdbuf();
  return buf.str();
}

// Light structural DOT check: block braces balance, every statement line
// ends with ';', graph header present. Braces inside quoted labels don't
// count because statement lines end with ';'.
void check_dot_shape(const std::string& dot) {
  REQUIRE(dot.substr(0, 8) == "digraph ");
  int depth = 0;
  std::istringstream lines(dot);
  std::string line;
  while (std::getline(lines, line)) {
    const auto begin = line.find_first_not_of(' ');
    if (begin == std::string::npos) continue;
    const std::string body = line.substr(begin);
    if (body.back() == '{') {
      ++depth;
    } else if (body == "}") {
      --depth;
    } else {
      CHECK(body.back() == ';');
    }
    CHECK(depth >= 0);
  }
  CHECK(depth == 0);
}

}  // namespace

TEST_CASE("parsing the H2O fixture") {
  auto [net, start] = parse_net(read_fixture("h2o.json"));
  CHECK(net.place_count() == 3);
  CHECK(net.color_count() == 1);
  REQUIRE(net.transition_count() == 1);
  CHECK(net.transition(0).kind() == TransitionKind::And);
  CHECK(net.transition(0).name() == "combust");
  CHECK(start == State({{{0, 0}, 2}, {{1, 0}, 1}}));
}

TEST_CASE("parse errors carry positions and categories") {
  CHECK_THROWS_AS(parse_net(""), SyntaxError);
  CHECK_THROWS_AS(parse_net("{\"version\": \"1\",}"), SyntaxError);
  try {
    parse_net("{\n  \"version\": \"1\"\n  \"colors\": []\n}");
    FAIL("expected SyntaxError");
  } catch (const SyntaxError& e) {
    CHECK(e.line == 3);
  }

  CHECK_THROWS_AS(parse_net(R"({"version": "2", "colors": ["u"],
      "places": [], "transitions": [], "marking": []})"),
                  VersionError);

  // Zero weight.
  CHECK_THROWS_AS(parse_net(R"({"version": "1", "colors": ["u"],
      "places": ["P"], "transitions": [{"name": "T", "kind": "and",
      "inputs": [["P", "u", 0]], "outputs": []}], "marking": []})"),
                  SemanticError);

  // Unknown kind tag (custom is host-code only).
  CHECK_THROWS_AS(parse_net(R"({"version": "1", "colors": ["u"],
      "places": ["P"], "transitions": [{"name": "T", "kind": "custom"}],
      "marking": []})"),
                  SemanticError);

  // Dangling place name.
  CHECK_THROWS_AS(parse_net(R"({"version": "1", "colors": ["u"],
      "places": ["P"], "transitions": [], "marking": [["Q", "u", 1]]})"),
                  SemanticError);

  // Duplicate names.
  CHECK_THROWS_AS(parse_net(R"({"version": "1", "colors": ["u"],
      "places": ["P", "P"], "transitions": [], "marking": []})"),
                  DuplicateNameError);

  // Marking with zero count or a repeated key.
  CHECK_THROWS_AS(parse_net(R"({"version": "1", "colors": ["u"],
      "places": ["P"], "transitions": [], "marking": [["P", "u", 0]]})"),
                  SemanticError);
  CHECK_THROWS_AS(parse_net(R"({"version": "1", "colors": ["u"],
      "places": ["P"], "transitions": [],
      "marking": [["P", "u", 1], ["P", "u", 2]]})"),
                  SemanticError);

  // Unknown keys are rejected rather than silently ignored.
  CHECK_THROWS_AS(parse_net(R"({"version": "1", "colors": ["u"],
      "places": [], "transitions": [], "marking": [], "extra": 1})"),
                  SemanticError);
}

TEST_CASE("serialization is deterministic and round-trips") {
  auto [net, start] = parse_net(read_fixture("pipeline.json"));
  const std::string once = serialize_net(net, start);
  CHECK(once == serialize_net(net, start));
  auto [net2, start2] = parse_net(once);
  CHECK(start2 == start);
  CHECK(serialize_net(net2, start2) == once);
}

TEST_CASE("serializing a custom transition fails, an empty net succeeds") {
  NetBuilder b({"P0"}, {"unit"});
  CustomPayload payload;
  payload.input_places = {0};
  payload.output_places = {0};
  payload.enable = [](const State&) { return false; };
  payload.updates = [](const State&) { return std::vector<StateDelta>{}; };
  b.add_custom("host", payload);
  CHECK_THROWS_AS(serialize_net(b.build(), State{}),
                  UnserializableTransitionError);

  Net empty = NetBuilder({}, {"unit"}).build();
  const std::string doc = serialize_net(empty, State{});
  auto [back, s] = parse_net(doc);
  CHECK(back.place_count() == 0);
  CHECK(s.empty());
}

TEST_CASE("property: random nets round-trip byte-for-byte") {
  Rng rng(61);
  for (int i = 0; i < 100; ++i) {
    GeneratedNet gen = arbitrary_net(rng);
    const std::string doc = serialize_net(gen.net, gen.start);
    auto [net2, start2] = parse_net(doc);
    CHECK(start2 == gen.start);
    CHECK(serialize_net(net2, start2) == doc);
  }
}

TEST_CASE("net DOT export follows the drawing conventions") {
  auto [net, start] = parse_net(read_fixture("h2o.json"));
  const std::string dot = net_to_dot(net);
  check_dot_shape(dot);
  CHECK(std::count(dot.begin(), dot.end(), '\n') > 5);
  // 3 circles, 1 box, and the weight-2 labels on H2 -> T and T -> H2O.
  std::size_t circles = 0, pos = 0;
  while ((pos = dot.find("shape=circle", pos)) != std::string::npos) {
    ++circles;
    pos += 1;
  }
  CHECK(circles == 3);
  CHECK(dot.find("shape=box") != std::string::npos);
  CHECK(dot.find("shape=diamond") == std::string::npos);
  CHECK(std::count(dot.begin(), dot.end(), '2') >= 2);
  CHECK(dot.find("label=\"2\"") != std::string::npos);

  // Single-color nets carry no color attributes.
  CHECK(dot.find("color=") == std::string::npos);
}

TEST_CASE("pipeline DOT: diamond for the XOR mux, boxes for the rest") {
  auto [net, start] = parse_net(read_fixture("pipeline.json"));
  const std::string dot = net_to_dot(net);
  check_dot_shape(dot);
  std::size_t diamonds = 0, boxes = 0, pos = 0;
  while ((pos = dot.find("shape=diamond", pos)) != std::string::npos) {
    ++diamonds;
    pos += 1;
  }
  pos = 0;
  while ((pos = dot.find("shape=box", pos)) != std::string::npos) {
    ++boxes;
    pos += 1;
  }
  CHECK(diamonds == 1);
  CHECK(boxes == 5);
}

TEST_CASE("empty net DOT has an empty body") {
  Net empty = NetBuilder({}, {"unit"}).build();
  const std::string dot = net_to_dot(empty);
  check_dot_shape(dot);
  CHECK(dot.find("->") == std::string::npos);
  CHECK(dot.find("shape") == std::string::npos);
}

TEST_CASE("clustered DOT groups transitions into subgraphs") {
  auto [net, start] = parse_net(read_fixture("conflict_pair.json"));
  WorkClusterPartition partition = compute_work_clusters(net);
  const std::string dot = net_to_dot(net, &partition);
  CHECK(dot.find("subgraph cluster_0") != std::string::npos);
  CHECK(dot.find("subgraph cluster_1") == std::string::npos);
}

TEST_CASE("colored nets annotate edges with colors") {
  auto [net, start] = parse_net(read_fixture("colored.json"));
  const std::string dot = net_to_dot(net);
  check_dot_shape(dot);
  CHECK(dot.find("color=blue") != std::string::npos);
  CHECK(dot.find("color=red") != std::string::npos);
}

TEST_CASE("state graph DOT labels nodes with canonical markings") {
  auto [net, start] = parse_net(read_fixture("h2o.json"));
  StateGraph g = compute_state_graph(net, start);
  const std::string dot = state_graph_to_dot(net, g);
  check_dot_shape(dot);
  CHECK(dot.find("{H2:2, O2:1}") != std::string::npos);
  CHECK(dot.find("{H2O:2}") != std::string::npos);
  CHECK(dot.find("combust") != std::string::npos);
  CHECK(dot.find("peripheries=2") != std::string::npos);
}

TEST_CASE("state graph JSON is stable and indexes canonical nodes") {
  auto [net, start] = parse_net(read_fixture("h2o.json"));
  StateGraph g = compute_state_graph(net, start);
  const std::string a = state_graph_to_json(net, g);
  const std::string b = state_graph_to_json(net, compute_state_graph(net, start));
  CHECK(a == b);
  CHECK(a.find("\"status\": \"complete\"") != std::string::npos);
  CHECK(a.find("\"transition\": \"combust\"") != std::string::npos);
}
