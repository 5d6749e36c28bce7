#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "ntpetri/executor.hpp"
#include "ntpetri/io.hpp"

namespace py = pybind11;
using namespace ntpetri;

namespace {

// Callbacks handed to the executor run on worker threads; callables stored
// in custom payloads are also hit from compute_state_graph. Either way the
// GIL must be (re)acquired around the Python call.
std::function<bool(const State&)> wrap_enable(py::function fn) {
  return [fn = std::move(fn)](const State& s) {
    py::gil_scoped_acquire gil;
    return fn(s).cast<bool>();
  };
}

std::function<std::vector<StateDelta>(const State&)> wrap_updates(
    py::function fn) {
  return [fn = std::move(fn)](const State& s) {
    py::gil_scoped_acquire gil;
    return fn(s).cast<std::vector<StateDelta>>();
  };
}

TransitionCallback wrap_callback(py::function fn) {
  return [fn = std::move(fn)](TransitionId t, const StateDelta& d) {
    py::gil_scoped_acquire gil;
    fn(t, d);
  };
}

py::object big_int(const boost::multiprecision::cpp_int& v) {
  return py::module_::import("builtins").attr("int")(v.str());
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Nondeterministic-transition colored Petri nets: modeling, "
            "verification, and concurrent execution.";

  py::register_exception<Error>(m, "NtPetriError", PyExc_RuntimeError);

  py::class_<TokenKey>(m, "TokenKey")
      .def(py::init<PlaceId, ColorId>(), py::arg("place"), py::arg("color"))
      .def_readwrite("place", &TokenKey::place)
      .def_readwrite("color", &TokenKey::color)
      .def("__eq__", [](TokenKey a, TokenKey b) { return a == b; })
      .def("__hash__",
           [](TokenKey k) { return (std::size_t(k.place) << 32) ^ k.color; })
      .def("__repr__", [](TokenKey k) {
        return "TokenKey(place=" + std::to_string(k.place) +
               ", color=" + std::to_string(k.color) + ")";
      });

  py::class_<State>(m, "State")
      .def(py::init([](const std::vector<std::tuple<PlaceId, ColorId,
                                                    std::int64_t>>& entries) {
             std::vector<State::Entry> es;
             for (const auto& [p, c, n] : entries) es.push_back({{p, c}, n});
             return State(std::move(es));
           }),
           py::arg("entries") =
               std::vector<std::tuple<PlaceId, ColorId, std::int64_t>>{})
      .def("count",
           [](const State& s, PlaceId p, ColorId c) { return s.count(p, c); })
      .def("total_tokens", &State::total_tokens)
      .def("entries",
           [](const State& s) {
             std::vector<std::tuple<PlaceId, ColorId, std::int64_t>> out;
             for (const auto& e : s.entries()) {
               out.emplace_back(e.key.place, e.key.color, e.count);
             }
             return out;
           })
      .def("__eq__", [](const State& a, const State& b) { return a == b; })
      .def("__hash__", [](const State& s) { return StateHash{}(s); })
      .def("__len__", &State::size);

  py::class_<StateDelta>(m, "StateDelta")
      .def(py::init([](const std::vector<std::tuple<PlaceId, ColorId,
                                                    std::int64_t>>& entries) {
             std::vector<StateDelta::Entry> es;
             for (const auto& [p, c, n] : entries) es.push_back({{p, c}, n});
             return StateDelta(std::move(es));
           }),
           py::arg("entries") =
               std::vector<std::tuple<PlaceId, ColorId, std::int64_t>>{})
      .def("entries",
           [](const StateDelta& d) {
             std::vector<std::tuple<PlaceId, ColorId, std::int64_t>> out;
             for (const auto& e : d.entries()) {
               out.emplace_back(e.key.place, e.key.color, e.change);
             }
             return out;
           })
      .def("__eq__",
           [](const StateDelta& a, const StateDelta& b) { return a == b; })
      .def("__len__", &StateDelta::size);

  m.def("apply_delta", &apply_delta, py::arg("state"), py::arg("delta"));
  m.def("negate", &negate, py::arg("delta"));

  py::enum_<TransitionKind>(m, "TransitionKind")
      .value("AND", TransitionKind::And)
      .value("XOR", TransitionKind::Xor)
      .value("CUSTOM", TransitionKind::Custom);

  py::class_<TransitionSpec>(m, "TransitionSpec")
      .def_property_readonly("name", &TransitionSpec::name)
      .def_property_readonly("kind", &TransitionSpec::kind)
      .def_property_readonly("input_places", &TransitionSpec::input_places)
      .def_property_readonly("output_places", &TransitionSpec::output_places);

  py::class_<ValidationFinding> finding(m, "ValidationFinding");
  py::enum_<ValidationFinding::Severity>(finding, "Severity")
      .value("ERROR", ValidationFinding::Severity::Error)
      .value("WARNING", ValidationFinding::Severity::Warning);
  finding.def_readonly("severity", &ValidationFinding::severity)
      .def_readonly("transition", &ValidationFinding::transition)
      .def_readonly("message", &ValidationFinding::message);

  py::class_<ValidationReport>(m, "ValidationReport")
      .def_readonly("findings", &ValidationReport::findings)
      .def("ok", &ValidationReport::ok);

  py::class_<Net>(m, "Net")
      .def_property_readonly("place_count", &Net::place_count)
      .def_property_readonly("color_count", &Net::color_count)
      .def_property_readonly("transition_count", &Net::transition_count)
      .def("place_name", &Net::place_name)
      .def("color_name", &Net::color_name)
      .def("transition", &Net::transition,
           py::return_value_policy::reference_internal)
      .def("find_place", &Net::find_place)
      .def("find_color", &Net::find_color)
      .def("find_transition", &Net::find_transition)
      .def("format_state",
           [](const Net& n, const State& s) { return format_state(n, s); })
      .def("format_delta",
           [](const Net& n, const StateDelta& d) { return format_delta(n, d); });

  py::class_<NetBuilder>(m, "NetBuilder")
      .def(py::init<std::vector<std::string>, std::vector<std::string>>(),
           py::arg("places"), py::arg("colors"))
      .def(
          "add_and",
          [](NetBuilder& b, const std::string& name,
             const std::vector<std::tuple<PlaceId, ColorId, std::int64_t>>& in,
             const std::vector<std::tuple<PlaceId, ColorId, std::int64_t>>&
                 out) {
            auto terms = [](const auto& ts) {
              std::vector<ArcTerm> result;
              for (const auto& [p, c, w] : ts) result.push_back({p, c, w});
              return result;
            };
            return b.add_and(name, terms(in), terms(out));
          },
          py::arg("name"), py::arg("inputs"), py::arg("outputs"))
      .def(
          "add_xor",
          [](NetBuilder& b, const std::string& name,
             const std::vector<std::pair<std::pair<PlaceId, ColorId>,
                                         std::pair<PlaceId, ColorId>>>& pairs) {
            std::vector<XorPair> ps;
            for (const auto& [in, out] : pairs) {
              ps.push_back({{in.first, in.second}, {out.first, out.second}});
            }
            return b.add_xor(name, std::move(ps));
          },
          py::arg("name"), py::arg("pairs"))
      .def(
          "add_custom",
          [](NetBuilder& b, const std::string& name,
             std::vector<PlaceId> inputs, std::vector<PlaceId> outputs,
             py::function enable, py::function updates,
             std::size_t max_deltas) {
            CustomPayload payload;
            payload.input_places = std::move(inputs);
            payload.output_places = std::move(outputs);
            payload.enable = wrap_enable(std::move(enable));
            payload.updates = wrap_updates(std::move(updates));
            payload.max_deltas = max_deltas;
            return b.add_custom(name, std::move(payload));
          },
          py::arg("name"), py::arg("input_places"), py::arg("output_places"),
          py::arg("enable"), py::arg("updates"), py::arg("max_deltas") = 1024)
      .def("build", &NetBuilder::build)
      .def("build_unchecked", &NetBuilder::build_unchecked);

  m.def("validate_net", &validate_net, py::arg("net"));
  m.def("enabled", &enabled, py::arg("transition"), py::arg("state"));
  m.def("updates", &updates, py::arg("transition"), py::arg("state"));

  py::class_<ExplorationLimits>(m, "ExplorationLimits")
      .def(py::init<>())
      .def_readwrite("max_states", &ExplorationLimits::max_states)
      .def_readwrite("max_tokens_per_place",
                     &ExplorationLimits::max_tokens_per_place)
      .def_readwrite("max_depth", &ExplorationLimits::max_depth);

  py::enum_<TruncationReason>(m, "TruncationReason")
      .value("MAX_STATES", TruncationReason::MaxStates)
      .value("MAX_TOKENS_PER_PLACE", TruncationReason::MaxTokensPerPlace)
      .value("MAX_DEPTH", TruncationReason::MaxDepth);

  py::class_<StateGraphEdge>(m, "StateGraphEdge")
      .def_readonly("transition", &StateGraphEdge::transition)
      .def_readonly("delta", &StateGraphEdge::delta)
      .def_readonly("target", &StateGraphEdge::target);

  py::class_<StateGraph>(m, "StateGraph")
      .def_property_readonly("nodes",
                             [](const StateGraph& g) {
                               return std::vector<State>(g.nodes().begin(),
                                                         g.nodes().end());
                             })
      .def("edges_of",
           [](const StateGraph& g, std::uint32_t node) {
             auto es = g.edges_of(node);
             return std::vector<StateGraphEdge>(es.begin(), es.end());
           })
      .def_property_readonly("start_index", &StateGraph::start_index)
      .def_property_readonly("start", &StateGraph::start)
      .def_property_readonly("complete", &StateGraph::complete)
      .def_property_readonly("truncation",
                             [](const StateGraph& g) {
                               return std::vector<TruncationReason>(
                                   g.truncation().begin(),
                                   g.truncation().end());
                             })
      .def("edge_count", &StateGraph::edge_count)
      .def("find", &StateGraph::find)
      .def("is_frontier", &StateGraph::is_frontier);

  m.def("compute_state_graph", &compute_state_graph, py::arg("net"),
        py::arg("start"), py::arg("limits") = ExplorationLimits{});
  m.def("deadlock_states", &deadlock_states, py::arg("graph"));
  m.def("graph_has_cycle", &graph_has_cycle, py::arg("graph"));
  m.def("net_has_cycle", &net_has_cycle, py::arg("net"));
  m.def(
      "state_count_bound",
      [](std::uint64_t places, std::uint64_t tokens) {
        return big_int(state_count_bound(places, tokens));
      },
      py::arg("places"), py::arg("tokens"));
  m.def(
      "check_predicate",
      [](const StateGraph& g, py::function pred) {
        return check_predicate(g, [&](const State& s) {
          return pred(s).cast<bool>();
        });
      },
      py::arg("graph"), py::arg("predicate"));

  py::class_<WorkClusterPartition>(m, "WorkClusterPartition")
      .def(py::init([](std::vector<std::vector<TransitionId>> clusters) {
             return WorkClusterPartition{std::move(clusters)};
           }),
           py::arg("clusters") = std::vector<std::vector<TransitionId>>{})
      .def_readwrite("clusters", &WorkClusterPartition::clusters)
      .def_static("all_in_one", &WorkClusterPartition::all_in_one)
      .def("__eq__", [](const WorkClusterPartition& a,
                        const WorkClusterPartition& b) { return a == b; });

  m.def("compute_work_clusters", &compute_work_clusters, py::arg("net"));
  m.def("validate_partition", &validate_partition, py::arg("net"),
        py::arg("partition"));
  m.def(
      "coarsen",
      [](const WorkClusterPartition& p,
         const std::vector<std::pair<std::size_t, std::size_t>>& merges) {
        return coarsen(p, merges);
      },
      py::arg("partition"), py::arg("merges"));

  py::enum_<ChoiceRule>(m, "ChoiceRule")
      .value("SEEDED_RANDOM", ChoiceRule::SeededRandom)
      .value("FIRST_ENABLED", ChoiceRule::FirstEnabled);

  py::class_<ExecutionPolicy>(m, "ExecutionPolicy")
      .def(py::init<>())
      .def_readwrite("seed", &ExecutionPolicy::seed)
      .def_readwrite("choice", &ExecutionPolicy::choice)
      .def_readwrite("max_firings", &ExecutionPolicy::max_firings);

  py::enum_<TerminationReason>(m, "TerminationReason")
      .value("QUIESCENT", TerminationReason::Quiescent)
      .value("FIRING_LIMIT", TerminationReason::FiringLimit)
      .value("STOPPED", TerminationReason::Stopped);

  py::class_<TraceEvent>(m, "TraceEvent")
      .def_readonly("seq", &TraceEvent::seq)
      .def_readonly("transition", &TraceEvent::transition)
      .def_readonly("delta", &TraceEvent::delta)
      .def_readonly("snapshot", &TraceEvent::snapshot);

  py::class_<Trace>(m, "Trace")
      .def(py::init<>())
      .def_readwrite("start", &Trace::start)
      .def_readwrite("events", &Trace::events)
      .def_readwrite("reason", &Trace::reason)
      .def_property_readonly("final_state", &Trace::final_state);

  m.def(
      "run",
      [](const Net& net, const State& start,
         const WorkClusterPartition& partition, const ExecutionPolicy& policy,
         const std::unordered_map<TransitionId, py::function>& callbacks) {
        CallbackMap cbs;
        for (const auto& [t, fn] : callbacks) {
          cbs.emplace(t, wrap_callback(fn));
        }
        py::gil_scoped_release release;
        return run(net, start, partition, policy, cbs);
      },
      py::arg("net"), py::arg("start"), py::arg("partition"),
      py::arg("policy") = ExecutionPolicy{},
      py::arg("callbacks") = std::unordered_map<TransitionId, py::function>{});
  m.def("validate_trace", &validate_trace, py::arg("trace"), py::arg("graph"));

  m.def("parse_net", [](const std::string& text) { return parse_net(text); },
        py::arg("text"));
  m.def("serialize_net", &serialize_net, py::arg("net"), py::arg("state"));
  m.def(
      "net_to_dot",
      [](const Net& n, std::optional<WorkClusterPartition> partition) {
        return net_to_dot(n, partition ? &*partition : nullptr);
      },
      py::arg("net"), py::arg("partition") = std::nullopt);
  m.def("state_graph_to_dot", &state_graph_to_dot, py::arg("net"),
        py::arg("graph"));
  m.def("state_graph_to_json", &state_graph_to_json, py::arg("net"),
        py::arg("graph"));
}
