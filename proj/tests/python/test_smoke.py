"""Smoke tests for the Python bindings: build a net, verify it, run it."""

import pytest

import ntpetri


def h2o():
    b = ntpetri.NetBuilder(["H2", "O2", "H2O"], ["unit"])
    b.add_and("combust", [(0, 0, 2), (1, 0, 1)], [(2, 0, 2)])
    net = b.build()
    start = ntpetri.State([(0, 0, 2), (1, 0, 1)])
    return net, start


def test_state_graph_and_deadlocks():
    net, start = h2o()
    graph = ntpetri.compute_state_graph(net, start)
    assert graph.complete
    assert len(graph.nodes) == 2
    assert graph.edge_count() == 1
    deadlocks = ntpetri.deadlock_states(graph)
    assert deadlocks == [ntpetri.State([(2, 0, 2)])]
    assert not ntpetri.graph_has_cycle(graph)
    assert not ntpetri.net_has_cycle(net)
    assert net.format_state(deadlocks[0]) == "{H2O:2}"


def test_apply_delta_value_semantics():
    s = ntpetri.State([(0, 0, 2)])
    d = ntpetri.StateDelta([(0, 0, -1), (1, 0, 1)])
    after = ntpetri.apply_delta(s, d)
    assert after.count(0, 0) == 1
    assert after.count(1, 0) == 1
    assert s.count(0, 0) == 2
    with pytest.raises(RuntimeError):
        ntpetri.apply_delta(s, ntpetri.StateDelta([(0, 0, -5)]))


def test_state_count_bound_is_python_int():
    assert ntpetri.state_count_bound(2, 3) == 27
    assert ntpetri.state_count_bound(10, 100) == 11**100


def test_clusters_and_run():
    net, start = h2o()
    partition = ntpetri.compute_work_clusters(net)
    assert partition.clusters == [[0]]
    assert ntpetri.validate_partition(net, partition)

    fired = []
    policy = ntpetri.ExecutionPolicy()
    policy.seed = 1
    policy.max_firings = 10
    trace = ntpetri.run(net, start, partition, policy,
                        {0: lambda t, d: fired.append(t)})
    assert trace.reason == ntpetri.TerminationReason.QUIESCENT
    assert len(trace.events) == 1
    assert fired == [0]
    graph = ntpetri.compute_state_graph(net, start)
    assert ntpetri.validate_trace(trace, graph)


def test_custom_transition_from_python():
    b = ntpetri.NetBuilder(["src", "dst"], ["unit"])
    b.add_custom(
        "mover",
        [0],
        [1],
        lambda s: s.count(0, 0) > 0,
        lambda s: [ntpetri.StateDelta([(0, 0, -1), (1, 0, 1)])],
    )
    net = b.build()
    graph = ntpetri.compute_state_graph(net, ntpetri.State([(0, 0, 2)]))
    assert graph.complete
    assert len(graph.nodes) == 3  # counts 2, 1, 0 at src


def test_serialization_round_trip_and_dot():
    net, start = h2o()
    doc = ntpetri.serialize_net(net, start)
    net2, start2 = ntpetri.parse_net(doc)
    assert ntpetri.serialize_net(net2, start2) == doc
    assert start2 == start

    dot = ntpetri.net_to_dot(net)
    assert "shape=circle" in dot
    assert "shape=box" in dot
    graph_dot = ntpetri.state_graph_to_dot(net, ntpetri.compute_state_graph(net, start))
    assert "{H2O:2}" in graph_dot


def test_validation_findings():
    b = ntpetri.NetBuilder(["P0"], ["unit"])
    b.add_and("source", [], [(0, 0, 1)])
    report = ntpetri.validate_net(b.build())
    assert report.ok()
    assert len(report.findings) == 1
    assert report.findings[0].severity == ntpetri.ValidationFinding.Severity.WARNING
