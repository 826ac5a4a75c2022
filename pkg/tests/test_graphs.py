"""Graph construction, generators, verifiers, and the file format."""

from __future__ import annotations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from colorcomm.graphs import (
    EdgeColoring,
    EdgePartition,
    GraphError,
    VertexColoring,
    build_graph,
    gen_c4_gadget_instance,
    gen_random_instance,
    gen_zec_product_instance,
    read_graph_file,
    verify_edge_coloring,
    verify_vertex_coloring,
    write_graph_file,
)


def test_build_c4():
    g = build_graph(4, [(0, 1), (1, 2), (2, 3), (3, 0)])
    assert g.max_degree == 2
    assert g.edges == ((0, 1), (0, 3), (1, 2), (2, 3))
    assert g.adjacency[0] == (1, 3)


def test_build_empty_graph():
    g = build_graph(3, [])
    assert g.max_degree == 0
    assert g.edges == ()


def test_build_rejects_bad_edges():
    with pytest.raises(GraphError, match="self-loop"):
        build_graph(2, [(0, 0)])
    with pytest.raises(GraphError, match="duplicate"):
        build_graph(3, [(0, 1), (1, 0)])
    with pytest.raises(GraphError, match="out of range"):
        build_graph(2, [(0, 5)])


def test_near_regular_hits_target_degree():
    part = gen_random_instance(8, 3, "near-regular", "random", seed=5)
    assert part.graph.max_degree == 3


def test_gadget_union_all_alice():
    part = gen_random_instance(4, 2, "gadget-union", "all-alice", seed=1)
    assert part.graph.max_degree == 2
    assert len(part.graph.edges) == 4
    assert set(part.owner) == {"A"}


def test_infeasible_parameters_error():
    with pytest.raises(GraphError):
        gen_random_instance(2, 5, "near-regular", "random", seed=0)


def test_generators_are_deterministic_in_seed():
    for model in ("bounded-uniform", "near-regular", "gadget-union"):
        for partition in ("random", "interleaved", "all-alice", "degree-split"):
            a = gen_random_instance(12, 3, model, partition, seed=9)
            b = gen_random_instance(12, 3, model, partition, seed=9)
            assert a.graph.edges == b.graph.edges
            assert a.owner == b.owner


@settings(max_examples=60, deadline=None)
@given(st.integers(2, 40), st.integers(1, 8), st.sampled_from(["bounded-uniform", "near-regular"]),
       st.sampled_from(["random", "interleaved", "all-alice", "degree-split"]),
       st.integers(0, 10_000))
def test_generated_instances_respect_degree_and_partition(n, delta, model, partition, seed):
    if delta > n - 1:
        delta = n - 1
    part = gen_random_instance(n, delta, model, partition, seed)
    assert part.graph.max_degree <= delta
    # Party neighborhoods are disjoint per vertex (each edge has one owner).
    adj_a = part.adjacency_of("A")
    adj_b = part.adjacency_of("B")
    for v in range(n):
        assert not set(adj_a[v]) & set(adj_b[v])
        assert sorted(adj_a[v] + adj_b[v]) == sorted(part.graph.adjacency[v])


def test_c4_gadget_bit_zero():
    part = gen_c4_gadget_instance("0")
    assert part.graph.edges == ((0, 1), (0, 2), (1, 3), (2, 3))
    assert part.graph.max_degree == 2


def test_c4_gadget_bit_one():
    part = gen_c4_gadget_instance("1")
    assert part.graph.edges == ((0, 1), (0, 3), (1, 2), (2, 3))


def test_c4_gadget_composes_per_bit():
    part = gen_c4_gadget_instance("01")
    assert part.graph.n == 8
    assert len(part.graph.edges) == 8
    first = {e for e in part.graph.edges if max(e) < 4}
    second = {(u - 4, v - 4) for u, v in part.graph.edges if min(e := (u, v)) >= 4}
    assert first == {(0, 1), (0, 2), (1, 3), (2, 3)}
    assert second == {(0, 1), (0, 3), (1, 2), (2, 3)}
    assert part.graph.max_degree == 2


def test_c4_gadget_rejects_bad_input():
    with pytest.raises(GraphError):
        gen_c4_gadget_instance("")
    with pytest.raises(GraphError):
        gen_c4_gadget_instance("012")


def test_zec_product_single_gadget():
    part = gen_zec_product_instance(1, seed=4)
    g = part.graph
    assert g.n == 9
    assert len(g.edges) == 4
    assert g.degree(0) == 2 and g.degree(1) == 2  # both hubs
    assert g.max_degree == 2
    assert len(part.edges_of("A")) == 2 and len(part.edges_of("B")) == 2


def test_zec_product_disjoint_union():
    part = gen_zec_product_instance(3, seed=4)
    assert part.graph.n == 27
    assert len(part.graph.edges) == 12
    assert part.graph.max_degree == 2


def test_verify_vertex_coloring_clean_and_violations():
    g = build_graph(4, [(0, 1), (1, 2), (2, 3), (3, 0)])
    assert verify_vertex_coloring(g, VertexColoring([0, 1, 0, 1]), 3) == []
    tri = build_graph(3, [(0, 1), (1, 2), (0, 2)])
    bad = verify_vertex_coloring(tri, VertexColoring([0, 0, 1]), 3)
    assert len(bad) == 1
    assert bad[0].kind == "edge-conflict" and bad[0].where == (0, 1)


def test_verify_vertex_coloring_k5_distinct():
    k5 = build_graph(5, [(i, j) for i in range(5) for j in range(i + 1, 5)])
    assert verify_vertex_coloring(k5, VertexColoring([0, 1, 2, 3, 4]), 5) == []
    assert verify_vertex_coloring(k5, VertexColoring([0, 1, 2, 3, 3]), 5) != []


def test_verify_edge_coloring():
    g = build_graph(4, [(0, 1), (1, 2), (2, 3), (3, 0)])
    colors = {(0, 1): 0, (1, 2): 1, (2, 3): 0, (0, 3): 1}
    coloring = EdgeColoring(colors, {e: "A" for e in colors})
    assert verify_edge_coloring(g, coloring, 3) == []

    path = build_graph(3, [(0, 1), (1, 2)])
    clash = EdgeColoring({(0, 1): 0, (1, 2): 0}, {(0, 1): "A", (1, 2): "A"})
    bad = verify_edge_coloring(path, clash, 3)
    assert any(v.kind == "vertex-conflict" and v.where == (1,) for v in bad)

    star = build_graph(4, [(0, 1), (0, 2), (0, 3)])
    ok = EdgeColoring({(0, 1): 0, (0, 2): 1, (0, 3): 2}, {e: "B" for e in star.edges})
    assert verify_edge_coloring(star, ok, 5) == []


def test_verify_edge_coloring_reporter_must_match_owner():
    part = gen_c4_gadget_instance("0")
    colors = {(0, 1): 0, (0, 2): 1, (1, 3): 1, (2, 3): 0}
    wrong = EdgeColoring(colors, {e: "B" for e in colors})
    bad = verify_edge_coloring(part, wrong, 3)
    assert len([v for v in bad if v.kind == "reporter"]) == 4


def test_graph_file_round_trip(tmp_path):
    part = gen_random_instance(10, 3, "near-regular", "degree-split", seed=3)
    path = tmp_path / "g.txt"
    write_graph_file(part, str(path))
    back = read_graph_file(str(path))
    assert back.graph.edges == part.graph.edges
    assert back.owner == part.owner
    assert back.graph.n == part.graph.n
