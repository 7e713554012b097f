import io
import json
from pathlib import Path

import networkx as nx
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from compbench.graph import (
    Graph,
    GraphFormatError,
    connected_components,
    degree,
    degree_sequence,
    from_edges,
    load_edge_list,
    load_manifest,
    permute_graph,
    remove_nodes,
    write_edge_list,
)
from oracles import complete, cycle, path, star, two_triangles


def test_load_two_edge_path():
    g = load_edge_list(io.StringIO("0 1\n1 2\n"))
    assert (g.num_nodes, g.num_edges) == (3, 2)


def test_load_drops_duplicates_and_self_loops():
    g = load_edge_list(io.StringIO("0 1\n1 0\n0 0\n"))
    assert (g.num_nodes, g.num_edges) == (2, 1)
    assert g.dropped_duplicates == 1
    assert g.dropped_self_loops == 1


def test_load_comments_and_labels():
    g = load_edge_list(io.StringIO("# c\na b\nb c\n% other comment\n\n"))
    assert (g.num_nodes, g.num_edges) == (3, 2)
    assert g.node_of_label() == {"a": 0, "b": 1, "c": 2}


def test_load_malformed_line_reports_line_number():
    with pytest.raises(GraphFormatError, match="line 2"):
        load_edge_list(io.StringIO("0 1\n1 2 3\n"))


@pytest.mark.parametrize("text", ["", "# only a comment\n", "\n\n"])
def test_load_empty_input(text):
    with pytest.raises(GraphFormatError, match="no edges"):
        load_edge_list(io.StringIO(text))


def test_only_self_loops_gives_edgeless_graph():
    g = load_edge_list(io.StringIO("a a\n"))
    assert (g.num_nodes, g.num_edges, g.dropped_self_loops) == (1, 0, 1)


def test_round_trip_through_text():
    g = load_edge_list(io.StringIO("x y\ny z\nz x\nz w\n"))
    buf = io.StringIO()
    write_edge_list(g, buf)
    buf.seek(0)
    again = load_edge_list(buf)
    assert again == g
    assert again.labels() == g.labels()


def test_csr_invariants_rejected():
    with pytest.raises(ValueError):
        Graph(np.array([0, 1, 1]), np.array([1]))  # one direction only
    with pytest.raises(ValueError):
        Graph(np.array([0, 1]), np.array([0]))  # self-loop
    with pytest.raises(ValueError):
        Graph(np.array([0, 2, 3, 4]), np.array([2, 1, 0, 0]))  # unsorted row


def test_arrays_are_read_only():
    g = path(3)
    with pytest.raises(ValueError):
        g.indices[0] = 2


def test_degrees():
    assert degree(complete(3), 0) == 2
    assert degree(star(5), 0) == 5
    p = path(3)
    assert degree(p, 1) == 2
    assert degree(p, 0) == degree(p, 2) == 1
    assert degree_sequence(p) == [1, 2, 1]
    with pytest.raises(IndexError):
        degree(p, 3)


def test_components_examples():
    cc = connected_components(two_triangles())
    assert cc.component_sizes.tolist() == [3, 3]
    assert cc.component_of.tolist() == [0, 0, 0, 1, 1, 1]
    cc = connected_components(from_edges(4, []))
    assert cc.component_sizes.tolist() == [1, 1, 1, 1]
    cc = connected_components(cycle(4))
    assert cc.component_sizes.tolist() == [4]
    assert cc.giant_component_id == 0


def test_remove_nodes_examples():
    g, surv = remove_nodes(star(5), {0})
    assert (g.num_nodes, g.num_edges) == (5, 0)
    assert surv.tolist() == [-1, 0, 1, 2, 3, 4]
    k3 = complete(3)
    g, surv = remove_nodes(k3, set())
    assert g == k3 and surv.tolist() == [0, 1, 2]
    g, _ = remove_nodes(cycle(4), {0})
    assert g == path(3)
    with pytest.raises(IndexError):
        remove_nodes(k3, {3})


def test_permute_examples():
    p = path(3)
    assert permute_graph(p, [0, 1, 2]) == p
    assert permute_graph(p, [2, 1, 0]) == p
    with pytest.raises(ValueError):
        permute_graph(p, [0, 0, 1])


def test_manifest_relative_paths(tmp_path):
    (tmp_path / "m.json").write_text(json.dumps({"facebook": "fb.txt", "abs": "/x/y.txt"}))
    got = load_manifest(tmp_path / "m.json")
    assert got == {"facebook": tmp_path / "fb.txt", "abs": Path("/x/y.txt")}


edge_lists = st.integers(1, 14).flatmap(
    lambda n: st.tuples(st.just(n), st.lists(st.tuples(st.integers(0, n - 1), st.integers(0, n - 1)),
                                             max_size=40)))


@settings(max_examples=100, deadline=None)
@given(edge_lists)
def test_components_match_networkx(data):
    n, edges = data
    g = from_edges(n, edges)
    ref = nx.Graph()
    ref.add_nodes_from(range(n))
    ref.add_edges_from((u, v) for u, v in edges if u != v)
    assert g.num_edges == ref.number_of_edges()
    cc = connected_components(g)
    ours = sorted(sorted(np.flatnonzero(cc.component_of == c).tolist())
                  for c in range(cc.num_components))
    theirs = sorted(sorted(c) for c in nx.connected_components(ref))
    assert ours == theirs
    assert cc.component_sizes[cc.giant_component_id] == max(len(c) for c in theirs)


@settings(max_examples=100, deadline=None)
@given(edge_lists, st.randoms(use_true_random=False))
def test_permute_then_inverse_is_identity(data, rnd):
    n, edges = data
    g = from_edges(n, edges)
    pi = list(range(n))
    rnd.shuffle(pi)
    inv = np.empty(n, dtype=np.int64)
    inv[pi] = np.arange(n)
    h = permute_graph(g, pi)
    assert h.num_edges == g.num_edges
    assert {(min(pi[u], pi[v]), max(pi[u], pi[v])) for u, v in g.edges().tolist()} == \
        {tuple(e) for e in h.edges().tolist()}
    assert permute_graph(h, inv) == g


@settings(max_examples=100, deadline=None)
@given(edge_lists, st.sets(st.integers(0, 13)))
def test_remove_nodes_matches_networkx(data, drop):
    n, edges = data
    drop = {d for d in drop if d < n}
    g = from_edges(n, edges)
    h, surv = remove_nodes(g, drop)
    ref = nx.Graph()
    ref.add_nodes_from(range(n))
    ref.add_edges_from((u, v) for u, v in edges if u != v)
    ref.remove_nodes_from(drop)
    assert h.num_nodes == ref.number_of_nodes()
    back = {int(surv[u]): u for u in range(n) if surv[u] >= 0}
    assert {(back[u], back[v]) for u, v in h.edges().tolist()} == \
        {(min(e), max(e)) for e in ref.edges()}
