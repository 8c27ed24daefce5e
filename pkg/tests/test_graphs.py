"""Directed-graph layer: constructors, queries, partitions, design condition."""

import itertools

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

import limoctrl as lc


def test_from_adjacency_orientation():
    # adj[i][j] = 1 encodes the edge j+1 -> i+1.
    g = lc.from_adjacency([[1, 0], [1, 1]])
    assert g.n == 2
    assert g.has_edge(1, 1)
    assert g.has_edge(1, 2)
    assert g.has_edge(2, 2)
    assert not g.has_edge(2, 1)
    assert g.edges() == [(1, 1), (1, 2), (2, 2)]


def test_from_adjacency_rejects_non_square():
    with pytest.raises(lc.NonSquareError):
        lc.from_adjacency([[1, 0, 0], [0, 1, 0]])


def test_from_adjacency_rejects_empty():
    with pytest.raises(lc.NonSquareError, match="square and nonempty"):
        lc.from_adjacency(np.zeros((0, 0)))


def test_from_adjacency_rejects_non_binary():
    with pytest.raises(lc.NonBinaryEntryError) as exc:
        lc.from_adjacency([[1, 0.5], [0, 1]])
    assert "(1,2)" in str(exc.value)


def test_from_adjacency_copies_and_freezes():
    mask = np.eye(2, dtype=np.int8)
    g = lc.from_adjacency(mask)
    mask[0, 1] = 1
    assert not g.has_edge(2, 1)
    with pytest.raises(ValueError):
        g.adj[0, 1] = 1


def test_from_edge_list_round_trip():
    g = lc.from_edge_list(3, [(1, 2), (2, 3), (3, 3), (1, 1)])
    assert set(g.edges()) == {(1, 2), (2, 3), (3, 3), (1, 1)}
    again = lc.graph_from_dict(lc.graph_to_dict(g))
    assert again.n == g.n
    assert again.edges() == g.edges()


def test_from_edge_list_rejects_out_of_range():
    with pytest.raises(lc.DimensionMismatchError):
        lc.from_edge_list(2, [(1, 3)])
    with pytest.raises(lc.DimensionMismatchError):
        lc.from_edge_list(2, [(0, 1)])


def test_canned_graphs():
    assert lc.self_loops_only(3).edges() == [(1, 1), (2, 2), (3, 3)]
    assert len(lc.complete_graph(3).edges()) == 9
    assert lc.complete_graph(2).has_all_self_loops()
    assert not lc.from_edge_list(2, [(1, 1), (1, 2)]).has_all_self_loops()


def test_sinks_ignore_self_loops():
    g = lc.from_edge_list(3, [(1, 1), (2, 2), (3, 3), (1, 2)])
    # 1 reaches 2, so only 2 and 3 lack outgoing cross edges.
    assert lc.sinks(g) == {2, 3}
    assert lc.sinks(lc.complete_graph(3)) == set()
    assert lc.sinks(lc.self_loops_only(2)) == {1, 2}


def test_isolated_nodes():
    g = lc.from_edge_list(3, [(1, 2), (3, 3)])
    assert lc.isolated_nodes(g) == {3}
    assert lc.isolated_nodes(lc.complete_graph(3)) == set()
    assert lc.isolated_nodes(lc.self_loops_only(2)) == {1, 2}


def test_is_supergraph():
    small = lc.from_edge_list(3, [(1, 2), (2, 3)])
    assert lc.is_supergraph(lc.complete_graph(3), small)
    assert lc.is_supergraph(small, small)
    assert not lc.is_supergraph(lc.self_loops_only(3), small)
    with pytest.raises(lc.DimensionMismatchError):
        lc.is_supergraph(lc.complete_graph(2), small)


def test_sink_partition_orders_nonsinks_first():
    g = lc.from_edge_list(2, [(2, 1)])
    part = lc.sink_partition(g)
    assert part.permutation == (2, 1)
    assert part.c == 1
    assert part.nonsink_block.shape == (1, 1) and part.nonsink_block[0, 0] == 0
    assert part.cross_block[0, 0] == 1
    assert part.sink_block[0, 0] == 0


def test_sink_partition_blocks_match_adjacency():
    g = lc.from_edge_list(4, [(1, 1), (2, 2), (3, 3), (4, 4),
                              (1, 2), (2, 1), (1, 3), (2, 4)])
    part = lc.sink_partition(g)
    assert part.permutation == (1, 2, 3, 4)
    assert part.c == 2
    assert np.array_equal(part.nonsink_block, [[1, 1], [1, 1]])
    assert np.array_equal(part.cross_block, [[1, 0], [0, 1]])
    assert np.array_equal(part.sink_block, np.eye(2, dtype=np.int8))
    # sink rows never reach other vertices, so the sink block is diagonal
    assert np.array_equal(part.sink_block, np.diag(np.diag(part.sink_block)))


def test_design_condition_witness():
    chain = lc.from_edge_list(3, [(1, 1), (2, 2), (3, 3), (1, 2), (2, 3)])
    found, witness = lc.design_condition_applies(chain, lc.self_loops_only(3))
    assert found
    assert witness == (1, 2, 3)


def test_design_condition_negative_cases():
    chain = lc.from_edge_list(3, [(1, 2), (2, 3)])
    found, witness = lc.design_condition_applies(chain, lc.complete_graph(3))
    assert not found and witness is None
    found, witness = lc.design_condition_applies(
        lc.self_loops_only(3), lc.self_loops_only(3))
    assert not found and witness is None


def test_design_condition_requires_self_loops():
    chain = lc.from_edge_list(3, [(1, 2), (2, 3)])
    partial = lc.from_edge_list(3, [(1, 1), (2, 2)])
    with pytest.raises(lc.MissingSelfLoopError, match="vertex 3"):
        lc.design_condition_applies(chain, partial)


def test_design_condition_dimension_mismatch():
    with pytest.raises(lc.DimensionMismatchError):
        lc.design_condition_applies(lc.complete_graph(2), lc.complete_graph(3))


def _condition_oracle(g_p, g_c):
    """Brute-force scan used only to cross-check the library predicate."""
    p_edges = set(g_p.edges())
    c_edges = set(g_c.edges())
    hits = [t for t in itertools.product(range(1, g_p.n + 1), repeat=3)
            if len(set(t)) == 3
            and (t[0], t[1]) in p_edges
            and (t[1], t[2]) in p_edges
            and (t[2], t[1]) not in c_edges]
    return (True, min(hits)) if hits else (False, None)


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 2 ** 16 - 1), st.integers(0, 2 ** 16 - 1))
def test_design_condition_matches_oracle(bits_p, bits_c):
    n = 4
    mask_p = np.array(
        [[(bits_p >> (i * n + j)) & 1 for j in range(n)] for i in range(n)],
        dtype=bool)
    mask_c = np.array(
        [[(bits_c >> (i * n + j)) & 1 for j in range(n)] for i in range(n)],
        dtype=bool)
    np.fill_diagonal(mask_c, True)
    g_p = lc.from_adjacency(mask_p.astype(int))
    g_c = lc.from_adjacency(mask_c.astype(int))
    assert lc.design_condition_applies(g_p, g_c) == _condition_oracle(g_p, g_c)


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 5), st.integers(0, 2 ** 25 - 1))
def test_supergraph_and_round_trip_properties(n, bits):
    mask = np.array(
        [[(bits >> (i * n + j)) & 1 for j in range(n)] for i in range(n)])
    g = lc.from_adjacency(mask)
    assert lc.is_supergraph(lc.complete_graph(n), g)
    assert lc.is_supergraph(g, g)
    assert lc.graph_from_dict(lc.graph_to_dict(g)).edges() == g.edges()
    part = lc.sink_partition(g)
    assert sorted(part.permutation) == list(range(1, n + 1))
    assert part.c == len(lc.sinks(g))
