import pytest

from pathhom.core.digraph import (
    Digraph,
    VertexMap,
    from_arcs,
    induced_subgraph,
    prune_limbs,
    prune_limbs_with_map,
    transpose,
    weak_components,
)
from oracles import random_digraphs


def test_from_arcs_sorts_labels_and_strips_loops():
    d, vmap = from_arcs([(3, 1), (1, 3), (2, 2), (10, 3), (3, 1)])

    assert vmap.backward == (1, 2, 3, 10)
    assert d.n == 4
    assert d.arcs == frozenset({(2, 0), (0, 2), (3, 2)})
    assert vmap.index(10) == 3
    assert vmap.labels((0, 2)) == (1, 3)


def test_from_arcs_orders_integers_before_text():
    _, vmap = from_arcs([("b", 1), (2, "a")])
    assert vmap.backward == (1, 2, "a", "b")


def test_digraph_rejects_loops_and_bad_endpoints():
    with pytest.raises(ValueError):
        Digraph(2, frozenset({(0, 0)}))
    with pytest.raises(ValueError):
        Digraph(2, frozenset({(0, 5)}))
    assert Digraph.build(2, [(0, 0), (0, 1)]).arcs == frozenset({(0, 1)})


def test_degrees():
    d = Digraph.build(3, [(0, 1), (1, 0), (0, 2)])
    assert d.out_degree(0) == 2
    assert d.in_degree(0) == 1
    assert d.degree(0) == 3
    assert d.successors(0) == (1, 2)
    assert d.predecessors(2) == (0,)


def test_vertex_map_rejects_duplicates():
    with pytest.raises(ValueError):
        VertexMap(("a", "a"))


def test_vertex_map_through_composes():
    inner = VertexMap((1, 3))
    outer = VertexMap(("w", "x", "y", "z"))
    assert inner.through(outer).backward == ("x", "z")


def test_induced_subgraph_reindexes():
    d = Digraph.build(4, [(0, 1), (1, 3), (3, 0), (2, 1)])
    sub, vmap = induced_subgraph(d, [3, 1])
    assert vmap.backward == (1, 3)
    assert sub.arcs == frozenset({(0, 1)})


def test_weak_components_ordered_by_smallest_vertex():
    d = Digraph.build(6, [(4, 3), (2, 3), (1, 0)])
    parts = weak_components(d)

    assert [vmap.backward for _, vmap in parts] == [(0, 1), (2, 3, 4), (5,)]
    assert [len(component.arcs) for component, _ in parts] == [1, 2, 0]


def test_prune_collapses_tree_to_one_vertex():
    path = Digraph.build(3, [(0, 1), (1, 2)])
    star = Digraph.build(5, [(0, 1), (2, 0), (0, 3), (4, 0)])
    for tree in (path, star):
        pruned = prune_limbs(tree)
        assert pruned.n == 1
        assert not pruned.arcs


def test_prune_keeps_cycles_and_isolated_vertices():
    # 2-cycle 0 <-> 1 with the limb 1 -> 2 -> 3, plus isolated vertex 4
    d = Digraph.build(5, [(0, 1), (1, 0), (1, 2), (2, 3)])
    pruned, vmap = prune_limbs_with_map(d)

    assert vmap.backward == (0, 1, 4)
    assert pruned.arcs == frozenset({(0, 1), (1, 0)})


def test_prune_is_idempotent():
    for d in random_digraphs(50, 7, 0.2):
        once = prune_limbs(d)
        assert prune_limbs(once) == once


def test_transpose_reverses_arcs():
    d = Digraph.build(3, [(0, 1), (1, 2)])
    assert transpose(d).arcs == frozenset({(1, 0), (2, 1)})
    assert transpose(transpose(d)) == d
