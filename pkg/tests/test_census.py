import itertools

import networkx as nx
import numpy as np
import pytest

from pathhom.core.digraph import Digraph
from pathhom.errors import CensusLimitError, UsageError
from pathhom.services.census import (
    CensusQuery,
    Family,
    canonical_code,
    canonical_form,
    class_codes,
    decode,
    enumerate_classes,
    parse_filter,
    run_census,
)
from oracles import random_digraphs


def _nx(d: Digraph) -> nx.DiGraph:
    graph = nx.DiGraph()
    graph.add_nodes_from(range(d.n))
    graph.add_edges_from(d.arcs)
    return graph


@pytest.mark.parametrize("vertices,expected", [(1, 1), (2, 3), (3, 16), (4, 218)])
def test_digraph_class_counts(vertices, expected):
    assert len(class_codes("digraph", vertices)) == expected


@pytest.mark.parametrize("vertices,expected", [(1, 1), (2, 2), (3, 6), (4, 31), (5, 302), (6, 5984)])
def test_dag_class_counts(vertices, expected):
    assert len(class_codes("dag", vertices)) == expected


@pytest.mark.parametrize("vertices,expected", [(2, 2), (3, 4), (4, 11), (5, 34), (6, 156)])
def test_undirected_class_counts(vertices, expected):
    assert len(class_codes("undirected", vertices)) == expected


def test_classes_are_pairwise_non_isomorphic():
    graphs = [_nx(d) for d in enumerate_classes("digraph", 3)]
    for a, b in itertools.combinations(graphs, 2):
        assert not nx.is_isomorphic(a, b)


def test_family_members_have_the_family_shape():
    for d in enumerate_classes("dag", 4):
        assert nx.is_directed_acyclic_graph(_nx(d))
    for d in enumerate_classes("undirected", 4):
        assert all(d.has_arc(v, u) for u, v in d.arcs)


def test_canonical_code_is_isomorphism_invariant():
    rng = np.random.default_rng(9)
    for d in random_digraphs(40, 5, 0.4, seed=9):
        perm = rng.permutation(d.n).tolist()
        relabeled = Digraph.build(d.n, ((perm[u], perm[v]) for u, v in d.arcs))
        assert canonical_code(relabeled) == canonical_code(d)
        form = canonical_form(d)
        assert nx.is_isomorphic(_nx(form), _nx(d))
        assert canonical_code(form) == canonical_code(d)


def test_codes_decode_to_themselves():
    for code in class_codes("digraph", 3):
        assert canonical_code(decode(code, 3)) == code


def test_first_pair_is_most_significant():
    # Pairs in row-major order for n = 3: (0,1) (0,2) (1,0) (1,2) (2,0) (2,1)
    assert decode(0b100000, 3).arcs == frozenset({(0, 1)})
    assert decode(0b000001, 3).arcs == frozenset({(2, 1)})


def test_size_limits():
    with pytest.raises(CensusLimitError) as exc:
        class_codes("digraph", 6)
    assert exc.value.exit_code == 1
    assert exc.value.details["limit"] == 5
    with pytest.raises(CensusLimitError):
        CensusQuery("dag", 8).validated()
    with pytest.raises(UsageError):
        class_codes("dag", 0)


def test_canonical_code_refuses_codes_wider_than_int64():
    with pytest.raises(UsageError) as exc:
        canonical_code(Digraph.build(9, [(0, 1), (1, 0)]))
    assert exc.value.error_code == "CANONICAL_SIZE_OVER_LIMIT"
    assert exc.value.details["limit"] == 8


def test_unknown_family():
    with pytest.raises(UsageError):
        Family.parse("tournament")


def test_parse_filter():
    keep = parse_filter("b2>0", 2)
    assert keep((0, 0, 1))
    assert not keep((0, 1, 0))
    both = parse_filter("b2 > 0 and b1 = 0", 2)
    assert both((0, 0, 2))
    assert not both((0, 1, 2))
    assert parse_filter("b1>=1,b2<1", 2)((0, 1, 0))
    assert parse_filter(None, 2)((5, 5, 5))


@pytest.mark.parametrize("expression", ["b3>0", "x>1", "b2>>0"])
def test_parse_filter_errors(expression):
    with pytest.raises(UsageError):
        parse_filter(expression, 2)


def test_invalid_census_dimension():
    with pytest.raises(UsageError):
        CensusQuery("digraph", 3, max_dim=5).validated()


def test_run_census_small():
    result = run_census(CensusQuery("digraph", 3, max_dim=2), threads=1)
    assert result.total_classes == 16
    assert len(result.matches) == 16
    assert sum(result.histogram.values()) == 16
    assert list(result.histogram) == sorted(result.histogram)
    # The directed 2-cycle plus an isolated vertex.
    assert result.histogram[(1, 1, 0)] >= 1
    assert [m.code for m in result.matches] == sorted(m.code for m in result.matches)


def test_run_census_filter_and_transpose_check():
    result = run_census(CensusQuery("dag", 4, max_dim=2, filter="b1>0"), threads=1, transpose_check=True)
    assert result.transpose_defects == ()
    assert all(m.reduced_betti[1] > 0 for m in result.matches)
    # The square hole is a DAG with a one-dimensional hole.
    hole = canonical_code(Digraph.build(4, [(0, 1), (0, 2), (3, 1), (3, 2)]))
    assert hole in {m.code for m in result.matches}


def test_run_census_worker_count_does_not_matter():
    query = CensusQuery("undirected", 5, max_dim=2)
    assert run_census(query, threads=1) == run_census(query, threads=2)


@pytest.mark.slow
def test_digraphs_on_four_vertices_with_second_homology():
    result = run_census(CensusQuery("digraph", 4, max_dim=2, filter="b2>0"), threads=1)
    assert result.total_classes == 218
    assert len(result.matches) == 6
    assert all(m.reduced_betti == (0, 0, 1) for m in result.matches)


@pytest.mark.slow
def test_digraphs_on_four_vertices_with_third_homology():
    result = run_census(CensusQuery("digraph", 4, max_dim=3, filter="b3>0"), threads=1)
    assert len(result.matches) == 5
    assert all(m.reduced_betti == (0, 0, 0, 1) for m in result.matches)


@pytest.mark.slow
def test_dags_on_six_vertices_with_second_homology():
    result = run_census(CensusQuery("dag", 6, max_dim=2, filter="b2>0"))
    assert result.total_classes == 5984
    assert len(result.matches) == 17


@pytest.mark.slow
def test_undirected_on_six_vertices_with_second_homology():
    result = run_census(CensusQuery("undirected", 6, max_dim=2, filter="b2>0"))
    assert result.total_classes == 156
    assert len(result.matches) == 17
