import itertools

import numpy as np
import pytest

from data_models import BoundaryCondition, CanonicalCode
from exceptions import EdgeListParseError, EmptyInteriorError, GraphValidationError
from graph_core import (
    BoundaryConfig, Graph, Tree, as_tree, canonical_code, degrees, format_edge_list,
    interior_subgraph, is_isomorphic, normalized_adjacency, parse_edge_list,
    pendant_vertices, relabel, tree_centers, tree_from_code
)
from tree_enum import enumerate_trees
from tests.utils import brute_force_isomorphic, path, shuffled, spider, star


def test_degrees_of_small_trees():
    """Degrees of paths, stars and spiders"""
    assert degrees(path(3)) == [1, 2, 1]
    assert degrees(star(3)) == [3, 1, 1, 1]
    assert sorted(degrees(spider([1, 1, 3]))) == [1, 1, 1, 2, 2, 3]


def test_degree_sum_is_twice_edge_count():
    for p in range(2, 9):
        for tree, _ in enumerate_trees(p):
            assert sum(degrees(tree)) == 2 * tree.g


def test_pendant_vertices():
    assert pendant_vertices(path(3)) == {0, 2}
    assert pendant_vertices(star(3)) == {1, 2, 3}
    assert pendant_vertices(path(2)) == {0, 1}


def test_every_tree_has_two_pendants():
    for p in range(2, 10):
        for tree, _ in enumerate_trees(p):
            assert tree.g == p - 1
            assert len(pendant_vertices(tree)) >= 2


def test_graph_rejects_disconnected_input():
    with pytest.raises(GraphValidationError):
        Graph(4, frozenset({(0, 1), (2, 3)}))


def test_graph_rejects_loops_and_out_of_range():
    with pytest.raises(GraphValidationError):
        Graph(2, frozenset({(0, 0), (0, 1)}))
    with pytest.raises(GraphValidationError):
        Graph(2, frozenset({(0, 2)}))


def test_from_edges_rejects_parallel_edges():
    with pytest.raises(GraphValidationError):
        Graph.from_edges(3, [(0, 1), (1, 0), (1, 2)])


def test_tree_needs_p_minus_one_edges():
    with pytest.raises(GraphValidationError):
        Tree(3, frozenset({(0, 1), (1, 2), (0, 2)}))
    with pytest.raises(GraphValidationError):
        as_tree(Graph(3, frozenset({(0, 1), (1, 2), (0, 2)})))


def test_interior_subgraph_of_p3():
    """Removing both ends of P3 leaves one vertex of weight 2"""
    tree = path(3)
    sub = interior_subgraph(tree, BoundaryConfig.all_dirichlet(tree))
    assert sub.vertices == (1,)
    assert sub.weights == (2,)
    assert sub.adjacency == ((0,),)


def test_interior_subgraph_of_star_and_p4():
    sub = interior_subgraph(star(3), BoundaryConfig.all_dirichlet(star(3)))
    assert sub.vertices == (0,)
    assert sub.weights == (3,)

    sub = interior_subgraph(path(4), BoundaryConfig.all_dirichlet(path(4)))
    assert sub.vertices == (1, 2)
    assert sub.weights == (2, 2)
    assert sub.adjacency == ((0, 1), (1, 0))


def test_interior_weights_dominate_subgraph_degrees():
    """Strict inequality exactly at former attachment points"""
    for p in range(3, 9):
        for tree, _ in enumerate_trees(p):
            boundary = BoundaryConfig.all_dirichlet(tree)
            sub = interior_subgraph(tree, boundary)
            for vertex, weight, degree in zip(sub.vertices, sub.weights, sub.subgraph_degrees):
                attached = any(w in boundary.dirichlet_set for w in tree.neighbors[vertex])
                assert weight >= degree
                assert (weight > degree) == attached


def test_empty_interior_for_p2():
    tree = path(2)
    with pytest.raises(EmptyInteriorError):
        interior_subgraph(tree, BoundaryConfig.all_dirichlet(tree))


def test_boundary_config_parsing():
    tree = path(4)
    assert BoundaryConfig.parse(tree, "all").dirichlet_set == {0, 3}
    assert BoundaryConfig.parse(tree, "none").r == 0
    config = BoundaryConfig.parse(tree, "0")
    assert config.r == 1
    assert config.condition_at(0) == BoundaryCondition.DIRICHLET
    assert config.condition_at(3) == BoundaryCondition.NEUMANN
    with pytest.raises(GraphValidationError):
        BoundaryConfig.parse(tree, "1")
    with pytest.raises(GraphValidationError):
        BoundaryConfig.parse(tree, "zero")


def test_canonical_code_is_relabel_invariant_on_p3():
    codes = {canonical_code(relabel(path(3), list(perm))) for perm in itertools.permutations(range(3))}
    assert len(codes) == 1


def test_canonical_code_separates_small_trees():
    assert canonical_code(star(3)) != canonical_code(path(4))
    # The two 6-vertex trees with three pendants
    assert canonical_code(spider([1, 1, 3])) != canonical_code(spider([2, 2, 1]))


def test_is_isomorphic():
    assert is_isomorphic(path(4), shuffled(path(4), seed=3))
    assert not is_isomorphic(path(4), star(3))
    assert not is_isomorphic(spider([2, 2, 1]), spider([3, 1, 1]))


def test_codes_agree_with_brute_force_isomorphism():
    """Code equality matches an exhaustive bijection search for p <= 7"""
    for p in range(2, 8):
        trees = [tree for tree, _ in enumerate_trees(p)]
        for tree in trees:
            other = shuffled(tree, seed=p)
            assert canonical_code(other) == canonical_code(tree)
            assert brute_force_isomorphic(tree, other)
        for first, second in itertools.combinations(trees, 2):
            assert canonical_code(first) != canonical_code(second)
            assert not brute_force_isomorphic(first, second)


def test_codes_are_invariant_under_random_relabeling():
    for p in range(8, 10):
        for tree, code in enumerate_trees(p):
            for seed in range(3):
                assert canonical_code(shuffled(tree, seed)) == code


def test_tree_from_code_round_trip():
    for p in range(1, 9):
        for tree, code in enumerate_trees(p):
            rebuilt = tree_from_code(code)
            assert rebuilt.p == p
            assert canonical_code(rebuilt) == code


def test_tree_centers():
    assert tree_centers(path(5)) == [2]
    assert tree_centers(path(4)) == [1, 2]
    assert tree_centers(star(4)) == [0]


def test_canonical_code_validation():
    with pytest.raises(ValueError):
        CanonicalCode("(()")
    with pytest.raises(ValueError):
        CanonicalCode(")(")
    assert CanonicalCode("(()())").p == 3


def test_normalized_adjacency():
    assert np.allclose(normalized_adjacency(path(2)), [[0, 1], [1, 0]])
    p3 = normalized_adjacency(path(3))
    assert p3[0, 1] == pytest.approx(1 / np.sqrt(2), abs=1e-12)
    assert np.allclose(p3, p3.T)
    s3 = normalized_adjacency(star(3))
    assert s3[0, 2] == pytest.approx(1 / np.sqrt(3), abs=1e-12)
    assert s3[1, 2] == 0


def test_parse_edge_list():
    text = "# P3\np 3\n0 1\n1 2  # middle\n"
    graph = parse_edge_list(text)
    assert isinstance(graph, Tree)
    assert graph.sorted_edges == [(0, 1), (1, 2)]
    assert parse_edge_list(format_edge_list(graph)) == graph


def test_parse_edge_list_keeps_graphs_with_cycles():
    graph = parse_edge_list("p 3\n0 1\n1 2\n2 0\n")
    assert not isinstance(graph, Tree)
    assert graph.g == 3


def test_parse_edge_list_errors():
    with pytest.raises(EdgeListParseError):
        parse_edge_list("p 3\n0 1\n1 0\n1 2\n")
    with pytest.raises(EdgeListParseError):
        parse_edge_list("p 3\n0 1\n1 3\n")
    with pytest.raises(EdgeListParseError):
        parse_edge_list("vertices 3\n0 1\n")
    with pytest.raises(EdgeListParseError):
        parse_edge_list("p 3\n0 1 2\n")
    with pytest.raises(EdgeListParseError):
        parse_edge_list("")
    with pytest.raises(GraphValidationError):
        parse_edge_list("p 4\n0 1\n2 3\n")
