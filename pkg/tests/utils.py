import itertools
import random
from typing import List, Sequence

from graph_core import Graph, Tree, relabel


def path(n: int) -> Tree:
    """Path 0-1-...-(n-1)."""
    return Tree(n, frozenset((i, i + 1) for i in range(n - 1)))


def star(leaves: int) -> Tree:
    """Center 0 with the given number of leaves."""
    return Tree(leaves + 1, frozenset((0, i) for i in range(1, leaves + 1)))


def spider(legs: Sequence[int]) -> Tree:
    """Center 0 with legs of the given lengths."""
    edges = []
    count = 1
    for length in legs:
        previous = 0
        for _ in range(length):
            edges.append((previous, count))
            previous = count
            count += 1
    return Tree(count, frozenset(edges))


def caterpillar(pendants: Sequence[int]) -> Tree:
    """Spine 0..k-1 with pendants[i] leaves hanging from spine vertex i."""
    spine = len(pendants)
    edges = [(i, i + 1) for i in range(spine - 1)]
    count = spine
    for i, leaves in enumerate(pendants):
        for _ in range(leaves):
            edges.append((i, count))
            count += 1
    return Tree(count, frozenset(edges))


def double_star(a: int, b: int) -> Tree:
    """Two adjacent centers carrying a and b leaves."""
    return caterpillar([a, b])


def triangle() -> Graph:
    return Graph(3, frozenset({(0, 1), (1, 2), (0, 2)}))


def triangle_with_pendant() -> Graph:
    """Triangle 0-1-2 with pendant vertex 3 attached to 0."""
    return Graph(4, frozenset({(0, 1), (1, 2), (0, 2), (0, 3)}))


def shuffled(g: Graph, seed: int = 0) -> Graph:
    permutation = list(range(g.p))
    random.Random(seed).shuffle(permutation)
    return relabel(g, permutation)


def brute_force_isomorphic(t1: Graph, t2: Graph) -> bool:
    """Search every vertex bijection for one that maps edges onto edges."""
    if t1.p != t2.p or t1.g != t2.g:
        return False
    if sorted(len(n) for n in t1.neighbors) != sorted(len(n) for n in t2.neighbors):
        return False
    for permutation in itertools.permutations(range(t1.p)):
        if all(tuple(sorted((permutation[u], permutation[v]))) in t2.edges for u, v in t1.edges):
            return True
    return False


def expanded_xs(sample) -> List[float]:
    return [pt.x for pt in sample.eigenvalues for _ in range(pt.multiplicity)]
