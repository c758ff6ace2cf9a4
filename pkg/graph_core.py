"""
Graph and tree representations for equilateral quantum graphs.
Provides degrees, pendant detection, interior-subgraph extraction with
original-degree bookkeeping, canonical tree codes and the edge-list codec.
"""

from dataclasses import dataclass
from functools import cached_property
from typing import Dict, FrozenSet, Iterable, List, Sequence, Tuple

import networkx as nx
import numpy as np

from data_models import BoundaryCondition, CanonicalCode
from exceptions import EdgeListParseError, EmptyInteriorError, GraphValidationError
from logging_config import get_logger

logger = get_logger('graph_core')

Edge = Tuple[int, int]


def _edge(u: int, v: int) -> Edge:
    return (u, v) if u < v else (v, u)


@dataclass(frozen=True)
class Graph:
    """Simple connected graph on vertices 0..p-1."""
    p: int
    edges: FrozenSet[Edge]

    def __post_init__(self):
        if self.p < 1:
            raise GraphValidationError("A graph needs at least one vertex")
        normalized = set()
        for u, v in self.edges:
            if not (0 <= u < self.p and 0 <= v < self.p):
                raise GraphValidationError(f"Edge ({u}, {v}) is out of range for p={self.p}")
            if u == v:
                raise GraphValidationError(f"Loop at vertex {u}")
            normalized.add(_edge(u, v))
        object.__setattr__(self, "edges", frozenset(normalized))
        if not nx.is_connected(self.to_networkx()):
            raise GraphValidationError("Graph is not connected")

    @classmethod
    def from_edges(cls, p: int, pairs: Iterable[Sequence[int]]):
        """Build from a pair list, rejecting parallel edges."""
        seen = set()
        for u, v in pairs:
            key = _edge(int(u), int(v))
            if key in seen:
                raise GraphValidationError(f"Duplicate edge {key}")
            seen.add(key)
        return cls(p, frozenset(seen))

    @property
    def g(self) -> int:
        """Edge count."""
        return len(self.edges)

    @cached_property
    def neighbors(self) -> Tuple[Tuple[int, ...], ...]:
        adjacent: List[List[int]] = [[] for _ in range(self.p)]
        for u, v in self.edges:
            adjacent[u].append(v)
            adjacent[v].append(u)
        return tuple(tuple(sorted(a)) for a in adjacent)

    @property
    def sorted_edges(self) -> List[Edge]:
        return sorted(self.edges)

    def adjacency_matrix(self) -> np.ndarray:
        matrix = np.zeros((self.p, self.p), dtype=int)
        for u, v in self.edges:
            matrix[u, v] = matrix[v, u] = 1
        return matrix

    def to_networkx(self) -> nx.Graph:
        graph = nx.Graph()
        graph.add_nodes_from(range(self.p))
        graph.add_edges_from(self.edges)
        return graph


@dataclass(frozen=True)
class Tree(Graph):
    """Connected graph with p - 1 edges."""

    def __post_init__(self):
        super().__post_init__()
        if len(self.edges) != self.p - 1:
            raise GraphValidationError(f"A tree on {self.p} vertices has {self.p - 1} edges, got {len(self.edges)}")


@dataclass(frozen=True)
class BoundaryConfig:
    """Pendant vertices carrying Dirichlet conditions; other pendants are Neumann."""
    dirichlet_set: FrozenSet[int] = frozenset()

    def __post_init__(self):
        object.__setattr__(self, "dirichlet_set", frozenset(int(v) for v in self.dirichlet_set))

    @property
    def r(self) -> int:
        return len(self.dirichlet_set)

    @classmethod
    def all_dirichlet(cls, g: Graph) -> 'BoundaryConfig':
        return cls(frozenset(pendant_vertices(g)))

    @classmethod
    def all_neumann(cls) -> 'BoundaryConfig':
        return cls(frozenset())

    @classmethod
    def parse(cls, g: Graph, text: str) -> 'BoundaryConfig':
        """Read ``all``, ``none`` or a comma-separated vertex list."""
        value = text.strip().lower()
        if value == "all":
            return cls.all_dirichlet(g)
        if value in ("none", ""):
            return cls.all_neumann()
        try:
            members = frozenset(int(item) for item in value.split(",") if item.strip())
        except ValueError:
            raise GraphValidationError(f"Invalid Dirichlet vertex list: {text!r}")
        config = cls(members)
        config.validate_for(g)
        return config

    def validate_for(self, g: Graph) -> None:
        pendants = pendant_vertices(g)
        stray = sorted(self.dirichlet_set - pendants)
        if stray:
            raise GraphValidationError(f"Dirichlet vertices {stray} are not pendant vertices")

    def condition_at(self, v: int) -> BoundaryCondition:
        return BoundaryCondition.DIRICHLET if v in self.dirichlet_set else BoundaryCondition.NEUMANN


@dataclass(frozen=True)
class InteriorSubgraph:
    """Retained vertices with their induced adjacency and original degrees."""
    vertices: Tuple[int, ...]
    adjacency: Tuple[Tuple[int, ...], ...]
    weights: Tuple[int, ...]

    @property
    def size(self) -> int:
        return len(self.vertices)

    @property
    def subgraph_degrees(self) -> Tuple[int, ...]:
        return tuple(sum(row) for row in self.adjacency)


def degrees(g: Graph) -> List[int]:
    return [len(adjacent) for adjacent in g.neighbors]


def pendant_vertices(g: Graph) -> FrozenSet[int]:
    return frozenset(v for v, d in enumerate(degrees(g)) if d == 1)


def interior_subgraph(g: Graph, b: BoundaryConfig) -> InteriorSubgraph:
    """Remove the Dirichlet pendants and their edges, keeping original degrees as weights."""
    b.validate_for(g)
    retained = tuple(v for v in range(g.p) if v not in b.dirichlet_set)
    if not retained:
        raise EmptyInteriorError("Removing the Dirichlet pendants leaves no vertex")
    position = {v: i for i, v in enumerate(retained)}
    rows = [[0] * len(retained) for _ in retained]
    for u, v in g.edges:
        if u in position and v in position:
            rows[position[u]][position[v]] = rows[position[v]][position[u]] = 1
    all_degrees = degrees(g)
    return InteriorSubgraph(
        vertices=retained,
        adjacency=tuple(tuple(row) for row in rows),
        weights=tuple(all_degrees[v] for v in retained),
    )


def tree_centers(t: Tree) -> List[int]:
    """One or two central vertices, found by peeling leaves."""
    if t.p <= 2:
        return list(range(t.p))
    remaining = degrees(t)
    layer = [v for v, d in enumerate(remaining) if d == 1]
    left = t.p
    while left > 2:
        left -= len(layer)
        next_layer = []
        for leaf in layer:
            for w in t.neighbors[leaf]:
                remaining[w] -= 1
                if remaining[w] == 1:
                    next_layer.append(w)
        layer = next_layer
    return sorted(layer)


def _rooted_code(t: Tree, root: int) -> str:
    # Iterative post-order so deep paths do not hit the recursion limit
    codes: Dict[int, str] = {}
    stack = [(root, -1, False)]
    while stack:
        v, parent, expanded = stack.pop()
        children = [w for w in t.neighbors[v] if w != parent]
        if expanded:
            codes[v] = "(" + "".join(sorted(codes[w] for w in children)) + ")"
            continue
        stack.append((v, parent, True))
        stack.extend((w, v, False) for w in children)
    return codes[root]


def canonical_code(t: Tree) -> CanonicalCode:
    """AHU code rooted at the center; the smaller code wins for bicentral trees."""
    return CanonicalCode(min(_rooted_code(t, c) for c in tree_centers(t)))


def is_isomorphic(t1: Tree, t2: Tree) -> bool:
    return t1.p == t2.p and canonical_code(t1) == canonical_code(t2)


def tree_from_code(code: CanonicalCode) -> Tree:
    """Rebuild a tree from its code, labelling vertices in preorder from the root."""
    edges = []
    stack: List[int] = []
    count = 0
    for ch in code.code:
        if ch == "(":
            if stack:
                edges.append((stack[-1], count))
            stack.append(count)
            count += 1
        else:
            stack.pop()
    return Tree(count, frozenset(edges))


def relabel(g: Graph, permutation: Sequence[int]) -> Graph:
    """Same graph with vertex v renamed to permutation[v]."""
    if sorted(permutation) != list(range(g.p)):
        raise GraphValidationError("Relabeling must be a permutation of the vertices")
    edges = frozenset(_edge(permutation[u], permutation[v]) for u, v in g.edges)
    return type(g)(g.p, edges)


def as_tree(g: Graph) -> Tree:
    if isinstance(g, Tree):
        return g
    if g.g != g.p - 1:
        raise GraphValidationError(f"Input has {g.g} edges on {g.p} vertices and is not a tree")
    return Tree(g.p, g.edges)


def normalized_adjacency(g: Graph) -> np.ndarray:
    """D^(-1/2) A D^(-1/2) in floating point."""
    d = np.array(degrees(g), dtype=float)
    if np.any(d == 0):
        raise GraphValidationError("Normalized adjacency needs a graph without isolated vertices")
    scale = 1.0 / np.sqrt(d)
    return g.adjacency_matrix() * np.outer(scale, scale)


def normalized_adjacency_spectrum(g: Graph) -> np.ndarray:
    """Ascending eigenvalues of the normalized adjacency."""
    return np.linalg.eigvalsh(normalized_adjacency(g))


def parse_edge_list(text: str) -> Graph:
    """Parse ``p <count>`` followed by one ``u v`` pair per line; ``#`` starts a comment."""
    lines = [line.split("#", 1)[0].strip() for line in text.splitlines()]
    lines = [line for line in lines if line]
    if not lines:
        raise EdgeListParseError("Edge list is empty")
    header = lines[0].split()
    if len(header) != 2 or header[0] != "p":
        raise EdgeListParseError(f"Expected header 'p <count>', got {lines[0]!r}")
    try:
        p = int(header[1])
    except ValueError:
        raise EdgeListParseError(f"Vertex count is not an integer: {header[1]!r}")
    pairs = []
    for number, line in enumerate(lines[1:], start=2):
        fields = line.split()
        if len(fields) != 2:
            raise EdgeListParseError(f"Line {number}: expected 'u v', got {line!r}")
        try:
            u, v = int(fields[0]), int(fields[1])
        except ValueError:
            raise EdgeListParseError(f"Line {number}: vertices must be integers, got {line!r}")
        if not (0 <= u < p and 0 <= v < p):
            raise EdgeListParseError(f"Line {number}: edge ({u}, {v}) is out of range for p={p}")
        pairs.append((u, v))
    try:
        graph = Graph.from_edges(p, pairs)
    except GraphValidationError as e:
        if "Duplicate" in str(e):
            raise EdgeListParseError(str(e))
        raise
    logger.debug(f"Parsed graph with p={graph.p}, g={graph.g}")
    return as_tree(graph) if graph.g == graph.p - 1 else graph


def format_edge_list(g: Graph) -> str:
    lines = [f"p {g.p}"] + [f"{u} {v}" for u, v in g.sorted_edges]
    return "\n".join(lines) + "\n"
