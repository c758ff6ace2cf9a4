"""
Free-tree enumeration.
One representative per isomorphism class, labelled canonically and ordered by code.
"""

import itertools
from collections import Counter
from dataclasses import dataclass
from functools import lru_cache
from typing import Dict, Iterator, List, Tuple

from config import config
from data_models import CanonicalCode
from exceptions import InvalidRangeError
from graph_core import Tree, canonical_code, pendant_vertices, tree_from_code
from logging_config import get_logger

logger = get_logger('tree_enum')


@dataclass(frozen=True)
class TreeCatalog:
    """All free trees on p vertices, sorted by canonical code."""
    p: int
    trees: Tuple[Tuple[Tree, CanonicalCode], ...]

    def __post_init__(self):
        codes = [code for _, code in self.trees]
        if len(set(codes)) != len(codes):
            raise ValueError("Catalog codes must be pairwise distinct")

    def __len__(self) -> int:
        return len(self.trees)

    def __iter__(self) -> Iterator[Tuple[Tree, CanonicalCode]]:
        return iter(self.trees)

    @property
    def codes(self) -> List[CanonicalCode]:
        return [code for _, code in self.trees]


def _level_sequences(p: int) -> Iterator[List[int]]:
    """Rooted trees as level sequences, successor rule of Beyer and Hedetniemi."""
    levels = list(range(p))
    while True:
        yield list(levels)
        last = max((i for i in range(p) if levels[i] > 1), default=None)
        if last is None:
            return
        target = levels[last] - 1
        anchor = max(i for i in range(last) if levels[i] == target)
        shift = last - anchor
        for i in range(last, p):
            levels[i] = levels[i - shift]


def _tree_from_levels(levels: List[int]) -> Tree:
    latest: Dict[int, int] = {}
    edges = []
    for i, level in enumerate(levels):
        if level > 0:
            edges.append((latest[level - 1], i))
        latest[level] = i
    return Tree(len(levels), frozenset(edges))


def _check_bound(p: int) -> None:
    if p < 1:
        raise InvalidRangeError(f"p must be positive, got {p}")
    if p > config.max_enum_p:
        raise InvalidRangeError(f"p={p} exceeds the enumeration bound {config.max_enum_p}")


def _catalog_from_codes(p: int, codes) -> TreeCatalog:
    ordered = sorted(set(codes))
    return TreeCatalog(p, tuple((tree_from_code(code), code) for code in ordered))


@lru_cache(maxsize=None)
def enumerate_trees(p: int) -> TreeCatalog:
    """Free trees on p vertices from rooted level sequences, deduplicated by center-rooted code."""
    _check_bound(p)
    codes = {canonical_code(_tree_from_levels(levels)) for levels in _level_sequences(p)}
    catalog = _catalog_from_codes(p, codes)
    logger.info(f"Enumerated {len(catalog)} free trees on {p} vertices")
    return catalog


def enumerate_trees_from_parent_arrays(p: int) -> TreeCatalog:
    """Independent generator: every labelled parent array, deduplicated by code."""
    _check_bound(p)
    if p > 8:
        raise InvalidRangeError("Parent-array enumeration is limited to p <= 8")
    codes = set()
    for parents in itertools.product(*(range(i) for i in range(1, p))):
        edges = frozenset((parent, child) for child, parent in enumerate(parents, start=1))
        codes.add(canonical_code(Tree(p, edges)))
    return _catalog_from_codes(p, codes)


def count_by_pendants(catalog: TreeCatalog) -> Dict[int, int]:
    """Bucket sizes keyed by pendant count."""
    counts = Counter(len(pendant_vertices(tree)) for tree, _ in catalog)
    return dict(sorted(counts.items()))
