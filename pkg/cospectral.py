"""
Cospectral classes of all-Dirichlet trees and reconciliation with the published tables.
"""

from collections import defaultdict
from concurrent.futures import ProcessPoolExecutor
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np
from scipy.optimize import linear_sum_assignment

from charpoly import dirichlet_poly
from config import config
from data_models import (
    CanonicalCode, CatalogCorrection, CatalogMatch, CatalogReport,
    CospectralClass, PublishedEntry, SpectralKey
)
from exceptions import InvalidRangeError
from graph_core import BoundaryConfig, Tree, as_tree, pendant_vertices
from logging_config import get_logger, log_oracle_event
from polynomial import IntPoly, normalize
from tree_enum import TreeCatalog, enumerate_trees

logger = get_logger('cospectral')

# Cost of pairing an entry whose text could not be read at all
_UNREADABLE_COST = 10 ** 6


def spectral_key(t: Tree) -> SpectralKey:
    """(p, p_pen, normalized P) with every pendant Dirichlet."""
    tree = as_tree(t)
    if tree.p < 3:
        raise InvalidRangeError(f"Spectral keys need p >= 3, got p={tree.p}")
    poly = dirichlet_poly(tree, BoundaryConfig.all_dirichlet(tree))
    return SpectralKey(p=tree.p, p_pen=len(pendant_vertices(tree)), poly=normalize(poly))


def _raw_poly(tree: Tree) -> IntPoly:
    return dirichlet_poly(tree, BoundaryConfig.all_dirichlet(tree))


def compute_raw_polys(catalog: TreeCatalog, workers: Optional[int] = None) -> List[IntPoly]:
    """P for every tree of the catalog, in catalog order."""
    workers = config.max_workers if workers is None else workers
    trees = [tree for tree, _ in catalog]
    if workers > 1 and len(trees) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(_raw_poly, trees, chunksize=8))
    return [_raw_poly(tree) for tree in trees]


def compute_keys(catalog: TreeCatalog, workers: Optional[int] = None) -> List[Tuple[CanonicalCode, SpectralKey]]:
    """Spectral key of every catalog tree, in catalog order."""
    polys = compute_raw_polys(catalog, workers)
    return [
        (code, SpectralKey(p=catalog.p, p_pen=len(pendant_vertices(tree)), poly=normalize(poly)))
        for (tree, code), poly in zip(catalog, polys)
    ]


def group_by_key(p: int, workers: Optional[int] = None) -> List[CospectralClass]:
    """Partition of the p-vertex catalog by spectral key, singletons included."""
    if p < 3:
        raise InvalidRangeError(f"Cospectral classes need p >= 3, got p={p}")
    groups: Dict[SpectralKey, List[CanonicalCode]] = defaultdict(list)
    for code, key in compute_keys(enumerate_trees(p), workers):
        groups[key].append(code)
    classes = [CospectralClass(key=key, members=tuple(codes)) for key, codes in groups.items()]
    return sorted(classes, key=lambda c: c.key.sort_key())


def find_classes(p: int, workers: Optional[int] = None) -> List[CospectralClass]:
    """Nontrivial cospectral classes among trees with p vertices."""
    classes = [c for c in group_by_key(p, workers) if c.size > 1]
    logger.info(f"Found {len(classes)} cospectral classes at p={p}")
    return classes


def coefficient_distance(a: IntPoly, b: IntPoly) -> int:
    """Number of coefficient positions where a and b differ."""
    size = max(len(a.coeffs), len(b.coeffs))
    pad_a = a.coeffs + (0,) * (size - len(a.coeffs))
    pad_b = b.coeffs + (0,) * (size - len(b.coeffs))
    return sum(1 for x, y in zip(pad_a, pad_b) if x != y)


def _entry_poly(entry: PublishedEntry) -> Optional[IntPoly]:
    try:
        return entry.poly
    except ValueError:
        return None


def _signed_like(poly: IntPoly, reference: Optional[IntPoly]) -> IntPoly:
    """poly with its sign flipped to agree with the reference's leading coefficient."""
    if reference is not None and not reference.is_zero() and reference.leading < 0:
        return -poly
    return poly


def verify_catalog(p: int, entries: Sequence[PublishedEntry]) -> CatalogReport:
    """Match published entries for p against the computed polynomials.

    Unflagged entries are matched exactly up to a constant, as a multiset per
    pendant bucket. Whatever is left over is paired by a minimum-cost
    assignment on coefficient distance and reported as corrections.
    """
    catalog = enumerate_trees(p)
    polys = compute_raw_polys(catalog)
    computed: Dict[int, List[Tuple[CanonicalCode, IntPoly]]] = defaultdict(list)
    for (tree, code), poly in zip(catalog, polys):
        computed[len(pendant_vertices(tree))].append((code, poly))

    listed: Dict[int, List[PublishedEntry]] = defaultdict(list)
    for entry in entries:
        if entry.p == p:
            listed[entry.p_pen].append(entry)

    matches: List[CatalogMatch] = []
    corrections: List[CatalogCorrection] = []
    unmatched_computed: List[Tuple[int, CanonicalCode, IntPoly]] = []
    unmatched_entries: List[PublishedEntry] = []
    unlisted = tuple(p_pen for p_pen in sorted(computed) if p_pen not in listed)

    for p_pen in sorted(set(computed) | set(listed)):
        if p_pen in unlisted:
            continue
        bucket = computed.get(p_pen, [])
        used = [False] * len(bucket)
        leftover: List[PublishedEntry] = []
        for entry in sorted(listed[p_pen], key=lambda e: e.index):
            poly = None if entry.flagged else _entry_poly(entry)
            target = normalize(poly) if poly is not None and not poly.is_zero() else None
            slot = next(
                (i for i, (_, c) in enumerate(bucket) if not used[i] and target is not None and normalize(c) == target),
                None,
            )
            if slot is None:
                leftover.append(entry)
                continue
            used[slot] = True
            code, raw = bucket[slot]
            matches.append(CatalogMatch(entry=entry, code=code, computed=_signed_like(raw, poly)))

        remaining = [bucket[i] for i in range(len(bucket)) if not used[i]]
        if leftover and remaining:
            cost = np.full((len(leftover), len(remaining)), _UNREADABLE_COST, dtype=np.int64)
            for i, entry in enumerate(leftover):
                poly = _entry_poly(entry)
                if poly is None:
                    continue
                for j, (_, raw) in enumerate(remaining):
                    cost[i, j] = coefficient_distance(poly, _signed_like(raw, poly))
            rows, cols = linear_sum_assignment(cost)
            paired_entries = set()
            paired_computed = set()
            for i, j in zip(rows, cols):
                entry = leftover[i]
                code, raw = remaining[j]
                corrected = _signed_like(raw, _entry_poly(entry))
                correction = CatalogCorrection(
                    entry=entry, code=code, corrected=corrected, edit_distance=int(cost[i, j])
                )
                corrections.append(correction)
                paired_entries.add(i)
                paired_computed.add(j)
                log_oracle_event("catalog_correction", {
                    "p": p, "p_pen": p_pen, "index": entry.index,
                    "printed": entry.printed, "corrected": corrected.format(),
                })
            leftover = [e for i, e in enumerate(leftover) if i not in paired_entries]
            remaining = [c for j, c in enumerate(remaining) if j not in paired_computed]
        unmatched_entries.extend(leftover)
        unmatched_computed.extend((p_pen, code, raw) for code, raw in remaining)

    report = CatalogReport(
        p=p,
        matches=tuple(matches),
        corrections=tuple(corrections),
        unmatched_computed=tuple(unmatched_computed),
        unmatched_entries=tuple(unmatched_entries),
        unlisted_buckets=unlisted,
    )
    logger.info(
        f"Catalog p={p}: {len(matches)} matched, {len(corrections)} corrected, "
        f"{len(unmatched_entries)} entries and {len(unmatched_computed)} polynomials unmatched"
    )
    return report
