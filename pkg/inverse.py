"""
Tree shape recovery from eigenvalue asymptotics.

A shape dictionary maps spectral keys to the trees that produce them. Branch
data (alpha values plus the pi-lattice count) is matched against the real roots
of every dictionary polynomial with the right vertex and pendant counts.
"""

import math
from dataclasses import dataclass
from typing import Any, Dict, List, Optional, Tuple

from config import config
from cospectral import group_by_key
from data_models import BranchData, CanonicalCode, SpectralKey, SpectrumMethod
from exceptions import DictionaryFormatError, InvalidRangeError
from graph_core import BoundaryConfig, Tree, as_tree, canonical_code, pendant_vertices, tree_from_code
from logging_config import get_logger
from polynomial import expanded_real_roots
from spectrum import closed_form_spectrum, direct_spectrum, extract_branches

logger = get_logger('inverse')

SCHEMA_VERSION = 1


@dataclass(frozen=True, eq=False)
class ShapeDictionary:
    """Spectral key to canonical codes for every tree with 3 <= p <= max_p."""
    max_p: int
    entries: Dict[SpectralKey, Tuple[CanonicalCode, ...]]

    def keys_for(self, p: int, p_pen: int) -> List[SpectralKey]:
        return sorted((key for key in self.entries if key.p == p and key.p_pen == p_pen),
                      key=SpectralKey.sort_key)

    @property
    def tree_count(self) -> int:
        return sum(len(codes) for codes in self.entries.values())

    def non_singletons(self) -> List[Tuple[SpectralKey, Tuple[CanonicalCode, ...]]]:
        return [(key, self.entries[key]) for key in sorted(self.entries, key=SpectralKey.sort_key)
                if len(self.entries[key]) > 1]

    def to_dict(self) -> Dict[str, Any]:
        entries = []
        for key in sorted(self.entries, key=SpectralKey.sort_key):
            record = key.to_dict()
            record["members"] = [
                {"code": str(code), "edges": [list(edge) for edge in tree_from_code(code).sorted_edges]}
                for code in self.entries[key]
            ]
            entries.append(record)
        return {"schema_version": SCHEMA_VERSION, "max_p": self.max_p, "entries": entries}

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> 'ShapeDictionary':
        try:
            if data["schema_version"] != SCHEMA_VERSION:
                raise DictionaryFormatError(f"Unsupported dictionary schema {data['schema_version']}")
            entries: Dict[SpectralKey, Tuple[CanonicalCode, ...]] = {}
            for record in data["entries"]:
                key = SpectralKey.from_dict(record)
                codes = []
                for member in record["members"]:
                    code = CanonicalCode(member["code"])
                    tree = Tree(code.p, frozenset(tuple(edge) for edge in member["edges"]))
                    if canonical_code(tree) != code:
                        raise DictionaryFormatError(f"Edge list does not match code {code}")
                    codes.append(code)
                entries[key] = tuple(sorted(codes))
            return cls(max_p=int(data["max_p"]), entries=entries)
        except DictionaryFormatError:
            raise
        except (KeyError, TypeError, ValueError) as e:
            raise DictionaryFormatError(f"Malformed shape dictionary: {e}")


def build_dictionary(max_p: int, workers: Optional[int] = None) -> ShapeDictionary:
    """Dictionary over every tree with 3 <= p <= max_p."""
    if not 3 <= max_p <= config.max_enum_p:
        raise InvalidRangeError(f"max_p must lie in [3, {config.max_enum_p}], got {max_p}")
    entries: Dict[SpectralKey, Tuple[CanonicalCode, ...]] = {}
    for p in range(3, max_p + 1):
        for cls in group_by_key(p, workers):
            entries[cls.key] = cls.members
    dictionary = ShapeDictionary(max_p=max_p, entries=entries)
    logger.info(f"Built shape dictionary up to p={max_p}: {dictionary.tree_count} trees, "
                f"{len(dictionary.non_singletons())} shared keys")
    return dictionary


def recover_trees(branches: BranchData, l: float, dictionary: ShapeDictionary) -> List[CanonicalCode]:
    """Trees whose polynomial roots equal the alpha values as a multiset.

    An empty list means no tree in the dictionary fits.
    """
    if l <= 0:
        raise InvalidRangeError(f"Edge length must be positive, got {l}")
    outside = [a for a in branches.alpha_values if not -1 < a < 1]
    if outside:
        raise InvalidRangeError(f"alpha values {outside} lie outside (-1, 1)")
    if branches.p_tilde < 1 or branches.p_pen_tilde < 2:
        raise InvalidRangeError("Recovery needs p_tilde >= 1 and p_pen_tilde >= 2")
    p = branches.p_tilde + branches.p_pen_tilde
    if p > dictionary.max_p:
        raise InvalidRangeError(f"p={p} exceeds the dictionary bound {dictionary.max_p}")

    query = sorted(branches.alpha_values)
    found: List[CanonicalCode] = []
    for key in dictionary.keys_for(p, branches.p_pen_tilde):
        roots = expanded_real_roots(key.poly)
        if len(roots) == len(query) and all(abs(a - r) <= config.match_tol for a, r in zip(query, roots)):
            found.extend(dictionary.entries[key])
    logger.debug(f"Recovered {len(found)} trees for p={p}, p_pen={branches.p_pen_tilde}")
    return sorted(found)


def round_trip(t: Tree, l: float, dictionary: ShapeDictionary,
               method: SpectrumMethod = SpectrumMethod.CLOSED) -> List[CanonicalCode]:
    """Spectrum, then branch extraction, then recovery, for an all-Dirichlet tree."""
    tree = as_tree(t)
    boundary = BoundaryConfig.all_dirichlet(tree)
    x_max = 6 * math.pi
    if method == SpectrumMethod.DIRECT:
        sample = direct_spectrum(tree, boundary, l, x_max)
    else:
        sample = closed_form_spectrum(tree, boundary, l, x_max)
    branches = extract_branches(sample, tree.p, len(pendant_vertices(tree)), l)
    return recover_trees(branches, l, dictionary)
