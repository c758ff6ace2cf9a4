"""
Data models for quantum tree spectra.
Provides the shared value types with validation and JSON-ready serialization.
Exact integers are serialized as decimal strings.
"""

import math
from dataclasses import asdict, dataclass, field
from enum import Enum
from typing import Any, Dict, List, Optional, Tuple

from exceptions import AmbiguousInputError, UsageError
from polynomial import IntPoly, NormalizedPoly


class BoundaryCondition(Enum):
    """Condition imposed at a pendant vertex."""
    DIRICHLET = "dirichlet"
    NEUMANN = "neumann"


class Command(Enum):
    """Command-line subcommands."""
    ENUMERATE = "enumerate"
    POLY = "poly"
    CLASSES = "classes"
    SPECTRUM = "spectrum"
    INVERT = "invert"
    VERIFY_PAPER = "verify-paper"


class OutputFormat(Enum):
    """Command output encodings."""
    JSON = "json"
    CSV = "csv"
    TEXT = "text"


class SpectrumMethod(Enum):
    """Route used to compute eigenvalues."""
    CLOSED = "closed"
    DIRECT = "direct"
    BOTH = "both"


@dataclass(frozen=True, order=True)
class CanonicalCode:
    """Center-rooted AHU encoding of a free tree as balanced parentheses."""
    code: str

    def __post_init__(self):
        depth = 0
        for ch in self.code:
            depth += 1 if ch == "(" else -1 if ch == ")" else 0
            if ch not in "()" or depth < 0:
                raise ValueError(f"Invalid canonical code: {self.code!r}")
        if depth != 0 or not self.code:
            raise ValueError(f"Invalid canonical code: {self.code!r}")

    @property
    def p(self) -> int:
        return len(self.code) // 2

    def __str__(self) -> str:
        return self.code


@dataclass(frozen=True)
class SpectralPoint:
    """One eigenvalue: x = sqrt(lambda) * l, lambda, and its multiplicity."""
    x: float
    lam: float
    multiplicity: int

    def to_dict(self) -> Dict[str, Any]:
        return {"x": self.x, "lambda": self.lam, "multiplicity": self.multiplicity}

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> 'SpectralPoint':
        return cls(x=float(data["x"]), lam=float(data["lambda"]), multiplicity=int(data["multiplicity"]))


@dataclass(frozen=True)
class SpectrumSample:
    """Eigenvalues in (0, (x_max / l)^2], sorted, with multiplicities."""
    l: float
    x_max: float
    eigenvalues: Tuple[SpectralPoint, ...]
    zero_multiplicity: int = 0

    def __post_init__(self):
        if self.l <= 0:
            raise ValueError("Edge length must be positive")
        previous = 0.0
        for point in self.eigenvalues:
            if point.multiplicity < 1:
                raise ValueError(f"Multiplicity must be positive at x={point.x}")
            if point.lam <= previous:
                raise ValueError("Eigenvalues must be positive and strictly increasing")
            previous = point.lam
        if self.zero_multiplicity < 0:
            raise ValueError("zero_multiplicity must be non-negative")

    @property
    def xs(self) -> List[float]:
        return [point.x for point in self.eigenvalues]

    @property
    def total_count(self) -> int:
        """Number of eigenvalues counted with multiplicity."""
        return sum(point.multiplicity for point in self.eigenvalues)

    def expanded(self) -> List[float]:
        """Eigenvalues lambda repeated by multiplicity."""
        return [point.lam for point in self.eigenvalues for _ in range(point.multiplicity)]

    def to_dict(self) -> Dict[str, Any]:
        return {
            "l": self.l,
            "x_max": self.x_max,
            "zero_multiplicity": self.zero_multiplicity,
            "eigenvalues": [point.to_dict() for point in self.eigenvalues],
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> 'SpectrumSample':
        return cls(
            l=float(data["l"]),
            x_max=float(data["x_max"]),
            eigenvalues=tuple(SpectralPoint.from_dict(item) for item in data["eigenvalues"]),
            zero_multiplicity=int(data.get("zero_multiplicity", 0)),
        )


@dataclass(frozen=True)
class BranchData:
    """Second-term asymptotic data: arccos-branch roots and the pi-lattice count."""
    alpha_values: Tuple[float, ...]
    pi_branch_count: int
    p_tilde: int
    p_pen_tilde: int

    def __post_init__(self):
        object.__setattr__(self, "alpha_values", tuple(sorted(float(a) for a in self.alpha_values)))
        if len(self.alpha_values) != self.p_tilde:
            raise AmbiguousInputError(f"Expected {self.p_tilde} alpha values, got {len(self.alpha_values)}")
        if self.pi_branch_count != self.p_pen_tilde - 1:
            raise AmbiguousInputError("pi_branch_count must equal p_pen_tilde - 1")

    @property
    def branch_count(self) -> int:
        """Number of eigenvalue subsequences, 2 p_tilde + p_pen_tilde - 1."""
        return 2 * self.p_tilde + self.pi_branch_count

    def gammas(self, l: float) -> List[float]:
        """gamma_i = arccos(alpha_i) / l."""
        return [math.acos(a) / l for a in self.alpha_values]

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> 'BranchData':
        return cls(
            alpha_values=tuple(data["alpha_values"]),
            pi_branch_count=int(data["pi_branch_count"]),
            p_tilde=int(data["p_tilde"]),
            p_pen_tilde=int(data["p_pen_tilde"]),
        )


@dataclass(frozen=True)
class SpectralKey:
    """Vertex count, pendant count and normalized Dirichlet polynomial."""
    p: int
    p_pen: int
    poly: NormalizedPoly

    def __post_init__(self):
        if self.p < 3 or self.p_pen < 2:
            raise ValueError("Spectral keys need p >= 3 and p_pen >= 2")

    def sort_key(self) -> Tuple:
        return (self.p, self.p_pen, self.poly.degree, self.poly.coeffs)

    def to_dict(self) -> Dict[str, Any]:
        return {"p": self.p, "p_pen": self.p_pen, "poly": self.poly.to_json(), "poly_text": self.poly.format()}

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> 'SpectralKey':
        return cls(p=int(data["p"]), p_pen=int(data["p_pen"]), poly=NormalizedPoly.from_json(data["poly"]))


@dataclass(frozen=True)
class CospectralClass:
    """Pairwise non-isomorphic trees sharing one spectral key."""
    key: SpectralKey
    members: Tuple[CanonicalCode, ...]

    def __post_init__(self):
        if not self.members:
            raise ValueError("A cospectral class needs at least one member")
        if len(set(self.members)) != len(self.members):
            raise ValueError("Cospectral class members must be pairwise non-isomorphic")
        object.__setattr__(self, "members", tuple(sorted(self.members)))

    @property
    def size(self) -> int:
        return len(self.members)

    def to_dict(self) -> Dict[str, Any]:
        return {"key": self.key.to_dict(), "members": [str(code) for code in self.members]}


@dataclass(frozen=True)
class PublishedEntry:
    """One polynomial as printed in the published tables."""
    p: int
    p_pen: int
    index: int
    printed: str
    flagged: bool = False
    reading: Optional[str] = None
    note: str = ""

    @property
    def poly(self) -> Optional[IntPoly]:
        """Parsed polynomial for unflagged entries, best reading for flagged ones."""
        text = self.reading if self.flagged else self.printed
        return IntPoly.parse(text) if text else None

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> 'PublishedEntry':
        return cls(**data)


@dataclass(frozen=True)
class CatalogMatch:
    """A published entry equal to a computed polynomial up to a constant."""
    entry: PublishedEntry
    code: CanonicalCode
    computed: IntPoly

    def to_dict(self) -> Dict[str, Any]:
        return {
            "p_pen": self.entry.p_pen,
            "index": self.entry.index,
            "printed": self.entry.printed,
            "code": str(self.code),
            "computed": self.computed.format(),
        }


@dataclass(frozen=True)
class CatalogCorrection:
    """A flagged or mismatching published entry with the computed replacement."""
    entry: PublishedEntry
    code: CanonicalCode
    corrected: IntPoly
    edit_distance: int

    def to_dict(self) -> Dict[str, Any]:
        return {
            "p_pen": self.entry.p_pen,
            "index": self.entry.index,
            "printed": self.entry.printed,
            "flagged": self.entry.flagged,
            "code": str(self.code),
            "corrected": self.corrected.format(),
            "corrected_coeffs": self.corrected.to_json(),
            "edit_distance": self.edit_distance,
        }


@dataclass(frozen=True)
class CatalogReport:
    """Reconciliation of computed polynomials against published ones for one p."""
    p: int
    matches: Tuple[CatalogMatch, ...]
    corrections: Tuple[CatalogCorrection, ...]
    unmatched_computed: Tuple[Tuple[int, CanonicalCode, IntPoly], ...]
    unmatched_entries: Tuple[PublishedEntry, ...]
    unlisted_buckets: Tuple[int, ...] = ()

    @property
    def is_clean(self) -> bool:
        """True when every entry matched and nothing needed correcting."""
        return not (self.corrections or self.unmatched_computed or self.unmatched_entries)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "p": self.p,
            "matched": len(self.matches),
            "matches": [m.to_dict() for m in self.matches],
            "corrections": [c.to_dict() for c in self.corrections],
            "unmatched_computed": [
                {"p_pen": p_pen, "code": str(code), "computed": poly.format()}
                for p_pen, code, poly in self.unmatched_computed
            ],
            "unmatched_entries": [e.to_dict() for e in self.unmatched_entries],
            "unlisted_buckets": list(self.unlisted_buckets),
        }


@dataclass
class RunConfig:
    """Validated command-line invocation."""
    command: Command
    output_format: OutputFormat = OutputFormat.TEXT
    p: Optional[int] = None
    p_min: int = 3
    p_max: Optional[int] = None
    input_path: Optional[str] = None
    dirichlet: str = "all"
    l: float = 1.0
    x_max: float = 6 * math.pi
    method: SpectrumMethod = SpectrumMethod.CLOSED
    alphas: List[float] = field(default_factory=list)
    p_pen_tilde: Optional[int] = None
    dictionary_path: Optional[str] = None
    catalog_path: Optional[str] = None
    plot_data: Optional[str] = None

    def validate(self, max_p: Optional[int] = None) -> None:
        """Validate flags before any work begins; max_p bounds every vertex count."""
        if self.command in (Command.ENUMERATE, Command.CLASSES):
            if self.p is None or self.p < 1:
                raise UsageError("--p must be a positive integer")
            if max_p is not None and self.p > max_p:
                raise UsageError(f"--p must not exceed {max_p}")
        if self.command == Command.CLASSES and self.p < 3:
            raise UsageError("--p must be at least 3 for cospectral classes")
        if self.command in (Command.POLY, Command.SPECTRUM) and not self.input_path:
            raise UsageError("an edge-list input file is required")
        if self.l <= 0:
            raise UsageError("--l must be positive")
        if self.x_max <= 0:
            raise UsageError("--x-max must be positive")
        if self.command == Command.INVERT:
            if not self.alphas:
                raise UsageError("--alphas needs at least one value")
            outside = [a for a in self.alphas if not -1.0 < a < 1.0]
            if outside:
                raise UsageError(
                    f"alphas {outside} lie outside (-1, 1); they are cosines of gamma * l, "
                    "so arccos is undefined there"
                )
            if self.p_pen_tilde is None or self.p_pen_tilde < 2:
                raise UsageError("--ppen must be at least 2")
            if max_p is not None and len(self.alphas) + self.p_pen_tilde > max_p:
                raise UsageError(
                    f"{len(self.alphas)} alphas and --ppen {self.p_pen_tilde} describe a tree with "
                    f"{len(self.alphas) + self.p_pen_tilde} vertices; at most {max_p} are supported"
                )
        if self.command == Command.VERIFY_PAPER:
            if self.p_min < 3 or (self.p_max is not None and self.p_max < self.p_min):
                raise UsageError("verify-paper needs 3 <= p-min <= p-max")
            if max_p is not None and self.p_max is not None and self.p_max > max_p:
                raise UsageError(f"--p-max must not exceed {max_p}")
