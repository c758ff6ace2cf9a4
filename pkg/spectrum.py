"""
Eigenvalues of the zero-potential Sturm-Liouville problem on an equilateral graph.

Two independent routes are provided. The closed form reads the spectrum off the
factorized characteristic function sin(x)^e * P(cos x) with x = sqrt(lambda) * l.
The direct route scans the determinant of the 2g x 2g matrix of vertex
conditions. Branch extraction turns a sample back into the asymptotic data
(alpha values and the pi-lattice count).
"""

import math
from dataclasses import dataclass
from enum import IntEnum
from typing import Callable, Dict, List, NamedTuple, Optional, Sequence, Tuple

import numpy as np
from scipy.optimize import bisect, minimize_scalar

from charpoly import dirichlet_poly, sine_exponent
from config import config
from data_models import BranchData, SpectralPoint, SpectrumSample
from exceptions import ClusterAmbiguityError, ConvergenceFailure, GraphValidationError, InvalidRangeError
from graph_core import BoundaryConfig, Graph, pendant_vertices
from logging_config import get_logger, log_oracle_event
from polynomial import IntPoly, real_roots

logger = get_logger('spectrum')

# Tolerance for accepting points at the right end of the interval
_EDGE_TOL = 1e-7
# Grid points kept beyond x_max so minima at the right end have two neighbours
_GRID_PAD = 4
# Highest Taylor degree used when locating a multiple root
_TAYLOR_DEGREE = 24


class EntryKind(IntEnum):
    """Entry types of the condition matrix, as functions of x."""
    ONE = 0
    S = 1        # sin(x) / k
    C = 2        # cos(x)
    S_PRIME = 3  # cos(x)
    C_PRIME = 4  # -k sin(x)


Template = Tuple[Tuple[Tuple[int, EntryKind, float], ...], ...]


@dataclass(frozen=True)
class EdgeOrientation:
    """Tail and head for every edge, in the order of the graph's sorted edges."""
    arcs: Tuple[Tuple[int, int], ...]

    def validate_for(self, g: Graph) -> None:
        if sorted(tuple(sorted(arc)) for arc in self.arcs) != g.sorted_edges:
            raise GraphValidationError("Orientation must cover every edge exactly once")
        pendants = pendant_vertices(g)
        for tail, head in self.arcs:
            if head in pendants and tail not in pendants:
                raise GraphValidationError(f"Edge ({tail}, {head}) must be directed away from pendant {head}")

    def reversed_edge(self, u: int, v: int) -> 'EdgeOrientation':
        arcs = []
        found = False
        for tail, head in self.arcs:
            if {tail, head} == {u, v}:
                arcs.append((head, tail))
                found = True
            else:
                arcs.append((tail, head))
        if not found:
            raise GraphValidationError(f"No edge between {u} and {v}")
        return EdgeOrientation(tuple(arcs))


def default_orientation(g: Graph) -> EdgeOrientation:
    """Pendant edges point away from the pendant; other edges point from the smaller index."""
    pendants = pendant_vertices(g)
    arcs = []
    for u, v in g.sorted_edges:
        if v in pendants and u not in pendants:
            arcs.append((v, u))
        else:
            arcs.append((u, v))
    return EdgeOrientation(tuple(arcs))


def _templates(g: Graph, b: BoundaryConfig, orient: EdgeOrientation) -> Template:
    """Rows of the condition matrix as (column, kind, coefficient) triples.

    Edge j carries y = a_j s + b_j c in its own coordinate; a_j sits in
    column j and b_j in column g + j.
    """
    b.validate_for(g)
    orient.validate_for(g)
    size = g.g
    ends: Dict[int, List[Tuple[int, bool]]] = {v: [] for v in range(g.p)}
    for j, (tail, head) in enumerate(orient.arcs):
        ends[tail].append((j, True))
        ends[head].append((j, False))

    def value(j: int, at_tail: bool):
        if at_tail:
            return [(size + j, EntryKind.ONE, 1.0)]
        return [(j, EntryKind.S, 1.0), (size + j, EntryKind.C, 1.0)]

    def slope(j: int, at_tail: bool):
        if at_tail:
            return [(j, EntryKind.ONE, 1.0)]
        return [(j, EntryKind.S_PRIME, 1.0), (size + j, EntryKind.C_PRIME, 1.0)]

    pendants = sorted(pendant_vertices(g))
    rows = []
    for v in pendants:
        if v in b.dirichlet_set:
            rows.append(tuple(value(*ends[v][0])))
    for v in pendants:
        if v not in b.dirichlet_set:
            rows.append(tuple(slope(*ends[v][0])))
    for v in range(g.p):
        if v in pendants:
            continue
        first = ends[v][0]
        for other in ends[v][1:]:
            rows.append(tuple(value(*first) + [(col, kind, -coef) for col, kind, coef in value(*other)]))
        kirchhoff = []
        for j, at_tail in ends[v]:
            sign = 1.0 if at_tail else -1.0
            kirchhoff.extend((col, kind, sign * coef) for col, kind, coef in slope(j, at_tail))
        rows.append(tuple(kirchhoff))
    if len(rows) != 2 * size:
        raise GraphValidationError(f"Condition matrix has {len(rows)} rows for {size} edges")
    return tuple(rows)


def _kind_table(xs: np.ndarray, l: float) -> np.ndarray:
    k = xs / l
    sin, cos = np.sin(xs), np.cos(xs)
    return np.stack([np.ones_like(xs), sin / k, cos, cos, -k * sin])


def _assemble(templates: Template, table: np.ndarray) -> np.ndarray:
    size = len(templates)
    matrices = np.zeros((table.shape[1], size, size), dtype=table.dtype)
    for r, row in enumerate(templates):
        for col, kind, coef in row:
            matrices[:, r, col] += coef * table[kind]
    return matrices


def _det_function(templates: Template, l: float) -> Callable[[np.ndarray], np.ndarray]:
    def det(xs):
        xs = np.atleast_1d(np.asarray(xs))
        return np.linalg.det(_assemble(templates, _kind_table(xs, l)))
    return det


def _require_edges(g: Graph) -> None:
    if g.g < 1:
        raise GraphValidationError("A quantum graph needs at least one edge")


def _check_range(l: float, x_max: float) -> None:
    if l <= 0:
        raise InvalidRangeError(f"Edge length must be positive, got {l}")
    if x_max <= 0:
        raise InvalidRangeError(f"x_max must be positive, got {x_max}")


def build_char_matrix(t: Graph, b: BoundaryConfig, orient: EdgeOrientation, x: complex, l: float) -> np.ndarray:
    """The 2g x 2g condition matrix at x = sqrt(lambda) * l; complex x is allowed."""
    _require_edges(t)
    templates = _templates(t, b, orient)
    return _assemble(templates, _kind_table(np.atleast_1d(np.asarray(x)), l))[0]


def zero_eigenvalue_multiplicity(g: Graph, b: BoundaryConfig, l: float = 1.0) -> int:
    """Nullity of the condition matrix in the limit lambda -> 0 (s -> t, c -> 1)."""
    _require_edges(g)
    templates = _templates(g, b, default_orientation(g))
    table = np.array([[1.0], [l], [1.0], [1.0], [0.0]])
    matrix = _assemble(templates, table)[0]
    return int(matrix.shape[0] - np.linalg.matrix_rank(matrix))


class DetScan(NamedTuple):
    """Determinant of the condition matrix sampled on the scan grid."""
    x: np.ndarray
    sign: np.ndarray
    log10_abs: np.ndarray


def _grid(x_max: float) -> np.ndarray:
    """Midpoint grid running a few steps past x_max."""
    step = config.scan_step
    count = int(math.ceil(x_max / step)) + _GRID_PAD
    return (np.arange(count) + 0.5) * step


def det_scan(g: Graph, b: BoundaryConfig, l: float, x_max: float,
             orient: Optional[EdgeOrientation] = None) -> DetScan:
    _require_edges(g)
    _check_range(l, x_max)
    templates = _templates(g, b, orient or default_orientation(g))
    xs = _grid(x_max)
    values = _det_function(templates, l)(xs)
    with np.errstate(divide="ignore"):
        magnitude = np.log10(np.abs(values))
    return DetScan(x=xs, sign=np.sign(values), log10_abs=magnitude)


def _winding(det: Callable, center: float, radius: float, samples: int) -> Tuple[int, np.ndarray]:
    """Zeros inside the circle, from the change of argument of det along it."""
    angles = 2 * np.pi * np.arange(samples) / samples
    fz = det(center + radius * np.exp(1j * angles))
    phase = np.unwrap(np.angle(np.append(fz, fz[:1])))
    return int(round((phase[-1] - phase[0]) / (2 * np.pi))), fz


def _locate_multiple(center: float, radius: float, fz: np.ndarray, multiplicity: int) -> Optional[float]:
    """Mean of the m roots of the local Taylor polynomial closest to the center."""
    samples = len(fz)
    degree = min(_TAYLOR_DEGREE, samples // 2 - 1)
    coefficients = np.fft.fft(fz)[:degree + 1] / samples
    roots = np.roots(coefficients[::-1])
    roots = roots[np.argsort(np.abs(roots))]
    if np.count_nonzero(np.abs(roots) < 1) != multiplicity:
        return None
    return float(center + radius * np.mean(roots[:multiplicity]).real)


def direct_spectrum(t: Graph, b: BoundaryConfig, l: float, x_max: float,
                    orient: Optional[EdgeOrientation] = None) -> SpectrumSample:
    """Zeros of the condition-matrix determinant on (0, x_max].

    Sign changes on the grid are bisected; local minima of |det| without a
    sign change are refined by bounded minimization. The winding number on a
    small complex circle gives the multiplicity, and a local Taylor fit places
    multiple roots.
    """
    _require_edges(t)
    _check_range(l, x_max)
    templates = _templates(t, b, orient or default_orientation(t))
    det = _det_function(templates, l)

    def real_det(x: float) -> float:
        return float(det(np.array([x]))[0])

    xs = _grid(x_max)
    values = det(xs)
    signs = np.sign(values)
    magnitude = np.abs(values)
    radius = config.circle_radius
    tol = config.bisection_tol

    candidates: List[float] = [float(xs[i]) for i in np.flatnonzero(values == 0)]
    crossing = np.flatnonzero(signs[:-1] * signs[1:] < 0)
    for i in crossing:
        root, result = bisect(real_det, xs[i], xs[i + 1], xtol=tol, maxiter=config.max_bisections,
                              full_output=True, disp=False)
        if not result.converged:
            raise ConvergenceFailure(f"Bisection did not converge on [{xs[i]}, {xs[i + 1]}]")
        candidates.append(float(root))
    near_crossing = set(crossing) | set(crossing + 1)
    for i in range(1, len(xs) - 1):
        if i in near_crossing:
            continue
        if magnitude[i] <= magnitude[i - 1] and magnitude[i] <= magnitude[i + 1]:
            result = minimize_scalar(lambda x: abs(real_det(x)), bounds=(xs[i - 1], xs[i + 1]),
                                     method="bounded", options={"xatol": tol})
            candidates.append(float(result.x))

    points: List[Tuple[float, int]] = []
    for x in sorted(candidates):
        if points and abs(x - points[-1][0]) < radius:
            continue
        multiplicity, fz = _winding(det, x, radius, config.circle_samples)
        if multiplicity <= 0:
            continue
        location = x
        if multiplicity > 1:
            fitted = _locate_multiple(x, radius, fz, multiplicity)
            if fitted is None:
                logger.warning(f"Taylor fit inconsistent near x={x:.12f}; keeping the scan estimate")
                log_oracle_event("multiplicity_fit_fallback", {"x": x, "multiplicity": multiplicity})
            else:
                location = fitted
        points.append((location, multiplicity))

    eigenvalues = tuple(
        SpectralPoint(x=x, lam=(x / l) ** 2, multiplicity=m)
        for x, m in points if 0 < x <= x_max + _EDGE_TOL
    )
    logger.debug(f"Direct spectrum: {len(eigenvalues)} distinct eigenvalues up to x={x_max}")
    return SpectrumSample(l=l, x_max=x_max, eigenvalues=eigenvalues,
                          zero_multiplicity=zero_eigenvalue_multiplicity(t, b, l))


def _interior_poly(g: Graph, b: BoundaryConfig) -> IntPoly:
    if len(b.dirichlet_set) == g.p:
        # Both ends of a single edge are Dirichlet: the empty determinant is 1
        return IntPoly.constant(1)
    return dirichlet_poly(g, b)


def closed_form_spectrum(t: Graph, b: BoundaryConfig, l: float, x_max: float) -> SpectrumSample:
    """Zeros of sin(x)^e * P(cos x) on (0, x_max] with multiplicities.

    At x = k*pi the sine contributes e and a root of P at (-1)^k of
    multiplicity m contributes 2m. Every other root alpha of P in (-1, 1)
    contributes m at each x with cos x = alpha.
    """
    _require_edges(t)
    _check_range(l, x_max)
    b.validate_for(t)
    exponent = sine_exponent(t, b)
    poly = _interior_poly(t, b)
    at_plus = poly.multiplicity_at(1)
    at_minus = poly.multiplicity_at(-1)
    reduced = poly
    for root, count in ((1, at_plus), (-1, at_minus)):
        for _ in range(count):
            reduced = reduced.exact_div(IntPoly((-root, 1)))

    found: Dict[float, int] = {}
    for k in range(1, int(math.floor(x_max / math.pi + 1e-12)) + 1):
        multiplicity = exponent + 2 * (at_plus if k % 2 == 0 else at_minus)
        if multiplicity < 0:
            raise ClusterAmbiguityError(f"Negative multiplicity {multiplicity} at x={k}pi")
        if multiplicity:
            found[k * math.pi] = multiplicity
    for alpha, count in real_roots(reduced):
        if not -1 < alpha < 1:
            continue
        theta = math.acos(alpha)
        period = 0
        while 2 * math.pi * period + theta <= x_max + 1e-12:
            for x in (2 * math.pi * period + theta, 2 * math.pi * (period + 1) - theta):
                if x <= x_max + 1e-12:
                    found[x] = found.get(x, 0) + count
            period += 1

    eigenvalues = tuple(
        SpectralPoint(x=x, lam=(x / l) ** 2, multiplicity=m) for x, m in sorted(found.items())
    )
    return SpectrumSample(l=l, x_max=x_max, eigenvalues=eigenvalues,
                          zero_multiplicity=zero_eigenvalue_multiplicity(t, b, l))


def spectra_agree(first: SpectrumSample, second: SpectrumSample, tol: float = 1e-7) -> Tuple[bool, float]:
    """Same count and multiplicities with matching locations; also returns max |dx|."""
    if len(first.eigenvalues) != len(second.eigenvalues):
        return False, math.inf
    if any(a.multiplicity != b.multiplicity for a, b in zip(first.eigenvalues, second.eigenvalues)):
        return False, math.inf
    gap = max((abs(a.x - b.x) for a, b in zip(first.eigenvalues, second.eigenvalues)), default=0.0)
    return gap < tol, gap


def _clusters(values: Sequence[Tuple[float, float, int]], tol: float) -> List[List[Tuple[float, float, int]]]:
    """Single-linkage groups of (cos, x, multiplicity) triples by cos value."""
    groups: List[List[Tuple[float, float, int]]] = []
    for item in sorted(values):
        if groups and item[0] - groups[-1][-1][0] <= tol:
            groups[-1].append(item)
        else:
            groups.append([item])
    return groups


def extract_branches(sample: SpectrumSample, p: int, p_pen: int, l: float) -> BranchData:
    """Split a sample into arccos branches and the pi-lattice, over whole periods."""
    if sample.x_max < 6 * math.pi - 1e-9:
        raise InvalidRangeError("Branch extraction needs x_max >= 6*pi (three full periods)")
    periods = int(math.floor(sample.x_max / (2 * math.pi) + 1e-9))
    limit = 2 * math.pi * periods + 1e-6
    tol = config.cluster_tol

    lattice: Dict[int, int] = {}
    others: List[Tuple[float, float, int]] = []
    for point in sample.eigenvalues:
        x = math.sqrt(point.lam) * l
        if x > limit:
            continue
        k = round(x / math.pi)
        if abs(x / math.pi - k) < 1e-6:
            lattice[k] = lattice.get(k, 0) + point.multiplicity
        else:
            others.append((math.cos(x), x, point.multiplicity))

    lattice_counts = {lattice.get(k, 0) for k in range(1, 2 * periods + 1)}
    if len(lattice_counts) != 1:
        raise ClusterAmbiguityError(f"Multiplicities on the pi-lattice are not constant: {sorted(lattice_counts)}")
    exponent = lattice_counts.pop()

    alphas: List[float] = []
    for group in _clusters(others, tol):
        lower = sorted(x for _, x, _ in group if math.fmod(x, 2 * math.pi) < math.pi)
        upper = sorted(x for _, x, _ in group if math.fmod(x, 2 * math.pi) > math.pi)
        multiplicities = {m for _, _, m in group}
        lower_periods = {int(x // (2 * math.pi)) for x in lower}
        upper_periods = {int(x // (2 * math.pi)) for x in upper}
        if (len(lower) != periods or len(upper) != periods or len(multiplicities) != 1
                or len(lower_periods) != periods or len(upper_periods) != periods):
            raise ClusterAmbiguityError(
                f"Cluster near cos={group[0][0]:.9f} does not hold one point per period on each half"
            )
        total = sum(m for _, _, m in group)
        alpha = float(np.mean([c for c, _, _ in group]))
        alphas.extend([alpha] * (total // (2 * periods)))

    p_tilde = len(alphas)
    if p_tilde != p - p_pen or exponent + 1 != p_pen:
        raise ClusterAmbiguityError(
            f"Branches give p_tilde={p_tilde}, p_pen_tilde={exponent + 1}; expected {p - p_pen} and {p_pen}"
        )
    return BranchData(alpha_values=tuple(alphas), pi_branch_count=exponent,
                      p_tilde=p_tilde, p_pen_tilde=exponent + 1)


__all__ = [
    "EdgeOrientation",
    "EntryKind",
    "DetScan",
    "default_orientation",
    "build_char_matrix",
    "zero_eigenvalue_multiplicity",
    "det_scan",
    "direct_spectrum",
    "closed_form_spectrum",
    "spectra_agree",
    "extract_branches",
]
