"""
Exact characteristic polynomial P(z) = det(z D - A) of the interior subgraph.

D holds the original degrees of the retained vertices and A is the adjacency
left after removing the Dirichlet pendants. The primary route is fraction-free
elimination over integer polynomials; evaluation at integer points followed by
interpolation is the independent oracle.
"""

from functools import lru_cache
from typing import List, Optional

import sympy

from config import config
from exceptions import OracleMismatchError
from graph_core import BoundaryConfig, Graph, InteriorSubgraph, interior_subgraph
from logging_config import get_logger, log_oracle_event
from polynomial import Z, IntPoly, NormalizedPoly, eval_at_integer, normalize

logger = get_logger('charpoly')

PolyMatrix = List[List[IntPoly]]

__all__ = [
    "pencil_matrix",
    "bareiss_determinant",
    "interpolation_determinant",
    "dirichlet_poly",
    "normalized_dirichlet_poly",
    "sine_exponent",
    "eval_at_integer",
    "normalize",
]


def pencil_matrix(sub: InteriorSubgraph) -> PolyMatrix:
    """z * weight on the diagonal, -1 at adjacent pairs."""
    size = sub.size
    matrix: PolyMatrix = []
    for i in range(size):
        row = []
        for j in range(size):
            if i == j:
                row.append(IntPoly.monomial(sub.weights[i], 1))
            else:
                row.append(IntPoly.constant(-sub.adjacency[i][j]))
        matrix.append(row)
    return matrix


def bareiss_determinant(matrix: PolyMatrix) -> IntPoly:
    """Fraction-free Gaussian elimination; every division is exact in Z[z]."""
    size = len(matrix)
    if size == 0:
        return IntPoly.constant(1)
    m = [list(row) for row in matrix]
    sign = 1
    previous = IntPoly.constant(1)
    for k in range(size - 1):
        if m[k][k].is_zero():
            pivot = next((i for i in range(k + 1, size) if not m[i][k].is_zero()), None)
            if pivot is None:
                return IntPoly()
            m[k], m[pivot] = m[pivot], m[k]
            sign = -sign
        for i in range(k + 1, size):
            for j in range(k + 1, size):
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]).exact_div(previous)
        previous = m[k][k]
    return m[size - 1][size - 1] * sign


def interpolation_determinant(sub: InteriorSubgraph) -> IntPoly:
    """Integer determinants at z = 0..n, then exact Lagrange interpolation."""
    size = sub.size
    samples = []
    for t in range(size + 1):
        rows = [
            [t * sub.weights[i] if i == j else -sub.adjacency[i][j] for j in range(size)]
            for i in range(size)
        ]
        samples.append((t, sympy.Matrix(rows).det(method="bareiss")))
    expression = sympy.interpolate(samples, Z)
    coefficients = sympy.Poly(expression, Z).all_coeffs()
    if not all(sympy.Rational(c).q == 1 for c in coefficients):
        raise OracleMismatchError("Interpolated determinant has non-integer coefficients")
    return IntPoly(tuple(int(c) for c in reversed(coefficients)))


@lru_cache(maxsize=8192)
def _primary(g: Graph, b: BoundaryConfig) -> IntPoly:
    return bareiss_determinant(pencil_matrix(interior_subgraph(g, b)))


def dirichlet_poly(g: Graph, b: BoundaryConfig, verify: Optional[bool] = None) -> IntPoly:
    """Exact P(z); with verify the interpolation oracle must agree coefficientwise."""
    poly = _primary(g, b)
    if config.verify_charpoly if verify is None else verify:
        oracle = interpolation_determinant(interior_subgraph(g, b))
        if oracle != poly:
            log_oracle_event("charpoly_mismatch", {
                "edges": g.sorted_edges,
                "dirichlet": sorted(b.dirichlet_set),
                "elimination": poly.format(),
                "interpolation": oracle.format(),
            })
            raise OracleMismatchError(
                f"Elimination gives {poly.format()} but interpolation gives {oracle.format()}"
            )
    return poly


def normalized_dirichlet_poly(g: Graph, b: BoundaryConfig) -> NormalizedPoly:
    return normalize(dirichlet_poly(g, b))


def sine_exponent(g: Graph, b: BoundaryConfig) -> int:
    """Power g - p + r of the sine factor in the characteristic function."""
    b.validate_for(g)
    return g.g - g.p + b.r
