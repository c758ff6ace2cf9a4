"""
Exact integer polynomials in z.
Provides arithmetic, normalization up to constant multiples, a text and JSON codec,
and real-root counting and isolation backed by sympy.
"""

import re
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache, reduce
from math import gcd
from typing import List, Sequence, Tuple, Union

import sympy

from exceptions import ZeroPolynomialError

Z = sympy.Symbol("z")

Number = Union[int, Fraction]

# Width of the rational isolating intervals used to report roots as floats.
_ROOT_EPS = sympy.Rational(1, 10 ** 16)

_TERM = re.compile(r"([+-])?(\d+)?(?:(z)(?:\^(\d+))?)?")


@dataclass(frozen=True)
class IntPoly:
    """Polynomial with exact integer coefficients, ascending by degree."""
    coeffs: Tuple[int, ...] = ()

    def __post_init__(self):
        coeffs = tuple(int(c) for c in self.coeffs)
        while coeffs and coeffs[-1] == 0:
            coeffs = coeffs[:-1]
        object.__setattr__(self, "coeffs", coeffs)

    @classmethod
    def constant(cls, value: int) -> 'IntPoly':
        return cls((value,))

    @classmethod
    def monomial(cls, coefficient: int, degree: int) -> 'IntPoly':
        return cls((0,) * degree + (coefficient,))

    @property
    def degree(self) -> int:
        """Degree, -1 for the zero polynomial."""
        return len(self.coeffs) - 1

    @property
    def leading(self) -> int:
        return self.coeffs[-1] if self.coeffs else 0

    @property
    def content(self) -> int:
        return reduce(gcd, self.coeffs, 0)

    def is_zero(self) -> bool:
        return not self.coeffs

    def __neg__(self) -> 'IntPoly':
        return IntPoly(tuple(-c for c in self.coeffs))

    def __add__(self, other: 'IntPoly') -> 'IntPoly':
        size = max(len(self.coeffs), len(other.coeffs))
        a = self.coeffs + (0,) * (size - len(self.coeffs))
        b = other.coeffs + (0,) * (size - len(other.coeffs))
        return IntPoly(tuple(x + y for x, y in zip(a, b)))

    def __sub__(self, other: 'IntPoly') -> 'IntPoly':
        return self + (-other)

    def __mul__(self, other: Union['IntPoly', int]) -> 'IntPoly':
        if isinstance(other, int):
            return IntPoly(tuple(c * other for c in self.coeffs))
        if self.is_zero() or other.is_zero():
            return IntPoly()
        out = [0] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a == 0:
                continue
            for j, b in enumerate(other.coeffs):
                out[i + j] += a * b
        return IntPoly(tuple(out))

    __rmul__ = __mul__

    def exact_div(self, divisor: 'IntPoly') -> 'IntPoly':
        """Quotient in Z[z]; raises ArithmeticError unless the division is exact."""
        if divisor.is_zero():
            raise ZeroDivisionError("division by the zero polynomial")
        remainder = list(self.coeffs)
        dd = divisor.degree
        lead = divisor.leading
        if len(remainder) - 1 < dd:
            if remainder:
                raise ArithmeticError("polynomial division is not exact")
            return IntPoly()
        quotient = [0] * (len(remainder) - dd)
        for shift in range(len(quotient) - 1, -1, -1):
            top = remainder[shift + dd]
            if top % lead:
                raise ArithmeticError("polynomial division is not exact")
            q = top // lead
            quotient[shift] = q
            if q:
                for k, c in enumerate(divisor.coeffs):
                    remainder[shift + k] -= q * c
        if any(remainder):
            raise ArithmeticError("polynomial division is not exact")
        return IntPoly(tuple(quotient))

    def __call__(self, t: Number) -> Number:
        return eval_at_integer(self, t)

    def multiplicity_at(self, t: int) -> int:
        """Multiplicity of the integer t as a root."""
        if self.is_zero():
            raise ZeroPolynomialError("the zero polynomial vanishes everywhere")
        linear = IntPoly((-t, 1))
        poly, count = self, 0
        while poly(t) == 0:
            poly = poly.exact_div(linear)
            count += 1
        return count

    def parity(self) -> int:
        """0 for even, 1 for odd, -1 when both parities occur."""
        parities = {k % 2 for k, c in enumerate(self.coeffs) if c}
        return parities.pop() if len(parities) == 1 else -1

    def to_sympy(self) -> sympy.Poly:
        return sympy.Poly(list(reversed(self.coeffs)) or [0], Z, domain="ZZ")

    def to_json(self) -> List[str]:
        return [str(c) for c in self.coeffs]

    @classmethod
    def from_json(cls, data: Sequence[Union[str, int]]) -> 'IntPoly':
        return cls(tuple(int(c) for c in data))

    def format(self) -> str:
        """Human-readable form, descending, e.g. ``-12z^3+5z``."""
        if self.is_zero():
            return "0"
        parts: List[str] = []
        for k in range(self.degree, -1, -1):
            c = self.coeffs[k]
            if c == 0:
                continue
            sign = "-" if c < 0 else "+"
            magnitude = abs(c)
            if k == 0:
                body = str(magnitude)
            else:
                body = ("" if magnitude == 1 else str(magnitude)) + ("z" if k == 1 else f"z^{k}")
            parts.append(sign + body)
        text = "".join(parts)
        return text[1:] if text.startswith("+") else text

    def __str__(self) -> str:
        return self.format()

    @classmethod
    def parse(cls, text: str) -> 'IntPoly':
        """Parse the human-readable form; accepts unicode minus signs."""
        source = text.replace("−", "-").replace(" ", "")
        if not source:
            raise ValueError("empty polynomial text")
        terms: dict = {}
        pos = 0
        while pos < len(source):
            match = _TERM.match(source, pos)
            sign, digits, var, exponent = match.groups()
            if match.end() == pos or (digits is None and var is None):
                raise ValueError(f"cannot parse polynomial near {source[pos:]!r} in {text!r}")
            if pos > 0 and sign is None:
                raise ValueError(f"missing sign before {source[pos:]!r} in {text!r}")
            coefficient = int(digits) if digits is not None else 1
            if sign == "-":
                coefficient = -coefficient
            degree = 0 if var is None else (int(exponent) if exponent is not None else 1)
            terms[degree] = terms.get(degree, 0) + coefficient
            pos = match.end()
        size = max(terms) + 1
        return cls(tuple(terms.get(k, 0) for k in range(size)))


@dataclass(frozen=True)
class NormalizedPoly(IntPoly):
    """Primitive polynomial with positive leading coefficient."""

    def __post_init__(self):
        super().__post_init__()
        if self.is_zero():
            raise ZeroPolynomialError("the zero polynomial has no normal form")
        if self.content != 1 or self.leading < 0:
            raise ValueError(f"{self.format()} is not normalized")


def normalize(poly: IntPoly) -> NormalizedPoly:
    """Divide by the content and make the leading coefficient positive."""
    if poly.is_zero():
        raise ZeroPolynomialError("cannot normalize the zero polynomial")
    divisor = poly.content
    if poly.leading < 0:
        divisor = -divisor
    return NormalizedPoly(tuple(c // divisor for c in poly.coeffs))


def eval_at_integer(poly: IntPoly, t: Number) -> Number:
    """Exact Horner evaluation at an integer or rational point."""
    value: Number = 0
    for c in reversed(poly.coeffs):
        value = value * t + c
    if isinstance(value, Fraction) and value.denominator == 1:
        return int(value)
    return value


def real_root_count(poly: IntPoly, lo=None, hi=None) -> int:
    """Number of real roots in [lo, hi], counted with multiplicity.

    Sturm sequences count distinct roots, so the count runs over the
    square-free factors and weights each by its multiplicity.
    """
    if poly.is_zero():
        raise ZeroPolynomialError("the zero polynomial has infinitely many roots")
    _, factors = poly.to_sympy().sqf_list()
    return sum(k * factor.count_roots(lo, hi) for factor, k in factors)


@lru_cache(maxsize=4096)
def real_roots(poly: IntPoly) -> Tuple[Tuple[float, int], ...]:
    """Real roots with multiplicities, from rational isolating intervals."""
    if poly.is_zero():
        raise ZeroPolynomialError("the zero polynomial has infinitely many roots")
    if poly.degree == 0:
        return ()
    intervals = poly.to_sympy().intervals(eps=_ROOT_EPS)
    return tuple((float((a + b) / 2), int(k)) for (a, b), k in intervals)


def expanded_real_roots(poly: IntPoly) -> List[float]:
    """Real roots listed with repetition, ascending."""
    return sorted(root for root, k in real_roots(poly) for _ in range(k))
