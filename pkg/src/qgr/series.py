"""Hilbert series of path algebras as exact rational functions.

The series of ``kQ`` is the vector ``sum_n p_n t^n = (I - tC)^{-1} 1``. It is
computed by Cramer's rule with Bareiss fraction-free determinants over
``Z[t]`` and then reduced to a canonical form: denominator with constant term
1 and no common factor shared by the denominator and all numerators.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Iterable, Sequence

import numpy as np

from .quiver import Quiver, incidence_matrix


@dataclass(frozen=True)
class IntPolynomial:
    """Integer polynomial, ``coeffs[k]`` the coefficient of ``t**k``."""

    coeffs: tuple[int, ...] = ()

    def __post_init__(self):
        c = [int(x) for x in self.coeffs]
        while c and c[-1] == 0:
            c.pop()
        object.__setattr__(self, "coeffs", tuple(c))

    @classmethod
    def const(cls, c: int) -> "IntPolynomial":
        return cls((c,))

    @classmethod
    def t(cls) -> "IntPolynomial":
        return cls((0, 1))

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def __bool__(self) -> bool:
        return bool(self.coeffs)

    def __getitem__(self, k: int) -> int:
        return self.coeffs[k] if 0 <= k < len(self.coeffs) else 0

    def __call__(self, x):
        acc = 0
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def __add__(self, other: "IntPolynomial") -> "IntPolynomial":
        n = max(len(self.coeffs), len(other.coeffs))
        return IntPolynomial(tuple(self[k] + other[k] for k in range(n)))

    def __neg__(self) -> "IntPolynomial":
        return IntPolynomial(tuple(-c for c in self.coeffs))

    def __sub__(self, other: "IntPolynomial") -> "IntPolynomial":
        return self + (-other)

    def __mul__(self, other) -> "IntPolynomial":
        if isinstance(other, int):
            return IntPolynomial(tuple(c * other for c in self.coeffs))
        if not self.coeffs or not other.coeffs:
            return IntPolynomial()
        out = [0] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    out[i + j] += a * b
        return IntPolynomial(tuple(out))

    __rmul__ = __mul__

    def exact_div(self, other: "IntPolynomial") -> "IntPolynomial":
        """Quotient when ``other`` divides ``self`` in ``Z[t]``; raises otherwise."""
        q, r = _divmod_q(self, other)
        if any(r) or any(x.denominator != 1 for x in q):
            raise ArithmeticError(f"{other} does not divide {self} in Z[t]")
        return IntPolynomial(tuple(int(x) for x in q))

    def content(self) -> int:
        g = 0
        for c in self.coeffs:
            g = gcd(g, c)
        return g

    def primitive(self) -> "IntPolynomial":
        """Divide out the content and make the leading coefficient positive."""
        if not self.coeffs:
            return self
        g = self.content()
        if self.coeffs[-1] < 0:
            g = -g
        return IntPolynomial(tuple(c // g for c in self.coeffs))

    def reversed(self, degree: int) -> "IntPolynomial":
        """``t**degree * p(1/t)``."""
        c = list(self.coeffs) + [0] * (degree + 1 - len(self.coeffs))
        return IntPolynomial(tuple(reversed(c[:degree + 1])))

    def to_json(self) -> list[int]:
        return list(self.coeffs)

    def __str__(self) -> str:
        return format_poly(self, "t")


def format_poly(p: IntPolynomial, var: str = "t") -> str:
    if not p.coeffs:
        return "0"
    terms = []
    for k, c in enumerate(p.coeffs):
        if c == 0:
            continue
        mag = abs(c)
        if k == 0:
            body = str(mag)
        else:
            power = var if k == 1 else f"{var}^{k}"
            body = power if mag == 1 else f"{mag}{power}"
        terms.append(("-" if c < 0 else "+", body))
    sign, body = terms[0]
    s = ("-" if sign == "-" else "") + body
    for sign, body in terms[1:]:
        s += f" {sign} {body}"
    return s


def _divmod_q(a: IntPolynomial, b: IntPolynomial) -> tuple[list[Fraction], list[Fraction]]:
    if b.is_zero():
        raise ZeroDivisionError("polynomial division by zero")
    r = [Fraction(c) for c in a.coeffs]
    q = [Fraction(0)] * max(len(r) - len(b.coeffs) + 1, 0)
    lead = b.coeffs[-1]
    for k in range(len(q) - 1, -1, -1):
        coef = r[k + len(b.coeffs) - 1] / lead
        q[k] = coef
        if coef:
            for j, bc in enumerate(b.coeffs):
                r[k + j] -= coef * bc
    while r and r[-1] == 0:
        r.pop()
    return q, r


def poly_gcd(a: IntPolynomial, b: IntPolynomial) -> IntPolynomial:
    """Primitive gcd in ``Z[t]`` (Euclid over Q, then cleared and made primitive)."""
    if a.is_zero():
        return b.primitive()
    if b.is_zero():
        return a.primitive()
    x = [Fraction(c) for c in a.coeffs]
    y = [Fraction(c) for c in b.coeffs]
    while any(y):
        _, r = _divmod_frac(x, y)
        x, y = y, r
    den = 1
    for c in x:
        den = den * c.denominator // gcd(den, c.denominator)
    return IntPolynomial(tuple(int(c * den) for c in x)).primitive()


def _divmod_frac(a: list[Fraction], b: list[Fraction]):
    while b and b[-1] == 0:
        b = b[:-1]
    r = list(a)
    while r and r[-1] == 0:
        r.pop()
    q = [Fraction(0)] * max(len(r) - len(b) + 1, 0)
    for k in range(len(q) - 1, -1, -1):
        coef = r[k + len(b) - 1] / b[-1]
        q[k] = coef
        for j, bc in enumerate(b):
            r[k + j] -= coef * bc
    while r and r[-1] == 0:
        r.pop()
    return q, r


def bareiss_det(m: Sequence[Sequence[IntPolynomial]]) -> IntPolynomial:
    """Determinant over ``Z[t]`` by fraction-free elimination with row pivoting."""
    a = [list(row) for row in m]
    n = len(a)
    if n == 0:
        return IntPolynomial.const(1)
    sign = 1
    prev = IntPolynomial.const(1)
    for k in range(n - 1):
        if a[k][k].is_zero():
            swap = next((i for i in range(k + 1, n) if not a[i][k].is_zero()), None)
            if swap is None:
                return IntPolynomial()
            a[k], a[swap] = a[swap], a[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]).exact_div(prev)
        prev = a[k][k]
    det = a[n - 1][n - 1]
    return det if sign == 1 else -det


def char_poly(c) -> IntPolynomial:
    """``det(xI - C)`` as a polynomial in ``x``."""
    c = np.asarray(c, dtype=object)
    n = c.shape[0]
    x = IntPolynomial.t()
    m = [[(x if i == j else IntPolynomial()) - IntPolynomial.const(int(c[i, j]))
          for j in range(n)] for i in range(n)]
    return bareiss_det(m)


def det_one_minus_tc(c) -> IntPolynomial:
    """``det(I - tC)``, the reversal of the characteristic polynomial."""
    c = np.asarray(c, dtype=object)
    return char_poly(c).reversed(c.shape[0])


@dataclass(frozen=True)
class RationalFunctionVector:
    """A vector of rational functions sharing one denominator, kept in canonical form."""

    numerators: tuple[IntPolynomial, ...]
    denominator: IntPolynomial

    @classmethod
    def normalized(cls, numerators: Iterable[IntPolynomial],
                   denominator: IntPolynomial) -> "RationalFunctionVector":
        numerators = tuple(numerators)
        if denominator.is_zero():
            raise ZeroDivisionError("zero denominator")
        g = denominator
        for p in numerators:
            g = poly_gcd(g, p)
        nums = tuple(p.exact_div(g) for p in numerators)
        den = denominator.exact_div(g)
        if den[0] == 0:
            raise ValueError("denominator vanishes at t = 0; no power series expansion")
        if abs(den[0]) != 1:
            # Scale by den(0) only when that keeps integer coefficients.
            f = den[0]
            if any(c % f for c in den.coeffs) or any(c % f for p in nums for c in p.coeffs):
                raise ValueError("cannot normalize denominator constant term to 1 over Z")
            return cls(tuple(IntPolynomial(tuple(c // f for c in p.coeffs)) for p in nums),
                       IntPolynomial(tuple(c // f for c in den.coeffs)))
        if den[0] == -1:
            nums = tuple(-p for p in nums)
            den = -den
        return cls(nums, den)

    def expand(self, n: int) -> list[tuple[int, ...]]:
        return expand(self, n)

    def to_json(self) -> dict:
        return {"numerators": [p.to_json() for p in self.numerators],
                "denominator": self.denominator.to_json()}

    def render(self) -> list[str]:
        den = str(self.denominator)
        return [f"({p}) / ({den})" for p in self.numerators]


def hilbert_series(q: Quiver) -> RationalFunctionVector:
    """``(I - tC)^{-1} 1`` by Cramer's rule over ``Z[t]``."""
    c = incidence_matrix(q)
    n = len(q)
    t = IntPolynomial.t()
    one = IntPolynomial.const(1)
    a = [[(one if i == j else IntPolynomial()) - t * int(c[i, j]) for j in range(n)]
         for i in range(n)]
    det = bareiss_det(a)
    nums = []
    for col in range(n):
        m = [[one if j == col else a[i][j] for j in range(n)] for i in range(n)]
        nums.append(bareiss_det(m))
    return RationalFunctionVector.normalized(nums, det)


def expand(h: RationalFunctionVector, n: int) -> list[tuple[int, ...]]:
    """The first ``n + 1`` coefficient vectors of the power series.

    Long division by a denominator with constant term 1 stays in the integers.
    """
    if n < 0:
        raise ValueError("expansion order must be non-negative")
    den = h.denominator
    if den[0] != 1:
        raise ValueError("denominator must have constant term 1")
    columns = []
    for num in h.numerators:
        out: list[int] = []
        for k in range(n + 1):
            s = num[k] - sum(den[j] * out[k - j] for j in range(1, min(k, den.degree) + 1))
            out.append(s)
        columns.append(out)
    return [tuple(col[k] for col in columns) for k in range(n + 1)]
