"""Exact matrix helpers over the rationals.

Matrices are numpy arrays of ``dtype=object`` whose entries are Python ``int``
or ``fractions.Fraction``; nothing here ever produces a float.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd
from typing import Iterable, Sequence

import numpy as np


def zeros(rows: int, cols: int) -> np.ndarray:
    return np.zeros((rows, cols), dtype=object)


def identity(n: int) -> np.ndarray:
    m = zeros(n, n)
    for k in range(n):
        m[k, k] = 1
    return m


def matrix(rows: Sequence[Sequence], shape: tuple[int, int] | None = None) -> np.ndarray:
    """Build an exact matrix from nested sequences.

    Strings such as ``"3/4"`` are parsed as fractions. ``shape`` is needed to
    give empty input a definite column count.
    """
    data = [[to_rational(x) for x in row] for row in rows]
    if not data:
        return zeros(*(shape or (0, 0)))
    width = len(data[0])
    if any(len(row) != width for row in data):
        raise ValueError("ragged matrix rows")
    m = zeros(len(data), width)
    for i, row in enumerate(data):
        for j, x in enumerate(row):
            m[i, j] = x
    if shape is not None and m.shape != tuple(shape):
        raise ValueError(f"expected shape {tuple(shape)}, got {m.shape}")
    return m


def to_rational(x) -> int | Fraction:
    if isinstance(x, bool):
        raise TypeError("booleans are not matrix entries")
    if isinstance(x, int):
        return x
    if isinstance(x, Fraction):
        return x.numerator if x.denominator == 1 else x
    if isinstance(x, str):
        return to_rational(Fraction(x))
    if isinstance(x, (np.integer,)):
        return int(x)
    raise TypeError(f"not an exact rational: {x!r}")


def to_jsonable(m: np.ndarray) -> list[list]:
    """Integers stay integers; other rationals become ``"p/q"`` strings."""
    out = []
    for row in m:
        out.append([_entry_json(x) for x in row])
    return out


def _entry_json(x):
    x = to_rational(x)
    if isinstance(x, int):
        return x
    return f"{x.numerator}/{x.denominator}"


def block_diag(blocks: Iterable[np.ndarray]) -> np.ndarray:
    """Block-diagonal assembly; rectangular and empty blocks are allowed."""
    blocks = list(blocks)
    rows = sum(b.shape[0] for b in blocks)
    cols = sum(b.shape[1] for b in blocks)
    out = zeros(rows, cols)
    r = c = 0
    for b in blocks:
        out[r:r + b.shape[0], c:c + b.shape[1]] = b
        r += b.shape[0]
        c += b.shape[1]
    return out


def is_zero(m: np.ndarray) -> bool:
    return all(x == 0 for x in m.flat)


def equal(a: np.ndarray, b: np.ndarray) -> bool:
    return a.shape == b.shape and all(x == y for x, y in zip(a.flat, b.flat))


def int_matrix_power(m: np.ndarray, k: int) -> np.ndarray:
    """``m**k`` by repeated squaring, entries kept as Python ints."""
    if k < 0:
        raise ValueError("negative power")
    result = identity(m.shape[0])
    base = m.copy()
    while k:
        if k & 1:
            result = result @ base
        base = base @ base
        k >>= 1
    return result


def rref(m: np.ndarray) -> tuple[np.ndarray, list[int]]:
    """Reduced row echelon form and the pivot columns."""
    a = np.array([[Fraction(x) for x in row] for row in m], dtype=object).reshape(m.shape)
    rows, cols = a.shape
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        pivot = next((i for i in range(r, rows) if a[i, c] != 0), None)
        if pivot is None:
            continue
        if pivot != r:
            a[[r, pivot]] = a[[pivot, r]]
        a[r] = a[r] / a[r, c]
        for i in range(rows):
            if i != r and a[i, c] != 0:
                a[i] = a[i] - a[i, c] * a[r]
        pivots.append(c)
        r += 1
    return a, pivots


def rank(m: np.ndarray) -> int:
    """Rank by fraction-free (Bareiss) elimination on an integer rescaling of the rows.

    Every intermediate entry is a minor of the input, so the divisions are exact
    and no fractions are created.
    """
    if 0 in m.shape:
        return 0
    a = [_integer_row(row) for row in m]
    nrows, ncols = m.shape
    r, prev = 0, 1
    for c in range(ncols):
        if r == nrows:
            break
        pivot = next((i for i in range(r, nrows) if a[i][c]), None)
        if pivot is None:
            continue
        a[r], a[pivot] = a[pivot], a[r]
        p = a[r][c]
        for i in range(r + 1, nrows):
            ai = a[i]
            f = ai[c]
            for j in range(c + 1, ncols):
                ai[j] = (p * ai[j] - f * a[r][j]) // prev
            ai[c] = 0
        prev = p
        r += 1
    return r


def _integer_row(row) -> list[int]:
    vals = [to_rational(x) for x in row]
    den = 1
    for v in vals:
        if isinstance(v, Fraction):
            den = den * v.denominator // gcd(den, v.denominator)
    return [int(v * den) for v in vals]


def inverse(m: np.ndarray) -> np.ndarray:
    n, k = m.shape
    if n != k:
        raise ValueError("inverse of a non-square matrix")
    if n == 0:
        return zeros(0, 0)
    aug = np.concatenate([m, identity(n)], axis=1)
    red, pivots = rref(aug)
    if pivots[:n] != list(range(n)):
        raise ValueError("singular matrix")
    return _normalize(red[:, n:])


def left_inverse(m: np.ndarray) -> np.ndarray:
    """A matrix ``g`` with ``g @ m = I`` for ``m`` of full column rank.

    Built from the pivot rows: pick an invertible square submatrix of ``m`` and
    invert it, so the result has exact small entries.
    """
    rows, cols = m.shape
    if cols == 0:
        return zeros(0, rows)
    _, pivot_rows = rref(m.T)
    if len(pivot_rows) != cols:
        raise ValueError("matrix does not have full column rank")
    square = m[pivot_rows, :]
    inv = inverse(square)
    g = zeros(cols, rows)
    g[:, pivot_rows] = inv
    return g


def _normalize(m: np.ndarray) -> np.ndarray:
    out = zeros(*m.shape)
    for idx, x in np.ndenumerate(m):
        out[idx] = to_rational(x)
    return out
