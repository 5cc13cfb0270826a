"""K_0 of S(Q) as the ordered direct limit of ``Z^I --C--> Z^I --C--> ...``.

A class is a pair ``(level, vector)`` and ``(n, v)`` is identified with
``(n + 1, C v)``. Positivity means ``C^k v >= 0`` for some ``k``; it is only
semi-decidable here, so :func:`k0_positive` answers with an explicit
"not yet" after a caller-chosen number of steps.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import ResourceLimitError
from .quiver import Quiver, incidence_matrix

MORITA_VERTEX_LIMIT = 10


@dataclass(frozen=True)
class K0Class:
    level: int
    vector: tuple[int, ...]

    def __post_init__(self):
        if self.level < 0:
            raise ValueError("K0 level must be non-negative")
        object.__setattr__(self, "vector", tuple(int(x) for x in self.vector))

    def __str__(self) -> str:
        return f"({','.join(map(str, self.vector))})@{self.level}"

    def to_json(self) -> dict:
        return {"level": self.level, "vector": list(self.vector)}


@dataclass(frozen=True)
class Positive:
    iterations: int


@dataclass(frozen=True)
class NotPositiveYet:
    max_iter: int


def _apply(c: np.ndarray, v: Sequence[int], times: int) -> tuple[int, ...]:
    w = np.array(v, dtype=object)
    for _ in range(times):
        w = c @ w
    return tuple(int(x) for x in w)


def k0_class(v: Sequence[int], level: int = 0) -> K0Class:
    return K0Class(level, tuple(v))


def k0_raise(q: Quiver, x: K0Class, level: int) -> K0Class:
    """The representative of ``x`` at a later level."""
    if level < x.level:
        raise ValueError(f"cannot lower a class from level {x.level} to {level}")
    _check_len(q, x)
    return K0Class(level, _apply(incidence_matrix(q), x.vector, level - x.level))


def k0_equal(q: Quiver, x: K0Class, y: K0Class) -> bool:
    """Equality in the limit: ``C^k (x - y) = 0`` at a common level for some ``k``.

    The kernels of ``C^k`` stop growing by ``k = |I|``, so one check suffices.
    """
    n = max(x.level, y.level)
    a = k0_raise(q, x, n).vector
    b = k0_raise(q, y, n).vector
    diff = [s - t for s, t in zip(a, b)]
    return not any(_apply(incidence_matrix(q), diff, len(q)))


def k0_add(q: Quiver, x: K0Class, y: K0Class) -> K0Class:
    n = max(x.level, y.level)
    a = k0_raise(q, x, n).vector
    b = k0_raise(q, y, n).vector
    return K0Class(n, tuple(s + t for s, t in zip(a, b)))


def k0_neg(x: K0Class) -> K0Class:
    return K0Class(x.level, tuple(-s for s in x.vector))


def k0_is_zero(q: Quiver, x: K0Class) -> bool:
    return k0_equal(q, x, K0Class(x.level, (0,) * len(q)))


def k0_positive(q: Quiver, x: K0Class, max_iter: int) -> Positive | NotPositiveYet:
    _check_len(q, x)
    c = incidence_matrix(q)
    v = tuple(x.vector)
    for k in range(max_iter + 1):
        if all(s >= 0 for s in v):
            return Positive(k)
        v = _apply(c, v, 1)
    return NotPositiveYet(max_iter)


def k0_order_unit(q: Quiver) -> K0Class:
    """The class of S(Q) itself: the all-ones vector at level 0."""
    return K0Class(0, (1,) * len(q))


def k0_shift(x: K0Class, steps: int = 1) -> K0Class:
    """The Serre-twist shadow ``(n, v) -> (n + steps, v)``."""
    return K0Class(x.level + steps, x.vector)


def k0_transport(q: Quiver, x: K0Class, vertex: str, kind: str) -> K0Class:
    """Carry a class across deleting the sink or source ``vertex``.

    Deleting a sink restricts the vector. Deleting a source first moves one
    level up, where the source coordinate is zero and its arrows have pushed
    their mass onto the remaining vertices.
    """
    keep = [k for k, v in enumerate(q.vertices) if v != vertex]
    if kind == "sink":
        return K0Class(x.level, tuple(x.vector[k] for k in keep))
    if kind == "source":
        up = k0_raise(q, x, x.level + 1)
        return K0Class(up.level, tuple(up.vector[k] for k in keep))
    raise ValueError(f"kind must be 'sink' or 'source', not {kind!r}")


def _check_len(q: Quiver, x: K0Class) -> None:
    if len(x.vector) != len(q):
        raise ValueError(f"K0 vector has length {len(x.vector)}, quiver has {len(q)} vertices")


# -- Morita check ----------------------------------------------------------

@dataclass(frozen=True)
class Equivalent:
    """``witness[v]`` is the vertex of the second quiver matched with ``v``."""

    witness: dict


@dataclass(frozen=True)
class Unknown:
    reason: str


def morita_equivalent_stationary(q1: Quiver, q2: Quiver) -> Equivalent | Unknown:
    """Look for a vertex bijection conjugating one incidence matrix into the other.

    Finding one proves Morita equivalence (same unlabelled Bratteli diagram).
    Failing proves nothing, hence ``Unknown`` rather than a negative answer.
    """
    n = len(q1)
    if max(n, len(q2)) > MORITA_VERTEX_LIMIT:
        raise ResourceLimitError(
            f"permutation search is limited to {MORITA_VERTEX_LIMIT} vertices")
    if n != len(q2):
        return Unknown(f"vertex counts differ ({n} vs {len(q2)})")
    c1 = incidence_matrix(q1)
    c2 = incidence_matrix(q2)
    for perm in _permutations(c1, c2):
        return Equivalent({q1.vertices[i]: q2.vertices[perm[i]] for i in range(n)})
    return Unknown("no vertex permutation conjugates the incidence matrices")


def _permutations(c1: np.ndarray, c2: np.ndarray):
    """Permutations ``p`` with ``c2[p[i], p[j]] == c1[i, j]``, by pruned exhaustive search."""
    n = c1.shape[0]
    sig1 = [_signature(c1, i) for i in range(n)]
    sig2 = [_signature(c2, i) for i in range(n)]
    assigned: list[int] = []
    used = [False] * n

    def extend():
        i = len(assigned)
        if i == n:
            yield tuple(assigned)
            return
        for cand in range(n):
            if used[cand] or sig1[i] != sig2[cand]:
                continue
            if c1[i, i] != c2[cand, cand]:
                continue
            if any(c1[i, k] != c2[cand, assigned[k]] or c1[k, i] != c2[assigned[k], cand]
                   for k in range(i)):
                continue
            used[cand] = True
            assigned.append(cand)
            yield from extend()
            assigned.pop()
            used[cand] = False

    yield from extend()


def _signature(c: np.ndarray, i: int) -> tuple:
    return (sorted(int(x) for x in c[i, :]), sorted(int(x) for x in c[:, i]))

