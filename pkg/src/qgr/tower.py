"""The ultramatricial algebra S(Q) as a concrete direct limit of block algebras.

Level ``n`` is the product over vertices ``i`` of full matrix algebras of size
``p[n][i]``, the number of length-``n`` paths ending at ``i``. An element at
level ``n`` is a tuple of square blocks; the embedding into level ``n + 1``
places, in block ``j``, one copy of block ``s(a)`` for every arrow ``a`` ending
at ``j`` (arrows in canonical order).
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Sequence

import numpy as np

from . import _linalg as la
from .quiver import Quiver, incidence_matrix, sink_depth


@dataclass(frozen=True)
class BratteliDiagram:
    vertices: tuple[str, ...]
    sizes: tuple[tuple[int, ...], ...]
    edges: tuple[tuple[int, ...], ...]

    @property
    def levels(self) -> int:
        return len(self.sizes)

    def to_json(self) -> dict:
        return {
            "levels": self.levels,
            "vertices": list(self.vertices),
            "sizes": [list(s) for s in self.sizes],
            "edges": [list(r) for r in self.edges],
        }

    def to_dot(self) -> str:
        """Levels as ranks; ``edges[j][i]`` parallel edges from ``(n, i)`` to ``(n+1, j)``."""
        out = ["digraph bratteli {", "  rankdir=LR;", "  node [shape=plaintext];"]
        for n, row in enumerate(self.sizes):
            names = " ".join(f'"{n},{v}"' for v in self.vertices)
            out.append(f"  {{ rank=same; {names} }}")
            for v, size in zip(self.vertices, row):
                out.append(f'  "{n},{v}" [label="{size}"];')
        for n in range(self.levels - 1):
            for j, tgt in enumerate(self.vertices):
                for i, src in enumerate(self.vertices):
                    for _ in range(self.edges[j][i]):
                        out.append(f'  "{n},{src}" -> "{n + 1},{tgt}" [arrowhead=none];')
        out.append("}")
        return "\n".join(out) + "\n"


class Tower:
    """The directed system ``S_0 -> S_1 -> ...`` attached to a quiver."""

    def __init__(self, q: Quiver):
        self.quiver = q
        self.incidence = incidence_matrix(q)
        self._sizes: list[tuple[int, ...]] = [tuple(1 for _ in q.vertices)]

    @cached_property
    def kernel_depth(self) -> int:
        """Extra embeddings after which the surviving blocks embed injectively."""
        return sink_depth(self.quiver)

    def sizes(self, n: int) -> tuple[int, ...]:
        while len(self._sizes) <= n:
            prev = np.array(self._sizes[-1], dtype=object)
            self._sizes.append(tuple(int(x) for x in self.incidence @ prev))
        return self._sizes[n]

    def bratteli(self, levels: int) -> BratteliDiagram:
        if levels < 0:
            raise ValueError("number of levels must be non-negative")
        sizes = tuple(self.sizes(n) for n in range(levels + 1))
        edges = tuple(tuple(int(x) for x in row) for row in self.incidence)
        return BratteliDiagram(self.quiver.vertices, sizes, edges)

    # -- constructors -------------------------------------------------

    def element(self, level: int, blocks: Sequence) -> "TowerElement":
        sizes = self.sizes(level)
        if len(blocks) != len(sizes):
            raise ValueError(f"expected {len(sizes)} blocks, got {len(blocks)}")
        arrs = []
        for v, b, s in zip(self.quiver.vertices, blocks, sizes):
            m = b if isinstance(b, np.ndarray) else la.matrix(b, shape=(s, s))
            if m.shape != (s, s):
                raise ValueError(f"block at vertex {v} has shape {m.shape}, expected {(s, s)}")
            arrs.append(m)
        return TowerElement(self, level, tuple(arrs))

    def zero(self, level: int) -> "TowerElement":
        return TowerElement(self, level, tuple(la.zeros(s, s) for s in self.sizes(level)))

    def unit(self, level: int = 0) -> "TowerElement":
        return TowerElement(self, level, tuple(la.identity(s) for s in self.sizes(level)))

    def matrix_unit(self, level: int, vertex: str, row: int, col: int) -> "TowerElement":
        e = self.zero(level)
        blocks = list(e.blocks)
        b = blocks[self.quiver.index(vertex)].copy()
        b[row, col] = 1
        blocks[self.quiver.index(vertex)] = b
        return TowerElement(self, level, tuple(blocks))

    def block_idempotent(self, level: int, vertex: str) -> "TowerElement":
        blocks = [la.zeros(s, s) for s in self.sizes(level)]
        k = self.quiver.index(vertex)
        blocks[k] = la.identity(self.sizes(level)[k])
        return TowerElement(self, level, tuple(blocks))

    def matrix_units(self, level: int):
        for v, s in zip(self.quiver.vertices, self.sizes(level)):
            for r in range(s):
                for c in range(s):
                    yield self.matrix_unit(level, v, r, c)

    def random_element(self, level: int, rng: random.Random, bound: int = 3) -> "TowerElement":
        blocks = []
        for s in self.sizes(level):
            b = la.zeros(s, s)
            for idx in np.ndindex(s, s):
                b[idx] = Fraction(rng.randint(-bound, bound), rng.randint(1, 2))
            blocks.append(la._normalize(b))
        return TowerElement(self, level, tuple(blocks))

    # -- structure maps -----------------------------------------------

    def theta(self, e: "TowerElement") -> "TowerElement":
        q = self.quiver
        blocks = tuple(
            la.block_diag(e.blocks[q.index(a.source)] for a in q.arrows_into(j))
            for j in q.vertices
        )
        return TowerElement(self, e.level + 1, blocks)

    def raise_to(self, e: "TowerElement", level: int) -> "TowerElement":
        if level < e.level:
            raise ValueError(f"cannot lower an element from level {e.level} to {level}")
        while e.level < level:
            e = self.theta(e)
        return e

    def limit_equal(self, a: "TowerElement", b: "TowerElement") -> bool:
        n = max(a.level, b.level)
        a = self.raise_to(a, n + self.kernel_depth)
        b = self.raise_to(b, n + self.kernel_depth)
        return all(la.equal(x, y) for x, y in zip(a.blocks, b.blocks))

    def limit_is_zero(self, e: "TowerElement") -> bool:
        return self.limit_equal(e, self.zero(e.level))


@dataclass(frozen=True, eq=False)
class TowerElement:
    """An element of ``S_level``; ``==`` is equality in the direct limit."""

    tower: Tower
    level: int
    blocks: tuple[np.ndarray, ...]

    def _align(self, other: "TowerElement") -> tuple["TowerElement", "TowerElement"]:
        if other.tower is not self.tower and other.tower.quiver != self.tower.quiver:
            raise ValueError("elements belong to different towers")
        n = max(self.level, other.level)
        return self.tower.raise_to(self, n), self.tower.raise_to(other, n)

    def __add__(self, other: "TowerElement") -> "TowerElement":
        a, b = self._align(other)
        return TowerElement(self.tower, a.level, tuple(x + y for x, y in zip(a.blocks, b.blocks)))

    def __sub__(self, other: "TowerElement") -> "TowerElement":
        return self + other.scale(-1)

    def __neg__(self) -> "TowerElement":
        return self.scale(-1)

    def __mul__(self, other):
        if isinstance(other, TowerElement):
            a, b = self._align(other)
            return TowerElement(self.tower, a.level,
                                tuple(x @ y for x, y in zip(a.blocks, b.blocks)))
        return self.scale(other)

    def __rmul__(self, scalar):
        return self.scale(scalar)

    def scale(self, scalar) -> "TowerElement":
        c = la.to_rational(scalar)
        return TowerElement(self.tower, self.level, tuple(b * c for b in self.blocks))

    def __eq__(self, other) -> bool:
        if not isinstance(other, TowerElement):
            return NotImplemented
        return self.tower.limit_equal(self, other)

    __hash__ = None

    def same_level_equal(self, other: "TowerElement") -> bool:
        """Literal equality of the stored representatives."""
        return self.level == other.level and all(
            la.equal(x, y) for x, y in zip(self.blocks, other.blocks))

    def to_json(self) -> dict:
        return {
            "level": self.level,
            "blocks": {v: la.to_jsonable(b)
                       for v, b in zip(self.tower.quiver.vertices, self.blocks)},
        }


# Module-level spellings of the tower operations.

def bratteli(q: Quiver, levels: int) -> BratteliDiagram:
    return Tower(q).bratteli(levels)


def theta(e: TowerElement) -> TowerElement:
    return e.tower.theta(e)


def raise_to_level(e: TowerElement, n: int) -> TowerElement:
    return e.tower.raise_to(e, n)


def add(a: TowerElement, b: TowerElement) -> TowerElement:
    return a + b


def mul(a: TowerElement, b: TowerElement) -> TowerElement:
    return a * b


def scalar_mul(c, e: TowerElement) -> TowerElement:
    return e.scale(c)


def limit_equal(a: TowerElement, b: TowerElement) -> bool:
    return a.tower.limit_equal(a, b)


def limit_is_zero(e: TowerElement) -> bool:
    return e.tower.limit_is_zero(e)
