"""Finite quivers, their paths and incidence matrices.

Composition follows the convention ``pq`` = "``q`` followed by ``p``". A
:class:`Path` stores its arrows first-applied-first but renders right to left,
so the path ``x`` after ``w`` is stored as ``(w, x)`` and printed ``xw``.

Paths of a fixed length ending at a fixed vertex are listed in the canonical
order used for every matrix indexing in the package: compare the last-applied
arrow first, arrows ranked by (declared index of their source, name). Under
this order the paths of length ``n + 1`` ending at ``j`` come grouped by their
final arrow, which makes the level embeddings block diagonal.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Mapping, NamedTuple, Sequence

import networkx as nx
import numpy as np

from . import _linalg as la
from .errors import ResourceLimitError

DEFAULT_PATH_CAP = 10**6
PATH_CAP_ENV = "QGR_PATH_CAP"


def path_cap() -> int:
    """The explicit-path cap: ``$QGR_PATH_CAP`` if set, else 10**6."""
    raw = os.environ.get(PATH_CAP_ENV)
    if raw is None:
        return DEFAULT_PATH_CAP
    cap = int(raw)
    if cap <= 0:
        raise ValueError(f"{PATH_CAP_ENV} must be positive, got {raw!r}")
    return cap


class Arrow(NamedTuple):
    name: str
    source: str
    target: str


@dataclass(frozen=True)
class Quiver:
    vertices: tuple[str, ...]
    arrows: tuple[Arrow, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "vertices", tuple(str(v) for v in self.vertices))
        object.__setattr__(self, "arrows", tuple(Arrow(*map(str, a)) for a in self.arrows))
        if len(set(self.vertices)) != len(self.vertices):
            dup = _first_duplicate(self.vertices)
            raise ValueError(f"duplicate vertex {dup!r}")
        names = [a.name for a in self.arrows]
        if len(set(names)) != len(names):
            raise ValueError(f"duplicate arrow name {_first_duplicate(names)!r}")
        known = set(self.vertices)
        for a in self.arrows:
            for end in (a.source, a.target):
                if end not in known:
                    raise ValueError(f"arrow {a.name!r} uses undeclared vertex {end!r}")

    @classmethod
    def from_edges(cls, edges: Iterable[tuple[str, str, str]],
                   vertices: Iterable[str] = ()) -> "Quiver":
        """Quiver from ``(name, source, target)`` triples; vertices in first-seen order."""
        edges = [Arrow(*e) for e in edges]
        order = list(dict.fromkeys(str(v) for v in vertices))
        for a in edges:
            for v in (a.source, a.target):
                if v not in order:
                    order.append(v)
        return cls(tuple(order), tuple(edges))

    # -- lookup -----------------------------------------------------------

    def __len__(self) -> int:
        return len(self.vertices)

    @cached_property
    def _index(self) -> dict[str, int]:
        return {v: k for k, v in enumerate(self.vertices)}

    def index(self, vertex: str) -> int:
        return self._index[vertex]

    @cached_property
    def _by_name(self) -> dict[str, Arrow]:
        return {a.name: a for a in self.arrows}

    def arrow(self, name: str) -> Arrow:
        return self._by_name[name]

    def arrow_key(self, a: Arrow) -> tuple[int, str]:
        return (self._index[a.source], a.name)

    @cached_property
    def _into(self) -> dict[str, tuple[Arrow, ...]]:
        out: dict[str, list[Arrow]] = {v: [] for v in self.vertices}
        for a in self.arrows:
            out[a.target].append(a)
        return {v: tuple(sorted(arr, key=self.arrow_key)) for v, arr in out.items()}

    @cached_property
    def _from(self) -> dict[str, tuple[Arrow, ...]]:
        out: dict[str, list[Arrow]] = {v: [] for v in self.vertices}
        for a in self.arrows:
            out[a.source].append(a)
        return {v: tuple(sorted(arr, key=lambda a: (self._index[a.target], a.name)))
                for v, arr in out.items()}

    def arrows_into(self, vertex: str) -> tuple[Arrow, ...]:
        """Arrows ending at ``vertex``, in canonical arrow order."""
        return self._into[vertex]

    def arrows_from(self, vertex: str) -> tuple[Arrow, ...]:
        return self._from[vertex]

    def sinks(self) -> tuple[str, ...]:
        return tuple(v for v in self.vertices if not self._from[v])

    def sources(self) -> tuple[str, ...]:
        return tuple(v for v in self.vertices if not self._into[v])

    # -- derived quivers --------------------------------------------------

    def delete_vertices(self, removed: Iterable[str]) -> "Quiver":
        """Drop the given vertices together with every arrow touching them."""
        removed = set(removed)
        return Quiver(
            tuple(v for v in self.vertices if v not in removed),
            tuple(a for a in self.arrows if a.source not in removed and a.target not in removed),
        )

    def subquiver(self, vertices: Iterable[str]) -> "Quiver":
        keep = set(vertices)
        return self.delete_vertices(v for v in self.vertices if v not in keep)

    def reorder(self, order: Sequence[str]) -> "Quiver":
        """Same quiver with the vertices declared in ``order``."""
        if sorted(order) != sorted(self.vertices):
            raise ValueError("vertex order must be a permutation of the vertices")
        return Quiver(tuple(order), self.arrows)

    def is_acyclic(self) -> bool:
        return not torsion_classification(self).infinite_vertices


def _first_duplicate(items):
    seen = set()
    for x in items:
        if x in seen:
            return x
        seen.add(x)
    return None


@dataclass(frozen=True)
class Path:
    """A path, stored first-applied-first; ``base`` is its start vertex."""

    base: str
    arrows: tuple[Arrow, ...] = ()

    def __post_init__(self):
        prev = self.base
        for a in self.arrows:
            if a.source != prev:
                raise ValueError(f"arrow {a.name!r} does not start where the path ends")
            prev = a.target

    @classmethod
    def trivial(cls, vertex: str) -> "Path":
        return cls(vertex, ())

    @classmethod
    def of(cls, q: Quiver, *names: str) -> "Path":
        """Path from arrow names written right to left: ``of(q, "x", "w")`` is xw."""
        arrows = tuple(q.arrow(n) for n in reversed(names))
        if not arrows:
            raise ValueError("use Path.trivial for trivial paths")
        return cls(arrows[0].source, arrows)

    @property
    def length(self) -> int:
        return len(self.arrows)

    def __len__(self) -> int:
        return len(self.arrows)

    @property
    def source(self) -> str:
        return self.base

    @property
    def target(self) -> str:
        return self.arrows[-1].target if self.arrows else self.base

    def then(self, a: Arrow) -> "Path":
        """``a`` applied after this path, i.e. the product ``a·self``."""
        return Path(self.base, self.arrows + (a,))

    def after(self, other: "Path") -> "Path":
        """The product ``self·other``: ``other`` first, then ``self``."""
        if other.target != self.source:
            raise ValueError("paths do not compose")
        return Path(other.base, other.arrows + self.arrows)

    def key(self, q: Quiver) -> tuple:
        return tuple(q.arrow_key(a) for a in reversed(self.arrows))

    def names(self) -> tuple[str, ...]:
        """Arrow names in rendering order (last applied first)."""
        return tuple(a.name for a in reversed(self.arrows))

    def render(self) -> str:
        if not self.arrows:
            return f"e{self.base}" if len(self.base) == 1 else f"e_{self.base}"
        names = self.names()
        sep = "" if all(len(n) == 1 for n in names) else "."
        return sep.join(names)

    def __str__(self) -> str:
        return self.render()


# -- counting -------------------------------------------------------------

def incidence_matrix(q: Quiver) -> np.ndarray:
    """``C[i, j]`` = number of arrows from vertex ``j`` to vertex ``i``."""
    c = la.zeros(len(q), len(q))
    for a in q.arrows:
        c[q.index(a.target), q.index(a.source)] += 1
    return c


def path_counts(q: Quiver, n: int) -> tuple[int, ...]:
    """Number of length-``n`` paths ending at each vertex, as ``C**n @ 1``."""
    if n < 0:
        raise ValueError("path length must be non-negative")
    c = incidence_matrix(q)
    v = np.ones(len(q), dtype=object)
    for _ in range(n):
        v = c @ v
    return tuple(int(x) for x in v)


def enumerate_paths(q: Quiver, n: int, cap: int | None = None) -> dict[str, list[Path]]:
    """All paths of length ``n``, keyed by end vertex, in canonical order."""
    if n < 0:
        raise ValueError("path length must be non-negative")
    cap = path_cap() if cap is None else cap
    total = sum(path_counts(q, n))
    if total > cap:
        raise ResourceLimitError(f"{total} paths of length {n} exceed the path cap {cap}")
    layer = {v: [Path.trivial(v)] for v in q.vertices}
    for _ in range(n):
        layer = {
            j: [r.then(a) for a in q.arrows_into(j) for r in layer[a.source]]
            for j in q.vertices
        }
    return layer


# -- transformations ------------------------------------------------------

def core(q: Quiver) -> Quiver:
    """Delete sinks and sources repeatedly until none remain."""
    return core_steps(q)[0]


def core_steps(q: Quiver) -> tuple[Quiver, int]:
    """The core and the number of deletion rounds needed to reach it."""
    rounds = 0
    while True:
        doomed = set(q.sinks()) | set(q.sources())
        if not doomed:
            return q, rounds
        q = q.delete_vertices(doomed)
        rounds += 1


def sink_depth(q: Quiver) -> int:
    """Rounds of "delete every sink" before no sink is left (at most ``len(q)``).

    A vertex survives exactly when infinitely many paths start there, and every
    path from a deleted vertex is shorter than this depth.
    """
    rounds = 0
    while True:
        sinks = q.sinks()
        if not sinks:
            return rounds
        q = q.delete_vertices(sinks)
        rounds += 1


def veronese(q: Quiver, m: int, cap: int | None = None) -> Quiver:
    """Same vertices; one arrow for each path of length ``m``."""
    if m < 1:
        raise ValueError("Veronese degree must be at least 1")
    arrows = []
    for j in q.vertices:
        for p in enumerate_paths(q, m, cap)[j]:
            name = ".".join(p.names()) if m > 1 else p.names()[0]
            arrows.append(Arrow(name, p.source, p.target))
    return Quiver(q.vertices, tuple(arrows))


@dataclass(frozen=True)
class TorsionReport:
    finite_start_vertices: tuple[str, ...]
    infinite_vertices: tuple[str, ...]
    infinite_subquiver: Quiver = field(repr=False)

    @property
    def torsion_generators(self) -> tuple[str, ...]:
        """Vertices ``i`` whose idempotents ``e_i`` generate the torsion ideal."""
        return self.finite_start_vertices


def torsion_classification(q: Quiver) -> TorsionReport:
    """Split vertices by whether finitely or infinitely many paths start there.

    Infinitely many paths start at ``i`` iff some cycle is reachable from ``i``,
    read off the strongly connected components.
    """
    g = nx.DiGraph()
    g.add_nodes_from(q.vertices)
    g.add_edges_from((a.source, a.target) for a in q.arrows)
    looped = {a.source for a in q.arrows if a.source == a.target}
    cyclic: set[str] = set()
    for comp in nx.strongly_connected_components(g):
        if len(comp) > 1 or comp & looped:
            cyclic |= comp
    infinite = set(cyclic)
    for v in cyclic:
        infinite |= nx.ancestors(g, v)
    inf = tuple(v for v in q.vertices if v in infinite)
    fin = tuple(v for v in q.vertices if v not in infinite)
    return TorsionReport(fin, inf, q.subquiver(inf))


def is_isomorphic_relabeling(q1: Quiver, q2: Quiver, mapping: Mapping[str, str]) -> bool:
    """Whether ``mapping`` carries the arrow multiset of ``q1`` onto that of ``q2``."""
    c1 = incidence_matrix(q1)
    c2 = incidence_matrix(q2)
    for i in q1.vertices:
        for j in q1.vertices:
            if c1[q1.index(i), q1.index(j)] != c2[q2.index(mapping[i]), q2.index(mapping[j])]:
                return False
    return True
