"""Graded representations of a quiver on a finite window of degrees.

A :class:`GradedRepresentation` records, for each degree ``n`` in ``[d0, d1]``
and vertex ``i``, the dimension of ``M[n, i]``, and for each arrow ``a`` and
degree ``n < d1`` the matrix of ``M[n, s(a)] -> M[n + 1, t(a)]``. Matrices act
on column vectors.

The tail ``M_{>=n}`` is projective when, for every vertex ``i`` and degree
``j >= n``, the assembled map ``(+)_{t(a) = i} M[j, s(a)] -> M[j + 1, i]`` is an
isomorphism; its class in K_0 is then the degree-``n`` dimension vector taken
at level ``n``.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping

import numpy as np

from . import _linalg as la
from .errors import (NotAHomomorphism, NotASink, NotASource, NotInjective, ParseError,
                     UnverifiedTail, WindowTooShort)
from .k0 import K0Class
from .quiver import Path, Quiver, enumerate_paths


@dataclass(frozen=True, eq=False)
class GradedRepresentation:
    quiver: Quiver = field(repr=False)
    window: tuple[int, int]
    dims: Mapping[tuple[int, str], int]
    actions: Mapping[tuple[str, int], np.ndarray] = field(repr=False)
    generated_by: int | None = None

    def __post_init__(self):
        d0, d1 = self.window
        if d0 > d1:
            raise ValueError(f"empty window {self.window}")
        q = self.quiver
        dims = {}
        for (n, v), d in self.dims.items():
            if v not in q.vertices:
                raise ValueError(f"unknown vertex {v!r}")
            if not d0 <= n <= d1:
                raise ValueError(f"degree {n} outside window {self.window}")
            if d < 0:
                raise ValueError("dimensions must be non-negative")
            if d:
                dims[(n, v)] = int(d)
        object.__setattr__(self, "dims", dims)
        actions = {}
        for (name, n), m in self.actions.items():
            a = q.arrow(name)
            if not d0 <= n < d1:
                raise ValueError(f"action of {name!r} in degree {n} leaves the window")
            shape = (self.dim(n + 1, a.target), self.dim(n, a.source))
            m = m if isinstance(m, np.ndarray) else la.matrix(m, shape=shape)
            if m.shape != shape:
                raise ValueError(f"action of {name!r} in degree {n} has shape {m.shape}, "
                                 f"expected {shape}")
            actions[(name, n)] = m
        object.__setattr__(self, "actions", actions)
        if self.generated_by is not None:
            g = self.generated_by
            if not d0 <= g <= d1 - 1:
                raise ValueError("generated_by must lie in [d0, d1 - 1]")
            for n in range(g, d1):
                for v in q.vertices:
                    if la.rank(self.assembled(n, v)) != self.dim(n + 1, v):
                        raise ValueError(f"not generated in degree {g}: the map into "
                                         f"degree {n + 1} at vertex {v} is not onto")

    def dim(self, n: int, v: str) -> int:
        return self.dims.get((n, v), 0)

    def dim_vector(self, n: int) -> tuple[int, ...]:
        return tuple(self.dim(n, v) for v in self.quiver.vertices)

    def action(self, name: str, n: int) -> np.ndarray:
        a = self.quiver.arrow(name)
        m = self.actions.get((name, n))
        if m is None:
            return la.zeros(self.dim(n + 1, a.target), self.dim(n, a.source))
        return m

    def assembled(self, n: int, v: str) -> np.ndarray:
        """``(+)_{t(a) = v} M[n, s(a)] -> M[n + 1, v]``, summands in canonical arrow order."""
        parts = [self.action(a.name, n) for a in self.quiver.arrows_into(v)]
        if not parts:
            return la.zeros(self.dim(n + 1, v), 0)
        return np.concatenate(parts, axis=1)

    def degrees(self) -> range:
        return range(self.window[0], self.window[1] + 1)

    def to_json(self) -> dict:
        d0, d1 = self.window
        return {
            "window": [d0, d1],
            "dims": {str(n): {v: self.dim(n, v) for v in self.quiver.vertices}
                     for n in self.degrees()},
            "actions": {a.name: {str(n): la.to_jsonable(self.action(a.name, n))
                                 for n in range(d0, d1)}
                        for a in self.quiver.arrows},
        }


def representation_from_json(q: Quiver, data: dict | str,
                             source: str | None = None) -> GradedRepresentation:
    """Build from ``{"window": [d0, d1], "dims": {n: {v: d}}, "actions": {a: {n: matrix}}}``."""
    if isinstance(data, str):
        try:
            data = json.loads(data)
        except json.JSONDecodeError as exc:
            raise ParseError(exc.msg, exc.lineno, exc.colno, source) from None
    try:
        d0, d1 = (int(x) for x in data["window"])
        dims = {(int(n), str(v)): int(d)
                for n, row in data.get("dims", {}).items() for v, d in row.items()}
        actions = {}
        for name, per_degree in data.get("actions", {}).items():
            a = q.arrow(name)
            for n, rows in per_degree.items():
                n = int(n)
                shape = (dims.get((n + 1, a.target), 0), dims.get((n, a.source), 0))
                actions[(name, n)] = la.matrix(rows, shape=shape)
        return GradedRepresentation(q, (d0, d1), dims, actions, data.get("generated_by"))
    except (KeyError, TypeError, ValueError) as exc:
        raise ParseError(f"invalid module description: {exc}", source=source) from None


# -- constructors -------------------------------------------------------------

def projective(q: Quiver, vertex: str, twist: int = 0,
               window: tuple[int, int] = (0, 4)) -> GradedRepresentation:
    """``P_vertex(twist)``: in degree ``n`` the paths from ``vertex`` of length ``n + twist``.

    Arrows act by left concatenation ``r -> ar``.
    """
    d0, d1 = window
    bases: dict[int, dict[str, list[Path]]] = {}
    for n in range(d0, d1 + 1):
        length = n + twist
        if length < 0:
            bases[n] = {v: [] for v in q.vertices}
        else:
            bases[n] = {v: [p for p in paths if p.source == vertex]
                        for v, paths in enumerate_paths(q, length).items()}
    dims = {(n, v): len(bases[n][v]) for n in bases for v in q.vertices}
    actions = {}
    for n in range(d0, d1):
        pos = {p: k for v in q.vertices for k, p in enumerate(bases[n + 1][v])}
        for a in q.arrows:
            m = la.zeros(len(bases[n + 1][a.target]), len(bases[n][a.source]))
            for c, r in enumerate(bases[n][a.source]):
                m[pos[r.then(a)], c] = 1
            actions[(a.name, n)] = m
    return GradedRepresentation(q, (d0, d1), dims, actions)


def simple(q: Quiver, vertex: str, degree: int = 0,
           window: tuple[int, int] | None = None) -> GradedRepresentation:
    """The one-dimensional module ``E_vertex`` sitting in ``degree``."""
    window = window or (degree, degree + 1)
    return GradedRepresentation(q, window, {(degree, vertex): 1}, {})


def direct_sum(*reps: GradedRepresentation) -> GradedRepresentation:
    if not reps:
        raise ValueError("direct sum of nothing")
    q = reps[0].quiver
    d0 = max(r.window[0] for r in reps)
    d1 = min(r.window[1] for r in reps)
    if d0 > d1:
        raise ValueError("windows do not overlap")
    dims = {(n, v): sum(r.dim(n, v) for r in reps)
            for n in range(d0, d1 + 1) for v in q.vertices}
    actions = {(a.name, n): la.block_diag(r.action(a.name, n) for r in reps)
               for a in q.arrows for n in range(d0, d1)}
    return GradedRepresentation(q, (d0, d1), dims, actions)


def change_basis(m: GradedRepresentation,
                 bases: Mapping[tuple[int, str], np.ndarray]) -> GradedRepresentation:
    """Conjugate by invertible matrices ``bases[(n, v)]`` (identity where missing)."""
    def g(n, v):
        return bases.get((n, v), la.identity(m.dim(n, v)))
    actions = {}
    for a in m.quiver.arrows:
        for n in range(m.window[0], m.window[1]):
            actions[(a.name, n)] = g(n + 1, a.target) @ m.action(a.name, n) @ la.inverse(
                g(n, a.source))
    return GradedRepresentation(m.quiver, m.window, m.dims, actions)


def shift(m: GradedRepresentation, j: int) -> GradedRepresentation:
    """The twist ``M(j)``, with ``M(j)[n] = M[n + j]``."""
    d0, d1 = m.window
    dims = {(n - j, v): d for (n, v), d in m.dims.items()}
    actions = {(name, n - j): mat for (name, n), mat in m.actions.items()}
    return GradedRepresentation(m.quiver, (d0 - j, d1 - j), dims, actions)


def truncate(m: GradedRepresentation, n: int) -> GradedRepresentation:
    """``M_{>=n}``, kept on the window ``[n, d1]``."""
    d0, d1 = m.window
    if not d0 <= n <= d1:
        raise WindowTooShort(f"degree {n} is outside the window {m.window}")
    dims = {(k, v): d for (k, v), d in m.dims.items() if k >= n}
    actions = {(name, k): mat for (name, k), mat in m.actions.items() if k >= n}
    return GradedRepresentation(m.quiver, (n, d1), dims, actions)


def random_tail_projective(q: Quiver, rng: random.Random, window: tuple[int, int] = (0, 4),
                           summands: int = 3) -> GradedRepresentation:
    """A random sum of twisted projectives, disguised by a random change of basis.

    Twists are 0 or +1, so the tail is projective from the first degree of the window.
    """
    parts = []
    for _ in range(rng.randint(1, summands)):
        v = rng.choice(q.vertices)
        parts.append(projective(q, v, rng.randint(0, 1), window))
    m = direct_sum(*parts)
    bases = {}
    for n in m.degrees():
        for v in q.vertices:
            bases[(n, v)] = _random_invertible(m.dim(n, v), rng)
    return change_basis(m, bases)


def _random_invertible(n: int, rng: random.Random) -> np.ndarray:
    """A random unimodular integer matrix: permuted product of unitriangular factors.

    Keeping the determinant at +-1 keeps the inverse integral, which keeps the
    exact arithmetic downstream cheap.
    """
    lower, upper = la.identity(n), la.identity(n)
    for r in range(n):
        for c in range(r):
            lower[r, c] = rng.randint(-1, 1)
            upper[c, r] = rng.randint(-1, 1)
    perm = list(range(n))
    rng.shuffle(perm)
    return (lower @ upper)[perm, :]


# -- tails and classes ------------------------------------------------------------

@dataclass(frozen=True)
class TailDecomposition:
    level: int
    multiplicities: tuple[int, ...]
    verified: bool

    def to_json(self) -> dict:
        return {"level": self.level, "multiplicities": list(self.multiplicities),
                "verified": self.verified}


def tail_decomposition(m: GradedRepresentation, n: int) -> TailDecomposition:
    """Multiplicities ``m_i = dim M[n, i]`` of ``P_i(-n)`` in the tail from ``n``.

    ``verified`` is true when every assembled arrow map from degree ``n`` to the
    end of the window is an isomorphism.
    """
    d0, d1 = m.window
    if n < d0 or n + 1 > d1:
        raise WindowTooShort(f"level {n} needs degrees {n} and {n + 1} inside the window "
                             f"{m.window}")
    verified = all(_is_iso(m.assembled(j, v))
                   for j in range(n, d1) for v in m.quiver.vertices)
    return TailDecomposition(n, m.dim_vector(n), verified)


def _is_iso(mat: np.ndarray) -> bool:
    return mat.shape[0] == mat.shape[1] and la.rank(mat) == mat.shape[0]


def qgr_class(m: GradedRepresentation, n: int) -> K0Class:
    """The K_0 class of the image of ``m`` in the quotient by finite-dimensional modules."""
    tail = tail_decomposition(m, n)
    if not tail.verified:
        raise UnverifiedTail(f"the tail from degree {n} is not projective on {m.window}")
    return K0Class(n, tail.multiplicities)


# -- sinks and sources ---------------------------------------------------------------

def transport_sink_source(m: GradedRepresentation, vertex: str,
                          kind: str) -> GradedRepresentation:
    """Restrict to the quiver with the sink or source ``vertex`` deleted.

    For a source this is the part killed by ``e_vertex``; for a sink it is the
    quotient by the part supported at ``vertex``. Both amount to dropping the
    spaces at ``vertex`` and the arrows touching it.
    """
    q = m.quiver
    if kind == "sink":
        if q.arrows_from(vertex):
            raise NotASink(f"vertex {vertex!r} has outgoing arrows")
    elif kind == "source":
        if q.arrows_into(vertex):
            raise NotASource(f"vertex {vertex!r} has incoming arrows")
    else:
        raise ValueError(f"kind must be 'sink' or 'source', not {kind!r}")
    smaller = q.delete_vertices([vertex])
    dims = {(n, v): d for (n, v), d in m.dims.items() if v != vertex}
    kept = {a.name for a in smaller.arrows}
    actions = {(name, n): mat for (name, n), mat in m.actions.items() if name in kept}
    return GradedRepresentation(smaller, m.window, dims, actions)


def extend_by_zero(m: GradedRepresentation, q: Quiver) -> GradedRepresentation:
    """View a representation of a full subquiver of ``q`` as one of ``q``."""
    sub = m.quiver
    if not set(sub.vertices) <= set(q.vertices):
        raise ValueError("representation's quiver is not a subquiver")
    for a in sub.arrows:
        if a.name not in {b.name for b in q.arrows} or q.arrow(a.name) != a:
            raise ValueError(f"arrow {a.name!r} is not an arrow of the larger quiver")
    return GradedRepresentation(q, m.window, dict(m.dims), dict(m.actions))


# -- maps ---------------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class RepresentationMap:
    """A degree-preserving map; ``components[(n, v)]`` sends ``source[n, v]`` to ``target[n, v]``."""

    source: GradedRepresentation
    target: GradedRepresentation
    components: Mapping[tuple[int, str], np.ndarray] = field(repr=False)

    def degrees(self) -> range:
        lo = max(self.source.window[0], self.target.window[0])
        hi = min(self.source.window[1], self.target.window[1])
        return range(lo, hi + 1)

    def at(self, n: int, v: str) -> np.ndarray:
        m = self.components.get((n, v))
        if m is None:
            return la.zeros(self.target.dim(n, v), self.source.dim(n, v))
        return m

    def is_homomorphism(self, start: int | None = None) -> bool:
        degs = [n for n in self.degrees() if start is None or n >= start]
        for n in degs[:-1]:
            for a in self.source.quiver.arrows:
                lhs = self.at(n + 1, a.target) @ self.source.action(a.name, n)
                rhs = self.target.action(a.name, n) @ self.at(n, a.source)
                if not la.equal(lhs, rhs):
                    return False
        return True

    def compose(self, other: "RepresentationMap") -> "RepresentationMap":
        """``self`` after ``other``."""
        comps = {(n, v): self.at(n, v) @ other.at(n, v)
                 for n in self.degrees() for v in self.source.quiver.vertices}
        return RepresentationMap(other.source, self.target, comps)

    def is_identity(self, start: int | None = None) -> bool:
        for n in self.degrees():
            if start is not None and n < start:
                continue
            for v in self.source.quiver.vertices:
                if not la.equal(self.at(n, v), la.identity(self.source.dim(n, v))):
                    return False
        return True


def identity_map(m: GradedRepresentation) -> RepresentationMap:
    return RepresentationMap(m, m, {(n, v): la.identity(m.dim(n, v))
                                    for n in m.degrees() for v in m.quiver.vertices})


def path_map(q: Quiver, c: Path, window: tuple[int, int] = (0, 4)) -> RepresentationMap:
    """Right multiplication by the path ``c``: ``P_{t(c)}(-|c|) -> P_{s(c)}``, ``r -> rc``."""
    src = projective(q, c.target, -c.length, window)
    tgt = projective(q, c.source, 0, window)
    comps = {}
    for n in range(window[0], window[1] + 1):
        lsrc = n - c.length
        src_paths = ({} if lsrc < 0 else
                     {v: [p for p in ps if p.source == c.target]
                      for v, ps in enumerate_paths(q, lsrc).items()})
        tgt_paths = ({} if n < 0 else
                     {v: [p for p in ps if p.source == c.source]
                      for v, ps in enumerate_paths(q, n).items()})
        for v in q.vertices:
            m = la.zeros(tgt.dim(n, v), src.dim(n, v))
            pos = {p: k for k, p in enumerate(tgt_paths.get(v, []))}
            for k, r in enumerate(src_paths.get(v, [])):
                m[pos[r.after(c)], k] = 1
            comps[(n, v)] = m
    return RepresentationMap(src, tgt, comps)


def split_tail(f: RepresentationMap, n: int) -> RepresentationMap:
    """A left inverse ``g`` of an injective map between tail-projective windows.

    ``g`` is chosen vertex by vertex in degree ``n`` (any left inverse works
    over the semisimple base) and then forced in higher degrees by requiring it
    to commute with the arrow actions, which the assembled isomorphisms allow.
    """
    p, pp = f.source, f.target
    for m in (p, pp):
        if not tail_decomposition(m, n).verified:
            raise UnverifiedTail(f"tail from degree {n} is not projective on {m.window}")
    if not f.is_homomorphism(start=n):
        raise NotAHomomorphism("the map does not commute with the arrow actions")
    q = p.quiver
    top = min(p.window[1], pp.window[1])
    g: dict[tuple[int, str], np.ndarray] = {}
    for v in q.vertices:
        fv = f.at(n, v)
        if la.rank(fv) != fv.shape[1]:
            raise NotInjective(f"the map is not injective at vertex {v!r} in degree {n}")
        g[(n, v)] = la.left_inverse(fv)
    for j in range(n, top):
        for v in q.vertices:
            arrows = q.arrows_into(v)
            block = la.block_diag(g[(j, a.source)] for a in arrows) if arrows else la.zeros(0, 0)
            g[(j + 1, v)] = (p.assembled(j, v) @ block @ la.inverse(pp.assembled(j, v))
                             if arrows else la.zeros(p.dim(j + 1, v), pp.dim(j + 1, v)))
    return RepresentationMap(pp, p, g)
