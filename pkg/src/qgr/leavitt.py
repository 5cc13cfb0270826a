"""Graded components of the Leavitt path algebra L(Q) as path-indexed matrices.

For a quiver without sinks or sources, the degree-``m`` part of ``L(Q)`` is
spanned by monomials ``p*q`` with ``t(p) = t(q)`` and ``|q| - |p| = m``. A
component stored at level ``n`` holds, for every vertex ``i``, a matrix whose
rows are the length-``n`` paths ending at ``i`` and whose columns are the
length-``n + m`` paths ending at ``i``; entry ``(p, q)`` is the coefficient
of ``p*q``.

The relation ``e_i = sum_{s(a) = i} a*a`` becomes the level embedding
``p*q -> sum_a (ap)*(aq)``, and ``(p*q)(x*y) = [q = x] p*y`` becomes an
ordinary matrix product once both factors sit at compatible levels. Equality
is decided after raising to a common level, which is sound because the
embedding is injective when there are no sinks.
"""

from __future__ import annotations

import logging
import random
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Mapping

import numpy as np

from . import _linalg as la
from .errors import InvalidSection, ResourceLimitError, SinkPresent, SourcePresent
from .quiver import Arrow, Path, Quiver, enumerate_paths
from .tower import Tower, TowerElement

log = logging.getLogger(__name__)

BLOCK_ENTRY_CAP = 10**8


def require_core(q: Quiver) -> Quiver:
    """Return ``q`` unchanged if it has no sinks and no sources."""
    for v in q.vertices:
        if not q.arrows_from(v):
            raise SinkPresent(v)
        if not q.arrows_into(v):
            raise SourcePresent(v)
    return q


class LeavittAlgebra:
    """Context object: path bases and constructors for one sink/source-free quiver."""

    def __init__(self, q: Quiver):
        self.quiver = require_core(q)
        self._bases: dict[int, dict[str, list[Path]]] = {}
        self._positions: dict[int, dict[Path, int]] = {}

    @cached_property
    def tower(self) -> Tower:
        return Tower(self.quiver)

    def basis(self, n: int) -> dict[str, list[Path]]:
        """Length-``n`` paths ending at each vertex, in canonical order."""
        if n not in self._bases:
            self._bases[n] = enumerate_paths(self.quiver, n)
            self._positions[n] = {p: k for paths in self._bases[n].values()
                                  for k, p in enumerate(paths)}
        return self._bases[n]

    def position(self, p: Path) -> int:
        self.basis(p.length)
        return self._positions[p.length][p]

    def sizes(self, n: int) -> tuple[int, ...]:
        return self.tower.sizes(n)

    def _check_cap(self, degree: int, level: int) -> None:
        rows = self.sizes(level)
        cols = self.sizes(level + degree)
        for v, r, c in zip(self.quiver.vertices, rows, cols):
            if r * c > BLOCK_ENTRY_CAP:
                raise ResourceLimitError(
                    f"block at vertex {v}, level {level}, degree {degree} would have "
                    f"{r}x{c} entries (cap {BLOCK_ENTRY_CAP})")

    # -- constructors -------------------------------------------------

    def component(self, degree: int, level: int, blocks=None) -> "GradedComponent":
        if level < max(0, -degree):
            raise ValueError(f"level {level} too low for degree {degree}")
        self._check_cap(degree, level)
        rows = self.sizes(level)
        cols = self.sizes(level + degree)
        if blocks is None:
            blocks = tuple(la.zeros(r, c) for r, c in zip(rows, cols))
        else:
            arrs = []
            for v, b, r, c in zip(self.quiver.vertices, blocks, rows, cols):
                m = b if isinstance(b, np.ndarray) else la.matrix(b, shape=(r, c))
                if m.shape != (r, c):
                    raise ValueError(f"block at vertex {v} has shape {m.shape}, expected {(r, c)}")
                arrs.append(m)
            blocks = tuple(arrs)
        return GradedComponent(self, degree, level, blocks)

    def element(self, *components: "GradedComponent") -> "LeavittElement":
        out = LeavittElement(self, {})
        for c in components:
            out = out + LeavittElement(self, {c.degree: c})
        return out

    def zero(self) -> "LeavittElement":
        return LeavittElement(self, {})

    def unit(self, level: int = 0) -> "LeavittElement":
        blocks = tuple(la.identity(s) for s in self.sizes(level))
        return self.element(GradedComponent(self, 0, level, blocks))

    def monomial(self, p: Path, q: Path, coeff=1) -> "LeavittElement":
        """The element ``coeff * p*q``; zero (with a logged diagnostic) if ends differ."""
        if p.target != q.target:
            log.warning("monomial %s*%s is zero: paths end at %s and %s",
                        p, q, p.target, q.target)
            return self.zero()
        comp = self.component(q.length - p.length, p.length)
        k = self.quiver.index(p.target)
        blocks = list(comp.blocks)
        b = blocks[k].copy()
        b[self.position(p), self.position(q)] = la.to_rational(coeff)
        blocks[k] = b
        return self.element(GradedComponent(self, comp.degree, comp.level, tuple(blocks)))

    def arrow(self, name: str) -> "LeavittElement":
        a = self.quiver.arrow(name)
        return self.monomial(Path.trivial(a.target), Path(a.source, (a,)))

    def ghost(self, name: str) -> "LeavittElement":
        return self.arrow(name).star()

    def vertex(self, v: str) -> "LeavittElement":
        e = Path.trivial(v)
        return self.monomial(e, e)

    def monomial_basis(self, degree: int, level: int):
        """Every ``p*q`` spanning the degree-``degree`` component at ``level``."""
        rows = self.basis(level)
        cols = self.basis(level + degree)
        for v in self.quiver.vertices:
            for p in rows[v]:
                for q in cols[v]:
                    yield p, q

    def random_component(self, degree: int, level: int, rng: random.Random,
                         bound: int = 3) -> "GradedComponent":
        comp = self.component(degree, level)
        blocks = []
        for b in comp.blocks:
            b = b.copy()
            for idx in np.ndindex(*b.shape):
                b[idx] = la.to_rational(Fraction(rng.randint(-bound, bound), rng.randint(1, 2)))
            blocks.append(b)
        return GradedComponent(self, degree, level, tuple(blocks))

    # -- level embedding ----------------------------------------------

    def embed_level(self, x: "GradedComponent") -> "GradedComponent":
        """Rewrite every ``p*q`` as ``sum_{s(a) = t(q)} (ap)*(aq)``, one level up."""
        q = self.quiver
        out = self.component(x.degree, x.level + 1)
        blocks = [b.copy() for b in out.blocks]
        rows = self.basis(x.level)
        cols = self.basis(x.level + x.degree)
        for i, v in enumerate(q.vertices):
            b = x.blocks[i]
            nz = [(r, c, b[r, c]) for r, c in np.ndindex(*b.shape) if b[r, c] != 0]
            if not nz:
                continue
            for a in q.arrows_from(v):
                j = q.index(a.target)
                for r, c, val in nz:
                    ap = rows[v][r].then(a)
                    aq = cols[v][c].then(a)
                    blocks[j][self.position(ap), self.position(aq)] += val
        return GradedComponent(self, x.degree, x.level + 1, tuple(blocks))

    def raise_component(self, x: "GradedComponent", level: int) -> "GradedComponent":
        if level < x.level:
            raise ValueError(f"cannot lower a component from level {x.level} to {level}")
        while x.level < level:
            x = self.embed_level(x)
        return x

    def multiply_components(self, x: "GradedComponent",
                            y: "GradedComponent") -> "GradedComponent":
        inner = max(x.level + x.degree, y.level)
        x = self.raise_component(x, inner - x.degree)
        y = self.raise_component(y, inner)
        blocks = tuple(a @ b for a, b in zip(x.blocks, y.blocks))
        return GradedComponent(self, x.degree + y.degree, x.level, blocks)

    # -- anti-isomorphism onto the tower -------------------------------

    def phi(self, x: "GradedComponent") -> TowerElement:
        """``p*q`` goes to the endomorphism sending basis path ``p`` to ``q``.

        As a matrix acting on columns that is the unit ``E[q, p]``: the block
        is transposed, which is what makes the map order-reversing.
        """
        if x.degree != 0:
            raise ValueError("phi is defined on degree-zero components only")
        return self.tower.element(x.level, [b.T.copy() for b in x.blocks])

    def phi_inverse(self, e: TowerElement) -> "GradedComponent":
        return GradedComponent(self, 0, e.level, tuple(b.T.copy() for b in e.blocks))

    # -- sections -------------------------------------------------------

    def default_section(self) -> dict[str, str]:
        """First incoming arrow (canonical order) at each vertex."""
        return {v: self.quiver.arrows_into(v)[0].name for v in self.quiver.vertices}

    def t_plus(self, section: Mapping[str, str] | None = None) -> "LeavittElement":
        """``t+ = sum_i a_i`` for a choice of one arrow ``a_i`` ending at each ``i``."""
        section = self.default_section() if section is None else dict(section)
        _check_section(self.quiver, section)
        out = self.zero()
        for v in self.quiver.vertices:
            out = out + self.arrow(section[v])
        return out

    def t_minus(self, section: Mapping[str, str] | None = None) -> "LeavittElement":
        return self.t_plus(section).star()


def _check_section(q: Quiver, section: Mapping[str, str]) -> None:
    for v in q.vertices:
        if v not in section:
            raise InvalidSection(f"no arrow chosen for vertex {v!r}")
        name = section[v]
        try:
            a = q.arrow(name)
        except KeyError:
            raise InvalidSection(f"unknown arrow {name!r}") from None
        if a.target != v:
            raise InvalidSection(f"arrow {name!r} ends at {a.target!r}, not {v!r}")


@dataclass(frozen=True, eq=False)
class GradedComponent:
    algebra: LeavittAlgebra = field(repr=False)
    degree: int
    level: int
    blocks: tuple[np.ndarray, ...]

    def is_zero(self) -> bool:
        return all(la.is_zero(b) for b in self.blocks)

    def star(self) -> "GradedComponent":
        """``(p*q)* = q*p``: transpose every block and negate the degree."""
        return GradedComponent(self.algebra, -self.degree, self.level + self.degree,
                               tuple(b.T.copy() for b in self.blocks))

    def dimension(self) -> int:
        return sum(b.size for b in self.blocks)

    def terms(self):
        """``(coefficient, p, q)`` for every nonzero entry, in canonical order."""
        alg = self.algebra
        rows = alg.basis(self.level)
        cols = alg.basis(self.level + self.degree)
        for v, b in zip(alg.quiver.vertices, self.blocks):
            for r, c in np.ndindex(*b.shape):
                if b[r, c] != 0:
                    yield b[r, c], rows[v][r], cols[v][c]

    def to_json(self) -> dict:
        return {
            "degree": self.degree,
            "level": self.level,
            "blocks": {v: la.to_jsonable(b)
                       for v, b in zip(self.algebra.quiver.vertices, self.blocks)},
        }


@dataclass(frozen=True, eq=False)
class LeavittElement:
    """Finite sum of graded components, at most one per degree, zeros pruned."""

    algebra: LeavittAlgebra = field(repr=False)
    components: Mapping[int, GradedComponent]

    def __post_init__(self):
        pruned = {d: c for d, c in sorted(self.components.items()) if not c.is_zero()}
        object.__setattr__(self, "components", pruned)

    @property
    def degrees(self) -> tuple[int, ...]:
        return tuple(self.components)

    def is_homogeneous(self) -> bool:
        return len(self.components) <= 1

    def component(self, degree: int) -> GradedComponent | None:
        return self.components.get(degree)

    def __add__(self, other: "LeavittElement") -> "LeavittElement":
        alg = self.algebra
        out = dict(self.components)
        for d, c in other.components.items():
            if d in out:
                lvl = max(out[d].level, c.level)
                a = alg.raise_component(out[d], lvl)
                b = alg.raise_component(c, lvl)
                out[d] = GradedComponent(alg, d, lvl,
                                         tuple(x + y for x, y in zip(a.blocks, b.blocks)))
            else:
                out[d] = c
        return LeavittElement(alg, out)

    def scale(self, scalar) -> "LeavittElement":
        s = la.to_rational(scalar)
        return LeavittElement(self.algebra, {
            d: GradedComponent(self.algebra, d, c.level, tuple(b * s for b in c.blocks))
            for d, c in self.components.items()})

    def __neg__(self) -> "LeavittElement":
        return self.scale(-1)

    def __sub__(self, other: "LeavittElement") -> "LeavittElement":
        return self + (-other)

    def __mul__(self, other):
        if not isinstance(other, LeavittElement):
            return self.scale(other)
        alg = self.algebra
        out = alg.zero()
        for x in self.components.values():
            for y in other.components.values():
                out = out + LeavittElement(alg, {x.degree + y.degree:
                                                 alg.multiply_components(x, y)})
        return out

    def __rmul__(self, scalar):
        return self.scale(scalar)

    def __pow__(self, k: int) -> "LeavittElement":
        if k < 0:
            raise ValueError("negative powers are not defined")
        out = self.algebra.unit()
        for _ in range(k):
            out = out * self
        return out

    def star(self) -> "LeavittElement":
        return LeavittElement(self.algebra, {
            -d: c.star() for d, c in self.components.items()})

    def __eq__(self, other) -> bool:
        if not isinstance(other, LeavittElement):
            return NotImplemented
        return (self - other).is_zero()

    __hash__ = None

    def is_zero(self) -> bool:
        return not self.components

    def render(self) -> str:
        terms = []
        for c in self.components.values():
            for coeff, p, q in c.terms():
                terms.append(_render_term(coeff, p, q))
        if not terms:
            return "0"
        s = terms[0]
        for t in terms[1:]:
            s += f" - {t[1:]}" if t.startswith("-") else f" + {t}"
        return s

    __str__ = render

    def to_json(self) -> dict:
        return {"components": [c.to_json() for c in self.components.values()]}


def _render_term(coeff, p: Path, q: Path) -> str:
    body = f"({p})*({q})"
    if coeff == 1:
        return body
    if coeff == -1:
        return "-" + body
    return f"{coeff}·{body}"


# -- checks -----------------------------------------------------------------

@dataclass
class PhiReport:
    level: int
    dim_l0: int
    dim_s: int
    bijective: bool
    anti_multiplicative: bool
    intertwines: bool
    pairs_checked: int

    @property
    def ok(self) -> bool:
        return (self.bijective and self.anti_multiplicative and self.intertwines
                and self.dim_l0 == self.dim_s)

    def summary(self) -> str:
        status = "anti-isomorphism verified" if self.ok else "anti-isomorphism FAILED"
        return f"{status}, dim {self.dim_l0}"

    def to_json(self) -> dict:
        return {"level": self.level, "dim_L0": self.dim_l0, "dim_S": self.dim_s,
                "bijective": self.bijective, "anti_multiplicative": self.anti_multiplicative,
                "intertwines": self.intertwines, "pairs_checked": self.pairs_checked,
                "ok": self.ok}


def verify_phi(q: Quiver, n: int, random_pairs: int = 20, seed: int = 0) -> PhiReport:
    """Check phi on level ``n`` exhaustively on matrix units, plus random pairs.

    * bijective: the matrix units ``p*q`` land on distinct tower matrix units
      and cover all of ``S_n``;
    * anti-multiplicative: ``phi(xy) == phi(y) phi(x)`` for every pair of
      matrix units and for random elements;
    * intertwines: ``phi(embed(x)) == theta(phi(x))`` on every matrix unit.
    """
    alg = LeavittAlgebra(q)
    tower = alg.tower
    units = [alg.monomial(p, r).component(0) for p, r in alg.monomial_basis(0, n)]
    images = [alg.phi(u) for u in units]
    dim_l0 = len(units)
    dim_s = sum(s * s for s in tower.sizes(n))

    seen = set()
    bijective = True
    for img in images:
        nz = [(k, idx) for k, b in enumerate(img.blocks)
              for idx in np.ndindex(*b.shape) if b[idx] != 0]
        if len(nz) != 1 or img.blocks[nz[0][0]][nz[0][1]] != 1 or nz[0] in seen:
            bijective = False
            break
        seen.add(nz[0])
    bijective = bijective and len(seen) == dim_s

    anti = True
    pairs = 0
    for x, fx in zip(units, images):
        for y, fy in zip(units, images):
            xy = alg.multiply_components(x, y)
            pairs += 1
            if not alg.phi(xy).same_level_equal(fy * fx):
                anti = False
    rng = random.Random(seed)
    for _ in range(random_pairs):
        x = alg.random_component(0, n, rng)
        y = alg.random_component(0, rng.randint(0, n), rng)
        xy = alg.multiply_components(x, y)
        pairs += 1
        if not alg.phi(xy) == alg.phi(y) * alg.phi(x):
            anti = False

    intertwines = all(
        alg.phi(alg.embed_level(u)).same_level_equal(tower.theta(alg.phi(u)))
        for u in units)
    return PhiReport(n, dim_l0, dim_s, bijective, anti, intertwines, pairs)


@dataclass
class SectionReport:
    plus_minus_is_unit: bool
    minus_plus_idempotent: bool
    minus_plus_is_unit: bool

    @property
    def ok(self) -> bool:
        return self.plus_minus_is_unit and self.minus_plus_idempotent

    def to_json(self) -> dict:
        return {"t+t- = 1": self.plus_minus_is_unit,
                "t-t+ idempotent": self.minus_plus_idempotent,
                "t-t+ = 1": self.minus_plus_is_unit}


def t_plus(q: Quiver, section: Mapping[str, str] | None = None) -> LeavittElement:
    return LeavittAlgebra(q).t_plus(section)


def t_minus(q: Quiver, section: Mapping[str, str] | None = None) -> LeavittElement:
    return LeavittAlgebra(q).t_minus(section)


def verify_section_identities(q: Quiver,
                              section: Mapping[str, str] | None = None) -> SectionReport:
    alg = LeavittAlgebra(q)
    tp = alg.t_plus(section)
    tm = alg.t_minus(section)
    one = alg.unit()
    e = tm * tp
    return SectionReport(tp * tm == one, e * e == e, e == one)


@dataclass
class StrongGradingCertificate:
    """Two factorizations of 1: through ``L(-1) L(1)`` and through ``L(1) L(-1)``."""

    ghost_arrow_pairs: list[tuple[LeavittElement, LeavittElement]]
    section_pair: tuple[LeavittElement, LeavittElement]
    ghost_arrow_verified: bool
    section_verified: bool

    @property
    def ok(self) -> bool:
        return self.ghost_arrow_verified and self.section_verified

    def to_json(self) -> dict:
        return {
            "one_in_L-1_L1": [[a.render(), b.render()] for a, b in self.ghost_arrow_pairs],
            "one_in_L1_L-1": [self.section_pair[0].render(), self.section_pair[1].render()],
            "ghost_arrow_verified": self.ghost_arrow_verified,
            "section_verified": self.section_verified,
        }


def strongly_graded_certificate(q: Quiver,
                                section: Mapping[str, str] | None = None
                                ) -> StrongGradingCertificate:
    """Exhibit ``1 = sum_a a* a`` and ``1 = t+ t-``; raises on sinks or sources."""
    alg = LeavittAlgebra(q)
    one = alg.unit()
    pairs = [(alg.ghost(a.name), alg.arrow(a.name)) for a in q.arrows]
    total = alg.zero()
    for g, a in pairs:
        if g.degrees != (-1,) or a.degrees != (1,):
            raise AssertionError("ghost arrows and arrows must be homogeneous of degree -1, 1")
        total = total + g * a
    tp = alg.t_plus(section)
    tm = alg.t_minus(section)
    return StrongGradingCertificate(pairs, (tp, tm), total == one, tp * tm == one)


def monomial(q: Quiver, p: Path, r: Path) -> LeavittElement:
    return LeavittAlgebra(q).monomial(p, r)


def multiply(x: LeavittElement, y: LeavittElement) -> LeavittElement:
    return x * y


def embed_level(x: GradedComponent) -> GradedComponent:
    return x.algebra.embed_level(x)


def phi(x: GradedComponent) -> TowerElement:
    return x.algebra.phi(x)
