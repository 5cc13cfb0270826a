"""Named quivers used as worked examples and test fixtures."""

from __future__ import annotations

from .quiver import Quiver


def fibonacci() -> Quiver:
    """Loop ``x`` at 1, ``u: 1 -> 2``, ``v: 2 -> 1``; incidence [[1, 1], [1, 0]]."""
    return Quiver(("1", "2"), (("x", "1", "1"), ("u", "1", "2"), ("v", "2", "1")))


def cyclic(n: int) -> Quiver:
    """The oriented cycle 1 -> 2 -> ... -> n -> 1."""
    vs = tuple(str(k) for k in range(1, n + 1))
    arrows = tuple((f"a{k}", vs[k - 1], vs[k % n]) for k in range(1, n + 1))
    return Quiver(vs, arrows)


def loops(r: int) -> Quiver:
    """One vertex with ``r`` loops; its path algebra is free on ``r`` letters."""
    return Quiver(("1",), tuple((f"x{k}", "1", "1") for k in range(1, r + 1)))


def double_two_cycle() -> Quiver:
    """Two vertices with two arrows in each direction."""
    return Quiver(("1", "2"), (("a", "1", "2"), ("b", "1", "2"), ("c", "2", "1"), ("d", "2", "1")))


def two_double_loops() -> Quiver:
    """Two disjoint vertices, each with two loops."""
    return Quiver(("1", "2"), (("x", "1", "1"), ("y", "1", "1"), ("z", "2", "2"), ("w", "2", "2")))


def loop_with_sink() -> Quiver:
    """Loop ``x`` at 1 and ``w: 1 -> 2``; vertex 2 is a sink."""
    return Quiver(("1", "2"), (("x", "1", "1"), ("w", "1", "2")))


def loop_with_source() -> Quiver:
    """Loop ``x`` at 1 and ``w: 2 -> 1``; vertex 2 is a source."""
    return Quiver(("1", "2"), (("x", "1", "1"), ("w", "2", "1")))


def loop_pair_bridge() -> Quiver:
    """Loops ``x`` at 1 and ``y`` at 2 joined by ``w: 2 -> 1``; C**n = [[1, n], [0, 1]]."""
    return Quiver(("1", "2"), (("x", "1", "1"), ("w", "2", "1"), ("y", "2", "2")))


def m_loop_fibonacci(m: int) -> Quiver:
    """``m`` loops at 1 plus arrows 1 -> 2 and 2 -> 1; incidence [[m, 1], [1, 0]]."""
    loops_ = tuple((f"x{k}", "1", "1") for k in range(1, m + 1))
    return Quiver(("1", "2"), loops_ + (("u", "1", "2"), ("v", "2", "1")))


def multinacci(r: int) -> Quiver:
    """Vertices 0..r: loop at 0, arrows i -> i+1, and arrows i -> 0 for i >= 1."""
    vs = tuple(str(k) for k in range(r + 1))
    arrows = [("l", "0", "0")]
    arrows += [(f"f{k}", str(k), str(k + 1)) for k in range(r)]
    arrows += [(f"b{k}", str(k), "0") for k in range(1, r + 1)]
    return Quiver(vs, tuple(arrows))


def source_into_loop() -> Quiver:
    """Source ``s`` with ``a: s -> v`` and loop ``b`` at ``v``."""
    return Quiver(("s", "v"), (("a", "s", "v"), ("b", "v", "v")))


def linear(n: int) -> Quiver:
    vs = tuple(str(k) for k in range(1, n + 1))
    return Quiver(vs, tuple((f"a{k}", vs[k - 1], vs[k]) for k in range(1, n)))


def empty() -> Quiver:
    return Quiver(())


NAMED = {
    "fibonacci": fibonacci,
    "cyclic2": lambda: cyclic(2),
    "cyclic3": lambda: cyclic(3),
    "cyclic5": lambda: cyclic(5),
    "loops2": lambda: loops(2),
    "loops3": lambda: loops(3),
    "single-loop": lambda: loops(1),
    "double-two-cycle": double_two_cycle,
    "two-double-loops": two_double_loops,
    "loop-with-sink": loop_with_sink,
    "loop-with-source": loop_with_source,
    "loop-pair-bridge": loop_pair_bridge,
    "m-loop-fibonacci1": lambda: m_loop_fibonacci(1),
    "m-loop-fibonacci2": lambda: m_loop_fibonacci(2),
    "m-loop-fibonacci3": lambda: m_loop_fibonacci(3),
    "multinacci1": lambda: multinacci(1),
    "multinacci2": lambda: multinacci(2),
    "source-into-loop": source_into_loop,
    "linear3": lambda: linear(3),
    "empty": empty,
}
