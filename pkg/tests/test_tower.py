import random
from fractions import Fraction

import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from qgr import zoo
from qgr import _linalg as la
from qgr.quiver import enumerate_paths, path_counts
from qgr.tower import Tower, bratteli, limit_equal, limit_is_zero, theta

from conftest import quivers


def theta_by_paths(e):
    """theta computed entrywise on path bases.

    Rows and columns of block ``j`` at level ``n + 1`` are length-``n + 1``
    paths ending at ``j``. Two such paths see the entry of the old block at
    their length-``n`` prefixes when their final arrows agree, zero otherwise.
    """
    q = e.tower.quiver
    n = e.level
    old = enumerate_paths(q, n)
    pos = {v: {p: k for k, p in enumerate(ps)} for v, ps in old.items()}
    new = enumerate_paths(q, n + 1)
    blocks = []
    for j in q.vertices:
        ps = new[j]
        b = la.zeros(len(ps), len(ps))
        for r, p in enumerate(ps):
            for c, p2 in enumerate(ps):
                a, a2 = p.arrows[-1], p2.arrows[-1]
                if a != a2:
                    continue
                pre = type(p)(p.base, p.arrows[:-1])
                pre2 = type(p)(p2.base, p2.arrows[:-1])
                blk = e.blocks[q.index(a.source)]
                b[r, c] = blk[pos[a.source][pre], pos[a.source][pre2]]
        blocks.append(b)
    return blocks


class TestBratteli:
    def test_fibonacci_rows(self):
        b = bratteli(zoo.fibonacci(), 6)
        assert [s[0] for s in b.sizes] == [1, 2, 3, 5, 8, 13, 21]
        assert [s[1] for s in b.sizes] == [1, 1, 2, 3, 5, 8, 13]
        assert b.edges == ((1, 1), (1, 0))

    def test_loops(self):
        for r in (2, 3):
            b = bratteli(zoo.loops(r), 8)
            assert [s[0] for s in b.sizes] == [r ** n for n in range(9)]
            assert b.edges == ((r,),)

    def test_cyclic_all_ones(self):
        for n in (2, 3, 5):
            assert all(s == (1,) * n for s in bratteli(zoo.cyclic(n), 10).sizes)

    def test_json_and_dot(self):
        b = bratteli(zoo.fibonacci(), 2)
        assert b.to_json() == {"levels": 3, "vertices": ["1", "2"],
                               "sizes": [[1, 1], [2, 1], [3, 2]], "edges": [[1, 1], [1, 0]]}
        dot = b.to_dot()
        assert dot.startswith("digraph bratteli {")
        # edges from level 0 to 1: C has 3 arrows, two levels of edges
        assert dot.count("->") == 6

    def test_negative_levels(self):
        with pytest.raises(ValueError):
            bratteli(zoo.fibonacci(), -1)

    def test_sizes_are_path_counts(self, fixture_quiver):
        t = Tower(fixture_quiver)
        for n in range(7):
            assert t.sizes(n) == path_counts(fixture_quiver, n)


class TestTheta:
    @pytest.mark.parametrize("n", range(0, 4))
    def test_matches_path_formula_on_matrix_units(self, fixture_quiver, n):
        t = Tower(fixture_quiver)
        if sum(t.sizes(n + 1)) > 40:
            pytest.skip("level too large for the entrywise oracle")
        for u in t.matrix_units(n):
            got = theta(u)
            assert got.level == n + 1
            for x, y in zip(got.blocks, theta_by_paths(u)):
                assert la.equal(x, y)

    def test_random_elements_against_oracle(self):
        rng = random.Random(7)
        for q in (zoo.fibonacci(), zoo.multinacci(2), zoo.double_two_cycle()):
            t = Tower(q)
            for n in range(4):
                e = t.random_element(n, rng)
                for x, y in zip(theta(e).blocks, theta_by_paths(e)):
                    assert la.equal(x, y)

    @pytest.mark.parametrize("n", range(0, 7))
    def test_bridge_closed_form(self, n):
        # theta(A, lam) = (diag(A, lam), lam) on every matrix unit
        t = Tower(zoo.loop_pair_bridge())
        for u in t.matrix_units(n):
            a, lam = u.blocks
            got = theta(u)
            assert la.equal(got.blocks[0], la.block_diag([a, lam]))
            assert la.equal(got.blocks[1], lam)

    def test_cyclic_permutes_blocks(self):
        for n in (2, 3, 5):
            t = Tower(zoo.cyclic(n))
            for k, v in enumerate(t.quiver.vertices):
                e = t.block_idempotent(0, v)
                moved = theta(e)
                # one step carries block k to block k + 1
                assert [int(b[0, 0]) for b in moved.blocks] == [
                    int(i == (k + 1) % n) for i in range(n)]
                back = t.raise_to(e, n)
                assert [int(b[0, 0]) for b in back.blocks] == [int(i == k) for i in range(n)]

    @pytest.mark.parametrize("n", range(0, 9))
    def test_unital(self, fixture_quiver, n):
        t = Tower(fixture_quiver)
        if sum(t.sizes(n + 1)) > 2000:
            pytest.skip("level too large")
        assert theta(t.unit(n)).same_level_equal(t.unit(n + 1))

    @settings(max_examples=40, deadline=None)
    @given(quivers(max_vertices=3, max_arrows=5), st.integers(0, 2), st.integers(0, 2 ** 32))
    def test_homomorphism(self, q, n, seed):
        t = Tower(q)
        rng = random.Random(seed)
        a, b = t.random_element(n, rng), t.random_element(n, rng)
        c = Fraction(rng.randint(-3, 3), 2)
        assert theta(a * b).same_level_equal(theta(a) * theta(b))
        assert theta(a + b).same_level_equal(theta(a) + theta(b))
        assert theta(a.scale(c)).same_level_equal(theta(a).scale(c))


class TestLimit:
    def test_sink_block_dies(self):
        t = Tower(zoo.loop_with_sink())
        for n in range(6):
            assert t.limit_is_zero(t.block_idempotent(n, "2"))
            assert not t.limit_is_zero(t.block_idempotent(n, "1"))

    def test_source_pair_sizes(self):
        t = Tower(zoo.loop_with_source())
        assert all(t.sizes(n) == (2, 0) for n in range(1, 8))

    def test_equality_across_levels(self):
        t = Tower(zoo.fibonacci())
        u = t.matrix_unit(0, "1", 0, 0)
        assert u == theta(u) == t.raise_to(u, 4)
        assert u != t.matrix_unit(0, "2", 0, 0)
        assert t.unit(0) == t.unit(3)

    def test_lower_rejected(self):
        t = Tower(zoo.fibonacci())
        with pytest.raises(ValueError):
            t.raise_to(t.unit(2), 1)

    def test_unhashable(self):
        with pytest.raises(TypeError):
            hash(Tower(zoo.fibonacci()).unit(0))

    def test_bad_block_shapes(self):
        t = Tower(zoo.fibonacci())
        with pytest.raises(ValueError):
            t.element(1, [[[1]], [[1]]])
        with pytest.raises(ValueError):
            t.element(1, [[[1, 0], [0, 1]]])

    @settings(max_examples=60, deadline=None)
    @given(quivers(max_vertices=3, max_arrows=4), st.integers(0, 2), st.integers(0, 2),
           st.integers(0, 2 ** 32))
    def test_matches_far_raise_oracle(self, q, n1, n2, seed):
        # Oracle: compare after raising well beyond any possible kernel depth.
        t = Tower(q)
        assume(sum(t.sizes(max(n1, n2) + len(q) + 2)) <= 150)
        rng = random.Random(seed)
        a = t.random_element(n1, rng, bound=1)
        choice = rng.randrange(3)
        if choice == 0:
            b = t.random_element(n2, rng, bound=1)
        else:
            b = t.raise_to(a, max(n1, n2))
            if choice == 2 and q.sinks():
                # perturb on a sink block, which may or may not survive
                b = b + t.block_idempotent(b.level, rng.choice(q.sinks()))
        top = max(a.level, b.level) + len(q) + 2
        want = t.raise_to(a, top).same_level_equal(t.raise_to(b, top))
        assert limit_equal(a, b) == want

    def test_sink_idempotents_vanish(self, fixture_quiver):
        t = Tower(fixture_quiver)
        for v in fixture_quiver.sinks():
            for n in range(3):
                assert limit_is_zero(t.block_idempotent(n, v))

    @settings(max_examples=40, deadline=None)
    @given(quivers(max_vertices=3, max_arrows=4), st.integers(0, 2 ** 32))
    def test_equivalence_and_congruence(self, q, seed):
        t = Tower(q)
        assume(sum(t.sizes(4 + t.kernel_depth)) <= 150)
        rng = random.Random(seed)
        a = t.random_element(rng.randint(0, 2), rng, bound=1)
        a2 = t.raise_to(a, a.level + rng.randint(0, 2))
        a3 = t.raise_to(a2, a2.level + 1)
        b = t.random_element(rng.randint(0, 2), rng, bound=1)
        b2 = t.raise_to(b, b.level + 1)
        assert a == a
        assert (a == a2) and (a2 == a) and (a2 == a3) and (a == a3)
        assert (a + b) == (a2 + b2)
        assert (a * b) == (a3 * b2)
        assert (a.scale(3)) == (a2.scale(3))
        assert (a == b) == (b == a)

    def test_json(self):
        t = Tower(zoo.fibonacci())
        e = t.matrix_unit(1, "1", 0, 1).scale(Fraction(1, 2))
        assert e.to_json() == {"level": 1, "blocks": {"1": [[0, "1/2"], [0, 0]], "2": [[0]]}}
