import itertools

import numpy as np
import pytest
from hypothesis import given, settings

from qgr import zoo
from qgr._linalg import int_matrix_power
from qgr.errors import ResourceLimitError
from qgr.quiver import (Path, Quiver, core, enumerate_paths, incidence_matrix, path_counts,
                        sink_depth, torsion_classification, veronese)

from conftest import FIXTURE_QUIVERS, brute_force_paths, quivers


def as_lists(m):
    return [[int(x) for x in row] for row in m]


class TestQuiverValue:
    def test_duplicate_names_rejected(self):
        with pytest.raises(ValueError, match="duplicate arrow"):
            Quiver(("1",), (("x", "1", "1"), ("x", "1", "1")))
        with pytest.raises(ValueError, match="duplicate vertex"):
            Quiver(("1", "1"))

    def test_undeclared_vertex(self):
        with pytest.raises(ValueError, match="undeclared"):
            Quiver(("1",), (("x", "1", "2"),))

    def test_empty_quiver_is_legal(self):
        q = Quiver(())
        assert len(q) == 0
        assert incidence_matrix(q).shape == (0, 0)
        assert path_counts(q, 3) == ()

    def test_path_composition(self):
        q = zoo.loop_pair_bridge()
        p = Path.of(q, "x", "w")  # w then x
        assert p.source == "2" and p.target == "1" and p.length == 2
        assert p.render() == "xw"
        with pytest.raises(ValueError):
            Path.of(q, "w", "x")
        assert Path.of(q, "x").after(Path.of(q, "w")) == p


class TestIncidence:
    def test_cyclic(self):
        c = incidence_matrix(zoo.cyclic(3))
        assert as_lists(c) == [[0, 0, 1], [1, 0, 0], [0, 1, 0]]

    def test_fibonacci(self):
        assert as_lists(incidence_matrix(zoo.fibonacci())) == [[1, 1], [1, 0]]

    @pytest.mark.parametrize("n", range(0, 7))
    def test_loop_pair_bridge_powers(self, n):
        c = incidence_matrix(zoo.loop_pair_bridge())
        assert as_lists(int_matrix_power(c, n)) == [[1, n], [0, 1]]

    def test_fibonacci_powers_closed_form(self):
        f = [0, 1, 1]  # f_{-1}, f_0, f_1
        for _ in range(12):
            f.append(f[-1] + f[-2])
        c = incidence_matrix(zoo.fibonacci())
        for n in range(1, 12):
            # f_n sits at index n + 1
            want = [[f[n + 1], f[n]], [f[n], f[n - 1]]]
            assert as_lists(int_matrix_power(c, n)) == want


class TestPaths:
    def test_fibonacci_length_two(self):
        paths = enumerate_paths(zoo.fibonacci(), 2)
        assert (len(paths["1"]), len(paths["2"])) == (3, 2)

    def test_trivial_layer(self, fixture_quiver):
        paths = enumerate_paths(fixture_quiver, 0)
        assert all(ps == [Path.trivial(v)] for v, ps in paths.items())

    def test_free_algebra_count(self):
        assert len(enumerate_paths(zoo.loops(2), 3)["1"]) == 8

    def test_canonical_order_matches_closed_form_basis(self):
        # The ordered basis x^n, x^{n-1}w, ..., wy^{n-1} ending at vertex 1.
        q = zoo.loop_pair_bridge()
        got = [p.render() for p in enumerate_paths(q, 3)["1"]]
        assert got == ["xxx", "xxw", "xwy", "wyy"]

    def test_order_is_sorted_by_key(self, fixture_quiver):
        for n in range(4):
            for ps in enumerate_paths(fixture_quiver, n).values():
                keys = [p.key(fixture_quiver) for p in ps]
                assert keys == sorted(keys)
                assert len(set(keys)) == len(keys)

    def test_path_cap(self):
        with pytest.raises(ResourceLimitError):
            enumerate_paths(zoo.loops(2), 5, cap=16)
        assert len(enumerate_paths(zoo.loops(2), 4, cap=16)["1"]) == 16

    def test_path_cap_env(self, monkeypatch):
        monkeypatch.setenv("QGR_PATH_CAP", "10")
        with pytest.raises(ResourceLimitError):
            enumerate_paths(zoo.loops(2), 4)

    @pytest.mark.parametrize("n", range(0, 6))
    def test_enumeration_matches_brute_force(self, fixture_quiver, n):
        got = enumerate_paths(fixture_quiver, n)
        want = brute_force_paths(fixture_quiver, n)
        for v in fixture_quiver.vertices:
            assert set(got[v]) == set(want[v])
            assert len(got[v]) == len(want[v])

    @settings(max_examples=60, deadline=None)
    @given(quivers())
    def test_counts_match_enumeration(self, q):
        for n in range(5):
            sizes = tuple(len(ps) for ps in enumerate_paths(q, n).values())
            assert sizes == path_counts(q, n)

    def test_path_counts_examples(self):
        assert path_counts(zoo.fibonacci(), 4) == (8, 5)
        assert path_counts(zoo.linear(2), 2) == (0, 0)
        for n in range(8):
            assert path_counts(zoo.loop_pair_bridge(), n) == (n + 1, 1)


class TestCore:
    def test_adjoined_sink(self):
        c = core(zoo.loop_with_sink())
        assert c.vertices == ("1",) and [a.name for a in c.arrows] == ["x"]

    def test_fixed_point(self):
        q = zoo.fibonacci()
        assert core(q) == q

    def test_linear_quiver_vanishes(self):
        assert core(zoo.linear(3)) == Quiver(())

    @settings(max_examples=80, deadline=None)
    @given(quivers())
    def test_idempotent_and_sink_source_free(self, q):
        c = core(q)
        assert core(c) == c
        assert not c.sinks() and not c.sources()

    def test_sink_depth(self):
        assert sink_depth(zoo.fibonacci()) == 0
        assert sink_depth(zoo.loop_with_sink()) == 1
        assert sink_depth(zoo.linear(3)) == 3


class TestVeronese:
    def test_degree_one_is_a_copy(self, fixture_quiver):
        v = veronese(fixture_quiver, 1)
        assert v.vertices == fixture_quiver.vertices
        assert sorted(v.arrows) == sorted(fixture_quiver.arrows)

    def test_common_veronese(self):
        for q in (zoo.double_two_cycle(), zoo.two_double_loops()):
            v = veronese(q, 2)
            assert as_lists(incidence_matrix(v)) == [[4, 0], [0, 4]]

    def test_single_loop(self):
        for m in range(1, 5):
            v = veronese(zoo.loops(1), m)
            assert len(v.arrows) == 1 and v.arrows[0].source == v.arrows[0].target

    @pytest.mark.parametrize("m", [1, 2, 3])
    def test_incidence_is_power(self, fixture_quiver, m):
        c = incidence_matrix(fixture_quiver)
        got = incidence_matrix(veronese(fixture_quiver, m))
        assert as_lists(got) == as_lists(int_matrix_power(c, m))


class TestTorsion:
    def test_adjoined_sink(self):
        t = torsion_classification(zoo.loop_with_sink())
        assert t.finite_start_vertices == ("2",)
        assert t.infinite_vertices == ("1",)
        assert [a.name for a in t.infinite_subquiver.arrows] == ["x"]

    def test_acyclic(self):
        t = torsion_classification(zoo.linear(3))
        assert t.finite_start_vertices == ("1", "2", "3")
        assert t.infinite_subquiver == Quiver(())

    def test_two_loops(self):
        assert torsion_classification(zoo.loops(2)).finite_start_vertices == ()

    @settings(max_examples=80, deadline=None)
    @given(quivers())
    def test_matches_path_growth(self, q):
        # Oracle: i has finitely many paths starting at it iff no path of
        # length |I| starts at i (a longer path must revisit a vertex).
        t = torsion_classification(q)
        n = len(q)
        starts = {p.source for ps in brute_force_paths(q, n).values() for p in ps} if n else set()
        assert set(t.infinite_vertices) == starts
        assert set(t.finite_start_vertices) | set(t.infinite_vertices) == set(q.vertices)
        inf = set(t.infinite_vertices)
        assert set(t.infinite_subquiver.arrows) == {
            a for a in q.arrows if a.source in inf and a.target in inf}

    @settings(max_examples=80, deadline=None)
    @given(quivers())
    def test_nilpotence_iff_acyclic(self, q):
        n = len(q)
        vanishes = not any(path_counts(q, n)) if n else True
        assert vanishes == (not torsion_classification(q).infinite_vertices)
        assert vanishes == q.is_acyclic()


@settings(max_examples=40, deadline=None)
@given(quivers(min_vertices=1))
def test_relabeling_equivariance(q):
    for perm in itertools.islice(itertools.permutations(q.vertices), 4):
        r = q.reorder(perm)
        idx = [q.index(v) for v in perm]
        c, cr = incidence_matrix(q), incidence_matrix(r)
        assert as_lists(cr) == as_lists(c[np.ix_(idx, idx)])
        for n in range(4):
            pc = path_counts(q, n)
            assert path_counts(r, n) == tuple(pc[k] for k in idx)
        assert set(core(r).vertices) == set(core(q).vertices)
        assert set(torsion_classification(r).finite_start_vertices) == set(
            torsion_classification(q).finite_start_vertices)
