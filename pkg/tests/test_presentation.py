"""Births, deaths, presentations, and the zip/unzip correspondence."""

import random

import pytest

from detmod import (Box, ExtendedView, GridModule, InputError,
                    Matrix, NEG_INF, NotDeterminedError, PosetDiagram,
                    Presentation, births_deaths, build_presentation,
                    diagram_births_deaths, diagram_colimit, ext_box, hstack,
                    in_upset, is_admissible, is_invertible, leq,
                    predecessor_colimit_map, rank, solve, unzip_module,
                    verify_presentation, window_module, zip_module)
from helpers import (F2, F5, canonical_set, corner_module, halfplane_table,
                     random_module)
from detmod import QQ

BOTTOM = (NEG_INF, NEG_INF)
UNIT_SET = frozenset(ext_box(Box((1, 1), (1, 1))).points())


def corner_view(field=F2):
    return ExtendedView(corner_module(field))


def corner_encoding(field=F2):
    return corner_view(field).restrict_diagram(UNIT_SET)


class TestPredecessorColimitMap:
    def test_minimal_point_is_a_birth(self):
        diagram = corner_encoding()
        lam = predecessor_colimit_map(diagram, BOTTOM)
        assert lam.shape == (1, 0)

    def test_death_at_axis_point(self):
        diagram = corner_encoding()
        lam = predecessor_colimit_map(diagram, (1, NEG_INF))
        assert lam.shape == (0, 1)  # one-dimensional colimit dies into zero

    def test_iso_at_top_of_iso_chain(self):
        pts = [(i,) for i in range(4)]
        maps = {((i,), (i + 1,)): Matrix.identity(F5, 1) for i in range(3)}
        chain = PosetDiagram(F5, pts, {p: 1 for p in pts}, maps)
        lam = predecessor_colimit_map(chain, (3,))
        assert lam.shape == (1, 1) and is_invertible(lam)

    def test_rejects_foreign_point(self):
        with pytest.raises(InputError):
            predecessor_colimit_map(corner_encoding(), (9, 9))


class TestBirthsDeaths:
    def test_worked_example(self):
        report = births_deaths(corner_view(), UNIT_SET)
        assert report.births == {BOTTOM: 1}
        assert report.deaths == {(1, NEG_INF): 1, (NEG_INF, 1): 1}

    def test_zero_module(self):
        box = Box((0, 0), (1, 1))
        view = ExtendedView(GridModule(F2, box,
                                       {p: 0 for p in box.integer_points()}, {}))
        report = births_deaths(view, UNIT_SET)
        assert report.births == {} and report.deaths == {}

    def test_refuses_undetermined(self):
        with pytest.raises(NotDeterminedError):
            births_deaths(corner_view(), {BOTTOM})

    @pytest.mark.parametrize("n", [2, 3, 4])
    def test_halfplane_window_deaths_on_antidiagonal(self, n):
        diagram = window_module(F2, Box((-n, -n), (n, n)), halfplane_table)
        report = diagram_births_deaths(diagram)
        interior = {p: m for p, m in report.deaths.items()
                    if all(c != NEG_INF and -n < c < n for c in p)}
        assert interior == {(k, -k): 1 for k in range(-(n - 1), n)}
        assert report.births == {BOTTOM: 1}


class TestBuildPresentation:
    def test_worked_example_f2(self):
        pres = build_presentation(corner_view(F2), UNIT_SET)
        assert pres.generators == ((BOTTOM, 1),)
        assert pres.relations == (((NEG_INF, 1), 1), ((1, NEG_INF), 1))
        assert pres.block((NEG_INF, 1), BOTTOM).rows == ((1,),)
        assert pres.block((1, NEG_INF), BOTTOM).rows == ((1,),)

    def test_worked_example_rationals(self):
        pres = build_presentation(corner_view(QQ), UNIT_SET)
        assert pres.generators == ((BOTTOM, 1),)
        assert len(pres.relations) == 2

    def test_zero_module_empty_presentation(self):
        box = Box((0, 0), (1, 1))
        view = ExtendedView(GridModule(F2, box,
                                       {p: 0 for p in box.integer_points()}, {}))
        pres = build_presentation(view, UNIT_SET)
        assert pres.generators == () and pres.relations == ()

    def test_refuses_undetermined(self):
        with pytest.raises(NotDeterminedError):
            build_presentation(corner_view(), {(5, 5)})

    def test_generator_count_matches_births(self):
        rng = random.Random(61)
        for _ in range(10):
            view = ExtendedView(random_module(F5, rng))
            s = canonical_set(view.module)
            pres = build_presentation(view, s)
            bd = births_deaths(view, s)
            assert dict(pres.generators) == bd.births


def default_test_points(view):
    pts = set(canonical_set(view.module))
    lo = tuple(a - 2 for a in view.box.a)
    hi = tuple(b + 2 for b in view.box.b)
    pts.update(Box(lo, hi).integer_points())
    return pts


class TestVerifyPresentation:
    def test_worked_example_passes_everywhere(self):
        view = corner_view()
        pres = build_presentation(view, UNIT_SET)
        pts = set(UNIT_SET) | set(Box((-2, -2), (2, 2)).integer_points())
        assert verify_presentation(view, pres, pts)

    def test_handwritten_presentation_passes(self):
        view = corner_view()
        pres = Presentation(F2, 2, ((BOTTOM, 1),),
                            (((NEG_INF, 1), 1), ((1, NEG_INF), 1)),
                            {((NEG_INF, 1), BOTTOM): Matrix(F2, [[1]]),
                             ((1, NEG_INF), BOTTOM): Matrix(F2, [[1]])})
        assert verify_presentation(view, pres, default_test_points(view))

    def test_dropping_a_relation_fails_at_the_death_point(self):
        view = corner_view()
        pres = Presentation(F2, 2, ((BOTTOM, 1),), (((NEG_INF, 1), 1),),
                            {((NEG_INF, 1), BOTTOM): Matrix(F2, [[1]])})
        check = verify_presentation(view, pres, default_test_points(view))
        assert not check.ok
        assert check.point is not None
        assert leq((1, NEG_INF), check.point)

    def test_roundtrip_on_random_modules(self):
        rng = random.Random(67)
        for field in (F2, F5, QQ):
            for _ in range(8):
                view = ExtendedView(random_module(field, rng))
                s = canonical_set(view.module)
                pres = build_presentation(view, s)
                assert verify_presentation(view, pres, default_test_points(view)), \
                    (field, view.box)

    def test_grading_enforced(self):
        with pytest.raises(InputError):
            Presentation(F2, 2, (((1, 1), 1),), ((BOTTOM, 1),),
                         {(BOTTOM, (1, 1)): Matrix(F2, [[1]])})


class TestFreeCoverComparison:
    def test_colimit_comparison_iso_at_critical_points_when_determined(self):
        # the induced map from the colimit over the set's downset part is an
        # isomorphism everywhere once the set determines the module
        from detmod import critical_grid, join_closure

        rng = random.Random(71)
        for _ in range(6):
            view = ExtendedView(random_module(F5, rng))
            s = canonical_set(view.module)
            closed = sorted(join_closure(s), key=lambda p: tuple(
                (0, 0) if c == NEG_INF else (1, c) for c in p))
            enc = view.restrict_diagram(closed)
            for c in critical_grid(view.box, s).sorted_points():
                below = [p for p in closed if leq(p, c)]
                sub = enc.restrict_downclosed(below)
                dim, inj = diagram_colimit(sub)
                legs = [view.eval_map(p, c) for p in sub.points]
                cone = hstack(F5, legs, nrows=view.eval_space(c)) if legs \
                    else Matrix.zeros(F5, view.eval_space(c), 0)
                quotient = hstack(F5, [inj[p] for p in sub.points], nrows=dim) \
                    if sub.points else Matrix.zeros(F5, dim, 0)
                lam_t = solve(quotient.transpose(), cone.transpose())
                assert lam_t is not None
                lam = lam_t.transpose()
                assert lam.nrows == lam.ncols == rank(lam), (c, lam.shape)

    def test_comparison_not_epi_when_support_escapes(self):
        view = corner_view()
        s = [(0, 0)]
        # nothing of the set lies below the bottom corner, so the colimit is
        # zero while the module value there is one: not an epimorphism
        assert view.eval_space(BOTTOM) == 1
        assert not in_upset(s, BOTTOM)


class TestThreeParameters:
    def random_module_3d(self, rng):
        from helpers import interval_module, twist_module

        a = tuple(rng.randint(-1, 0) for _ in range(3))
        b = tuple(x + rng.randint(0, 1) for x in a)
        box = Box(a, b)
        starts, ends = [], []
        for _ in range(rng.randint(1, 2)):
            g = tuple(rng.randint(box.a[i] - 1, box.b[i]) for i in range(3))
            d = tuple(rng.randint(g[i], box.b[i] + 1) for i in range(3))
            starts.append(g)
            ends.append(d)
        return twist_module(interval_module(F5, box, starts, ends), rng)

    def test_determinacy_and_roundtrip_in_three_parameters(self):
        rng = random.Random(89)
        for _ in range(5):
            module = self.random_module_3d(rng)
            view = ExtendedView(module)
            s = canonical_set(module)
            assert is_admissible(module, sorted(s))
            report_points = set(s)
            lo = tuple(a - 1 for a in view.box.a)
            hi = tuple(b + 1 for b in view.box.b)
            report_points.update(Box(lo, hi).integer_points())
            pres = build_presentation(view, s)
            assert verify_presentation(view, pres, report_points)

    def test_corner_in_three_parameters(self):
        m = corner_module(F2, top=(0, 0, 0), box=Box((0, 0, 0), (1, 1, 1)))
        view = ExtendedView(m)
        s = canonical_set(m)
        pres = build_presentation(view, s)
        bottom = (NEG_INF,) * 3
        assert pres.generators == ((bottom, 1),)
        deaths = {p for p, _ in pres.relations}
        assert deaths == {(1, NEG_INF, NEG_INF), (NEG_INF, 1, NEG_INF),
                          (NEG_INF, NEG_INF, 1)}
        pts = set(s) | set(Box((-1, -1, -1), (2, 2, 2)).integer_points())
        assert verify_presentation(view, pres, pts)


class TestZipUnzip:
    def test_unzip_of_point_is_upset_indicator(self):
        lattice = [(0, 0)]
        n = PosetDiagram(F2, lattice, {(0, 0): 1}, {})
        evaluator = unzip_module(lattice, n)
        assert evaluator.eval_space((1, 1)) == 1
        assert evaluator.eval_space((0, 0)) == 1
        assert evaluator.eval_space((NEG_INF, 0)) == 0
        assert evaluator.eval_space(BOTTOM) == 0

    def test_unzip_zip_recovers_worked_example(self):
        view = corner_view()
        lattice = sorted(UNIT_SET)
        evaluator = unzip_module(lattice, zip_module(view, lattice))
        for c in [BOTTOM, (0, 0), (1, 1), (-3, 5), (NEG_INF, 0), (2, 2)]:
            assert evaluator.eval_space(c) == view.eval_space(c)

    def test_unzip_support_in_upset(self):
        rng = random.Random(73)
        from detmod import join_closure
        for _ in range(10):
            view = ExtendedView(random_module(F5, rng))
            pts = join_closure({(rng.randint(-2, 2), rng.randint(-2, 2))
                                for _ in range(3)})
            if not pts:
                continue
            evaluator = unzip_module(sorted(pts), zip_module(view, sorted(pts)))
            for _ in range(10):
                c = tuple(NEG_INF if rng.random() < 0.3 else rng.randint(-4, 4)
                          for _ in range(2))
                if not in_upset(pts, c):
                    assert evaluator.eval_space(c) == 0

    def test_zip_is_the_restriction(self):
        view = corner_view()
        diagram = zip_module(view, sorted(UNIT_SET))
        assert diagram.points == (BOTTOM, (NEG_INF, 1), (1, NEG_INF), (1, 1))
        assert [diagram.dims[p] for p in diagram.points] == [1, 0, 0, 0]

    def test_zip_unzip_recovers_diagram_supported_on_lattice(self):
        view = ExtendedView(random_module(F5, random.Random(79)))
        lattice = sorted(canonical_set(view.module))
        diagram = zip_module(view, lattice)
        evaluator = unzip_module(lattice, diagram)
        again = zip_module(evaluator, lattice)
        assert again.points == diagram.points
        assert again.dims == diagram.dims
        assert all(again.maps[e] == diagram.maps[e] for e in diagram.covers())

    def test_rejects_non_join_closed(self):
        with pytest.raises(InputError):
            zip_module(corner_view(), [(1, 0), (0, 1)])


class TestAdmissibility:
    def test_worked_example_lattice(self):
        assert is_admissible(corner_module(F2), sorted(UNIT_SET))

    def test_single_point_not_admissible(self):
        assert not is_admissible(corner_module(F2), [(0, 0)])

    def test_constant_module_bottom_lattice(self):
        box = Box((0, 0), (1, 1))
        dims = {p: 1 for p in box.integer_points()}
        steps = {}
        for p in box.integer_points():
            for axis in range(2):
                if p[axis] + 1 <= box.b[axis]:
                    steps[(p, axis)] = Matrix.identity(F2, 1)
        m = GridModule(F2, box, dims, steps)
        assert is_admissible(m, [BOTTOM])

    def test_both_sides_agree_on_random_instances(self):
        rng = random.Random(83)
        verdicts = set()
        for trial in range(40):
            module = random_module(F5, rng)
            if trial % 3 == 0:
                lattice = sorted(canonical_set(module))
            else:
                from detmod import join_closure
                pts = join_closure({(rng.randint(-2, 3), rng.randint(-2, 3))
                                    for _ in range(rng.randint(1, 3))})
                lattice = sorted(pts)
            # is_admissible raises ConsistencyError if the two routes differ
            verdicts.add(is_admissible(module, lattice))
        assert verdicts == {True, False}
