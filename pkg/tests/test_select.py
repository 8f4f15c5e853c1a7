import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from plankcover.geom import PairedVector
from plankcover.select import (
    ColourClass,
    PreconditionError,
    SelectionInstance,
    coordinate_ascent,
    objective,
    select_bang,
    select_colourful,
    select_kadets,
    verify_guarantee,
)

from oracles import (
    enumerate_local_maxima,
    naive_margins,
    naive_objective,
    random_zero_hull_class,
    simplex_directions,
)


def random_instance(rng, n=None, d=None, sizes=(2, 5)):
    n = int(rng.integers(1, 6)) if n is None else n
    d = int(rng.integers(1, 4)) if d is None else d
    us, vs, classes = [], [], []
    for _ in range(n):
        u, v = random_zero_hull_class(rng, int(rng.integers(*sizes)), d)
        us.append(u)
        vs.append(v)
        classes.append(ColourClass(u, v).certified())
    x = rng.normal(size=(n, d))
    y = rng.normal(size=(n, d))
    return SelectionInstance(classes, x, y), us, vs


class TestObjective:
    def test_matches_double_sum(self, rng):
        for _ in range(100):
            inst, us, vs = random_instance(rng)
            choice = [int(rng.integers(c.size)) for c in inst.classes]
            assert objective(inst, choice) == pytest.approx(
                naive_objective(us, vs, inst.x, inst.y, choice), abs=1e-9
            )

    def test_single_class_has_no_pair_term(self):
        cls = ColourClass([[1.0], [-1.0]], [[2.0], [-2.0]], [0.5, 0.5])
        inst = SelectionInstance([cls], [[3.0]], [[5.0]])
        # only -<x, v> - <u, y> remains
        assert objective(inst, [0]) == -3 * 2 - 1 * 5


class TestAscent:
    def test_monotone_trace(self, rng):
        for _ in range(50):
            inst, *_ = random_instance(rng)
            choice, trace = coordinate_ascent(inst, return_trace=True)
            assert all(b > a for a, b in zip(trace, trace[1:]))
            assert trace[-1] == pytest.approx(objective(inst, choice))

    def test_ends_at_oracle_local_maximum(self, rng):
        for _ in range(60):
            inst, us, vs = random_instance(rng, sizes=(2, 4))
            vals, local = enumerate_local_maxima(us, vs, inst.x, inst.y)
            choice = tuple(coordinate_ascent(inst))
            assert choice in local

    def test_fixed_start(self, rng):
        inst, *_ = random_instance(rng, n=3, d=2)
        start = [c.size - 1 for c in inst.classes]
        a = coordinate_ascent(inst, start)
        assert a == coordinate_ascent(inst, start)

    def test_bad_start(self, rng):
        inst, *_ = random_instance(rng, n=2, d=2)
        with pytest.raises(ValueError):
            coordinate_ascent(inst, [0])
        with pytest.raises(ValueError):
            coordinate_ascent(inst, [0, 99])


class TestGuarantee:
    def test_every_local_maximum_satisfies_it(self, rng):
        # the key lemma, checked on every local maximum the oracle finds
        for _ in range(40):
            inst, us, vs = random_instance(rng, sizes=(2, 4))
            _, local = enumerate_local_maxima(us, vs, inst.x, inst.y)
            for ch in local:
                assert min(naive_margins(us, vs, inst.x, inst.y, ch)) >= -1e-9

    def test_result_margins_match_oracle(self, rng):
        for _ in range(100):
            inst, us, vs = random_instance(rng)
            res = select_colourful(inst)
            ref = naive_margins(us, vs, inst.x, inst.y, res.chosen)
            np.testing.assert_allclose(res.margins, ref, atol=1e-9)
            np.testing.assert_allclose(verify_guarantee(inst, res), ref, atol=1e-9)
            assert min(ref) >= -1e-9

    def test_missing_certificate_is_refused(self):
        cls = ColourClass([[1.0, 0.0]], [[0.0, 1.0]]).certified()
        inst = SelectionInstance([cls], [[0, 0]], [[0, 0]])
        with pytest.raises(PreconditionError, match="class 0"):
            select_colourful(inst)

    def test_json_roundtrip(self, rng):
        inst, *_ = random_instance(rng, n=3, d=2)
        again = SelectionInstance.from_dict(inst.to_dict())
        assert select_colourful(again).chosen == select_colourful(inst).chosen

    def test_from_elements(self):
        cls = ColourClass.from_elements([PairedVector([1, 0], [0, 1]), PairedVector([-1, 0], [0, -1])])
        np.testing.assert_allclose(cls.weights, [0.5, 0.5])


class TestBang:
    def test_worked_example(self):
        res = select_bang([[1, 0], [0, 1]], [1, 1], [0, 0])
        assert np.all(res.margins >= -1e-12)
        assert np.all(np.abs(res.point) >= 1)

    def test_random_instances(self, rng):
        for _ in range(200):
            n = int(rng.integers(1, 12))
            d = int(rng.integers(1, 5))
            U = rng.normal(size=(n, d))
            U /= np.linalg.norm(U, axis=1)[:, None]
            w = rng.uniform(0.05, 2.0, n)
            m = rng.normal(size=n)
            res = select_bang(U, w, m)
            assert set(np.unique(res.signs)) <= {-1.0, 1.0}
            # recompute from signs alone
            p = (res.signs * w) @ U
            assert np.all(np.abs(U @ p - m) >= w - 1e-9)

    def test_rejects_non_unit(self):
        with pytest.raises(PreconditionError):
            select_bang([[2.0, 0.0]], [1.0], [0.0])

    def test_rejects_nonpositive_width(self):
        with pytest.raises(PreconditionError):
            select_bang([[1.0, 0.0]], [0.0], [0.0])


class TestKadets:
    def test_random_instances(self, rng):
        for _ in range(150):
            n = int(rng.integers(1, 8))
            d = int(rng.integers(2, 4))
            dirs = [simplex_directions(rng, d) for _ in range(n)]
            r = rng.uniform(0.1, 2.0, n)
            O = rng.normal(size=(n, d))
            res = select_kadets(dirs, r, O)
            for k in range(n):
                assert any(np.allclose(res.chosen[k], u) for u in dirs[k])
            p = r @ res.chosen
            for k in range(n):
                assert (p - O[k]) @ res.chosen[k] >= r[k] - 1e-9

    def test_refuses_one_sided_set(self):
        with pytest.raises(PreconditionError, match="direction set 0"):
            select_kadets([[[1.0, 0.0], [0.0, 1.0]]], [1.0], [[0.0, 0.0]])


@settings(max_examples=80, deadline=None)
@given(
    seed=st.integers(0, 2**32 - 1),
    n=st.integers(1, 6),
    d=st.integers(1, 3),
)
def test_guarantee_property(seed, n, d):
    rng = np.random.default_rng(seed)
    inst, us, vs = random_instance(rng, n=n, d=d)
    res = select_colourful(inst)
    assert min(naive_margins(us, vs, inst.x, inst.y, res.chosen)) >= -1e-9


@settings(max_examples=60, deadline=None)
@given(seed=st.integers(0, 2**32 - 1), n=st.integers(1, 10))
def test_bang_property(seed, n):
    rng = np.random.default_rng(seed)
    U = rng.normal(size=(n, 2))
    U /= np.linalg.norm(U, axis=1)[:, None]
    w = rng.uniform(0.01, 3.0, n)
    m = rng.uniform(-3, 3, n)
    res = select_bang(U, w, m)
    assert res.margins.min() >= -1e-9
