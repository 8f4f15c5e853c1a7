import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from plankcover.geom import (
    GeometryError,
    HalfSpace,
    PairedVector,
    Polytope,
    RepresentationError,
    UnsupportedDimensionError,
    as_vec,
    box,
    contains_point,
    convex_hull_2d,
    hat,
    min_width_2d,
    minkowski_sum_vertices,
    origin_in_hull,
    plank,
    regular_polygon,
    scale,
    support,
    translate,
    width_in_direction,
)

from oracles import zero_in_hull_2d

SQUARE = box([0, 0], [1, 1])


def random_polygon(rng, k=12):
    return Polytope.from_vertices_2d(rng.normal(size=(k, 2)) * rng.uniform(0.3, 3.0, 2))


def unit(rng, d=2):
    v = rng.normal(size=d)
    return v / np.linalg.norm(v)


class TestConstruction:
    def test_rejects_nan(self):
        with pytest.raises(GeometryError):
            as_vec([0.0, np.nan])

    def test_zero_normal(self):
        with pytest.raises(GeometryError):
            HalfSpace([0.0, 0.0], 1.0)

    def test_inconsistent_vertices(self):
        with pytest.raises(GeometryError):
            Polytope(SQUARE.A, SQUARE.b, np.array([[0, 0], [2, 0], [0, 1]]))

    def test_halfspace_not_tight(self):
        A = np.vstack([SQUARE.A, [[1.0, 1.0]]])
        b = np.concatenate([SQUARE.b, [5.0]])
        with pytest.raises(GeometryError, match="not tight"):
            Polytope(A, b, SQUARE.vertices)

    def test_vertices_on_demand_in_plane(self):
        P = Polytope(SQUARE.A, SQUARE.b)
        V = P.with_vertices().vertices
        assert sorted(map(tuple, V)) == [(0, 0), (0, 1), (1, 0), (1, 1)]

    def test_no_enumeration_in_3d(self):
        C = box([0, 0, 0], [1, 1, 1])
        with pytest.raises(RepresentationError):
            Polytope(C.A, C.b).with_vertices()

    def test_json_roundtrip(self):
        P = regular_polygon(7)
        Q = Polytope.from_dict(P.to_dict())
        np.testing.assert_array_equal(P.A, Q.A)
        np.testing.assert_array_equal(P.vertices, Q.vertices)
        pl = plank([0, 1], -1, 2)
        assert Polytope.from_dict(pl.to_dict()).bounded is False


class TestSupport:
    def test_square_tie_goes_to_lowest_index(self):
        val, wit = support(SQUARE, [1, 0])
        assert val == 1.0
        np.testing.assert_array_equal(wit, [1, 0])

    def test_homogeneous(self, rng):
        K = random_polygon(rng)
        u = rng.normal(size=2)
        v1, w1 = support(K, u)
        v2, w2 = support(K, 2 * u)
        assert v2 == pytest.approx(2 * v1)
        np.testing.assert_array_equal(w1, w2)

    def test_triangle_vertex_direction(self):
        T = regular_polygon(3)
        assert support(T, [1, 0])[0] == pytest.approx(1.0)

    def test_missing_vertices(self):
        with pytest.raises(RepresentationError):
            support(plank([1, 0], 0, 1), [1, 0])

    def test_translation_rule(self, rng):
        for _ in range(50):
            K = random_polygon(rng)
            t = rng.normal(size=2)
            u = rng.normal(size=2)
            assert support(translate(K, t), u)[0] == pytest.approx(support(K, u)[0] + t @ u, abs=1e-9)


class TestWidth:
    def test_square(self):
        assert width_in_direction(SQUARE, [1, 0]) == 1.0

    def test_polygonal_disk(self, rng):
        D = regular_polygon(64)
        for _ in range(20):
            w = width_in_direction(D, unit(rng))
            assert 2 * np.cos(np.pi / 64) - 1e-12 <= w <= 2 + 1e-12

    def test_requires_unit_direction(self):
        with pytest.raises(GeometryError):
            width_in_direction(SQUARE, [2, 0])
        with pytest.raises(GeometryError):
            width_in_direction(SQUARE, [0, 0])

    def test_symmetries(self, rng):
        for _ in range(30):
            K = random_polygon(rng)
            u = unit(rng)
            w = width_in_direction(K, u)
            assert width_in_direction(scale(K, -1), u) == pytest.approx(w)
            assert width_in_direction(K, -u) == pytest.approx(w)
            assert width_in_direction(translate(K, rng.normal(size=2)), u) == pytest.approx(w)

    def test_min_width_examples(self):
        assert min_width_2d(SQUARE)[0] == pytest.approx(1.0)
        assert min_width_2d(Polytope.from_vertices_2d([[0, 0], [4, 0], [0, 3]]))[0] == pytest.approx(12 / 5)
        assert min_width_2d(np.array([[0, 0], [1, 1]]))[0] == 0.0

    def test_min_width_3d_unsupported(self):
        with pytest.raises(UnsupportedDimensionError):
            min_width_2d(box([0, 0, 0], [1, 1, 1]))

    def test_min_width_lower_bounds_all_directions(self, rng):
        for _ in range(20):
            K = random_polygon(rng, int(rng.integers(3, 20)))
            w, u = min_width_2d(K)
            assert width_in_direction(K, u) == pytest.approx(w, abs=1e-12)
            ang = rng.uniform(0, 2 * np.pi, 100)
            for a in ang:
                assert w <= width_in_direction(K, [np.cos(a), np.sin(a)]) + 1e-12

    def test_min_width_matches_dense_scan(self, rng):
        K = random_polygon(rng, 9)
        ang = np.linspace(0, np.pi, 200001)
        dirs = np.column_stack([np.cos(ang), np.sin(ang)])
        proj = K.vertices @ dirs.T
        scan = (proj.max(axis=0) - proj.min(axis=0)).min()
        w = min_width_2d(K)[0]
        # the scan overshoots by at most width * step at a kink of the width function
        assert w <= scan + 1e-12
        assert scan - w <= scan * (ang[1] - ang[0]) + 1e-12


class TestOriginInHull:
    def test_segment(self):
        cert = origin_in_hull([[1, 0], [-1, 0]])
        assert cert.contains
        np.testing.assert_allclose(cert.weights, [0.5, 0.5])

    def test_refusal(self):
        cert = origin_in_hull([[1, 0], [0, 1]])
        assert not cert.contains
        np.testing.assert_allclose(cert.direction, np.array([1, 1]) / np.sqrt(2))
        assert cert.margin > 0

    def test_three_points(self):
        cert = origin_in_hull([[1, 0], [-1, 1], [-1, -1]])
        assert cert.contains
        # unique solution of the 2x2 system
        np.testing.assert_allclose(cert.weights, [0.5, 0.25, 0.25], atol=1e-12)

    def test_random_against_angular_oracle(self, rng):
        for _ in range(300):
            P = rng.normal(size=(int(rng.integers(1, 7)), 2)) + rng.normal(size=2) * rng.uniform(0, 2)
            cert = origin_in_hull(P)
            assert cert.contains == zero_in_hull_2d(P)
            if cert.contains:
                assert np.linalg.norm(cert.weights @ P) <= 1e-9
                assert cert.weights.min() >= 0 and cert.weights.sum() == pytest.approx(1.0)
            else:
                assert np.all(P @ cert.direction > 0)


class TestMinkowski:
    def test_identity(self, rng):
        S = convex_hull_2d(rng.normal(size=(10, 2)))
        out, reduced = minkowski_sum_vertices([[0.0, 0.0]], S)
        assert reduced
        assert sorted(map(tuple, out)) == sorted(map(tuple, S))

    def test_segments_make_square(self):
        out, _ = minkowski_sum_vertices([[0, 0], [1, 0]], [[0, 0], [0, 1]])
        assert sorted(map(tuple, out)) == [(0, 0), (0, 1), (1, 0), (1, 1)]

    def test_homothets_add(self, rng):
        U = regular_polygon(5).vertices
        out, _ = minkowski_sum_vertices(0.7 * U, 1.8 * U)
        expected = convex_hull_2d(2.5 * U)
        np.testing.assert_allclose(np.sort(out, axis=0), np.sort(expected, axis=0), atol=1e-12)

    def test_unreduced_in_3d(self):
        out, reduced = minkowski_sum_vertices(np.eye(3), np.eye(3))
        assert not reduced and out.shape == (9, 3)


class TestContainment:
    def test_examples(self):
        assert contains_point(SQUARE, [0.5, 0.5]) == (True, 0.5)
        inside, m = contains_point(SQUARE, [2, 0.5])
        assert not inside and m == pytest.approx(-1.0)
        assert abs(contains_point(SQUARE, [1.0, 0.3])[1]) <= 1e-12

    def test_negative_homothet(self):
        T = regular_polygon(3)
        N = scale(T, -0.5)
        np.testing.assert_allclose(N.vertices, -0.5 * T.vertices)
        for v in N.vertices:
            assert abs(contains_point(N, v)[1]) < 1e-12


@settings(max_examples=60, deadline=None)
@given(st.lists(st.floats(-5, 5, allow_nan=False), min_size=4, max_size=4))
def test_hat_is_an_involution(xs):
    w = PairedVector(xs[:2], xs[2:])
    assert hat(hat(w)) == w
    assert np.array_equal(hat(w).u, w.v)
