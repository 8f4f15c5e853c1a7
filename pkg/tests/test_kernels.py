"""The compiled and pure-Python ascent kernels must agree exactly."""
import subprocess
import sys

import numpy as np
import pytest

from plankcover import _ascent_py, select

from oracles import random_zero_hull_class

cy = pytest.importorskip("plankcover._ascent")


def packed(rng, n, d, size_range=(2, 7)):
    us, vs = zip(*(random_zero_hull_class(rng, int(rng.integers(*size_range)), d) for _ in range(n)))
    eu = np.ascontiguousarray(np.vstack(us))
    ev = np.ascontiguousarray(np.vstack(vs))
    offsets = np.zeros(n + 1, dtype=np.intp)
    offsets[1:] = np.cumsum([u.shape[0] for u in us])
    return eu, ev, offsets, rng.normal(size=(n, d)), rng.normal(size=(n, d))


def test_backend_names():
    assert cy.BACKEND == "cython"
    assert _ascent_py.BACKEND == "python"
    assert select.BACKEND in ("cython", "python")


@pytest.mark.parametrize("n,d", [(1, 1), (3, 2), (8, 3), (25, 2), (40, 5)])
def test_identical_choices_and_moves(rng, n, d):
    for _ in range(20):
        eu, ev, off, x, y = packed(rng, n, d)
        start = np.zeros(n, dtype=np.intp)
        c1, m1 = cy.ascend(eu, ev, off, x, y, start)
        c2, m2 = _ascent_py.ascend(eu, ev, off, x, y, start)
        assert np.array_equal(np.asarray(c1), np.asarray(c2))
        assert [tuple(map(int, m)) for m in m1] == [tuple(map(int, m)) for m in m2]


def test_ties_go_to_lowest_index():
    # two identical candidates with positive gain: index 1 must win over 2
    eu = np.array([[0.0], [1.0], [1.0], [-2.0]])
    ev = np.zeros_like(eu)
    off = np.array([0, 4], dtype=np.intp)
    x = np.zeros((1, 1))
    y = np.array([[-1.0]])
    for mod in (cy, _ascent_py):
        c, _ = mod.ascend(eu, ev, off, x, y, np.zeros(1, dtype=np.intp))
        assert int(c[0]) == 1


def test_step_limit():
    rng = np.random.default_rng(5)
    eu, ev, off, x, y = packed(rng, 20, 3)
    start = np.zeros(20, dtype=np.intp)
    for mod in (cy, _ascent_py):
        with pytest.raises(RuntimeError):
            mod.ascend(eu, ev, off, x, y, start, max_steps=0)


def test_fallback_when_extension_missing():
    # a fresh interpreter, so reloading does not disturb other tests
    code = (
        "import sys; sys.modules['plankcover._ascent'] = None; "
        "from plankcover import select; print(select.BACKEND)"
    )
    proc = subprocess.run([sys.executable, "-c", code], capture_output=True, text=True, check=True)
    assert proc.stdout.strip() == "python"
