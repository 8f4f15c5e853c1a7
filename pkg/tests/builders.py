"""Instance generators shared by the unit and acceptance tests."""
import numpy as np

from plankcover.cover import CoveringInstance, Piece
from plankcover.geom import Polytope, plank, regular_polygon

DISK_N = 64


def polygonal_disk() -> Polytope:
    return regular_polygon(DISK_N)


def vertex_direction(k: int) -> np.ndarray:
    a = 2 * np.pi * k / DISK_N
    return np.array([np.cos(a), np.sin(a)])


def disk_planks(rng, total: float, n=None) -> CoveringInstance:
    """Planks across vertex directions of the 64-gon with relative widths summing to ``total``.

    The width of the 64-gon across a vertex direction is exactly 2, so a
    plank of width ``w`` has relative width (and inradius) ``w / 2``.
    """
    n = int(rng.integers(1, 9)) if n is None else n
    rel = rng.dirichlet(np.ones(n)) * total
    pieces = []
    for r in rel:
        u = vertex_direction(int(rng.integers(DISK_N)))
        w = 2.0 * r
        c = rng.uniform(-1.0, 1.0)
        pieces.append(Piece(plank(u, c - w / 2, c + w / 2), np.zeros(2)))
    return CoveringInstance(polygonal_disk(), pieces)


def random_symmetric_polygon(rng, k=None) -> Polytope:
    k = int(rng.integers(2, 8)) if k is None else k
    P = rng.normal(size=(k, 2)) * rng.uniform(0.3, 2.0, 2)
    return Polytope.from_vertices_2d(np.vstack([P, -P]))
