"""Vectors, half-spaces, polytopes and the basic convex-geometry operations.

Polytopes keep the H-representation (``A x <= b``) as source of truth.  In
the plane the vertex list is computed on demand; in higher dimension it has
to be supplied.  All objects are immutable.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, NamedTuple, Sequence

import numpy as np

from . import lp

__all__ = [
    "DEFAULT_TOL",
    "GeometryError",
    "RepresentationError",
    "UnsupportedDimensionError",
    "as_vec",
    "HalfSpace",
    "Polytope",
    "PairedVector",
    "hat",
    "support",
    "width_in_direction",
    "min_width_2d",
    "HullCertificate",
    "origin_in_hull",
    "convex_hull_2d",
    "minkowski_sum_vertices",
    "contains_point",
    "translate",
    "scale",
    "regular_polygon",
    "box",
    "plank",
]

DEFAULT_TOL = 1e-9


class GeometryError(ValueError):
    pass


class RepresentationError(GeometryError):
    """The operation needs a representation the body does not carry."""


class UnsupportedDimensionError(GeometryError):
    pass


def as_vec(x, dim: int | None = None) -> np.ndarray:
    """Return ``x`` as a finite 1-d float array (copy)."""
    v = np.array(x, dtype=float).reshape(-1)
    if v.size == 0:
        raise GeometryError("vector must have dimension >= 1")
    if not np.all(np.isfinite(v)):
        raise GeometryError(f"non-finite coordinates in {v!r}")
    if dim is not None and v.size != dim:
        raise GeometryError(f"expected dimension {dim}, got {v.size}")
    v.setflags(write=False)
    return v


def _as_points(pts, dim: int | None = None) -> np.ndarray:
    P = np.array(pts, dtype=float)
    if P.ndim == 1:
        P = P.reshape(1, -1)
    if P.ndim != 2 or P.shape[0] == 0:
        raise GeometryError("expected a nonempty list of points")
    if not np.all(np.isfinite(P)):
        raise GeometryError("non-finite coordinates in point list")
    if dim is not None and P.shape[1] != dim:
        raise GeometryError(f"expected dimension {dim}, got {P.shape[1]}")
    P.setflags(write=False)
    return P


@dataclass(frozen=True)
class HalfSpace:
    """``{x : <normal, x> <= offset}``."""

    normal: np.ndarray
    offset: float

    def __post_init__(self):
        a = as_vec(self.normal)
        if not np.linalg.norm(a) > 0:
            raise GeometryError("half-space normal must be nonzero")
        object.__setattr__(self, "normal", a)
        object.__setattr__(self, "offset", float(self.offset))


@dataclass(frozen=True, eq=False)
class Polytope:
    """Convex polyhedron ``{x : A x <= b}`` with an optional vertex list.

    ``bounded=False`` marks planks and other unbounded sets; they never carry
    vertices.
    """

    A: np.ndarray
    b: np.ndarray
    vertices: np.ndarray | None = None
    bounded: bool = True

    def __post_init__(self):
        A = _as_points(self.A)
        b = np.array(self.b, dtype=float).reshape(-1)
        if b.shape[0] != A.shape[0]:
            raise GeometryError("A and b have different row counts")
        if not np.all(np.isfinite(b)):
            raise GeometryError("non-finite offsets")
        if np.any(np.linalg.norm(A, axis=1) == 0):
            raise GeometryError("half-space normal must be nonzero")
        b.setflags(write=False)
        object.__setattr__(self, "A", A)
        object.__setattr__(self, "b", b)
        if self.vertices is not None:
            if not self.bounded:
                raise GeometryError("unbounded bodies carry no vertex list")
            V = _as_points(self.vertices, A.shape[1])
            object.__setattr__(self, "vertices", V)
            self._check_consistency()

    def _check_consistency(self, tol: float = DEFAULT_TOL) -> None:
        V = self.vertices
        scale = max(1.0, float(np.abs(V).max()), float(np.abs(self.b).max()))
        norms = np.linalg.norm(self.A, axis=1)
        slack = (self.b[None, :] - V @ self.A.T) / norms[None, :]
        if slack.min() < -tol * scale:
            raise GeometryError(
                f"vertex violates a half-space by {-slack.min():.3g}"
            )
        if np.any(slack.min(axis=0) > tol * scale):
            j = int(np.argmax(slack.min(axis=0)))
            raise GeometryError(f"half-space {j} is not tight at any vertex")

    @property
    def dim(self) -> int:
        return self.A.shape[1]

    @property
    def halfspaces(self) -> list[HalfSpace]:
        return [HalfSpace(a, b) for a, b in zip(self.A, self.b)]

    @classmethod
    def from_halfspaces(cls, hs: Iterable[HalfSpace], vertices=None, bounded=True):
        hs = list(hs)
        return cls(np.array([h.normal for h in hs]), np.array([h.offset for h in hs]), vertices, bounded)

    @classmethod
    def from_vertices_2d(cls, points) -> "Polytope":
        """Planar convex hull of ``points`` with its edge half-planes."""
        hull = convex_hull_2d(points)
        if hull.shape[0] < 3:
            raise GeometryError("points are collinear; no planar body")
        edges = np.roll(hull, -1, axis=0) - hull
        normals = np.column_stack([edges[:, 1], -edges[:, 0]])
        normals /= np.linalg.norm(normals, axis=1)[:, None]
        offsets = np.einsum("ij,ij->i", normals, hull)
        return cls(normals, offsets, hull)

    def with_vertices(self) -> "Polytope":
        """Return self with a vertex list, computing it in the plane."""
        if self.vertices is not None:
            return self
        if not self.bounded:
            raise RepresentationError("unbounded body has no vertex list")
        if self.dim != 2:
            raise RepresentationError(
                "vertex enumeration is only available in the plane; supply vertices"
            )
        return Polytope(self.A, self.b, _planar_vertices(self.A, self.b), True)

    def to_dict(self) -> dict:
        d = {
            "dim": self.dim,
            "halfspaces": [{"a": a.tolist(), "b": float(b)} for a, b in zip(self.A, self.b)],
        }
        if self.vertices is not None:
            d["vertices"] = self.vertices.tolist()
        if not self.bounded:
            d["bounded"] = False
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "Polytope":
        try:
            dim = int(d["dim"])
            hs = d["halfspaces"]
            A = np.array([h["a"] for h in hs], dtype=float).reshape(len(hs), -1)
            b = np.array([h["b"] for h in hs], dtype=float)
        except (KeyError, TypeError, ValueError) as exc:
            raise GeometryError(f"malformed polytope: {exc}") from exc
        if A.shape[1] != dim:
            raise GeometryError(f"half-space normals have dimension {A.shape[1]}, dim is {dim}")
        verts = d.get("vertices")
        bounded = bool(d.get("bounded", True))
        return cls(A, b, None if verts is None else np.array(verts, dtype=float), bounded)


def _planar_vertices(A: np.ndarray, b: np.ndarray, tol: float = DEFAULT_TOL) -> np.ndarray:
    pts = []
    m = A.shape[0]
    scale = max(1.0, float(np.abs(b).max()))
    for i in range(m):
        for j in range(i + 1, m):
            M = A[[i, j]]
            det = M[0, 0] * M[1, 1] - M[0, 1] * M[1, 0]
            if abs(det) < 1e-14 * np.linalg.norm(M[0]) * np.linalg.norm(M[1]):
                continue
            p = np.linalg.solve(M, b[[i, j]])
            if np.all(A @ p <= b + tol * scale * np.linalg.norm(A, axis=1)):
                pts.append(p)
    if not pts:
        raise GeometryError("half-planes have empty or unbounded intersection")
    hull = convex_hull_2d(np.array(pts))
    return hull


@dataclass(frozen=True, eq=False)
class PairedVector:
    """``w = (u, v)`` in R^d x R^d."""

    u: np.ndarray
    v: np.ndarray

    def __post_init__(self):
        u = as_vec(self.u)
        v = as_vec(self.v, u.size)
        object.__setattr__(self, "u", u)
        object.__setattr__(self, "v", v)

    @property
    def dim(self) -> int:
        return self.u.size

    def flat(self) -> np.ndarray:
        return np.concatenate([self.u, self.v])

    def __eq__(self, other):
        if not isinstance(other, PairedVector):
            return NotImplemented
        return np.array_equal(self.u, other.u) and np.array_equal(self.v, other.v)

    def __hash__(self):
        return hash((self.u.tobytes(), self.v.tobytes()))


def hat(w: PairedVector) -> PairedVector:
    """Swap the two halves: ``(u, v) -> (v, u)``."""
    return PairedVector(w.v, w.u)


def _vertices_of(body) -> np.ndarray:
    if isinstance(body, Polytope):
        if body.vertices is None:
            if body.bounded and body.dim == 2:
                return body.with_vertices().vertices
            raise RepresentationError("support needs a vertex representation")
        return body.vertices
    return _as_points(body)


def support(body, direction) -> tuple[float, np.ndarray]:
    """Support value ``max <p, dir>`` over the vertices and a maximizing vertex.

    Ties go to the lowest vertex index.
    """
    V = _vertices_of(body)
    u = as_vec(direction, V.shape[1])
    if not np.linalg.norm(u) > 0:
        raise GeometryError("support direction must be nonzero")
    vals = V @ u
    best = vals.max()
    slack = 1e-12 * max(1.0, abs(best))
    i = int(np.flatnonzero(vals >= best - slack)[0])
    return float(vals[i]), V[i]


def support_values(V: np.ndarray, directions: np.ndarray) -> np.ndarray:
    """Vectorized support function of the point set ``V`` (rows of ``directions``)."""
    return (np.asarray(directions) @ V.T).max(axis=1)


def width_in_direction(body, direction, tol: float = DEFAULT_TOL) -> float:
    """Width of the thinnest plank orthogonal to the unit vector ``direction``."""
    u = as_vec(direction)
    nrm = np.linalg.norm(u)
    if nrm == 0:
        raise GeometryError("zero direction")
    if abs(nrm - 1.0) > tol:
        raise GeometryError(f"direction must be a unit vector (norm {nrm})")
    V = _vertices_of(body)
    vals = V @ u
    return float(vals.max() - vals.min())


def convex_hull_2d(points, tol: float = 0.0) -> np.ndarray:
    """Extreme points of a planar set in counter-clockwise order (monotone chain).

    Collinear boundary points are dropped.  Starts at the lowest-x,
    lowest-y point.
    """
    P = _as_points(points, 2)
    pts = np.unique(P, axis=0)  # lexicographic sort
    if pts.shape[0] <= 2:
        return pts

    def cross(o, a, b):
        return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])

    lower: list = []
    for p in pts:
        while len(lower) >= 2 and cross(lower[-2], lower[-1], p) <= tol:
            lower.pop()
        lower.append(p)
    upper: list = []
    for p in pts[::-1]:
        while len(upper) >= 2 and cross(upper[-2], upper[-1], p) <= tol:
            upper.pop()
        upper.append(p)
    hull = np.array(lower[:-1] + upper[:-1])
    return hull


def min_width_2d(body) -> tuple[float, np.ndarray]:
    """Minimal width of a planar body by rotating calipers.

    The minimum over all directions is attained at an edge normal of the
    hull, so scanning edges with an antipodal pointer is exact.
    """
    V = _vertices_of(body)
    if V.shape[1] != 2:
        raise UnsupportedDimensionError("minimal width is implemented in the plane only")
    H = convex_hull_2d(V)
    k = H.shape[0]
    if k == 1:
        return 0.0, np.array([1.0, 0.0])
    if k == 2:
        e = H[1] - H[0]
        n = np.array([-e[1], e[0]]) / np.linalg.norm(e)
        return 0.0, n

    def dist(i, j):
        e = H[(i + 1) % k] - H[i]
        p = H[j] - H[i]
        return abs(e[0] * p[1] - e[1] * p[0]) / np.hypot(e[0], e[1])

    best = np.inf
    best_edge = 0
    j = 1
    for i in range(k):
        if j == i:
            j = (j + 1) % k
        while dist(i, (j + 1) % k) > dist(i, j):
            j = (j + 1) % k
        w = dist(i, j)
        if w < best:
            best, best_edge = w, i
    e = H[(best_edge + 1) % k] - H[best_edge]
    n = np.array([e[1], -e[0]]) / np.hypot(e[0], e[1])
    return float(best), n


class HullCertificate(NamedTuple):
    """Outcome of :func:`origin_in_hull`.

    ``weights`` is set when the origin lies in the hull; otherwise
    ``direction`` is a unit vector with ``<direction, p> >= margin > 0``
    for every point.
    """

    contains: bool
    weights: np.ndarray | None
    direction: np.ndarray | None
    residual: float
    margin: float = 0.0


def origin_in_hull(points, tol: float = DEFAULT_TOL) -> HullCertificate:
    """Decide whether 0 lies in ``conv(points)`` with an LP certificate."""
    P = _as_points(points)
    k, d = P.shape
    A = np.vstack([np.ones((1, k)), P.T])
    rhs = np.zeros(d + 1)
    rhs[0] = 1.0
    out = lp.solve(lp.LinearProgram(np.zeros(k), A, "=", rhs))
    if out.optimal:
        alpha = np.clip(out.x, 0.0, None)
        alpha = alpha / alpha.sum()
        res = float(np.linalg.norm(alpha @ P))
        if res <= tol:
            return HullCertificate(True, alpha, None, res)
    # separating direction: max t s.t. <p_i, s> >= t, -1 <= s <= 1, t <= 1
    A2 = np.hstack([P, -np.ones((k, 1))])
    lower = np.concatenate([-np.ones(d), [-np.inf]])
    upper = np.ones(d + 1)
    c = np.zeros(d + 1)
    c[-1] = 1.0
    sep = lp.solve(lp.LinearProgram(c, A2, ">=", np.zeros(k), lower, upper))
    s = sep.x[:d]
    ns = np.linalg.norm(s)
    if ns == 0:
        raise GeometryError("hull membership LP returned no certificate either way")
    s = s / ns
    margin = float((P @ s).min())
    return HullCertificate(False, None, s, float("nan"), margin)


def minkowski_sum_vertices(a, b) -> tuple[np.ndarray, bool]:
    """Pairwise sums of two point sets, hull-reduced in the plane.

    Returns ``(points, reduced)``; in dimension > 2 the pairwise sums are
    returned as they are and ``reduced`` is False.
    """
    A = _as_points(a)
    B = _as_points(b, A.shape[1])
    S = (A[:, None, :] + B[None, :, :]).reshape(-1, A.shape[1])
    if A.shape[1] == 2:
        # pairwise sums of collinear edges leave rounding-level turns
        ext = float(np.abs(S).max(initial=0.0))
        return convex_hull_2d(S, tol=1e-12 * max(ext, 1.0) ** 2), True
    return S, False


def contains_point(body: Polytope, p, tol: float = DEFAULT_TOL) -> tuple[bool, float]:
    """Signed distance-like margin ``min_j (b_j - <a_j, p>) / |a_j|``."""
    x = as_vec(p, body.dim)
    norms = np.linalg.norm(body.A, axis=1)
    margin = float(((body.b - body.A @ x) / norms).min())
    return margin >= -tol, margin


def translate(body: Polytope, t) -> Polytope:
    t = as_vec(t, body.dim)
    V = None if body.vertices is None else body.vertices + t
    return Polytope(body.A, body.b + body.A @ t, V, body.bounded)


def scale(body: Polytope, lam: float) -> Polytope:
    """``lam * body`` about the origin; negative ``lam`` gives negative homothets."""
    lam = float(lam)
    if lam == 0 or not np.isfinite(lam):
        raise GeometryError("scale factor must be finite and nonzero")
    s = 1.0 if lam > 0 else -1.0
    V = None if body.vertices is None else lam * body.vertices
    return Polytope(s * body.A, abs(lam) * body.b, V, body.bounded)


def regular_polygon(n: int, circumradius: float = 1.0, center=(0.0, 0.0), phase: float = 0.0) -> Polytope:
    """Regular ``n``-gon with a vertex at angle ``phase``."""
    ang = phase + 2 * np.pi * np.arange(n) / n
    V = circumradius * np.column_stack([np.cos(ang), np.sin(ang)]) + np.asarray(center, dtype=float)
    return Polytope.from_vertices_2d(V)


def box(lo: Sequence[float], hi: Sequence[float]) -> Polytope:
    """Axis-aligned box; vertices listed in binary counting order."""
    lo = as_vec(lo)
    hi = as_vec(hi, lo.size)
    d = lo.size
    eye = np.eye(d)
    A = np.vstack([eye, -eye])
    b = np.concatenate([hi, -lo])
    if d == 2:
        V = np.array([[lo[0], lo[1]], [hi[0], lo[1]], [hi[0], hi[1]], [lo[0], hi[1]]])
    else:
        bits = (np.arange(2 ** d)[:, None] >> np.arange(d)[None, :]) & 1
        V = np.where(bits == 1, hi, lo)
    return Polytope(A, b, V)


def plank(normal, lo: float, hi: float) -> Polytope:
    """``{x : lo <= <normal, x> <= hi}`` (unbounded)."""
    a = as_vec(normal)
    if not lo < hi:
        raise GeometryError("plank needs lo < hi")
    return Polytope(np.vstack([a, -a]), np.array([hi, -lo]), None, bounded=False)


def plank_parameters(P: Polytope, tol: float = DEFAULT_TOL) -> tuple[np.ndarray, float, float]:
    """Unit normal, lower and upper level of a plank polytope."""
    if P.A.shape[0] != 2:
        raise GeometryError("a plank has exactly two bounding half-spaces")
    a0, a1 = P.A
    n0, n1 = np.linalg.norm(a0), np.linalg.norm(a1)
    u = a0 / n0
    if np.linalg.norm(a1 / n1 + u) > tol:
        raise GeometryError("plank half-spaces must have opposite normals")
    hi = P.b[0] / n0
    lo = -P.b[1] / n1
    if not lo < hi:
        raise GeometryError("plank is empty or flat")
    return u, float(lo), float(hi)
