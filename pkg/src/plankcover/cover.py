"""Translative coverings: relative inradii and explicit uncovered points.

Three constructions produce a witness point that a proposed covering
misses:

* :func:`construct_witness` for pieces whose contact systems with the
  inscribed homothets of ``B`` satisfy ``<u_i, v_j> = <u_j, v_i>``;
* :func:`sumset_witness` for the finite sumset ``U_1 + ... + U_n`` of
  foot-point sets;
* :func:`simplex_negative_homothet` for a simplex and its negative
  homothets with total ratio below the dimension.

Every returned witness is re-checked with plain membership tests before it
is handed back.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import lp
from .contact import (
    ContactSystem,
    check_symmetric_condition,
    extract_contact_pairs,
    max_inscribed_homothet,
)
from .geom import (
    DEFAULT_TOL,
    GeometryError,
    Polytope,
    as_vec,
    contains_point,
    origin_in_hull,
    plank_parameters,
    scale,
    translate,
    width_in_direction,
)
from .select import (
    ColourClass,
    GuaranteeError,
    PreconditionError,
    SelectionInstance,
    SelectionResult,
    select_colourful,
)

__all__ = [
    "Refusal",
    "CapacityError",
    "Piece",
    "CoveringInstance",
    "WitnessReport",
    "CoverSample",
    "k_inradius",
    "relative_width",
    "construct_witness",
    "sumset_witness",
    "regular_simplex",
    "simplex_negative_homothet",
    "verify_cover_sample",
    "support_value",
]

SYMMETRY_TOL = 1e-8
GRAZE_TOL = 1e-9


class Refusal(Exception):
    """The theorem does not apply: a covering may exist."""

    def __init__(self, reason: str, detail: str = ""):
        super().__init__(f"{reason}: {detail}" if detail else reason)
        self.reason = reason
        self.detail = detail


class CapacityError(ValueError):
    """Request outside the supported envelope."""


@dataclass(frozen=True, eq=False)
class Piece:
    """Covering piece ``C + shift`` with frame origin ``o`` for its contacts."""

    C: Polytope
    shift: np.ndarray
    o: np.ndarray | None = None
    contacts: ContactSystem | None = None

    def __post_init__(self):
        object.__setattr__(self, "shift", as_vec(self.shift, self.C.dim))
        if self.o is not None:
            object.__setattr__(self, "o", as_vec(self.o, self.C.dim))

    @property
    def placed(self) -> Polytope:
        return translate(self.C, self.shift)


@dataclass(frozen=True, eq=False)
class CoveringInstance:
    B: Polytope
    pieces: tuple

    def __post_init__(self):
        pieces = tuple(self.pieces)
        for i, p in enumerate(pieces):
            if p.C.dim != self.B.dim:
                raise GeometryError(f"piece {i} has dimension {p.C.dim}, B has {self.B.dim}")
        object.__setattr__(self, "pieces", pieces)

    @property
    def dim(self) -> int:
        return self.B.dim

    def to_dict(self) -> dict:
        out = []
        for p in self.pieces:
            d = {"C": p.C.to_dict(), "shift": p.shift.tolist()}
            if p.o is not None:
                d["o"] = p.o.tolist()
            if p.contacts is not None:
                d["contacts"] = p.contacts.to_dict()
            out.append(d)
        return {"B": self.B.to_dict(), "pieces": out}

    @classmethod
    def from_dict(cls, data: dict) -> "CoveringInstance":
        try:
            B = Polytope.from_dict(data["B"])
            pieces = []
            for p in data["pieces"]:
                C = Polytope.from_dict(p["C"])
                contacts = ContactSystem.from_dict(p["contacts"]) if p.get("contacts") else None
                pieces.append(Piece(C, p["shift"], p.get("o"), contacts))
        except (KeyError, TypeError) as exc:
            raise GeometryError(f"malformed covering instance: missing {exc}") from exc
        return cls(B, pieces)


@dataclass(frozen=True, eq=False)
class WitnessReport:
    """Candidate uncovered point with its audit.

    ``piece_margins[k] > 0`` means the point is strictly outside piece k
    (distance to the nearest violated face); ``in_B_margin >= 0`` means it
    lies in the covered set.
    """

    point: np.ndarray
    in_B_margin: float
    piece_margins: np.ndarray
    epsilon: float
    selection: SelectionResult | None
    certificate_margins: np.ndarray
    grazing: list = field(default_factory=list)
    lambdas: np.ndarray | None = None

    def to_dict(self) -> dict:
        d = {
            "point": self.point.tolist(),
            "in_B_margin": float(self.in_B_margin),
            "piece_margins": [float(m) for m in self.piece_margins],
            "certificate_margins": [float(m) for m in self.certificate_margins],
            "epsilon": None if self.epsilon is None or math.isnan(self.epsilon) else float(self.epsilon),
            "grazing": [int(k) for k in self.grazing],
        }
        if self.lambdas is not None:
            d["lambdas"] = [float(x) for x in self.lambdas]
        if self.selection is not None:
            d["selection"] = self.selection.to_dict()
        return d


def support_value(body: Polytope, direction) -> float:
    """``h_body(direction)``; uses the vertex list if present, an LP otherwise."""
    u = as_vec(direction, body.dim)
    if body.vertices is not None or (body.bounded and body.dim == 2):
        V = body.with_vertices().vertices
        return float((V @ u).max())
    out = lp.solve(
        lp.LinearProgram(u, body.A, "<=", body.b, np.full(body.dim, -np.inf), np.full(body.dim, np.inf))
    )
    if not out.optimal:
        raise GeometryError(f"support function is {out.status} in direction {u}")
    return out.value


def k_inradius(B: Polytope, C: Polytope) -> float:
    """Largest ``lam`` with a translate of ``lam * B`` inside ``C``."""
    return max_inscribed_homothet(B, C).lam


def relative_width(K: Polytope, P: Polytope) -> float:
    """Plank width divided by the width of K across the plank normal."""
    u, lo, hi = plank_parameters(P)
    return (hi - lo) / width_in_direction(K, u)


def _piece_margins(pieces, point) -> np.ndarray:
    return np.array([-contains_point(p, point)[1] for p in pieces])


def construct_witness(inst: CoveringInstance, epsilon: float | None = None, rescale: bool = True) -> WitnessReport:
    """Point of ``B`` outside every ``C_i + shift_i`` when ``sum r_B(C_i) < 1``.

    Each piece needs a contact system between ``r_B(C_i) B - o_i`` and
    ``C_i - o_i`` with ``(0, 0)`` in the hull of its pairs, and pairs from
    different pieces must satisfy ``<u_i, v_j> = <u_j, v_i>``.  With
    ``rescale`` the normals of systems whose pairs are positively parallel
    are stretched to ``(u, u)`` form first.

    Raises
    ------
    Refusal
        ``sum r_B(C_i) >= 1``.
    PreconditionError
        0 not interior to B, missing full certificate, symmetric condition
        violated, or a frame origin on the wrong side of its contact face.
    GuaranteeError
        The audit of the constructed point failed.
    """
    B = inst.B if inst.B.vertices is not None else inst.B.with_vertices()
    inside, m0 = contains_point(B, np.zeros(inst.dim))
    if not m0 > 0:
        raise PreconditionError("B must contain the origin in its interior; translate it first")
    n = len(inst.pieces)
    lams = np.zeros(n)
    systems: list[ContactSystem] = []
    frame = []  # o_i - t_i: frame origin relative to the homothet position
    for i, piece in enumerate(inst.pieces):
        h = max_inscribed_homothet(B, piece.C)
        lams[i] = h.lam
        o = h.shift if piece.o is None else piece.o
        sys = piece.contacts if piece.contacts is not None else extract_contact_pairs(B, piece.C, h, o)
        if rescale:
            sys = sys.rescaled()
        systems.append(sys)
        frame.append(o - h.shift)
    lam = float(lams.sum())
    if lam >= 1.0:
        raise Refusal("sum of relative inradii is at least 1", f"sum = {lam:.12g}")
    if np.any(lams <= 0):
        raise PreconditionError(f"piece {int(np.argmin(lams))} contains no positive homothet of B")
    for i, sys in enumerate(systems):
        if sys.full_weights is None:
            raise PreconditionError(f"piece {i}: contact pairs do not contain (0,0) in their hull")
        hv = np.einsum("ij,ij->i", sys.u, sys.v)
        if np.any(hv <= 0):
            raise PreconditionError(f"piece {i}: frame origin is not on the inner side of every contact face")
    for i in range(n):
        for j in range(i + 1, n):
            ok, worst, (a, b) = check_symmetric_condition(systems[i], systems[j], SYMMETRY_TOL)
            if not ok:
                raise PreconditionError(
                    f"symmetric condition fails between piece {i} pair {a} and piece {j} pair {b} "
                    f"(violation {worst:.3g})"
                )

    eps = (1.0 / lam - 1.0) / 2.0 if epsilon is None else float(epsilon)
    if not (eps > 0 and (1.0 + eps) * lam < 1.0):
        raise PreconditionError(f"epsilon {eps} must satisfy eps > 0 and (1 + eps) * lam < 1")
    f = 1.0 + eps
    o_tot = f * np.sum(frame, axis=0)
    # anchors in the frame of each piece: x_k = x'_k + o_k - o
    xs = np.array([p.shift for p in inst.pieces]) + np.array([s.origin for s in systems]) - o_tot
    classes = [ColourClass(f * s.u, f * s.v, s.full_weights) for s in systems]
    sel = select_colourful(SelectionInstance(classes, 2.0 * xs, np.zeros_like(xs)))
    u = sel.w_sum.u
    point = u + o_tot

    chosen_u = np.array([s.u[i] for s, i in zip(systems, sel.chosen)])
    chosen_v = np.array([s.v[i] for s, i in zip(systems, sel.chosen)])
    cert = (
        np.einsum("kd,kd->k", u[None, :] - xs, chosen_v) - np.einsum("kd,kd->k", chosen_u, chosen_v)
    ) / np.linalg.norm(chosen_v, axis=1)
    in_B = contains_point(B, point)[1]
    margins = _piece_margins([p.placed for p in inst.pieces], point)
    if in_B < -DEFAULT_TOL or np.any(margins <= 0) or np.any(cert <= 0):
        raise GuaranteeError(
            f"witness audit failed: in_B {in_B:.3g}, piece margins {margins}, certificate {cert}"
        )
    return WitnessReport(point, in_B, margins, eps, sel, cert, [], lams)


def _foot_points(K: Polytope, V: np.ndarray) -> np.ndarray:
    h = np.array([support_value(K, v) for v in V])
    return (h / np.einsum("ij,ij->i", V, V))[:, None] * V


def sumset_witness(bodies, shifts) -> WitnessReport:
    """Point of ``U_1 + ... + U_n`` missing the interior of every ``K_i + x_i``.

    ``bodies`` holds pairs ``(K_i, V_i)``: a polytope with 0 in its interior
    and a direction set with 0 in its hull.  ``U_i`` are the feet of the
    perpendiculars from 0 to the supporting hyperplanes with normals
    ``V_i``.  The selection guarantees ``<u - x_k, u_k> >= |u_k|^2``, which
    only rules out the interior; points on a boundary are listed in
    ``grazing``.
    """
    if len(bodies) == 0:
        raise ValueError("need at least one body")
    n = len(bodies)
    d = bodies[0][0].dim
    X = np.array(shifts, dtype=float).reshape(n, d)
    classes, feet = [], []
    for i, (K, V) in enumerate(bodies):
        V = np.atleast_2d(np.array(V, dtype=float))
        if V.shape[1] != d or K.dim != d:
            raise GeometryError(f"body {i} does not live in dimension {d}")
        if np.any(np.linalg.norm(V, axis=1) == 0):
            raise GeometryError(f"direction set {i} contains the zero vector")
        if not contains_point(K, np.zeros(d))[1] > 0:
            raise PreconditionError(f"body {i} does not contain the origin in its interior")
        if not origin_in_hull(V).contains:
            raise PreconditionError(f"direction set {i} does not contain 0 in its convex hull")
        U = _foot_points(K, V)
        cert = origin_in_hull(U)
        if not cert.contains:
            raise PreconditionError(f"foot-point set {i} does not contain 0 in its convex hull")
        feet.append(U)
        classes.append(ColourClass(U, U, cert.weights))
    sel = select_colourful(SelectionInstance(classes, X, X))
    chosen = np.array([U[i] for U, i in zip(feet, sel.chosen)])
    u = chosen.sum(axis=0)
    cert = np.einsum("kd,kd->k", u[None, :] - X, chosen) - np.einsum("kd,kd->k", chosen, chosen)
    if np.any(cert < -DEFAULT_TOL):
        raise GuaranteeError(f"sumset certificate failed: {cert}")
    margins = _piece_margins([translate(K, x) for (K, _), x in zip(bodies, X)], u)
    if np.any(margins < -DEFAULT_TOL):
        raise GuaranteeError(f"sumset witness lies inside a piece: {margins}")
    grazing = [int(k) for k in np.flatnonzero(margins <= GRAZE_TOL)]
    return WitnessReport(u, 0.0, margins, float("nan"), sel, cert, grazing)


def regular_simplex(d: int) -> Polytope:
    """Regular simplex centred at 0 with circumradius 1.

    Vertices ``e_1..e_d`` and ``t (1..1)`` with ``t = (1 - sqrt(d+1)) / d``
    are equidistant; they are then centred and rescaled.  Facet ``j`` is
    opposite vertex ``j``: normal ``-p_j``, offset ``1/d``.
    """
    t = (1.0 - math.sqrt(d + 1.0)) / d
    P = np.vstack([np.eye(d), np.full((1, d), t)])
    P = P - P.mean(axis=0)
    P = P / np.linalg.norm(P[0])
    return Polytope(-P, np.full(d + 1, 1.0 / d), P)


def simplex_negative_homothet(d: int, lambdas, shifts) -> WitnessReport:
    """Point of the regular simplex ``T`` missed by every ``-lam_i T + shift_i``.

    Works whenever ``sum lam_i < d``; at or above ``d`` coverings exist and
    the call is refused.
    """
    if d not in (2, 3, 4):
        raise CapacityError(f"dimension {d} outside the supported range 2..4")
    lams = np.array(lambdas, dtype=float).reshape(-1)
    if np.any(lams < 0) or not np.all(np.isfinite(lams)):
        raise PreconditionError("ratios must be finite and nonnegative")
    n = lams.shape[0]
    X = np.array(shifts, dtype=float).reshape(n, d)
    total = float(lams.sum())
    if total >= d:
        raise Refusal("bound permits coverings", f"sum of ratios {total:.12g} >= d = {d}")
    T = regular_simplex(d)
    P = T.vertices
    feet = T.b[:, None] * T.A / np.einsum("ij,ij->i", T.A, T.A)[:, None]
    target = -P / d
    # facet j lies opposite vertex j, so the feet match -(1/d) T row by row
    if np.abs(feet - target).max() > 1e-9:
        raise GuaranteeError("foot points of the simplex do not form -(1/d) T")
    active = np.flatnonzero(lams > 0)
    if active.size:
        bodies = []
        for i in active:
            K = scale(T, -lams[i])
            # outer facet normals of -lam T are the vertex directions of T
            bodies.append((K, K.A))
        rep = sumset_witness(bodies, X[active])
        for (K, V), k in zip(bodies, active):
            expected = lams[k] * P / d
            got = _foot_points(K, V)
            if np.abs(got - expected).max() > 1e-9:
                raise GuaranteeError("foot points of -lam T differ from -lam * (feet of T)")
        point = rep.point
        sel, cert = rep.selection, rep.certificate_margins
    else:
        point = np.zeros(d)
        sel, cert = None, np.zeros(0)
    margins = np.zeros(n)
    for k in range(n):
        if lams[k] > 0:
            margins[k] = -contains_point(translate(scale(T, -lams[k]), X[k]), point)[1]
        else:
            margins[k] = float(np.linalg.norm(point - X[k]))
    in_T = contains_point(T, point)[1]
    if in_T < -DEFAULT_TOL or np.any(margins < -DEFAULT_TOL):
        raise GuaranteeError(f"simplex witness audit failed: in T {in_T:.3g}, margins {margins}")
    grazing = [int(k) for k in np.flatnonzero(margins <= GRAZE_TOL)]
    return WitnessReport(point, in_T, margins, float("nan"), sel, cert, grazing, lams)


@dataclass(frozen=True)
class CoverSample:
    fraction: float
    first_uncovered: np.ndarray | None
    n_samples: int
    probes_covered: list

    def to_dict(self) -> dict:
        return {
            "fraction": self.fraction,
            "first_uncovered": None if self.first_uncovered is None else self.first_uncovered.tolist(),
            "n_samples": self.n_samples,
            "probes_covered": list(self.probes_covered),
        }


def _covered(pieces, pts: np.ndarray, tol: float) -> np.ndarray:
    hit = np.zeros(pts.shape[0], dtype=bool)
    for C in pieces:
        slack = C.b[None, :] - pts @ C.A.T
        hit |= np.all(slack >= -tol * np.linalg.norm(C.A, axis=1)[None, :], axis=1)
    return hit


def verify_cover_sample(inst: CoveringInstance, grid_n: int, probes=None, tol: float = 1e-12) -> CoverSample:
    """Grid estimate of how much of B the placed pieces cover.

    Cell centres of a ``grid_n^d`` grid over the bounding box of B are
    tested; ``first_uncovered`` is the lowest-index uncovered sample inside
    B.  ``probes`` are extra points whose coverage is reported individually.
    """
    B = inst.B.with_vertices() if inst.B.vertices is None else inst.B
    lo, hi = B.vertices.min(axis=0), B.vertices.max(axis=0)
    d = inst.dim
    axes = [lo[t] + (np.arange(grid_n) + 0.5) / grid_n * (hi[t] - lo[t]) for t in range(d)]
    grid = np.stack(np.meshgrid(*axes, indexing="ij"), axis=-1).reshape(-1, d)
    inB = np.all(grid @ B.A.T <= B.b[None, :] + tol, axis=1)
    pts = grid[inB]
    placed = [p.placed for p in inst.pieces]
    hit = _covered(placed, pts, tol)
    frac = float(hit.mean()) if pts.shape[0] else 1.0
    miss = np.flatnonzero(~hit)
    first = pts[miss[0]] if miss.size else None
    probe_hits = []
    if probes is not None:
        Q = np.atleast_2d(np.array(probes, dtype=float))
        probe_hits = [bool(h) for h in _covered(placed, Q, tol)]
    return CoverSample(frac, first, int(pts.shape[0]), probe_hits)
