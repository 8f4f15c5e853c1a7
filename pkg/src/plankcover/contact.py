"""Maximal inscribed homothets and their contact pairs.

The largest ``lam`` with ``lam * K + x`` inside ``L = {A y <= b}`` solves

    maximize lam  s.t.  <a_j, x> + lam * h_K(a_j) <= b_j,   lam >= 0,

and the dual multipliers of that program are exactly the weights that put
0 in the convex hull of the touching normals.  So one LP gives the
homothet, the contact pairs and the completeness certificate.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from . import lp
from .geom import (
    DEFAULT_TOL,
    GeometryError,
    Polytope,
    as_vec,
    origin_in_hull,
)

__all__ = [
    "UnboundedHomothetError",
    "CertificateError",
    "InscribedHomothet",
    "ContactPair",
    "ContactSystem",
    "max_inscribed_homothet",
    "extract_contact_pairs",
    "check_symmetric_condition",
    "check_uu_form",
    "check_w_hatw_form",
]

TIGHT_TOL = 1e-8


class UnboundedHomothetError(GeometryError):
    """Arbitrarily large homothets fit (K is flat across an open direction of L)."""


class CertificateError(GeometryError):
    """LP duals do not certify a complete contact system."""


@dataclass(frozen=True, eq=False)
class InscribedHomothet:
    """``lam * K + shift`` is a largest homothet of K inside L."""

    lam: float
    shift: np.ndarray
    tight_indices: list
    dual: np.ndarray
    witnesses: np.ndarray  # point of K's touching face for every row of L

    def to_dict(self) -> dict:
        return {
            "lambda": self.lam,
            "shift": self.shift.tolist(),
            "tight_indices": [int(j) for j in self.tight_indices],
        }


class ContactPair(NamedTuple):
    u: np.ndarray
    v: np.ndarray


@dataclass(frozen=True, eq=False)
class ContactSystem:
    """Contact points ``u`` (rows, frame shifted by ``-origin``) and outer normals ``v``."""

    u: np.ndarray
    v: np.ndarray
    normal_weights: np.ndarray
    full_weights: np.ndarray | None
    origin: np.ndarray
    indices: list

    @property
    def pairs(self) -> list[ContactPair]:
        return [ContactPair(a, b) for a, b in zip(self.u, self.v)]

    @property
    def size(self) -> int:
        return self.u.shape[0]

    @property
    def dim(self) -> int:
        return self.u.shape[1]

    def normal_residual(self) -> float:
        w = self.normal_weights
        return max(
            max(0.0, -float(w.min())),
            abs(float(w.sum()) - 1.0),
            float(np.linalg.norm(w @ self.v)),
        )

    def rescaled(self, tol: float = 1e-9) -> "ContactSystem":
        """Rescale each normal to the length of its contact point.

        Applies only when every ``v`` is a positive multiple of its ``u``;
        the result then consists of ``(u, u)`` pairs.  Otherwise returns self.
        """
        nu = np.linalg.norm(self.u, axis=1)
        nv = np.linalg.norm(self.v, axis=1)
        if np.any(nu <= tol):
            return self
        cos = np.einsum("ij,ij->i", self.u, self.v) / (nu * nv)
        if np.any(cos < 1.0 - tol):
            return self
        factor = nu / nv
        v = self.v * factor[:, None]
        w = self.normal_weights / factor
        w = w / w.sum()
        return _with_full_weights(self.u, v, w, self.origin, self.indices)

    def to_dict(self) -> dict:
        return {
            "pairs": [{"u": a.tolist(), "v": b.tolist()} for a, b in zip(self.u, self.v)],
            "normal_weights": self.normal_weights.tolist(),
            "full_weights": None if self.full_weights is None else self.full_weights.tolist(),
            "origin": self.origin.tolist(),
            "constraint_indices": [int(j) for j in self.indices],
        }

    @classmethod
    def from_dict(cls, d: dict) -> "ContactSystem":
        try:
            u = np.array([p["u"] for p in d["pairs"]], dtype=float)
            v = np.array([p["v"] for p in d["pairs"]], dtype=float)
            nw = np.array(d["normal_weights"], dtype=float)
            fw = d.get("full_weights")
            fw = None if fw is None else np.array(fw, dtype=float)
            origin = as_vec(d["origin"])
            idx = list(d.get("constraint_indices", range(len(u))))
        except (KeyError, TypeError, ValueError) as exc:
            raise GeometryError(f"malformed contact system: {exc}") from exc
        return cls(u, v, nw, fw, origin, idx)


def _with_full_weights(u, v, normal_weights, origin, indices) -> ContactSystem:
    cert = origin_in_hull(np.hstack([u, v]))
    return ContactSystem(u, v, normal_weights, cert.weights, origin, list(indices))


def _support_rows(K: Polytope, normals: np.ndarray, face: str = "centroid") -> tuple[np.ndarray, np.ndarray]:
    """Support values of K for each row and a point of the touching face.

    ``face="witness"`` gives the lowest-index maximizing vertex,
    ``face="centroid"`` the mean of all maximizing vertices.
    """
    V = K.with_vertices().vertices if K.vertices is None else K.vertices
    vals = normals @ V.T
    best = vals.max(axis=1)
    slack = 1e-12 * np.maximum(1.0, np.abs(best))
    on_face = vals >= (best - slack)[:, None]
    if face == "witness":
        return best, V[np.argmax(on_face, axis=1)]
    if face != "centroid":
        raise ValueError(f"unknown face rule {face!r}")
    pts = (on_face @ V) / on_face.sum(axis=1)[:, None]
    return best, pts


def max_inscribed_homothet(K: Polytope, L: Polytope, face: str = "centroid") -> InscribedHomothet:
    """Largest ``lam`` and a shift with ``lam * K + shift`` inside ``L``.

    ``face`` picks the contact point on each touching face of K (see
    ``_support_rows``); it only matters for contact-pair extraction.

    Raises
    ------
    UnboundedHomothetError
        ``lam`` is unbounded.
    GeometryError
        ``L`` is empty.
    """
    if K.dim != L.dim:
        raise GeometryError(f"dimension mismatch: K is {K.dim}-d, L is {L.dim}-d")
    d = K.dim
    h, wit = _support_rows(K, L.A, face)
    A = np.hstack([L.A, h[:, None]])
    c = np.zeros(d + 1)
    c[-1] = 1.0
    lower = np.concatenate([np.full(d, -np.inf), [0.0]])
    out = lp.solve(lp.LinearProgram(c, A, "<=", L.b, lower, np.full(d + 1, np.inf)))
    if out.status == "unbounded":
        raise UnboundedHomothetError("homothety ratio is unbounded")
    if out.status == "infeasible":
        raise GeometryError("container is empty")
    x, lam = out.x[:d], float(out.x[-1])
    slack = L.b - L.A @ x - lam * h
    scale = max(1.0, float(np.abs(L.b).max()))
    tight = [int(j) for j in np.flatnonzero(slack <= TIGHT_TOL * scale)]
    return InscribedHomothet(lam, x, tight, out.dual, wit)


def extract_contact_pairs(K: Polytope, L: Polytope, h: InscribedHomothet, o=None) -> ContactSystem:
    """Contact pairs certified complete by the LP duals of ``h``.

    Only rows with a positive multiplier are kept: they already balance
    the normals.  ``o`` is the frame origin (defaults to ``h.shift``).
    """
    o = h.shift if o is None else as_vec(o, L.dim)
    y = np.clip(h.dual, 0.0, None)
    if not y.max(initial=0.0) > 0:
        raise CertificateError("all dual multipliers vanish; no complete contact system")
    keep = [j for j in h.tight_indices if y[j] > 1e-12 * y.max()]
    if not keep:
        raise CertificateError("no tight constraint carries a positive multiplier")
    keep_arr = np.array(keep)
    w = y[keep_arr] / y[keep_arr].sum()
    v = L.A[keep_arr]
    u = h.shift + h.lam * h.witnesses[keep_arr] - o
    res = float(np.linalg.norm(w @ v))
    if res > TIGHT_TOL * max(1.0, float(np.abs(v).max())):
        raise CertificateError(f"dual weights leave residual {res:.3g} in the normal balance")
    return _with_full_weights(u, v, w, np.array(o, dtype=float), keep)


def check_symmetric_condition(A: ContactSystem, B: ContactSystem, tol: float = 1e-8) -> tuple[bool, float, tuple]:
    """``<u_i, v_j> == <u_j, v_i>`` for all ``(u_i, v_i)`` in A and ``(u_j, v_j)`` in B.

    Returns ``(ok, worst violation, (i, j) of the worst pair)``.
    """
    gap = np.abs(A.u @ B.v.T - A.v @ B.u.T)
    i, j = np.unravel_index(int(np.argmax(gap)), gap.shape)
    worst = float(gap[i, j])
    return worst <= tol, worst, (int(i), int(j))


def check_uu_form(system: ContactSystem, tol: float = 1e-9) -> bool:
    nu = np.linalg.norm(system.u, axis=1)
    return bool(np.all(np.linalg.norm(system.u - system.v, axis=1) <= tol * np.maximum(1.0, nu)))


def check_w_hatw_form(system: ContactSystem, tol: float = 1e-9) -> bool:
    """In R^{2d}: every pair reads ``((p, q), (q, p))``."""
    D = system.dim
    if D % 2:
        return False
    d = D // 2
    p, q = system.u[:, :d], system.u[:, d:]
    r, s = system.v[:, :d], system.v[:, d:]
    scale = np.maximum(1.0, np.linalg.norm(system.u, axis=1))
    ok = (np.linalg.norm(r - q, axis=1) <= tol * scale) & (np.linalg.norm(s - p, axis=1) <= tol * scale)
    return bool(np.all(ok))
