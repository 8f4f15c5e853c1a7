"""Colourful selection from classes of paired vectors.

Given finite sets ``W_1..W_n`` of pairs ``w = (u, v)`` with ``(0, 0)`` in
each convex hull, and anchors ``z_k = (x_k, y_k)``, pick ``w_i in W_i`` such
that with ``w = sum w_i``

    <w - z_k, hat(w_k)> >= <w_k, hat(w_k)>      for every k.

The choice is found by maximizing

    F = sum_{i != j} <u_i, v_j> - sum_i <x_i, v_i> - sum_j <u_j, y_j>

one class at a time.  Any choice at which no single-class swap increases
``F`` already satisfies the inequality, so a local maximum is enough.
Bang's and Kadets' lemmas are special cases (see :func:`select_bang` and
:func:`select_kadets`).
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .geom import DEFAULT_TOL, PairedVector, as_vec, origin_in_hull

try:
    from ._ascent import BACKEND, ascend
except ImportError:  # compiled kernel not built
    from ._ascent_py import BACKEND, ascend

__all__ = [
    "BACKEND",
    "PreconditionError",
    "GuaranteeError",
    "ColourClass",
    "SelectionInstance",
    "SelectionResult",
    "objective",
    "coordinate_ascent",
    "select_colourful",
    "verify_guarantee",
    "select_kadets",
    "select_bang",
    "KadetsResult",
    "BangResult",
]

GUARANTEE_TOL = 1e-9


class PreconditionError(ValueError):
    """Input violates a hypothesis of the selection theorem."""


class GuaranteeError(RuntimeError):
    """The engine produced a choice that fails its own certificate."""


@dataclass(frozen=True, eq=False)
class ColourClass:
    """One colour class: rows of ``u`` and ``v`` are the element halves."""

    u: np.ndarray
    v: np.ndarray
    weights: np.ndarray | None = None

    def __post_init__(self):
        u = np.array(self.u, dtype=float)
        v = np.array(self.v, dtype=float)
        if u.ndim != 2 or u.shape != v.shape or u.shape[0] == 0:
            raise ValueError("a colour class needs matching nonempty (m, d) arrays")
        if not (np.all(np.isfinite(u)) and np.all(np.isfinite(v))):
            raise ValueError("non-finite element coordinates")
        u.setflags(write=False)
        v.setflags(write=False)
        object.__setattr__(self, "u", u)
        object.__setattr__(self, "v", v)
        if self.weights is not None:
            w = np.array(self.weights, dtype=float).reshape(-1)
            if w.shape[0] != u.shape[0]:
                raise ValueError("one hull weight per element")
            w.setflags(write=False)
            object.__setattr__(self, "weights", w)

    @classmethod
    def from_elements(cls, elements: Sequence[PairedVector], weights=None) -> "ColourClass":
        u = np.array([w.u for w in elements])
        v = np.array([w.v for w in elements])
        return cls(u, v, weights).certified() if weights is None else cls(u, v, weights)

    def certified(self) -> "ColourClass":
        """Copy carrying hull weights from the LP (or no weights if 0 is outside)."""
        cert = origin_in_hull(np.hstack([self.u, self.v]))
        return ColourClass(self.u, self.v, cert.weights)

    @property
    def size(self) -> int:
        return self.u.shape[0]

    @property
    def dim(self) -> int:
        return self.u.shape[1]

    def element(self, i: int) -> PairedVector:
        return PairedVector(self.u[i], self.v[i])

    def certificate_residual(self) -> float:
        """How far the stored weights are from certifying ``(0,0) in conv``."""
        w = self.weights
        if w is None:
            return np.inf
        neg = max(0.0, -float(w.min()))
        return max(neg, abs(float(w.sum()) - 1.0), float(np.linalg.norm(w @ np.hstack([self.u, self.v]))))


@dataclass(frozen=True, eq=False)
class SelectionInstance:
    classes: tuple
    x: np.ndarray
    y: np.ndarray

    def __post_init__(self):
        classes = tuple(self.classes)
        if not classes:
            raise ValueError("need at least one colour class")
        d = classes[0].dim
        if any(c.dim != d for c in classes):
            raise ValueError("colour classes live in different dimensions")
        x = np.array(self.x, dtype=float).reshape(len(classes), -1)
        y = np.array(self.y, dtype=float).reshape(len(classes), -1)
        if x.shape[1] != d or y.shape[1] != d:
            raise ValueError("anchors must match the class dimension")
        x.setflags(write=False)
        y.setflags(write=False)
        object.__setattr__(self, "classes", classes)
        object.__setattr__(self, "x", x)
        object.__setattr__(self, "y", y)
        eu = np.ascontiguousarray(np.vstack([c.u for c in classes]))
        ev = np.ascontiguousarray(np.vstack([c.v for c in classes]))
        offsets = np.zeros(len(classes) + 1, dtype=np.intp)
        offsets[1:] = np.cumsum([c.size for c in classes])
        object.__setattr__(self, "_packed", (eu, ev, offsets))

    @property
    def n(self) -> int:
        return len(self.classes)

    @property
    def dim(self) -> int:
        return self.classes[0].dim

    @property
    def anchors(self) -> list[PairedVector]:
        return [PairedVector(a, b) for a, b in zip(self.x, self.y)]

    def chosen_arrays(self, choice) -> tuple[np.ndarray, np.ndarray]:
        U = np.array([c.u[i] for c, i in zip(self.classes, choice)])
        V = np.array([c.v[i] for c, i in zip(self.classes, choice)])
        return U, V

    def to_dict(self) -> dict:
        return {
            "classes": [
                [{"u": c.u[i].tolist(), "v": c.v[i].tolist()} for i in range(c.size)]
                for c in self.classes
            ],
            "anchors": [{"x": a.tolist(), "y": b.tolist()} for a, b in zip(self.x, self.y)],
        }

    @classmethod
    def from_dict(cls, data: dict) -> "SelectionInstance":
        try:
            classes = []
            for elems in data["classes"]:
                classes.append(
                    ColourClass(
                        np.array([e["u"] for e in elems], dtype=float),
                        np.array([e["v"] for e in elems], dtype=float),
                    ).certified()
                )
            x = [a["x"] for a in data["anchors"]]
            y = [a["y"] for a in data["anchors"]]
        except (KeyError, TypeError) as exc:
            raise ValueError(f"malformed selection instance: {exc}") from exc
        if len(x) != len(classes):
            raise ValueError("need one anchor per colour class")
        return cls(classes, x, y)


@dataclass(frozen=True, eq=False)
class SelectionResult:
    chosen: list
    w_sum: PairedVector
    margins: np.ndarray
    objective_value: float
    ascent_steps: int

    def to_dict(self) -> dict:
        return {
            "chosen": [int(i) for i in self.chosen],
            "w_sum": {"u": self.w_sum.u.tolist(), "v": self.w_sum.v.tolist()},
            "margins": [float(m) for m in self.margins],
            "objective_value": float(self.objective_value),
            "ascent_steps": int(self.ascent_steps),
        }


def objective(instance: SelectionInstance, choice) -> float:
    """Pairwise objective ``F`` in O(n d) via ``sum_{i!=j} = <sum u, sum v> - sum <u_i, v_i>``."""
    U, V = instance.chosen_arrays(choice)
    su, sv = U.sum(axis=0), V.sum(axis=0)
    diag = np.einsum("ij,ij->", U, V)
    return float(su @ sv - diag - np.einsum("ij,ij->", instance.x, V) - np.einsum("ij,ij->", U, instance.y))


def _check_choice(instance: SelectionInstance, choice) -> np.ndarray:
    c = np.array(choice, dtype=np.intp).reshape(-1)
    if c.shape[0] != instance.n:
        raise ValueError(f"choice has {c.shape[0]} entries for {instance.n} classes")
    for k, (i, cls) in enumerate(zip(c, instance.classes)):
        if not 0 <= i < cls.size:
            raise ValueError(f"index {i} out of range for class {k}")
    return c


def coordinate_ascent(instance: SelectionInstance, start=None, *, return_trace: bool = False):
    """Swap one class at a time until no swap strictly increases the objective.

    Classes are scanned in index order; within a class the largest gain is
    taken, ties going to the lowest element index.  With ``return_trace``
    the objective values visited (start included) are returned as well.
    """
    start = np.zeros(instance.n, dtype=np.intp) if start is None else _check_choice(instance, start)
    eu, ev, offsets = instance._packed
    choice, moves = ascend(eu, ev, offsets, instance.x, instance.y, start)
    result = [int(i) for i in choice]
    if not return_trace:
        return result
    cur = [int(i) for i in start]
    trace = [objective(instance, cur)]
    for k, e in moves:
        cur[k] = int(e)
        trace.append(objective(instance, cur))
    return result, trace


def _margins(instance: SelectionInstance, U: np.ndarray, V: np.ndarray) -> np.ndarray:
    su, sv = U.sum(axis=0), V.sum(axis=0)
    lhs = np.einsum("kd,kd->k", su[None, :] - instance.x, V) + np.einsum("kd,kd->k", sv[None, :] - instance.y, U)
    return lhs - 2.0 * np.einsum("kd,kd->k", U, V)


def select_colourful(instance: SelectionInstance, tol: float = GUARANTEE_TOL) -> SelectionResult:
    """Pick one element per class satisfying the colourful guarantee.

    Raises
    ------
    PreconditionError
        A class lacks a valid ``(0, 0)`` hull certificate.
    GuaranteeError
        A margin came out below ``-tol`` (a numerical or logic failure).
    """
    for k, cls in enumerate(instance.classes):
        res = cls.certificate_residual()
        if not res <= DEFAULT_TOL:
            raise PreconditionError(
                f"class {k}: (0,0) is not certified to lie in its convex hull (residual {res:.3g})"
            )
    start = np.zeros(instance.n, dtype=np.intp)
    eu, ev, offsets = instance._packed
    choice, moves = ascend(eu, ev, offsets, instance.x, instance.y, start)
    U, V = instance.chosen_arrays(choice)
    margins = _margins(instance, U, V)
    if margins.min() < -tol:
        k = int(np.argmin(margins))
        raise GuaranteeError(f"guarantee fails for class {k}: margin {margins[k]:.3g}")
    return SelectionResult(
        chosen=[int(i) for i in choice],
        w_sum=PairedVector(U.sum(axis=0), V.sum(axis=0)),
        margins=margins,
        objective_value=objective(instance, choice),
        ascent_steps=len(moves),
    )


def verify_guarantee(instance: SelectionInstance, result: SelectionResult, tol: float = GUARANTEE_TOL) -> list[float]:
    """Recompute the margins from scratch, element by element.

    Deliberately avoids the vectorized helpers used by the engine.
    """
    chosen = [instance.classes[k].element(i) for k, i in enumerate(result.chosen)]
    d = instance.dim
    wu = [0.0] * d
    wv = [0.0] * d
    for w in chosen:
        for t in range(d):
            wu[t] += w.u[t]
            wv[t] += w.v[t]
    out = []
    for k, w in enumerate(chosen):
        lhs = 0.0
        rhs = 0.0
        for t in range(d):
            # <w - z_k, hat(w_k)> with hat(w_k) = (v_k, u_k)
            lhs += (wu[t] - instance.x[k, t]) * w.v[t] + (wv[t] - instance.y[k, t]) * w.u[t]
            rhs += 2.0 * w.u[t] * w.v[t]
        out.append(lhs - rhs)
    return out


@dataclass(frozen=True, eq=False)
class KadetsResult:
    point: np.ndarray
    chosen_index: list
    chosen: np.ndarray
    margins: np.ndarray
    selection: SelectionResult


@dataclass(frozen=True, eq=False)
class BangResult:
    signs: np.ndarray
    point: np.ndarray
    margins: np.ndarray
    selection: SelectionResult


def _unit_rows(U: np.ndarray, what: str, tol: float) -> None:
    norms = np.linalg.norm(U, axis=1)
    bad = np.flatnonzero(np.abs(norms - 1.0) > tol)
    if bad.size:
        raise PreconditionError(f"{what}: vector {int(bad[0])} has norm {norms[bad[0]]:.12g}, expected 1")


def select_kadets(dirs, radii, centers, tol: float = DEFAULT_TOL) -> KadetsResult:
    """Choose ``u_i in U_i`` with ``<sum r_i u_i - o_k, u_k> >= r_k`` for all k.

    ``dirs[i]`` is a finite set of unit vectors with 0 in its hull.
    """
    sets = [np.atleast_2d(np.array(s, dtype=float)) for s in dirs]
    r = np.array(radii, dtype=float).reshape(-1)
    n = len(sets)
    if r.shape[0] != n:
        raise ValueError("one radius per direction set")
    if np.any(~(r > 0)):
        raise PreconditionError("radii must be positive")
    O = np.array(centers, dtype=float).reshape(n, -1)
    classes = []
    for i, S in enumerate(sets):
        _unit_rows(S, f"direction set {i}", tol)
        cert = origin_in_hull(S, tol)
        if not cert.contains:
            raise PreconditionError(f"direction set {i} does not contain 0 in its convex hull")
        # the hull weights of U_i carry over unchanged to {(r u, r u)}
        classes.append(ColourClass(r[i] * S, r[i] * S, cert.weights))
    inst = SelectionInstance(classes, O, O)
    sel = select_colourful(inst, tol)
    chosen = np.array([S[i] for S, i in zip(sets, sel.chosen)])
    point = r @ chosen
    margins = np.einsum("kd,kd->k", point[None, :] - O, chosen) - r
    return KadetsResult(point, sel.chosen, chosen, margins, sel)


def select_bang(units, widths, offsets, tol: float = DEFAULT_TOL) -> BangResult:
    """Signs ``e_i`` with ``|<sum e_i w_i u_i, u_k> - m_k| >= w_k`` for all k."""
    U = np.atleast_2d(np.array(units, dtype=float))
    w = np.array(widths, dtype=float).reshape(-1)
    m = np.array(offsets, dtype=float).reshape(-1)
    n = U.shape[0]
    if w.shape[0] != n or m.shape[0] != n:
        raise ValueError("units, widths and offsets must have equal length")
    _unit_rows(U, "units", tol)
    if np.any(~(w > 0)):
        raise PreconditionError("widths must be positive")
    half = np.array([0.5, 0.5])
    classes = []
    for i in range(n):
        e = w[i] * U[i]
        pair = np.vstack([e, -e])
        classes.append(ColourClass(pair, pair, half))
    anchors = m[:, None] * U
    sel = select_colourful(SelectionInstance(classes, anchors, anchors), tol)
    signs = np.where(np.array(sel.chosen) == 0, 1.0, -1.0)
    point = (signs * w) @ U
    margins = np.abs(U @ point - m) - w
    return BangResult(signs, point, margins, sel)
