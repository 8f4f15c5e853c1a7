"""Small dense linear-programming solver.

Primal simplex on a dense tableau with Bland's rule, two phases.  The
solver targets the tiny, frequently degenerate programs produced by the
geometry code (hull membership, inscribed homothets), so it favours
determinism over speed.

Sign convention for the returned multipliers: at an optimum,

    c = sum_j dual[j] * a_j + reduced

with ``dual[j] >= 0`` for ``<=`` rows, ``dual[j] <= 0`` for ``>=`` rows and
free for ``=`` rows; ``reduced[i]`` is the multiplier of the bounds on
variable ``i``.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, field

import numpy as np

__all__ = [
    "LinearProgram",
    "LPOutcome",
    "LPError",
    "CapacityError",
    "DegeneracyError",
    "solve",
    "kkt_residuals",
    "MAX_VARIABLES",
    "MAX_CONSTRAINTS",
]

log = logging.getLogger(__name__)

MAX_VARIABLES = 64
MAX_CONSTRAINTS = 512

_RELATIONS = ("<=", ">=", "=")

# reduced-cost / pivot thresholds on the working tableau
_COST_TOL = 1e-11
_PIVOT_TOL = 1e-11
_FEAS_TOL = 1e-9


class LPError(Exception):
    """Base class for solver failures."""


class CapacityError(LPError):
    """Program exceeds the design envelope."""


class DegeneracyError(LPError):
    """Numerically singular basis or runaway pivoting."""


@dataclass(frozen=True)
class LinearProgram:
    """maximize ``c @ x`` subject to ``A[j] @ x  rel[j]  b[j]`` and bounds.

    ``lower``/``upper`` default to ``0`` and ``+inf``; use ``-np.inf`` or
    ``np.inf`` for unbounded sides.
    """

    c: np.ndarray
    A: np.ndarray
    rel: tuple
    b: np.ndarray
    lower: np.ndarray | None = None
    upper: np.ndarray | None = None

    def __post_init__(self):
        c = np.atleast_1d(np.asarray(self.c, dtype=float))
        n = c.shape[0]
        A = np.asarray(self.A, dtype=float).reshape(-1, n)
        b = np.atleast_1d(np.asarray(self.b, dtype=float))
        rel = tuple(self.rel) if not isinstance(self.rel, str) else (self.rel,) * A.shape[0]
        if A.shape[0] != b.shape[0] or len(rel) != b.shape[0]:
            raise ValueError("rows of A, rel and b disagree")
        for r in rel:
            if r not in _RELATIONS:
                raise ValueError(f"unknown relation {r!r}")
        lower = np.zeros(n) if self.lower is None else np.asarray(self.lower, dtype=float).copy()
        upper = np.full(n, np.inf) if self.upper is None else np.asarray(self.upper, dtype=float).copy()
        if lower.shape != (n,) or upper.shape != (n,):
            raise ValueError("bound vectors must match the variable count")
        if np.any(lower == np.inf) or np.any(upper == -np.inf):
            raise ValueError("bounds must leave room for a value")
        for arr in (c, A, b):
            if not np.all(np.isfinite(arr)):
                raise ValueError("objective and constraint data must be finite")
        object.__setattr__(self, "c", c)
        object.__setattr__(self, "A", A)
        object.__setattr__(self, "b", b)
        object.__setattr__(self, "rel", rel)
        object.__setattr__(self, "lower", lower)
        object.__setattr__(self, "upper", upper)

    @property
    def n_vars(self) -> int:
        return self.c.shape[0]

    @property
    def n_rows(self) -> int:
        return self.b.shape[0]


@dataclass
class LPOutcome:
    status: str
    x: np.ndarray | None = None
    value: float = np.nan
    dual: np.ndarray | None = None
    reduced: np.ndarray | None = None
    dual_value: float = np.nan
    basis: list = field(default_factory=list)
    iterations: int = 0

    @property
    def optimal(self) -> bool:
        return self.status == "optimal"


def _standardize(lp: LinearProgram):
    """Rewrite as max c'y, Ay <= b, y >= 0 with x = shift + T y."""
    n = lp.n_vars
    cols = []  # (var index, sign)
    shift = np.zeros(n)
    extra_rows = []  # (column, bound) for y_col <= bound
    for i in range(n):
        lo, hi = lp.lower[i], lp.upper[i]
        if np.isfinite(lo):
            shift[i] = lo
            cols.append((i, 1.0))
            if np.isfinite(hi):
                extra_rows.append((len(cols) - 1, hi - lo))
        elif np.isfinite(hi):
            shift[i] = hi
            cols.append((i, -1.0))
        else:
            cols.append((i, 1.0))
            cols.append((i, -1.0))
    T = np.zeros((n, len(cols)))
    for k, (i, s) in enumerate(cols):
        T[i, k] = s

    rows, rhs, origin = [], [], []
    AT = lp.A @ T
    bs = lp.b - lp.A @ shift
    for j, r in enumerate(lp.rel):
        if r in ("<=", "="):
            rows.append(AT[j])
            rhs.append(bs[j])
            origin.append((j, 1.0))
        if r in (">=", "="):
            rows.append(-AT[j])
            rhs.append(-bs[j])
            origin.append((j, -1.0))
    for k, bound in extra_rows:
        row = np.zeros(len(cols))
        row[k] = 1.0
        rows.append(row)
        rhs.append(bound)
        origin.append((None, k))
    A = np.array(rows, dtype=float).reshape(len(rows), len(cols))
    return T, shift, A, np.array(rhs, dtype=float), origin


def _run_simplex(tab: np.ndarray, basis: list, allowed: int, max_iter: int, verbose: bool):
    """Bland-rule simplex on ``tab`` (last row = reduced costs, maximize).

    Only columns ``< allowed`` may enter.  Returns (status, iterations).
    """
    m = tab.shape[0] - 1
    it = 0
    while True:
        costs = tab[-1, :allowed]
        entering = np.flatnonzero(costs > _COST_TOL)
        if entering.size == 0:
            return "optimal", it
        col = int(entering[0])
        column = tab[:m, col]
        pos = np.flatnonzero(column > _PIVOT_TOL)
        if pos.size == 0:
            return "unbounded", it
        ratios = tab[pos, -1] / column[pos]
        best = ratios.min()
        ties = pos[ratios <= best + 1e-12 * max(1.0, abs(best))]
        row = int(min(ties, key=lambda r: basis[r]))
        _pivot(tab, row, col)
        basis[row] = col
        it += 1
        if verbose:
            log.debug("pivot %d: enter %d leave row %d\n%s", it, col, row, tab)
        if it > max_iter:
            raise DegeneracyError(f"simplex exceeded {max_iter} pivots (basis {basis})")


def _pivot(tab: np.ndarray, row: int, col: int) -> None:
    tab[row] /= tab[row, col]
    factor = tab[:, col].copy()
    factor[row] = 0.0
    tab -= np.outer(factor, tab[row])


def solve(lp: LinearProgram, verbose: bool = False) -> LPOutcome:
    """Solve ``lp``; deterministic for identical input.

    Raises
    ------
    CapacityError
        More than 64 variables or 512 constraints.
    DegeneracyError
        Final basis is numerically singular.
    """
    if lp.n_vars > MAX_VARIABLES or lp.n_rows > MAX_CONSTRAINTS:
        raise CapacityError(
            f"program has {lp.n_vars} variables and {lp.n_rows} constraints; "
            f"envelope is {MAX_VARIABLES} x {MAX_CONSTRAINTS}"
        )
    T, shift, A, b, origin = _standardize(lp)
    m, n = A.shape
    c = T.T @ lp.c

    # columns: structural [0, n), slack [n, n+m), artificial [n+m, ...)
    neg = b < 0
    n_art = int(neg.sum())
    width = n + m + n_art
    tab = np.zeros((m + 1, width + 1))
    sign = np.where(neg, -1.0, 1.0)
    tab[:m, :n] = A * sign[:, None]
    tab[:m, n:n + m] = np.diag(sign)
    tab[:m, -1] = b * sign
    basis = []
    art = n + m
    for r in range(m):
        if neg[r]:
            tab[r, art] = 1.0
            basis.append(art)
            art += 1
        else:
            basis.append(n + r)
    max_iter = 50 * (width + m + 10)
    iters = 0

    if n_art:
        # phase 1: maximize -sum(artificials)
        art_rows = np.flatnonzero(neg)
        tab[-1, :] = tab[art_rows].sum(axis=0)
        tab[-1, n + m:width] = 0.0
        status, k = _run_simplex(tab, basis, n + m, max_iter, verbose)
        iters += k
        infeas = tab[-1, -1]
        if infeas > _FEAS_TOL * max(1.0, np.abs(b).max(initial=0.0)):
            return LPOutcome(status="infeasible", iterations=iters)
        # drive remaining artificials out of the basis
        for r in range(m):
            if basis[r] >= n + m:
                cand = np.flatnonzero(np.abs(tab[r, :n + m]) > _PIVOT_TOL)
                if cand.size == 0:
                    raise DegeneracyError(f"row {r} became empty after phase 1")
                col = int(cand[0])
                _pivot(tab, r, col)
                basis[r] = col
        tab = np.delete(tab, np.s_[n + m:width], axis=1)
        width = n + m

    # phase 2 objective row
    full_c = np.concatenate([c, np.zeros(m)])
    tab[-1, :width] = full_c - full_c[basis] @ tab[:m, :width]
    tab[-1, -1] = -(full_c[basis] @ tab[:m, -1])
    status, k = _run_simplex(tab, basis, width, max_iter, verbose)
    iters += k
    if status == "unbounded":
        return LPOutcome(status="unbounded", basis=list(basis), iterations=iters)

    # refine primal and dual from the final basis on the untouched data
    M = np.hstack([A, np.eye(m)])
    B = M[:, basis]
    try:
        xb = np.linalg.solve(B, b)
        y_std = np.linalg.solve(B.T, full_c[basis])
    except np.linalg.LinAlgError as exc:
        raise DegeneracyError(f"singular final basis {basis}") from exc
    if not (np.all(np.isfinite(xb)) and np.all(np.isfinite(y_std))):
        raise DegeneracyError(f"non-finite solution from basis {basis}")
    ystd = np.zeros(n + m)
    ystd[basis] = xb
    ystd = np.maximum(ystd, 0.0)
    x = shift + T @ ystd[:n]
    x = np.clip(x, lp.lower, lp.upper)

    dual = np.zeros(lp.n_rows)
    for k, (j, s) in enumerate(origin):
        if j is not None:
            dual[j] += s * y_std[k]
    reduced = lp.c - lp.A.T @ dual
    value = float(lp.c @ x)
    dual_value = float(lp.b @ dual)
    for i in range(lp.n_vars):
        r = reduced[i]
        bound = lp.upper[i] if r > 0 else lp.lower[i]
        if np.isfinite(bound):
            dual_value += r * bound
        elif abs(r) > 0:
            # multiplier on an infinite bound: only rounding noise can land here
            dual_value += r * x[i]
    return LPOutcome(
        status="optimal",
        x=x,
        value=value,
        dual=dual,
        reduced=reduced,
        dual_value=dual_value,
        basis=list(basis),
        iterations=iters,
    )


def kkt_residuals(lp: LinearProgram, out: LPOutcome) -> dict:
    """Primal feasibility, dual feasibility and complementary slackness residuals."""
    x, y, r = out.x, out.dual, out.reduced
    Ax = lp.A @ x
    primal = 0.0
    dualfeas = 0.0
    comp = 0.0
    for j, rel in enumerate(lp.rel):
        slack = lp.b[j] - Ax[j]
        if rel == "<=":
            primal = max(primal, -slack)
            dualfeas = max(dualfeas, -y[j])
        elif rel == ">=":
            primal = max(primal, slack)
            dualfeas = max(dualfeas, y[j])
        else:
            primal = max(primal, abs(slack))
        comp = max(comp, abs(y[j] * slack))
    primal = max(primal, np.max(lp.lower - x, initial=0.0), np.max(x - lp.upper, initial=0.0))
    for i in range(lp.n_vars):
        lo, hi = lp.lower[i], lp.upper[i]
        if r[i] > 0:
            dualfeas = max(dualfeas, r[i] if not np.isfinite(hi) else 0.0)
            if np.isfinite(hi):
                comp = max(comp, abs(r[i] * (hi - x[i])))
        elif r[i] < 0:
            dualfeas = max(dualfeas, -r[i] if not np.isfinite(lo) else 0.0)
            if np.isfinite(lo):
                comp = max(comp, abs(r[i] * (x[i] - lo)))
    return {
        "primal": float(primal),
        "dual": float(dualfeas),
        "complementarity": float(comp),
        "gap": float(abs(out.value - out.dual_value)),
    }
