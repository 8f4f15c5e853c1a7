# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled coordinate ascent kernel; mirrors ``_ascent_py.ascend``."""
import numpy as np

BACKEND = "cython"


def ascend(const double[:, ::1] eu, const double[:, ::1] ev, const Py_ssize_t[::1] offsets,
           const double[:, ::1] x, const double[:, ::1] y, start, long max_steps=1_000_000):
    cdef Py_ssize_t n = offsets.shape[0] - 1
    cdef Py_ssize_t d = eu.shape[1]
    cdef Py_ssize_t i, k, t, e, lo, hi, cur, best_idx, row
    cdef double best, acc, gcur, gain
    cdef long steps = 0
    cdef bint changed = True
    out = np.array(start, dtype=np.intp)
    cdef Py_ssize_t[::1] choice = out
    cdef double[::1] su = np.zeros(d)
    cdef double[::1] sv = np.zeros(d)
    cdef double[::1] pu = np.zeros(d)
    cdef double[::1] pv = np.zeros(d)
    moves = []
    while changed:
        changed = False
        for k in range(n):
            for t in range(d):
                su[t] = 0.0
                sv[t] = 0.0
            for i in range(n):
                row = offsets[i] + choice[i]
                for t in range(d):
                    su[t] += eu[row, t]
                    sv[t] += ev[row, t]
            lo = offsets[k]
            hi = offsets[k + 1]
            cur = lo + choice[k]
            for t in range(d):
                pu[t] = (sv[t] - ev[cur, t]) - y[k, t]
                pv[t] = (su[t] - eu[cur, t]) - x[k, t]
            gcur = 0.0
            for t in range(d):
                gcur = gcur + eu[cur, t] * pu[t]
                gcur = gcur + ev[cur, t] * pv[t]
            best = 0.0
            best_idx = -1
            for e in range(hi - lo):
                acc = 0.0
                for t in range(d):
                    acc = acc + eu[lo + e, t] * pu[t]
                    acc = acc + ev[lo + e, t] * pv[t]
                gain = acc - gcur
                if gain > best:
                    best = gain
                    best_idx = e
            if best_idx >= 0:
                choice[k] = best_idx
                moves.append((k, best_idx))
                steps += 1
                changed = True
                if steps > max_steps:
                    raise RuntimeError(f"coordinate ascent exceeded {max_steps} swaps")
    return out, moves
