"""Pure-Python coordinate ascent kernel (fallback for the compiled one).

Arithmetic is laid out in exactly the order of ``_ascent.pyx`` so that both
backends return the same choice on the same input.
"""
import numpy as np

BACKEND = "python"


def ascend(eu, ev, offsets, x, y, start, max_steps=1_000_000):
    """Single-class swap ascent on the pairwise objective.

    ``eu``/``ev`` stack the u- and v-halves of every element, class ``i``
    owning rows ``offsets[i]:offsets[i+1]``.  Returns ``(choice, moves)``
    where ``moves`` lists the ``(class, new_index)`` swaps in order.
    """
    n = offsets.shape[0] - 1
    d = eu.shape[1]
    choice = np.array(start, dtype=np.intp)
    moves = []
    steps = 0
    changed = True
    while changed:
        changed = False
        for k in range(n):
            su = np.zeros(d)
            sv = np.zeros(d)
            for i in range(n):
                su += eu[offsets[i] + choice[i]]
                sv += ev[offsets[i] + choice[i]]
            lo, hi = offsets[k], offsets[k + 1]
            cur = lo + choice[k]
            pu = (sv - ev[cur]) - y[k]
            pv = (su - eu[cur]) - x[k]
            g = np.zeros(hi - lo)
            for t in range(d):
                g = g + eu[lo:hi, t] * pu[t]
                g = g + ev[lo:hi, t] * pv[t]
            gain = g - g[choice[k]]
            best = 0.0
            best_idx = -1
            for e in range(hi - lo):
                if gain[e] > best:
                    best = gain[e]
                    best_idx = e
            if best_idx >= 0:
                choice[k] = best_idx
                moves.append((k, best_idx))
                steps += 1
                changed = True
                if steps > max_steps:
                    raise RuntimeError(f"coordinate ascent exceeded {max_steps} swaps")
    return choice, moves
