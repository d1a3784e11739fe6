"""Numpy implementation of the simplex pivot kernel.

This is the fallback used when the compiled extension is unavailable (or
disabled via MESBENCH_PURE_PY=1).  The arithmetic is ordered exactly like
the compiled loop — multiply then subtract, pivot column zeroed explicitly
— so both backends produce bit-identical tableaus.
"""

from __future__ import annotations

import numpy as np

BACKEND = "numpy"


def eliminate(T: np.ndarray, z: np.ndarray, r: int, q: int) -> None:
    """Pivot the tableau on (row r, column q) and update reduced costs z.

    Row r is scaled so T[r, q] == 1, column q is eliminated from every
    other row and from z.  Entries of column q are written as exact 0/1
    rather than left to roundoff.
    """
    piv = T[r, q]
    inv = 1.0 / piv
    row = T[r]
    row *= inv
    row[q] = 1.0

    col = T[:, q].copy()
    col[r] = 0.0
    T -= col[:, None] * row
    T[:, q] = 0.0
    T[r, q] = 1.0

    zq = z[q]
    if zq != 0.0:
        z -= zq * row
    z[q] = 0.0
