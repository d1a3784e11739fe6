"""Independent solution checking.

Nothing here reuses solver state: residuals are recomputed straight from
the problem's sparse rows, and the dual bound is evaluated from first
principles, so a buggy simplex cannot vouch for itself.
"""

from __future__ import annotations

import numpy as np

from .problem import EQ, GE, INF, LE, LpProblem, MilpProblem


def check_solution(
    problem: LpProblem | MilpProblem,
    x: np.ndarray,
    feas: float = 1e-6,
    int_tol: float = 1e-6,
) -> list[str]:
    """Return human-readable violations (empty list means the point passes).

    Row residuals are judged against feas * max(1, |rhs|); bounds and
    integrality against the plain tolerances.
    """
    int_vars: frozenset[int] = frozenset()
    if isinstance(problem, MilpProblem):
        int_vars = problem.int_vars
        problem = problem.base
    p = problem
    x = np.asarray(x, dtype=np.float64)
    bad: list[str] = []
    if x.shape != (p.n_vars,):
        return [f"x has shape {x.shape}, expected ({p.n_vars},)"]
    if not np.all(np.isfinite(x)):
        return ["x contains non-finite entries"]

    for j in np.nonzero(x < p.lo - feas)[0]:
        bad.append(f"x{j} = {x[j]!r} below lower bound {p.lo[j]!r}")
    for j in np.nonzero(x > p.hi + feas)[0]:
        bad.append(f"x{j} = {x[j]!r} above upper bound {p.hi[j]!r}")

    ax = np.zeros(p.n_rows)
    np.add.at(ax, p.row_idx, p.vals * x[p.col_idx])
    scale = feas * np.maximum(1.0, np.abs(p.rhs))
    for i in range(p.n_rows):
        resid = ax[i] - p.rhs[i]
        sense = int(p.row_sense[i])
        if sense == LE and resid > scale[i]:
            bad.append(f"row {i}: {ax[i]!r} exceeds <= {p.rhs[i]!r}")
        elif sense == GE and resid < -scale[i]:
            bad.append(f"row {i}: {ax[i]!r} falls short of >= {p.rhs[i]!r}")
        elif sense == EQ and abs(resid) > scale[i]:
            bad.append(f"row {i}: {ax[i]!r} differs from = {p.rhs[i]!r}")

    for j in sorted(int_vars):
        if abs(x[j] - round(x[j])) > int_tol:
            bad.append(f"x{j} = {x[j]!r} is not integral")
    return bad


def dual_bound(problem: LpProblem, y: np.ndarray, zero_tol: float = 1e-7) -> float:
    """A valid lower bound on the minimum from any row-dual vector.

    y is first projected onto the dual sign cone (y <= 0 on <= rows,
    y >= 0 on >= rows, free on = rows); the bound is then
    y.b + sum_j min(r_j lo_j, r_j hi_j) with r = c - A'y.  Weak duality
    makes this a certificate no matter where y came from; it is tight at
    an optimal basis.  Reduced costs within zero_tol of zero are treated
    as zero, so sign noise on a variable with an infinite bound does not
    collapse the bound to -inf.
    """
    p = problem
    y = np.asarray(y, dtype=np.float64).copy()
    y[p.row_sense == LE] = np.minimum(y[p.row_sense == LE], 0.0)
    y[p.row_sense == GE] = np.maximum(y[p.row_sense == GE], 0.0)

    aty = np.zeros(p.n_vars)
    np.add.at(aty, p.col_idx, p.vals * y[p.row_idx])
    r = p.c - aty
    r[np.abs(r) <= zero_tol] = 0.0

    total = float(y @ p.rhs)
    for j in range(p.n_vars):
        if r[j] > 0.0:
            b = p.lo[j]
        elif r[j] < 0.0:
            b = p.hi[j]
        else:
            continue
        if not np.isfinite(b):
            return -INF
        total += r[j] * b
    return total
