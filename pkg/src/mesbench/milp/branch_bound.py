"""Best-first branch and bound over the simplex relaxation.

Nodes carry only the bounds of the integer variables; every node is solved
from scratch (optionally seeded with the caller's crash basis).  Branching
picks the variable whose value is furthest from an integer, breaking ties
toward the lowest index.  No cutting planes, no presolve beyond integer
bound tightening at the root.
"""

from __future__ import annotations

import heapq
import math

import numpy as np

from .problem import (
    DEFAULT_TOLERANCES,
    INF,
    CrashHint,
    LpProblem,
    MilpProblem,
    MilpSolution,
    Status,
    Tolerances,
)
from .simplex import solve_lp


def solve_milp(
    problem: MilpProblem | LpProblem,
    max_nodes: int = 10_000,
    gap_tol: float | None = None,
    tol: Tolerances = DEFAULT_TOLERANCES,
    crash: CrashHint | None = None,
    heuristic: bool = True,
) -> MilpSolution:
    """Minimize a mixed-integer LP to the requested relative gap.

    Status is GapLimit when the node budget ran out first; the incumbent
    (possibly None) and the proven gap are reported either way.
    """
    if isinstance(problem, LpProblem):
        problem = MilpProblem(problem)
    if gap_tol is None:
        gap_tol = tol.gap_tol
    p = problem.base
    ivars = np.array(sorted(problem.int_vars), dtype=np.int64)

    lo0 = np.ceil(p.lo[ivars] - tol.int_tol) if ivars.size else np.zeros(0)
    hi0 = np.floor(p.hi[ivars] + tol.int_tol) if ivars.size else np.zeros(0)
    if np.any(lo0 > hi0):
        return MilpSolution(Status.INFEASIBLE, None, INF, INF, 0, 0)

    heap: list[tuple[float, int, np.ndarray, np.ndarray]] = []
    seq = 0
    heapq.heappush(heap, (-INF, seq, lo0, hi0))
    incumbent: np.ndarray | None = None
    inc_obj = INF
    node_count = 0
    iterations = 0
    since_heur = 0
    dropped_gap = 0.0  # worst bound gap of subtrees pruned by gap_tol

    def rel_gap(bound: float) -> float:
        if incumbent is None:
            return INF
        return (inc_obj - bound) / max(1.0, abs(inc_obj))

    def try_fix(cand: np.ndarray) -> None:
        """Solve with the integers pinned to cand; keep a better incumbent."""
        nonlocal incumbent, inc_obj, node_count, iterations
        rsol = solve_lp(_with_bounds(p, ivars, cand, cand), tol, crash)
        node_count += 1
        iterations += rsol.iterations
        if rsol.status is Status.OPTIMAL and rsol.objective < inc_obj:
            xh = rsol.x.copy()
            xh[ivars] = cand + 0.0
            incumbent, inc_obj = xh, rsol.objective

    while heap:
        bound, _, nlo, nhi = heapq.heappop(heap)
        if rel_gap(bound) <= gap_tol:
            return MilpSolution(
                Status.OPTIMAL, incumbent, inc_obj,
                max(rel_gap(bound), dropped_gap, 0.0),
                node_count, iterations,
            )
        if node_count >= max_nodes:
            return MilpSolution(
                Status.GAP_LIMIT, incumbent, inc_obj,
                max(rel_gap(bound), dropped_gap),
                node_count, iterations,
            )

        sol = solve_lp(_with_bounds(p, ivars, nlo, nhi), tol, crash)
        node_count += 1
        iterations += sol.iterations
        if sol.status is Status.INFEASIBLE:
            continue
        if sol.status is Status.UNBOUNDED:
            # An unbounded relaxation leaves the question open: the integer
            # restriction may still empty the feasible set.  A zero-objective
            # probe settles which it is.
            if ivars.size == 0 or not np.any(p.c != 0.0):
                return MilpSolution(
                    Status.UNBOUNDED, None, -INF, INF, node_count, iterations
                )
            bp = _with_bounds(p, ivars, nlo, nhi)
            probe = MilpProblem(
                LpProblem(
                    c=np.zeros(p.n_vars), row_idx=p.row_idx, col_idx=p.col_idx,
                    vals=p.vals, row_sense=p.row_sense, rhs=p.rhs,
                    lo=bp.lo, hi=bp.hi,
                ),
                problem.int_vars,
            )
            fsol = solve_milp(
                probe, max(max_nodes - node_count, 1), gap_tol, tol, crash,
                heuristic=False,
            )
            node_count += fsol.node_count
            iterations += fsol.iterations
            if fsol.status is Status.OPTIMAL:
                return MilpSolution(
                    Status.UNBOUNDED, None, -INF, INF, node_count, iterations
                )
            if fsol.status is Status.INFEASIBLE:
                continue
            return MilpSolution(
                Status.GAP_LIMIT, incumbent, inc_obj,
                max(rel_gap(bound), dropped_gap),
                node_count, iterations,
            )
        x = sol.x
        assert x is not None
        obj = sol.objective

        if ivars.size:
            dist = np.abs(x[ivars] - np.round(x[ivars]))
            k = int(np.argmax(dist)) if dist.size else 0
        if ivars.size == 0 or float(dist.max()) <= tol.int_tol:
            x = x.copy()
            if ivars.size:
                x[ivars] = np.round(x[ivars]) + 0.0  # +0.0 clears any -0.0
            if obj < inc_obj:
                incumbent, inc_obj = x, obj
            continue

        since_heur += 1
        if heuristic and incumbent is None and (node_count == 1 or since_heur >= 24):
            # Two rounding passes: to the nearest integer, then -- because
            # nearest tends to switch marginally-loaded units off and lose
            # feasibility -- committing every fractional unit upward.
            since_heur = 0
            cand = np.clip(np.round(x[ivars]), nlo, nhi)
            try_fix(cand)
            if incumbent is None:
                up = np.clip(np.ceil(x[ivars] - tol.int_tol), nlo, nhi)
                if not np.array_equal(up, cand):
                    try_fix(up)

        if rel_gap(obj) <= gap_tol:
            dropped_gap = max(dropped_gap, rel_gap(obj))
            continue  # children cannot beat the incumbent meaningfully
        fl = math.floor(x[ivars[k]])
        down_hi = nhi.copy()
        down_hi[k] = min(down_hi[k], fl)
        up_lo = nlo.copy()
        up_lo[k] = max(up_lo[k], fl + 1)
        if nlo[k] <= down_hi[k]:
            seq += 1
            heapq.heappush(heap, (obj, seq, nlo, down_hi))
        if up_lo[k] <= nhi[k]:
            seq += 1
            heapq.heappush(heap, (obj, seq, up_lo, nhi))

    if incumbent is not None:
        return MilpSolution(
            Status.OPTIMAL, incumbent, inc_obj, dropped_gap, node_count, iterations
        )
    return MilpSolution(Status.INFEASIBLE, None, INF, INF, node_count, iterations)


def _with_bounds(p: LpProblem, ivars, ilo, ihi) -> LpProblem:
    if ivars.size == 0:
        return p
    lo = p.lo.copy()
    hi = p.hi.copy()
    lo[ivars] = ilo
    hi[ivars] = ihi
    return LpProblem(
        c=p.c, row_idx=p.row_idx, col_idx=p.col_idx, vals=p.vals,
        row_sense=p.row_sense, rhs=p.rhs, lo=lo, hi=hi,
    )
