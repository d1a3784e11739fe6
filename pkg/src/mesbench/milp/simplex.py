"""Bounded-variable primal simplex on a dense tableau.

Standard form: every row gets one slack column (bounds [0, inf) for <=,
(-inf, 0] for >=, [0, 0] for =), so the tableau is m x (n + m) and the
inverse basis is always readable off the slack block.

Phase 1 is a composite (piecewise-linear) infeasibility minimization run
directly from the starting basis: a basic variable that starts out of
bounds gets a temporary unit cost pushing it back and a relaxed far bound,
and sheds both the moment it leaves the basis at the violated bound.  No
artificial columns are ever added, which keeps the tableau narrow and lets
an arbitrary crash basis be used as-is.

Pricing is Dantzig's rule, switching to Bland's rule for the remainder of
the solve after `degen_limit` consecutive degenerate pivots.  Ratio-test
ties prefer the largest pivot magnitude, then the lowest row index.
"""

from __future__ import annotations

import math
from collections import deque

import numpy as np

from .kernels import eliminate
from .problem import (
    DEFAULT_TOLERANCES,
    EQ,
    GE,
    INF,
    LE,
    CrashHint,
    LpProblem,
    MilpSolution,
    NumericalError,
    Status,
    Tolerances,
)

# variable states
NB_LO, NB_UP, BASIC, NB_FREE = 0, 1, 2, 3

_DEGEN_EPS = 1e-12  # step sizes at or below this count as degenerate


def solve_lp(
    problem: LpProblem,
    tol: Tolerances = DEFAULT_TOLERANCES,
    crash: CrashHint | None = None,
) -> MilpSolution:
    """Minimize the LP.  The crash hint, if given, only seeds the basis."""
    return _Simplex(problem, tol, crash).solve()


class _Simplex:
    def __init__(self, p: LpProblem, tol: Tolerances, crash: CrashHint | None):
        self.p = p
        self.tol = tol
        m, n = p.n_rows, p.n_vars
        self.m, self.n = m, n
        nt = n + m
        self.nt = nt

        a = np.zeros((m, nt))
        a[:, :n] = p.dense_rows()
        rows = np.arange(m)
        a[rows, n + rows] = 1.0

        slack_lo = np.where(p.row_sense == GE, -INF, 0.0)
        slack_hi = np.where(p.row_sense == LE, INF, 0.0)
        self.lo = np.concatenate([p.lo, slack_lo])
        self.hi = np.concatenate([p.hi, slack_hi])
        self.cost = np.concatenate([p.c, np.zeros(m)])
        self.fixed = (self.hi - self.lo) <= 0.0

        status = np.where(
            np.isfinite(self.lo), NB_LO, np.where(np.isfinite(self.hi), NB_UP, NB_FREE)
        ).astype(np.int8)
        self.status = status
        self._init_basis(a, crash)

        self.pcost = np.zeros(nt)
        self.n_viol = 0
        self.iters = 0
        self.bland = False
        self.degen = 0
        self._phase = 2
        self._last_refresh = 0
        self.z = np.zeros(nt)

    # ------------------------------------------------------------------ setup

    def _init_basis(self, a: np.ndarray, crash: CrashHint | None) -> None:
        m, n, nt = self.m, self.n, self.nt
        cols = None
        if crash is not None and m:
            cols = np.asarray(crash.basic_cols, dtype=np.int64).copy()
            if cols.shape != (m,):
                cols = None
            else:
                cols[cols < 0] = n + np.arange(m)[cols < 0]
                if (
                    cols.min() < 0
                    or cols.max() >= nt
                    or np.unique(cols).size != m
                ):
                    cols = None
        if crash is not None:
            for j in np.asarray(crash.at_upper, dtype=np.int64):
                if 0 <= j < nt and np.isfinite(self.hi[j]) and not self.fixed[j]:
                    self.status[j] = NB_UP

        if cols is not None and np.array_equal(cols, n + np.arange(m)):
            cols = None  # plain slack basis, take the fast path

        if cols is None:
            self.basis = n + np.arange(m)
            self.status[self.basis] = BASIC
            val = self._nb_values()
            val[self.basis] = 0.0
            self.T = a.copy()
            self.xB = self.p.rhs - a @ val
            return

        self.status[cols] = BASIC
        val = self._nb_values()
        val[cols] = 0.0
        r_vec = self.p.rhs - a @ val
        aug = np.concatenate([a, r_vec[:, None]], axis=1)

        out = self._triangular_solve(a, cols, aug)
        if out is None:
            try:
                out = np.linalg.solve(a[:, cols], aug)
            except np.linalg.LinAlgError:
                out = None
        if out is None or not np.all(np.isfinite(out)):
            # hint unusable; fall back to the all-slack basis
            self.status[cols] = np.where(
                np.isfinite(self.lo[cols]),
                NB_LO,
                np.where(np.isfinite(self.hi[cols]), NB_UP, NB_FREE),
            ).astype(np.int8)
            self.basis = n + np.arange(m)
            self.status[self.basis] = BASIC
            val = self._nb_values()
            val[self.basis] = 0.0
            self.T = a.copy()
            self.xB = self.p.rhs - a @ val
            return

        self.basis = cols
        self.T = np.ascontiguousarray(out[:, :nt])
        self.xB = out[:, nt].copy()

    def _triangular_solve(self, a, cols, aug):
        """Solve B @ out = aug by substitution when the hinted basis permutes
        to a triangular matrix (the usual case for structural crash bases).
        Returns None when it does not."""
        m = self.m
        col_rows = [np.nonzero(a[:, cols[k]])[0] for k in range(m)]
        row_slots: list[list[int]] = [[] for _ in range(m)]
        for k, rr in enumerate(col_rows):
            for r in rr:
                row_slots[int(r)].append(k)
        remaining = [set(s) for s in row_slots]
        done = np.zeros(m, dtype=bool)
        queue = deque(r for r in range(m) if remaining[r] == {r})
        order = []
        while queue:
            r = queue.popleft()
            if done[r]:
                continue
            done[r] = True
            order.append(r)
            for r2 in col_rows[r]:
                r2 = int(r2)
                if not done[r2]:
                    remaining[r2].discard(r)
                    if remaining[r2] == {r2}:
                        queue.append(r2)
        if len(order) < m:
            return None
        out = np.empty_like(aug)
        for r in order:
            acc = aug[r].copy()
            for k in row_slots[r]:
                if k != r:
                    acc -= a[r, cols[k]] * out[k]
            piv = a[r, cols[r]]
            if abs(piv) < self.tol.ratio_tol:
                return None
            out[r] = acc / piv
        return out

    def _nb_values(self) -> np.ndarray:
        return np.where(
            self.status == NB_LO, self.lo, np.where(self.status == NB_UP, self.hi, 0.0)
        )

    # ------------------------------------------------------------------ solve

    def solve(self) -> MilpSolution:
        if self.m:
            blo = self.lo[self.basis]
            bhi = self.hi[self.basis]
            above = self.xB > bhi + self.tol.feas
            below = self.xB < blo - self.tol.feas
            self.n_viol = int(above.sum() + below.sum())
            if self.n_viol:
                self.pcost[self.basis[above]] = 1.0
                self.pcost[self.basis[below]] = -1.0
                self._phase = 1
                self.z = self.pcost - self.pcost[self.basis] @ self.T
                outcome = self._run_phase()
                if outcome == "optimal" and not self._recheck_feasible():
                    return MilpSolution(
                        Status.INFEASIBLE, None, INF, INF, 0, self.iters
                    )

        self._phase = 2
        self.degen = 0
        self.z = self.cost - self.cost[self.basis] @ self.T if self.m else self.cost.copy()
        self._last_refresh = self.iters
        outcome = self._run_phase()
        if outcome == "unbounded":
            return MilpSolution(Status.UNBOUNDED, None, -INF, INF, 0, self.iters)

        val = self._nb_values()
        if self.m:
            val[self.basis] = np.clip(
                self.xB, self.lo[self.basis], self.hi[self.basis]
            )
        x = val[: self.n].copy()
        objective = float(self.p.c @ x)
        duals = (
            self.cost[self.basis] @ self.T[:, self.n :]
            if self.m
            else np.zeros(0)
        )
        return MilpSolution(
            Status.OPTIMAL,
            x,
            objective,
            0.0,
            0,
            self.iters,
            duals=np.asarray(duals, dtype=np.float64),
            reduced_costs=self.z[: self.n].copy(),
        )

    def _recheck_feasible(self) -> bool:
        """Phase-1 optimum reached with flags still set: flagged variables
        parked exactly on their bound are fine; anything truly outside means
        the problem is infeasible."""
        blo = self.lo[self.basis]
        bhi = self.hi[self.basis]
        bad = (self.xB > bhi + self.tol.feas) | (self.xB < blo - self.tol.feas)
        if bad.any():
            return False
        self.pcost[:] = 0.0
        self.n_viol = 0
        return True

    # ------------------------------------------------------------- pivot loop

    def _run_phase(self) -> str:
        tol = self.tol
        phase1 = self._phase == 1
        while True:
            if phase1 and self.n_viol == 0:
                return "feasible"
            if self.iters >= tol.max_iters:
                raise NumericalError(f"no optimum within {tol.max_iters} iterations")
            if self.iters - self._last_refresh >= tol.refresh_every:
                cv = self.pcost if phase1 else self.cost
                self.z = cv - cv[self.basis] @ self.T
                self._last_refresh = self.iters

            q, d = self._price()
            if q < 0:
                return "optimal"

            if phase1:
                pb = self.pcost[self.basis]
                blo_b = np.where(
                    pb > 0.0, self.hi[self.basis],
                    np.where(pb < 0.0, -INF, self.lo[self.basis]),
                )
                bhi_b = np.where(
                    pb > 0.0, INF,
                    np.where(pb < 0.0, self.lo[self.basis], self.hi[self.basis]),
                )
            else:
                blo_b = self.lo[self.basis]
                bhi_b = self.hi[self.basis]

            delta_rows, r = self._ratio(q, d, blo_b, bhi_b)
            own = self.hi[q] - self.lo[q]
            if not np.isfinite(own):
                own = INF
            self.iters += 1

            if own < delta_rows:
                # entering variable runs bound to bound: flip, no pivot
                self.xB -= (d * own) * self.T[:, q]
                self.status[q] = NB_UP if self.status[q] == NB_LO else NB_LO
                self._track_degeneracy(own)
                continue

            if delta_rows == INF:
                if phase1:
                    raise NumericalError("phase-1 step unbounded")
                return "unbounded"

            piv = float(self.T[r, q])
            if abs(piv) < tol.pivot_min:
                raise NumericalError(
                    f"pivot {piv:.3e} below {tol.pivot_min:.1e} at iteration {self.iters}"
                )

            if self.status[q] == NB_LO:
                v_new = self.lo[q]
            elif self.status[q] == NB_UP:
                v_new = self.hi[q]
            else:
                v_new = 0.0
            v_new += d * delta_rows

            if delta_rows != 0.0:
                self.xB -= (d * delta_rows) * self.T[:, q]

            leaving = int(self.basis[r])
            oldp = self.pcost[leaving] if phase1 else 0.0
            if oldp != 0.0:
                # out-of-bounds variable exits at the bound it violated
                self.status[leaving] = NB_UP if oldp > 0.0 else NB_LO
            else:
                hit_hi = -d * piv > 0.0
                self.status[leaving] = NB_UP if hit_hi else NB_LO

            eliminate(self.T, self.z, r, q)
            if oldp != 0.0:
                self.pcost[leaving] = 0.0
                self.z[leaving] -= oldp
                self.n_viol -= 1
            self.basis[r] = q
            self.status[q] = BASIC
            self.xB[r] = v_new
            self._track_degeneracy(delta_rows)

    def _track_degeneracy(self, step: float) -> None:
        if step <= _DEGEN_EPS:
            self.degen += 1
            if self.degen >= self.tol.degen_limit:
                self.bland = True
        else:
            self.degen = 0

    def _price(self) -> tuple[int, int]:
        z = self.z
        opt = self.tol.opt
        status = self.status
        mask = (
            ((status == NB_LO) & ~self.fixed & (z < -opt))
            | ((status == NB_UP) & ~self.fixed & (z > opt))
            | ((status == NB_FREE) & (np.abs(z) > opt))
        )
        if not mask.any():
            return -1, 0
        if self.bland:
            q = int(np.argmax(mask))
        else:
            q = int(np.argmax(np.where(mask, np.abs(z), -1.0)))
        if status[q] == NB_LO or (status[q] == NB_FREE and z[q] < 0.0):
            return q, 1
        return q, -1

    def _ratio(self, q: int, d: int, blo_b, bhi_b) -> tuple[float, int]:
        if self.m == 0:
            return INF, -1
        alpha = self.T[:, q]
        rate = -d * alpha
        eps = self.tol.ratio_tol
        lim = np.full(self.m, INF)
        up = rate > eps
        dn = rate < -eps
        lim[up] = (bhi_b[up] - self.xB[up]) / rate[up]
        lim[dn] = (self.xB[dn] - blo_b[dn]) / -rate[dn]
        np.maximum(lim, 0.0, out=lim)
        r = int(np.argmin(lim))
        delta = float(lim[r])
        if delta == INF:
            return INF, -1
        cand = np.nonzero(lim <= delta * (1.0 + 1e-9) + 1e-15)[0]
        if cand.size > 1:
            if self.bland:
                r = int(cand[np.argmin(self.basis[cand])])
            else:
                r = int(cand[np.argmax(np.abs(alpha[cand]))])
        return delta, r
