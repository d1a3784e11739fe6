"""Problem containers and solver result types.

LpProblem is an immutable minimization problem over bounded variables with
sparse rows; LpBuilder grows one incrementally.  All solver tolerances live
in the Tolerances record so there is exactly one place they can be tuned.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

import numpy as np

INF = math.inf


class NumericalError(RuntimeError):
    """The simplex met a pivot too small to trust (or ran out of budget)."""


@dataclass(frozen=True)
class Tolerances:
    """Every numeric threshold the LP/MILP stack uses."""

    feas: float = 1e-7  # primal feasibility, scaled by max(1, |rhs|)
    opt: float = 1e-7  # reduced-cost optimality threshold
    pivot_min: float = 1e-11  # smallest acceptable pivot magnitude
    ratio_tol: float = 1e-9  # column entries treated as zero in ratio tests
    int_tol: float = 1e-6  # integrality tolerance
    milp_feas: float = 1e-6  # verifier feasibility tolerance
    gap_tol: float = 1e-6  # default relative MILP gap
    degen_limit: int = 1000  # consecutive degenerate pivots before Bland's rule
    refresh_every: int = 256  # pivots between reduced-cost refreshes
    max_iters: int = 200_000  # hard simplex iteration cap


DEFAULT_TOLERANCES = Tolerances()

LE, EQ, GE = -1, 0, 1
_SENSE_FROM_STR = {"<=": LE, "=": EQ, ">=": GE}
_SENSE_TO_STR = {LE: "<=", EQ: "=", GE: ">="}


class Status(enum.Enum):
    OPTIMAL = "Optimal"
    INFEASIBLE = "Infeasible"
    UNBOUNDED = "Unbounded"
    GAP_LIMIT = "GapLimit"


@dataclass(frozen=True)
class LpProblem:
    """min c.x  s.t.  sparse rows with <=/=/>= senses, lo <= x <= hi."""

    c: np.ndarray  # (n,)
    row_idx: np.ndarray  # (nnz,) int32, row of each entry
    col_idx: np.ndarray  # (nnz,) int32
    vals: np.ndarray  # (nnz,)
    row_sense: np.ndarray  # (m,) int8 of LE/EQ/GE
    rhs: np.ndarray  # (m,)
    lo: np.ndarray  # (n,), -inf allowed
    hi: np.ndarray  # (n,), +inf allowed

    def __post_init__(self):
        n, m = self.c.size, self.rhs.size
        if self.lo.size != n or self.hi.size != n:
            raise ValueError("bound arrays must match the variable count")
        if self.row_sense.size != m:
            raise ValueError("row_sense must match the row count")
        if np.any(self.lo > self.hi):
            raise ValueError("lo > hi on some variable")
        for arr in (self.c, self.vals, self.rhs, self.lo, self.hi):
            if arr.size and not np.all(np.isfinite(arr[np.abs(arr) != INF])):
                raise ValueError("NaN in problem data")

    @property
    def n_vars(self) -> int:
        return self.c.size

    @property
    def n_rows(self) -> int:
        return self.rhs.size

    def dense_rows(self) -> np.ndarray:
        """Materialize the (m, n) constraint matrix."""
        a = np.zeros((self.n_rows, self.n_vars))
        np.add.at(a, (self.row_idx, self.col_idx), self.vals)
        return a


@dataclass(frozen=True)
class MilpProblem:
    base: LpProblem
    int_vars: frozenset[int] = frozenset()

    def __post_init__(self):
        object.__setattr__(self, "int_vars", frozenset(self.int_vars))
        bad = [i for i in self.int_vars if not 0 <= i < self.base.n_vars]
        if bad:
            raise ValueError(f"integer indices out of range: {sorted(bad)}")


@dataclass(frozen=True)
class MilpSolution:
    status: Status
    x: np.ndarray | None
    objective: float
    gap: float
    node_count: int
    iterations: int
    #: row duals and reduced costs of the final LP basis (pure-LP solves)
    duals: np.ndarray | None = None
    reduced_costs: np.ndarray | None = None


@dataclass(frozen=True)
class CrashHint:
    """A structural starting basis for solve_lp.

    ``basic_cols[r]`` names the column to start basic in row r (-1 keeps
    the row's slack basic); ``at_upper`` lists columns that start nonbasic
    at their upper bound.  Hints are advice: anything inconsistent is
    dropped and the solver falls back to the all-slack basis.
    """

    basic_cols: np.ndarray
    at_upper: np.ndarray = field(default_factory=lambda: np.empty(0, dtype=np.int64))


class LpBuilder:
    """Incremental construction of an LpProblem / MilpProblem."""

    def __init__(self):
        self._cost: list[float] = []
        self._lo: list[float] = []
        self._hi: list[float] = []
        self._ints: list[int] = []
        self._rows: list[int] = []
        self._cols: list[int] = []
        self._vals: list[float] = []
        self._sense: list[int] = []
        self._rhs: list[float] = []
        self.var_names: list[str] = []

    @property
    def n_vars(self) -> int:
        return len(self._cost)

    @property
    def n_rows(self) -> int:
        return len(self._rhs)

    def add_var(
        self,
        name: str | None = None,
        lo: float = 0.0,
        hi: float = INF,
        cost: float = 0.0,
        integer: bool = False,
    ) -> int:
        idx = len(self._cost)
        self._cost.append(float(cost))
        self._lo.append(float(lo))
        self._hi.append(float(hi))
        if integer:
            self._ints.append(idx)
        self.var_names.append(name if name is not None else f"x{idx}")
        return idx

    def add_row(self, coeffs, sense: str, rhs: float) -> int:
        """coeffs: iterable of (var index, coefficient); sense '<=', '=', '>='."""
        row = len(self._rhs)
        for j, v in coeffs:
            if v != 0.0:
                self._rows.append(row)
                self._cols.append(int(j))
                self._vals.append(float(v))
        self._sense.append(_SENSE_FROM_STR[sense])
        self._rhs.append(float(rhs))
        return row

    def add_cost(self, j: int, delta: float) -> None:
        self._cost[j] += float(delta)

    def set_bounds(self, j: int, lo: float, hi: float) -> None:
        self._lo[j] = float(lo)
        self._hi[j] = float(hi)

    def build_lp(self) -> LpProblem:
        return LpProblem(
            c=np.asarray(self._cost, dtype=np.float64),
            row_idx=np.asarray(self._rows, dtype=np.int32),
            col_idx=np.asarray(self._cols, dtype=np.int32),
            vals=np.asarray(self._vals, dtype=np.float64),
            row_sense=np.asarray(self._sense, dtype=np.int8),
            rhs=np.asarray(self._rhs, dtype=np.float64),
            lo=np.asarray(self._lo, dtype=np.float64),
            hi=np.asarray(self._hi, dtype=np.float64),
        )

    def build_milp(self) -> MilpProblem:
        return MilpProblem(base=self.build_lp(), int_vars=frozenset(self._ints))


def sense_str(sense: int) -> str:
    return _SENSE_TO_STR[int(sense)]


def sense_from_str(text: str) -> int:
    return _SENSE_FROM_STR[text]
