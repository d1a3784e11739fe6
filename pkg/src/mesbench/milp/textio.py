"""Plain-text dump/restore for LP and MILP problems.

The format is line-oriented and round-trips exactly (coefficients are
written with repr, which is lossless for doubles):

    minimize
    obj: 3.0 x0 + -2.5 x1
    subject to
    r0: 1.0 x0 + 2.0 x1 <= 4.0
    r1: 1.0 x0 = 1.0
    bounds
    0.0 <= x0 <= inf
    -inf <= x1 <= 5.0
    integers
    x1
    end

Rules: variables are named x<index>; blank lines and lines starting with
'#' are ignored; a bounds line may be omitted, defaulting to [0, inf);
the integers section is optional.  Variable count is one past the highest
index mentioned anywhere.
"""

from __future__ import annotations

import re
from pathlib import Path

import numpy as np

from .problem import INF, LpProblem, MilpProblem, sense_from_str, sense_str


class FormatError(ValueError):
    """The text is not a well-formed problem dump."""


_VAR = re.compile(r"^x(\d+)$")


def dump_problem(problem: LpProblem | MilpProblem) -> str:
    milp = problem if isinstance(problem, MilpProblem) else MilpProblem(problem)
    p = milp.base
    out = ["minimize", "obj: " + _terms(range(p.n_vars), p.c), "subject to"]
    order = np.lexsort((p.col_idx, p.row_idx)) if p.row_idx.size else []
    by_row: list[list[int]] = [[] for _ in range(p.n_rows)]
    for k in order:
        by_row[int(p.row_idx[k])].append(int(k))
    for i in range(p.n_rows):
        lhs = " + ".join(
            f"{float(p.vals[k])!r} x{int(p.col_idx[k])}" for k in by_row[i]
        ) or "0"
        out.append(f"r{i}: {lhs} {sense_str(p.row_sense[i])} {float(p.rhs[i])!r}")
    out.append("bounds")
    for j in range(p.n_vars):
        out.append(f"{float(p.lo[j])!r} <= x{j} <= {float(p.hi[j])!r}")
    if milp.int_vars:
        out.append("integers")
        out.append(" ".join(f"x{j}" for j in sorted(milp.int_vars)))
    out.append("end")
    return "\n".join(out) + "\n"


def write_problem(problem: LpProblem | MilpProblem, path) -> None:
    Path(path).write_text(dump_problem(problem), encoding="utf-8")


def read_problem(path) -> MilpProblem:
    return parse_problem(Path(path).read_text(encoding="utf-8"))


def parse_problem(text: str) -> MilpProblem:
    lines = [
        ln.strip() for ln in text.splitlines()
        if ln.strip() and not ln.lstrip().startswith("#")
    ]
    if not lines or lines[0] != "minimize":
        raise FormatError("expected 'minimize' on the first line")
    if len(lines) < 2 or not lines[1].startswith("obj:"):
        raise FormatError("expected an 'obj:' line after 'minimize'")
    obj_terms = _parse_terms(lines[1].split(":", 1)[1])

    idx = 2
    if idx >= len(lines) or lines[idx] != "subject to":
        raise FormatError("expected 'subject to'")
    idx += 1
    rows: list[tuple[list[tuple[int, float]], int, float]] = []
    while idx < len(lines) and lines[idx] not in ("bounds", "integers", "end"):
        ln = lines[idx]
        if ":" not in ln:
            raise FormatError(f"constraint line missing name: {ln!r}")
        body = ln.split(":", 1)[1].strip()
        for token in (" <= ", " >= ", " = "):
            if token in body:
                lhs, rhs = body.split(token, 1)
                rows.append(
                    (_parse_terms(lhs), sense_from_str(token.strip()), _num(rhs))
                )
                break
        else:
            raise FormatError(f"constraint without <=, >= or =: {ln!r}")
        idx += 1

    bounds: dict[int, tuple[float, float]] = {}
    if idx < len(lines) and lines[idx] == "bounds":
        idx += 1
        while idx < len(lines) and lines[idx] not in ("integers", "end"):
            parts = lines[idx].split()
            if len(parts) != 5 or parts[1] != "<=" or parts[3] != "<=":
                raise FormatError(f"bad bounds line: {lines[idx]!r}")
            bounds[_var(parts[2])] = (_num(parts[0]), _num(parts[4]))
            idx += 1

    ints: set[int] = set()
    if idx < len(lines) and lines[idx] == "integers":
        idx += 1
        while idx < len(lines) and lines[idx] != "end":
            ints.update(_var(tok) for tok in lines[idx].split())
            idx += 1

    if idx >= len(lines) or lines[idx] != "end":
        raise FormatError("missing 'end'")

    n = 0
    for j, _ in obj_terms:
        n = max(n, j + 1)
    for terms, _, _ in rows:
        for j, _ in terms:
            n = max(n, j + 1)
    if bounds:
        n = max(n, max(bounds) + 1)
    if ints:
        n = max(n, max(ints) + 1)

    c = np.zeros(n)
    for j, v in obj_terms:
        c[j] += v
    lo = np.zeros(n)
    hi = np.full(n, INF)
    for j, (l, h) in bounds.items():
        lo[j], hi[j] = l, h
    ridx: list[int] = []
    cidx: list[int] = []
    vals: list[float] = []
    senses: list[int] = []
    rhs: list[float] = []
    for i, (terms, sense, b) in enumerate(rows):
        for j, v in terms:
            ridx.append(i)
            cidx.append(j)
            vals.append(v)
        senses.append(sense)
        rhs.append(b)
    base = LpProblem(
        c=c,
        row_idx=np.asarray(ridx, dtype=np.int32),
        col_idx=np.asarray(cidx, dtype=np.int32),
        vals=np.asarray(vals, dtype=np.float64),
        row_sense=np.asarray(senses, dtype=np.int8),
        rhs=np.asarray(rhs, dtype=np.float64),
        lo=lo,
        hi=hi,
    )
    return MilpProblem(base, frozenset(ints))


def _terms(indices, coefs) -> str:
    parts = [f"{float(coefs[j])!r} x{j}" for j in indices if coefs[j] != 0.0]
    return " + ".join(parts) if parts else "0"


def _parse_terms(text: str) -> list[tuple[int, float]]:
    text = text.strip()
    if text == "0" or not text:
        return []
    terms = []
    for chunk in text.split(" + "):
        parts = chunk.split()
        if len(parts) != 2:
            raise FormatError(f"bad term: {chunk!r}")
        terms.append((_var(parts[1]), _num(parts[0])))
    return terms


def _var(token: str) -> int:
    m = _VAR.match(token)
    if not m:
        raise FormatError(f"bad variable name: {token!r}")
    return int(m.group(1))


def _num(token: str) -> float:
    try:
        return float(token)
    except ValueError as exc:
        raise FormatError(f"bad number: {token!r}") from exc
