"""Exact feasibility search for bounded integer linear systems.

The engine is a depth-first search with interval propagation on every
linear row.  All arithmetic is on Python integers, so answers are exact in
both directions.  Search order is fixed, which makes results reproducible
for a given model.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Hashable, Mapping

from .errors import InputError, ResourceError

DEFAULT_MAX_VARS = 600
DEFAULT_NODE_LIMIT = 2_000_000

_SENSES = {"<=": "<=", "=<": "<=", "≤": "<=", ">=": ">=", "=>": ">=", "≥": ">=", "=": "=", "==": "="}


@dataclass(frozen=True)
class Constraint:
    terms: tuple[tuple[int, int], ...]  # (variable index, coefficient)
    sense: str
    rhs: int
    label: str = ""


class IlpModel:
    """Bounded integer variables plus linear constraints (feasibility only)."""

    def __init__(self, name: str = "model"):
        self.name = name
        self.names: list[Hashable] = []
        self.lower: list[int] = []
        self.upper: list[int] = []
        self.index: dict[Hashable, int] = {}
        self.constraints: list[Constraint] = []

    def __len__(self) -> int:
        return len(self.names)

    @property
    def num_vars(self) -> int:
        return len(self.names)

    def add_var(self, name: Hashable, lower: int, upper: int) -> int:
        if name in self.index:
            raise InputError(f"variable {name!r} declared twice")
        lower, upper = int(lower), int(upper)
        if lower > upper:
            raise InputError(f"variable {name!r} has empty domain [{lower}, {upper}]")
        self.index[name] = len(self.names)
        self.names.append(name)
        self.lower.append(lower)
        self.upper.append(upper)
        return self.index[name]

    def add_constraint(self, coeffs: Mapping[Hashable, int], sense: str, rhs: int, label: str = "") -> None:
        if sense not in _SENSES:
            raise InputError(f"unknown relation {sense!r}")
        merged: dict[int, int] = {}
        for name, coef in coeffs.items():
            if name not in self.index:
                raise InputError(f"constraint references undeclared variable {name!r}")
            i = self.index[name]
            merged[i] = merged.get(i, 0) + int(coef)
        terms = tuple(sorted((i, a) for i, a in merged.items() if a != 0))
        self.constraints.append(Constraint(terms, _SENSES[sense], int(rhs), label))

    # convenience wrappers
    def le(self, coeffs, rhs, label=""):
        self.add_constraint(coeffs, "<=", rhs, label)

    def ge(self, coeffs, rhs, label=""):
        self.add_constraint(coeffs, ">=", rhs, label)

    def eq(self, coeffs, rhs, label=""):
        self.add_constraint(coeffs, "=", rhs, label)

    def dump(self) -> str:
        """LP-style text listing, one constraint per line."""
        lines = [f"\\ {self.name}", "subject to"]
        for j, con in enumerate(self.constraints):
            body = " ".join(
                f"{'+' if a > 0 else '-'} {abs(a) if abs(a) != 1 else ''}{_fmt(self.names[i])}".replace("  ", " ")
                for i, a in con.terms
            ) or "0"
            tag = con.label or f"c{j}"
            lines.append(f" {tag}: {body.lstrip('+ ')} {con.sense} {con.rhs}")
        lines.append("bounds")
        for name, lo, hi in zip(self.names, self.lower, self.upper):
            lines.append(f" {lo} <= {_fmt(name)} <= {hi}")
        lines.append("general")
        lines.append(" " + " ".join(_fmt(n) for n in self.names))
        lines.append("end")
        return "\n".join(lines)

    def check(self, values: Mapping[Hashable, int]) -> bool:
        """Whether a full assignment satisfies every bound and constraint."""
        x = [values[n] for n in self.names]
        if any(not lo <= v <= hi for v, lo, hi in zip(x, self.lower, self.upper)):
            return False
        for con in self.constraints:
            act = sum(a * x[i] for i, a in con.terms)
            if con.sense == "<=" and act > con.rhs:
                return False
            if con.sense == ">=" and act < con.rhs:
                return False
            if con.sense == "=" and act != con.rhs:
                return False
        return True


def _fmt(name) -> str:
    if isinstance(name, tuple):
        return "_".join(str(p) for p in name)
    return str(name)


class _Rows:
    """Constraints normalized to ``sum a_i x_i <= b``."""

    def __init__(self, model: IlpModel):
        self.idx: list[tuple[int, ...]] = []
        self.coef: list[tuple[int, ...]] = []
        self.rhs: list[int] = []
        self.trivial_infeasible = False
        for con in model.constraints:
            if not con.terms:
                ok = (con.sense == "<=" and 0 <= con.rhs) or (con.sense == ">=" and 0 >= con.rhs) or (
                    con.sense == "=" and con.rhs == 0
                )
                if not ok:
                    self.trivial_infeasible = True
                continue
            if con.sense in ("<=", "="):
                self._add(con.terms, con.rhs)
            if con.sense in (">=", "="):
                self._add(tuple((i, -a) for i, a in con.terms), -con.rhs)
        self.var_rows: list[list[int]] = [[] for _ in range(model.num_vars)]
        for r, ids in enumerate(self.idx):
            for i in ids:
                self.var_rows[i].append(r)

    def _add(self, terms, rhs):
        self.idx.append(tuple(i for i, _ in terms))
        self.coef.append(tuple(a for _, a in terms))
        self.rhs.append(rhs)


def _propagate(rows: _Rows, lo: list[int], hi: list[int], pending) -> bool:
    queue = deque(pending)
    queued = set(queue)
    idx, coef, rhs, var_rows = rows.idx, rows.coef, rows.rhs, rows.var_rows
    while queue:
        r = queue.popleft()
        queued.discard(r)
        ids, cs, b = idx[r], coef[r], rhs[r]
        minact = 0
        maxact = 0
        for i, a in zip(ids, cs):
            if a > 0:
                minact += a * lo[i]
                maxact += a * hi[i]
            else:
                minact += a * hi[i]
                maxact += a * lo[i]
        if minact > b:
            return False
        if maxact <= b:
            continue
        for i, a in zip(ids, cs):
            if a > 0:
                bound = (b - minact + a * lo[i]) // a
                if bound < hi[i]:
                    if bound < lo[i]:
                        return False
                    hi[i] = bound
                    for r2 in var_rows[i]:
                        if r2 != r and r2 not in queued:
                            queued.add(r2)
                            queue.append(r2)
            else:
                slack = b - minact + a * hi[i]
                bound = -(slack // -a)  # ceil(slack / a) for a < 0
                if bound > lo[i]:
                    if bound > hi[i]:
                        return False
                    lo[i] = bound
                    for r2 in var_rows[i]:
                        if r2 != r and r2 not in queued:
                            queued.add(r2)
                            queue.append(r2)
    return True


def solve_feasibility(
    model: IlpModel,
    max_vars: int = DEFAULT_MAX_VARS,
    node_limit: int = DEFAULT_NODE_LIMIT,
) -> dict[Hashable, int] | None:
    """An integer point satisfying the model, or ``None`` if there is none.

    Raises :class:`ResourceError` when the model has more than ``max_vars``
    variables or the search visits more than ``node_limit`` nodes.
    """
    if model.num_vars > max_vars:
        raise ResourceError(f"model has {model.num_vars} variables, budget is {max_vars}")
    rows = _Rows(model)
    if rows.trivial_infeasible:
        return None
    lo = list(model.lower)
    hi = list(model.upper)
    if not _propagate(rows, lo, hi, range(len(rows.rhs))):
        return None
    nodes = 0
    nvars = model.num_vars

    # iterative DFS; each stack entry is a (lo, hi, changed variable) state
    stack: list[tuple[list[int], list[int], int]] = [(lo, hi, -1)]
    while stack:
        lo, hi, changed = stack.pop()
        nodes += 1
        if nodes > node_limit:
            raise ResourceError(f"search exceeded {node_limit} nodes")
        if changed >= 0 and not _propagate(rows, lo, hi, rows.var_rows[changed]):
            continue
        # branch on the unfixed variable with the smallest domain
        best, best_size = -1, None
        for i in range(nvars):
            size = hi[i] - lo[i]
            if size and (best_size is None or size < best_size):
                best, best_size = i, size
                if size == 1:
                    break
        if best < 0:
            return {name: lo[i] for i, name in enumerate(model.names)}
        mid = (lo[best] + hi[best]) // 2
        lo_r, hi_r = list(lo), list(hi)
        lo_r[best] = mid + 1
        hi[best] = mid
        # push the upper half first so the lower half is explored first
        stack.append((lo_r, hi_r, best))
        stack.append((lo, hi, best))
    return None
