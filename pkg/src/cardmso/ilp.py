"""Exact feasibility and minimisation for integer programs with few bounded
variables.

Depth-first branch and bound over integer domains with interval constraint
propagation before every branch. Branching picks the variable with the
smallest remaining domain and tries values lowest-first, so witnesses are
deterministic. Strict inequalities are never stored; callers encode a > b as
a >= b + 1.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Optional

from .errors import BudgetExceeded

DEFAULT_NODE_BUDGET = 10_000_000

LE, EQ, GE = "<=", "=", ">="
_RELATIONS = (LE, EQ, GE)


@dataclass(frozen=True)
class Row:
    coeffs: tuple[tuple[str, int], ...]  # (variable, coefficient), names unique
    relation: str
    rhs: int

    @classmethod
    def of(cls, coeffs: Mapping[str, int], relation: str, rhs: int) -> "Row":
        if relation not in _RELATIONS:
            raise ValueError(f"relation must be one of {_RELATIONS}")
        items = tuple(sorted((v, c) for v, c in coeffs.items() if c != 0))
        return cls(items, relation, rhs)


@dataclass(frozen=True)
class ILPInstance:
    variables: tuple[tuple[str, int, int], ...]  # (name, lower, upper)
    rows: tuple[Row, ...]
    objective: Optional[tuple[tuple[str, int], ...]] = None  # minimise

    def __post_init__(self):
        names = {v for v, _, _ in self.variables}
        if len(names) != len(self.variables):
            raise ValueError("duplicate variable names")
        for v, lo, hi in self.variables:
            if lo > hi:
                raise ValueError(f"variable {v!r} has empty domain [{lo},{hi}]")
        for row in self.rows:
            for v, _ in row.coeffs:
                if v not in names:
                    raise ValueError(f"row references undeclared variable {v!r}")
        if self.objective is not None:
            for v, _ in self.objective:
                if v not in names:
                    raise ValueError(f"objective references undeclared variable {v!r}")

    @classmethod
    def build(cls, variables, rows, objective: Mapping[str, int] | None = None):
        var_tuple = tuple((str(n), int(lo), int(hi)) for n, lo, hi in variables)
        row_tuple = tuple(
            r if isinstance(r, Row) else Row.of(r[0], r[1], r[2]) for r in rows
        )
        obj = None
        if objective is not None:
            obj = tuple(sorted((v, c) for v, c in objective.items() if c != 0))
        return cls(var_tuple, row_tuple, obj)


@dataclass(frozen=True)
class ILPResult:
    status: str  # "feasible" | "infeasible" | "optimal"
    assignment: Optional[dict[str, int]] = None
    objective_value: Optional[int] = None
    nodes: int = 0


def check_assignment(inst: ILPInstance, assignment: Mapping[str, int]) -> bool:
    for name, lo, hi in inst.variables:
        if not (lo <= assignment[name] <= hi):
            return False
    for row in inst.rows:
        total = sum(c * assignment[v] for v, c in row.coeffs)
        if row.relation == LE and not total <= row.rhs:
            return False
        if row.relation == EQ and total != row.rhs:
            return False
        if row.relation == GE and not total >= row.rhs:
            return False
    return True


def format_instance(inst: ILPInstance) -> str:
    """Debug dump: one line per constraint `<coef>*<var> ... <rel> <rhs>`."""
    lines = []
    for name, lo, hi in inst.variables:
        lines.append(f"# var {name} in [{lo}, {hi}]")
    if inst.objective is not None:
        terms = " + ".join(f"{c}*{v}" for v, c in inst.objective) or "0"
        lines.append(f"# minimize {terms}")
    for row in inst.rows:
        terms = " + ".join(f"{c}*{v}" for v, c in row.coeffs) or "0"
        lines.append(f"{terms} {row.relation} {row.rhs}")
    return "\n".join(lines) + "\n"


class _Search:
    """One solve call; all state confined here."""

    def __init__(self, inst: ILPInstance, node_budget: int):
        self.inst = inst
        self.index = {name: i for i, (name, _, _) in enumerate(inst.variables)}
        self.lo = [lo for _, lo, _ in inst.variables]
        self.hi = [hi for _, _, hi in inst.variables]
        # rows in index form: (idxs, coefs, relation, rhs)
        self.rows = [
            (
                [self.index[v] for v, _ in row.coeffs],
                [c for _, c in row.coeffs],
                row.relation,
                row.rhs,
            )
            for row in inst.rows
        ]
        self.node_budget = node_budget
        self.nodes = 0
        self.best_value: Optional[int] = None
        self.best_assignment: Optional[list[int]] = None
        self.objective = None
        if inst.objective is not None:
            self.objective = (
                [self.index[v] for v, _ in inst.objective],
                [c for _, c in inst.objective],
            )

    def tick(self) -> None:
        self.nodes += 1
        if self.nodes > self.node_budget:
            raise BudgetExceeded("ilp-nodes", self.node_budget)

    def propagate(self, lo: list[int], hi: list[int]) -> bool:
        """Interval tightening to fixpoint. False on wipeout."""

        def ceil_div(a: int, b: int) -> int:
            return -((-a) // b)

        changed = True
        while changed:
            changed = False
            for idxs, coefs, rel, rhs in self.rows:
                # min/max achievable row value
                row_lo = row_hi = 0
                for i, c in zip(idxs, coefs):
                    if c > 0:
                        row_lo += c * lo[i]
                        row_hi += c * hi[i]
                    else:
                        row_lo += c * hi[i]
                        row_hi += c * lo[i]
                if rel in (LE, EQ) and row_lo > rhs:
                    return False
                if rel in (GE, EQ) and row_hi < rhs:
                    return False
                for i, c in zip(idxs, coefs):
                    if c > 0:
                        self_lo, self_hi = c * lo[i], c * hi[i]
                    else:
                        self_lo, self_hi = c * hi[i], c * lo[i]
                    rest_lo = row_lo - self_lo
                    rest_hi = row_hi - self_hi
                    if rel in (LE, EQ):
                        cap = rhs - rest_lo  # c*x <= cap
                        if c > 0:
                            nb = cap // c
                            if nb < hi[i]:
                                hi[i] = nb
                                changed = True
                        else:
                            nb = ceil_div(cap, c)  # x >= cap/c with c < 0
                            if nb > lo[i]:
                                lo[i] = nb
                                changed = True
                    if rel in (GE, EQ):
                        need = rhs - rest_hi  # c*x >= need
                        if c > 0:
                            nb = ceil_div(need, c)
                            if nb > lo[i]:
                                lo[i] = nb
                                changed = True
                        else:
                            nb = need // c  # x <= need/c with c < 0
                            if nb < hi[i]:
                                hi[i] = nb
                                changed = True
                    if lo[i] > hi[i]:
                        return False
        return True

    def objective_bounds(self, lo: list[int], hi: list[int]) -> tuple[int, int]:
        total_lo = total_hi = 0
        idxs, coefs = self.objective
        for i, c in zip(idxs, coefs):
            if c > 0:
                total_lo += c * lo[i]
                total_hi += c * hi[i]
            else:
                total_lo += c * hi[i]
                total_hi += c * lo[i]
        return total_lo, total_hi

    def run(self, lo: list[int], hi: list[int], first_only: bool) -> bool:
        """DFS; returns True when feasibility search may stop."""
        self.tick()
        lo, hi = lo[:], hi[:]
        if not self.propagate(lo, hi):
            return False
        if self.objective is not None and self.best_value is not None:
            obj_lo, _ = self.objective_bounds(lo, hi)
            if obj_lo >= self.best_value:
                return False
        open_vars = [i for i in range(len(lo)) if lo[i] < hi[i]]
        if not open_vars:
            value = None
            if self.objective is not None:
                idxs, coefs = self.objective
                value = sum(c * lo[i] for i, c in zip(idxs, coefs))
            if self.objective is None:
                self.best_assignment = lo
                return True
            if self.best_value is None or value < self.best_value:
                self.best_value = value
                self.best_assignment = lo
            return False
        pick = min(open_vars, key=lambda i: (hi[i] - lo[i], i))
        for value in range(lo[pick], hi[pick] + 1):
            child_lo, child_hi = lo[:], hi[:]
            child_lo[pick] = child_hi[pick] = value
            if self.run(child_lo, child_hi, first_only):
                return True
        return False


def _result(search: _Search, inst: ILPInstance, optimal: bool) -> ILPResult:
    if search.best_assignment is None:
        return ILPResult("infeasible", nodes=search.nodes)
    assignment = {
        name: search.best_assignment[i]
        for i, (name, _, _) in enumerate(inst.variables)
    }
    assert check_assignment(inst, assignment), "solver returned invalid assignment"
    if optimal:
        return ILPResult("optimal", assignment, search.best_value, search.nodes)
    return ILPResult("feasible", assignment, None, search.nodes)


def solve_feasibility(inst: ILPInstance, node_budget: int = DEFAULT_NODE_BUDGET) -> ILPResult:
    """Exact feasibility with a witness, or infeasible."""
    search = _Search(ILPInstance(inst.variables, inst.rows, None), node_budget)
    search.run(search.lo, search.hi, first_only=True)
    return _result(search, inst, optimal=False)


def solve_min(inst: ILPInstance, node_budget: int = DEFAULT_NODE_BUDGET) -> ILPResult:
    """Exact minimisation of the objective, or infeasible."""
    if inst.objective is None:
        raise ValueError("solve_min requires an objective")
    search = _Search(inst, node_budget)
    search.run(search.lo, search.hi, first_only=False)
    return _result(search, inst, optimal=True)
