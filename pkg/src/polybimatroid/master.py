"""Master problem of the cutting-plane method and its branch-and-bound solver.

Variables are ``y1[0..n)``, ``y2[0..n)`` and ``z``; the working-sensor
ternary vector is ``x = y1 - y2``. Each cut ``z >= pi @ x`` is stored in
y-space as ``z - pi @ y1 + pi @ y2 >= 0``. Side constraints::

    y1[i] + y2[i] <= 1
    sum(y1) >= b1p,  sum(y2) >= b2p
    y1[i] = y2[i] = 0            for i outside s1_outer | s2_outer
    sum(y2[S1]) + sum(y1[S2]) <= w_cap
"""

from __future__ import annotations

import heapq
import itertools
import math
from dataclasses import dataclass, field, replace
from typing import Literal, Sequence

import numpy as np

from .bisets import Biset, FunctionOracle, GroundSet, ternary_to_biset
from .polyhedron import Cut
from .simplex import LpModel, LpResult, lp_resolve, lp_solve

TOL_INT = 1e-6
TOL_FATHOM = 1e-9


@dataclass
class MasterInstance:
    ground: GroundSet
    s1_outer: frozenset[int]
    s2_outer: frozenset[int]
    b1p: int
    b2p: int
    w_cap: int
    cuts: list[Cut] = field(default_factory=list)
    z_bound: float | None = None

    def __post_init__(self) -> None:
        self.s1_outer = frozenset(self.s1_outer)
        self.s2_outer = frozenset(self.s2_outer)
        if self.s1_outer & self.s2_outer:
            raise ValueError("outer plan sets overlap")
        if any(not 0 <= i < self.n for i in self.s1_outer | self.s2_outer):
            raise ValueError("outer plan index outside the ground set")
        if min(self.b1p, self.b2p, self.w_cap) < 0:
            raise ValueError("b1p, b2p and w_cap must be nonnegative")

    @property
    def n(self) -> int:
        return self.ground.n

    @classmethod
    def unconstrained(cls, n: int, cuts: Sequence[Cut] = ()) -> MasterInstance:
        """No side constraints: every biset over N is feasible."""
        return cls(GroundSet(n), frozenset(range(n)), frozenset(), 0, 0, n, list(cuts))

    def feasible(self, b: Biset) -> bool:
        """Side-constraint feasibility of a biset (everything except the cuts)."""
        plan = self.s1_outer | self.s2_outer
        if not b.support <= plan:
            return False
        if len(b.s1) < self.b1p or len(b.s2) < self.b2p:
            return False
        return len(b.s2 & self.s1_outer) + len(b.s1 & self.s2_outer) <= self.w_cap

    def trivially_infeasible(self) -> bool:
        return self.b1p + self.b2p > len(self.s1_outer | self.s2_outer)

    def effective_z_bound(self) -> float:
        if self.z_bound is not None:
            return self.z_bound
        # |pi @ x| <= ||pi||_1 on [-1, 1]^n, so the box never binds once a cut exists
        return 1.0 + max((float(np.abs(c.pi).sum()) for c in self.cuts), default=0.0)


def z_bound_for(oracle: FunctionOracle) -> float:
    """Box for z from the 2n singleton values."""
    n = oracle.n
    singles = [abs(oracle({i}, ())) for i in range(n)] + [abs(oracle((), {i})) for i in range(n)]
    return 1.0 + 2 * n * max(singles)


def build_master(inst: MasterInstance) -> LpModel:
    n = inst.n
    k = 2 * n + 1
    zi = 2 * n
    names = [f"y1[{i}]" for i in range(n)] + [f"y2[{i}]" for i in range(n)] + ["z"]
    rows: list[np.ndarray] = []
    senses: list[str] = []
    rhs: list[float] = []
    row_names: list[str] = []

    def add(coef: np.ndarray, sense: str, b: float, name: str) -> None:
        rows.append(coef)
        senses.append(sense)
        rhs.append(float(b))
        row_names.append(name)

    for c_idx, cut in enumerate(inst.cuts):
        if len(cut.pi) != n:
            raise ValueError(f"cut {c_idx} has dimension {len(cut.pi)}, expected {n}")
        coef = np.zeros(k)
        coef[:n] = -np.asarray(cut.pi)
        coef[n:zi] = np.asarray(cut.pi)
        coef[zi] = 1.0
        add(coef, ">=", 0.0, f"cut[{c_idx}]")
    for i in range(n):
        coef = np.zeros(k)
        coef[i] = coef[n + i] = 1.0
        add(coef, "<=", 1.0, f"disjoint[{i}]")
    coef = np.zeros(k)
    coef[:n] = 1.0
    add(coef, ">=", inst.b1p, "card1")
    coef = np.zeros(k)
    coef[n:zi] = 1.0
    add(coef, ">=", inst.b2p, "card2")
    coef = np.zeros(k)
    for i in inst.s1_outer:
        coef[n + i] = 1.0
    for i in inst.s2_outer:
        coef[i] = 1.0
    add(coef, "<=", inst.w_cap, "swap")

    plan = inst.s1_outer | inst.s2_outer
    lb = np.zeros(k)
    ub = np.ones(k)
    for i in range(n):
        if i not in plan:
            ub[i] = ub[n + i] = 0.0
    zb = inst.effective_z_bound()
    lb[zi], ub[zi] = -zb, zb
    c = np.zeros(k)
    c[zi] = 1.0
    return LpModel(c, np.array(rows).reshape(len(rows), k), senses, np.array(rhs), lb, ub, names, row_names)


@dataclass
class MilpSolution:
    status: Literal["optimal", "infeasible"]
    x: tuple[int, ...] | None = None
    y1: tuple[int, ...] | None = None
    y2: tuple[int, ...] | None = None
    z: float | None = None
    nodes: int = 0
    root_bound: float | None = None

    @property
    def biset(self) -> Biset:
        return ternary_to_biset(self.x)


def solve_relaxation(inst: MasterInstance) -> LpResult:
    return lp_solve(build_master(inst))


def _branch_var(x: np.ndarray, n: int) -> int | None:
    # order (i, y1 before y2); pick the entry closest to 0.5
    best, best_dist = None, None
    for i in range(n):
        for var in (i, n + i):
            f = abs(x[var] - round(x[var]))
            if f <= TOL_INT:
                continue
            dist = abs(x[var] - math.floor(x[var]) - 0.5)
            if best is None or dist < best_dist - 1e-12:
                best, best_dist = var, dist
    return best


def _integral_solution(inst: MasterInstance, x: np.ndarray) -> MilpSolution:
    n = inst.n
    y1 = np.round(x[:n]).astype(int)
    y2 = np.round(x[n : 2 * n]).astype(int)
    return _point_solution(inst, tuple(int(v) for v in y1 - y2))


def solve_milp(inst: MasterInstance, hints: Sequence[Sequence[int]] = ()) -> MilpSolution:
    """Best-first branch-and-bound over the binary y variables.

    ``hints`` are ternary points known to satisfy the side constraints; the
    best of them under the current cuts seeds the incumbent. The z box is
    doubled and the solve repeated if the optimum lands on it while cuts
    are present.
    """
    while True:
        sol = _branch_and_bound(inst, hints)
        if sol.status != "optimal" or not inst.cuts:
            return sol
        zb = inst.effective_z_bound()
        if abs(abs(sol.z) - zb) > 1e-9 * zb:
            return sol
        inst = replace(inst, z_bound=2 * zb)


def _point_solution(inst: MasterInstance, x: Sequence[int]) -> MilpSolution:
    y1 = tuple(1 if v == 1 else 0 for v in x)
    y2 = tuple(1 if v == -1 else 0 for v in x)
    z = max([cut.rhs(x) for cut in inst.cuts], default=-inst.effective_z_bound())
    return MilpSolution("optimal", tuple(int(v) for v in x), y1, y2, z)


def _better(cand: MilpSolution, inc: MilpSolution | None) -> bool:
    if inc is None or cand.z < inc.z - TOL_FATHOM:
        return True
    return cand.z <= inc.z + TOL_FATHOM and cand.biset.key() < inc.biset.key()


def _branch_and_bound(inst: MasterInstance, hints: Sequence[Sequence[int]] = ()) -> MilpSolution:
    n = inst.n
    if inst.trivially_infeasible():
        return MilpSolution("infeasible")
    incumbent: MilpSolution | None = None
    for h in hints:
        cand = _point_solution(inst, h)
        if inst.feasible(cand.biset) and _better(cand, incumbent):
            incumbent = cand
    model = build_master(inst)
    root = lp_solve(model)
    nodes = 1
    if root.status == "infeasible":
        return MilpSolution("infeasible", nodes=nodes)
    counter = itertools.count()
    # entries: (bound, seq, lp result or None, parent lp, lb, ub); children are solved when popped
    heap: list = [(root.objective, next(counter), root, None, model.lb, model.ub)]
    while heap:
        bound, _, res, parent, lb, ub = heapq.heappop(heap)
        if incumbent is not None and bound >= incumbent.z - TOL_FATHOM:
            continue
        if res is None:
            res = lp_resolve(parent, lb, ub)
            nodes += 1
            if res.status == "infeasible":
                continue
            if incumbent is not None and res.objective >= incumbent.z - TOL_FATHOM:
                continue
        var = _branch_var(res.x, n)
        if var is None:
            cand = _integral_solution(inst, res.x)
            if _better(cand, incumbent):
                incumbent = cand
            continue
        for value in (0.0, 1.0):
            clb, cub = lb.copy(), ub.copy()
            clb[var] = cub[var] = value
            heapq.heappush(heap, (res.objective, next(counter), None, res, clb, cub))
    if incumbent is None:
        return MilpSolution("infeasible", nodes=nodes)
    incumbent.nodes = nodes
    incumbent.root_bound = root.objective
    return incumbent
