"""Dense-tableau bounded-variable simplex.

Solves ``min c @ x`` subject to row constraints ``A x (<=|>=|=) b`` and
bounds ``lb <= x <= ub``. Nonbasic variables sit at a finite bound (or at 0
when free), so box constraints never become rows. Phase 1 minimizes the sum
of artificials; Dantzig pricing switches to Bland's rule after a run of
degenerate pivots.

A solved tableau can be re-optimized after bound changes with the dual
simplex (:func:`lp_resolve`), which is how branch-and-bound children are
warm-started.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Literal, Sequence

import numpy as np

TOL_LP = 1e-9
TOL_PIVOT = 1e-9
TOL_PRIMAL = 1e-9

Sense = Literal["<=", ">=", "="]


@dataclass
class LpModel:
    c: np.ndarray
    A: np.ndarray
    senses: list[str]
    b: np.ndarray
    lb: np.ndarray
    ub: np.ndarray
    names: list[str] = field(default_factory=list)
    row_names: list[str] = field(default_factory=list)
    sense: Literal["min", "max"] = "min"

    def __post_init__(self) -> None:
        self.c = np.asarray(self.c, dtype=float)
        k = self.c.size
        self.A = np.asarray(self.A, dtype=float).reshape(-1, k)
        self.b = np.asarray(self.b, dtype=float).reshape(-1)
        self.lb = np.asarray(self.lb, dtype=float)
        self.ub = np.asarray(self.ub, dtype=float)
        if self.A.shape[0] != self.b.size or len(self.senses) != self.b.size:
            raise ValueError("row count mismatch between A, b and senses")
        if self.lb.size != k or self.ub.size != k:
            raise ValueError("bound vectors must match the number of variables")
        if (self.lb > self.ub).any():
            raise ValueError("lower bound exceeds upper bound")
        bad = set(self.senses) - {"<=", ">=", "="}
        if bad:
            raise ValueError(f"unknown constraint senses {bad}")

    @property
    def num_vars(self) -> int:
        return self.c.size

    @property
    def num_rows(self) -> int:
        return self.b.size

    def with_bounds(self, lb: np.ndarray, ub: np.ndarray) -> LpModel:
        return LpModel(self.c, self.A, self.senses, self.b, lb, ub, self.names, self.row_names, self.sense)


class UnboundedError(RuntimeError):
    pass


class _Tableau:
    """``T = B^-1 [M | rhs]`` plus column values, bounds and reduced costs."""

    def __init__(self, M, rhs, lb, ub, basis, x):
        m = M.shape[0]
        Binv = np.linalg.inv(M[:, basis]) if m else np.zeros((0, 0))
        self.T = Binv @ np.hstack([M, rhs[:, None]])
        self.lb, self.ub = lb, ub
        self.basis = np.asarray(basis, dtype=np.int64)
        self.x = x
        self.d = np.zeros(M.shape[1])
        self.cost = np.zeros(M.shape[1])
        self.iterations = 0
        self.refresh()

    def copy(self) -> _Tableau:
        new = object.__new__(_Tableau)
        new.T = self.T.copy()
        new.lb, new.ub = self.lb.copy(), self.ub.copy()
        new.basis = self.basis.copy()
        new.x = self.x.copy()
        new.d = self.d.copy()
        new.cost = self.cost
        new.iterations = 0
        return new

    @property
    def ncols(self) -> int:
        return self.T.shape[1] - 1

    def refresh(self) -> None:
        xn = self.x.copy()
        xn[self.basis] = 0.0
        self.x[self.basis] = self.T[:, -1] - self.T[:, :-1] @ xn

    def set_cost(self, cost: np.ndarray) -> None:
        self.cost = cost
        self.d = cost - cost[self.basis] @ self.T[:, :-1]

    def pivot(self, r: int, j: int) -> None:
        T = self.T
        T[r] /= T[r, j]
        col = T[:, j].copy()
        col[r] = 0.0
        T -= np.outer(col, T[r])
        self.d -= self.d[j] * T[r, :-1]
        self.d[j] = 0.0
        self.basis[r] = j

    def primal(self, max_iter: int) -> None:
        m = self.basis.size
        nonbasic = np.ones(self.ncols, dtype=bool)
        nonbasic[self.basis] = False
        movable = self.ub > self.lb
        degenerate = 0
        bland_after = 5 * max(m, 1)
        for _ in range(max_iter):
            d = self.d
            cand = nonbasic & movable & (((d < -TOL_LP) & (self.x < self.ub)) | ((d > TOL_LP) & (self.x > self.lb)))
            eligible = np.flatnonzero(cand)
            if eligible.size == 0:
                return
            bland = degenerate >= bland_after
            j = int(eligible[0]) if bland else int(eligible[np.argmax(np.abs(d[eligible]))])
            direction = 1.0 if d[j] < 0 else -1.0
            alpha = direction * self.T[:, j]
            xb = self.x[self.basis]
            ratios = np.full(m, np.inf)
            dec = alpha > TOL_PIVOT
            inc = alpha < -TOL_PIVOT
            ratios[dec] = (xb[dec] - self.lb[self.basis][dec]) / alpha[dec]
            ratios[inc] = (self.ub[self.basis][inc] - xb[inc]) / -alpha[inc]
            np.maximum(ratios, 0.0, out=ratios)
            step = self.ub[j] - self.lb[j]
            r = -1
            if m:
                rmin = float(ratios.min())
                if rmin < step:
                    step = rmin
                    ties = np.flatnonzero(ratios <= rmin + 1e-12)
                    if bland:
                        r = int(ties[np.argmin(self.basis[ties])])
                    else:
                        r = int(ties[np.argmax(np.abs(alpha[ties]))])
            if not np.isfinite(step):
                raise UnboundedError(f"column {j} can move without limit")
            self.iterations += 1
            degenerate = degenerate + 1 if step <= 1e-12 else 0
            if r < 0:
                self.x[j] = self.ub[j] if direction > 0 else self.lb[j]
                self.refresh()
                continue
            leaving = int(self.basis[r])
            hit_lower = alpha[r] > 0
            self.x[j] += direction * step
            self.pivot(r, j)
            nonbasic[leaving] = True
            nonbasic[j] = False
            self.x[leaving] = self.lb[leaving] if hit_lower else self.ub[leaving]
            self.refresh()
        raise RuntimeError(f"simplex did not converge in {max_iter} iterations")

    def dual(self, max_iter: int) -> bool:
        """Restore primal feasibility keeping reduced costs dual feasible.

        Returns False when the row of some infeasible basic variable shows
        the LP has no feasible point.
        """
        nonbasic = np.ones(self.ncols, dtype=bool)
        nonbasic[self.basis] = False
        movable = self.ub > self.lb
        for _ in range(max_iter):
            xb = self.x[self.basis]
            below = self.lb[self.basis] - xb
            above = xb - self.ub[self.basis]
            infeas = np.maximum(below, above)
            r = int(np.argmax(infeas)) if infeas.size else 0
            if infeas.size == 0 or infeas[r] <= TOL_PRIMAL:
                return True
            row = self.T[r, :-1]
            # raising the basic var needs row[j] * dx_j < 0
            raise_it = below[r] > 0
            sgn = -1.0 if raise_it else 1.0
            up = nonbasic & movable & (sgn * row > TOL_PIVOT) & (self.x < self.ub)
            down = nonbasic & movable & (sgn * row < -TOL_PIVOT) & (self.x > self.lb)
            eligible = np.flatnonzero(up | down)
            if eligible.size == 0:
                return False
            ratios = np.abs(self.d[eligible]) / np.abs(row[eligible])
            j = int(eligible[np.argmin(ratios)])
            leaving = int(self.basis[r])
            self.iterations += 1
            self.pivot(r, j)
            nonbasic[leaving] = True
            nonbasic[j] = False
            self.x[leaving] = self.lb[leaving] if raise_it else self.ub[leaving]
            self.refresh()
        raise RuntimeError(f"dual simplex did not converge in {max_iter} iterations")


@dataclass
class LpResult:
    status: Literal["optimal", "infeasible"]
    x: np.ndarray | None = None
    objective: float | None = None
    iterations: int = 0
    state: _Tableau | None = field(default=None, repr=False)
    sign: float = 1.0
    c: np.ndarray | None = field(default=None, repr=False)


def _limit(tab: _Tableau) -> int:
    return 50 * (tab.ncols + tab.basis.size + 10)


def lp_solve(model: LpModel, max_iter: int | None = None) -> LpResult:
    A, b = model.A, model.b
    m, k = A.shape
    sign = -1.0 if model.sense == "max" else 1.0
    slack_lb = np.array([0.0 if s in ("<=", "=") else -np.inf for s in model.senses])
    slack_ub = np.array([0.0 if s in (">=", "=") else np.inf for s in model.senses])

    x0 = np.where(np.isfinite(model.lb), model.lb, np.where(np.isfinite(model.ub), model.ub, 0.0))
    resid = b - A @ x0
    fits = (resid >= slack_lb - TOL_LP) & (resid <= slack_ub + TOL_LP)
    need = np.flatnonzero(~fits)
    art = np.zeros((m, need.size))
    art[need, np.arange(need.size)] = np.where(resid[need] >= 0, 1.0, -1.0)

    M = np.hstack([A, np.eye(m), art])
    lb = np.concatenate([model.lb, slack_lb, np.zeros(need.size)])
    ub = np.concatenate([model.ub, slack_ub, np.full(need.size, np.inf)])
    x = np.concatenate([x0, np.zeros(m + need.size)])
    basis = np.arange(k, k + m)
    basis[need] = k + m + np.arange(need.size)

    tab = _Tableau(M, b.copy(), lb, ub, basis, x)
    limit = max_iter or _limit(tab)
    if need.size:
        phase1 = np.concatenate([np.zeros(k + m), np.ones(need.size)])
        tab.set_cost(phase1)
        tab.primal(limit)
        infeas = float(tab.x[k + m :].sum())
        if infeas > 1e-7 * max(1.0, float(np.abs(b).max(initial=0.0))):
            return LpResult("infeasible", iterations=tab.iterations)
        tab.ub[k + m :] = 0.0
        tab.x[k + m :] = 0.0
        _drive_out_artificials(tab, k + m)
        tab.refresh()

    tab.set_cost(np.concatenate([sign * model.c, np.zeros(m + need.size)]))
    tab.primal(limit)
    return _result(tab, model.c, sign)


def _result(tab: _Tableau, c: np.ndarray, sign: float) -> LpResult:
    xs = tab.x[: c.size].copy()
    return LpResult("optimal", xs, float(c @ xs), tab.iterations, tab, sign, c)


def lp_resolve(parent: LpResult, lb: np.ndarray, ub: np.ndarray, max_iter: int | None = None) -> LpResult:
    """Re-optimize a solved LP after changing structural variable bounds."""
    if parent.state is None:
        raise ValueError("parent LP has no tableau to warm-start from")
    tab = parent.state.copy()
    k = parent.c.size
    tab.lb[:k], tab.ub[:k] = lb, ub
    nonbasic = np.ones(tab.ncols, dtype=bool)
    nonbasic[tab.basis] = False
    for j in np.flatnonzero(nonbasic[:k]):
        if tab.x[j] < lb[j] or tab.x[j] > ub[j] or tab.lb[j] == tab.ub[j]:
            tab.x[j] = lb[j] if (tab.x[j] < lb[j] or tab.d[j] >= 0) else ub[j]
    tab.refresh()
    limit = max_iter or _limit(tab)
    if not tab.dual(limit):
        return LpResult("infeasible", iterations=tab.iterations)
    tab.primal(limit)
    return _result(tab, parent.c, parent.sign)


def _drive_out_artificials(tab: _Tableau, first_art: int) -> None:
    for r in range(tab.basis.size):
        if tab.basis[r] < first_art:
            continue
        row = np.abs(tab.T[r, :first_art])
        row[tab.basis[tab.basis < first_art]] = 0.0
        if row.size and row.max() > 1e-7:
            tab.pivot(r, int(np.argmax(row)))


def simple_model(
    c: Sequence[float],
    rows: Sequence[tuple[Sequence[float], str, float]] = (),
    bounds: Sequence[tuple[float, float]] | None = None,
    sense: Literal["min", "max"] = "min",
) -> LpModel:
    """Convenience constructor from ``(coeffs, sense, rhs)`` rows."""
    k = len(c)
    if bounds is None:
        bounds = [(0.0, np.inf)] * k
    A = np.array([r[0] for r in rows], dtype=float).reshape(len(rows), k)
    return LpModel(
        np.asarray(c, dtype=float),
        A,
        [r[1] for r in rows],
        np.array([r[2] for r in rows], dtype=float),
        np.array([lo for lo, _ in bounds], dtype=float),
        np.array([hi for _, hi in bounds], dtype=float),
        sense=sense,
    )
