"""Exhaustive certification and ground-truth oracles for small ground sets.

Everything here enumerates 3^N (or worse) and is meant for tests, the
``check`` command and ``--verify`` cross-checks.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Callable, Literal

import numpy as np

from .bisets import Biset, FunctionOracle, all_bisets
from .errors import InfeasibleError
from .polyhedron import TOL_FEAS, OrderSignPair, PolyVertex, signed_greedy

MAX_CHECK_N = 8
MAX_MIN_N = 12
MAX_ENUM_N = 6


@dataclass(frozen=True)
class Violation:
    """A witnessed failure of ``lhs >= rhs``.

    ``witness`` depends on ``kind``: ``direct`` carries the two bisets,
    ``A1`` carries ``((S, T), X, Y)`` for a partition and two subsets, and
    ``A2`` carries ``(biset, i)``.
    """

    kind: Literal["direct", "A1", "A2"]
    witness: tuple
    lhs: float
    rhs: float


def _guard(n: int, limit: int, what: str) -> None:
    if n > limit:
        raise ValueError(f"{what} enumerates exponentially; refusing n={n} > {limit}")


class _Tables:
    """All 3^n bisets as bitmask pairs, their values, and a mask-pair -> key map."""

    def __init__(self, oracle: FunctionOracle) -> None:
        n = oracle.n
        self.n = n
        self.bisets = list(all_bisets(n))
        self.m1 = np.array([sum(1 << i for i in b.s1) for b in self.bisets], dtype=np.int64)
        self.m2 = np.array([sum(1 << i for i in b.s2) for b in self.bisets], dtype=np.int64)
        self.values = np.array([oracle.evaluate(b) for b in self.bisets])
        self.key_of = np.full(1 << (2 * n), -1, dtype=np.int64)
        self.key_of[(self.m1 << n) | self.m2] = np.arange(len(self.bisets))

    def lookup(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        return self.values[self.key_of[(a << self.n) | b]]


def check_direct(oracle: FunctionOracle, tol: float = TOL_FEAS) -> Violation | None:
    """Test the defining bisubmodular inequality on every pair of bisets."""
    _guard(oracle.n, MAX_CHECK_N, "check_direct")
    t = _Tables(oracle)
    full = (1 << t.n) - 1
    for kx in range(len(t.bisets)):
        # the inequality is symmetric in X and Y
        ys = slice(0, kx + 1)
        x1, x2 = t.m1[kx], t.m2[kx]
        y1, y2 = t.m1[ys], t.m2[ys]
        u1, u2 = x1 | y1, x2 | y2
        lhs = t.values[kx] + t.values[ys]
        rhs = t.lookup(x1 & y1, x2 & y2) + t.lookup(u1 & ~u2 & full, u2 & ~u1 & full)
        bad = np.nonzero(lhs < rhs - tol)[0]
        if bad.size:
            ky = int(bad[0])
            return Violation("direct", (t.bisets[kx], t.bisets[ky]), float(lhs[ky]), float(rhs[ky]))
    return None


def _mask_set(mask: int, n: int) -> frozenset[int]:
    return frozenset(i for i in range(n) if mask >> i & 1)


def check_ando(oracle: FunctionOracle, tol: float = TOL_FEAS) -> Violation | None:
    """Test submodularity over every partition (A1), then the singleton exchange (A2)."""
    n = oracle.n
    _guard(n, MAX_CHECK_N, "check_ando")
    t = _Tables(oracle)
    full = (1 << n) - 1
    subsets = np.arange(1 << n, dtype=np.int64)
    for s in range(1 << n):
        tt = full & ~s
        fp = t.lookup(subsets & s, subsets & tt)
        for x in range(1 << n):
            lhs = fp[x] + fp
            rhs = fp[x & subsets] + fp[x | subsets]
            bad = np.nonzero(lhs < rhs - tol)[0]
            if bad.size:
                y = int(bad[0])
                witness = ((_mask_set(s, n), _mask_set(tt, n)), _mask_set(x, n), _mask_set(y, n))
                return Violation("A1", witness, float(lhs[y]), float(rhs[y]))
    for k, b in enumerate(t.bisets):
        m1, m2 = int(t.m1[k]), int(t.m2[k])
        for i in range(n):
            bit = 1 << i
            if (m1 | m2) & bit:
                continue
            lhs = t.lookup(np.int64(m1 | bit), np.int64(m2)) + t.lookup(np.int64(m1), np.int64(m2 | bit))
            rhs = 2.0 * t.values[k]
            if lhs < rhs - tol:
                return Violation("A2", (b, i), float(lhs), float(rhs))
    return None


def is_bisubmodular(oracle: FunctionOracle, tol: float = TOL_FEAS) -> bool:
    return check_ando(oracle, tol) is None


def brute_force_min(
    oracle: FunctionOracle, feasible: Callable[[Biset], bool] | None = None
) -> tuple[Biset, float]:
    """Exact minimizer over feasible bisets; ties go to the smallest canonical key."""
    _guard(oracle.n, MAX_MIN_N, "brute_force_min")
    best: tuple[Biset, float] | None = None
    for b in all_bisets(oracle.n):
        if feasible is not None and not feasible(b):
            continue
        v = oracle.evaluate(b)
        if best is None or v < best[1]:
            best = (b, v)
    if best is None:
        raise InfeasibleError("no feasible biset")
    return best


def enumerate_vertices(oracle: FunctionOracle, tol: float = TOL_FEAS) -> list[PolyVertex]:
    """Signed-greedy output for every order/sign pair, deduplicated.

    Vectors are identified after snapping to a grid of spacing ``tol``.
    """
    n = oracle.n
    _guard(n, MAX_ENUM_N, "enumerate_vertices")
    found: dict[tuple[int, ...], PolyVertex] = {}
    for order in itertools.permutations(range(n)):
        for signs in itertools.product((1, -1), repeat=n):
            v = signed_greedy(oracle, OrderSignPair(order, signs))
            key = tuple(int(k) for k in np.round(np.asarray(v.pi) / tol))
            found.setdefault(key, v)
    return list(found.values())
