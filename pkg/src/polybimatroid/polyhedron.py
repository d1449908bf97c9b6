"""Extreme points of the bisubmodular polyhedron and the separation oracle.

The polyhedron is ``P_f = {pi : pi(S1) - pi(S2) <= f(S1, S2) for all bisets}``.
Its vertices are produced by the signed greedy procedure from an ordering
of the ground set and a sign per element; sorting by ``|xbar|`` and taking
signs from ``xbar`` yields a vertex maximizing ``pi @ xbar``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .bisets import Biset, FunctionOracle, all_bisets

TOL_FEAS = 1e-9
TOL_VIOLATION = 1e-6


def violation_tolerance(zbar: float) -> float:
    return TOL_VIOLATION * max(1.0, abs(zbar))


@dataclass(frozen=True)
class OrderSignPair:
    order: tuple[int, ...]
    signs: tuple[int, ...]

    def __post_init__(self) -> None:
        n = len(self.order)
        if sorted(self.order) != list(range(n)):
            raise ValueError(f"order {self.order} is not a permutation of 0..{n - 1}")
        if len(self.signs) != n:
            raise ValueError(f"{len(self.signs)} signs for {n} elements")
        if any(s not in (-1, 1) for s in self.signs):
            raise ValueError(f"signs must be +1/-1, got {self.signs}")

    @property
    def n(self) -> int:
        return len(self.order)


@dataclass(frozen=True)
class PolyVertex:
    pi: tuple[float, ...]
    origin: OrderSignPair | None = field(default=None, compare=False)

    def value(self, x: Sequence[float]) -> float:
        return float(np.dot(self.pi, x))


@dataclass(frozen=True)
class Cut:
    """The inequality ``z >= pi @ x``."""

    pi: tuple[float, ...]
    origin: OrderSignPair | None = field(default=None, compare=False)

    @classmethod
    def from_vertex(cls, v: PolyVertex) -> Cut:
        return cls(v.pi, v.origin)

    def rhs(self, x: Sequence[float]) -> float:
        return float(np.dot(self.pi, x))

    def violation(self, x: Sequence[float], z: float) -> float:
        return self.rhs(x) - z


def _greedy(oracle: FunctionOracle, order: Sequence[int], plus: Sequence[bool]) -> tuple[float, ...]:
    # plus[k] says whether order[k] joins S1
    n = oracle.n
    pi = [0.0] * n
    s1: set[int] = set()
    s2: set[int] = set()
    for e, to_s1 in zip(order, plus):
        base = oracle(s1, s2)
        if to_s1:
            pi[e] = oracle(s1 | {e}, s2) - base
            s1.add(e)
        else:
            pi[e] = -oracle(s1, s2 | {e}) + base
            s2.add(e)
    return tuple(pi)


def signed_greedy(oracle: FunctionOracle, os: OrderSignPair) -> PolyVertex:
    """Vertex of ``P_f`` consistent with ``os``.

    Element ``order[k]`` goes to S1 when ``signs[order[k]] == +1`` (signs are
    indexed by element, not by position) and its coordinate is the marginal
    value of adding it there.
    """
    if os.n != oracle.n:
        raise ValueError(f"order/sign pair over n={os.n}, oracle over n={oracle.n}")
    pi = _greedy(oracle, os.order, [os.signs[e] == 1 for e in os.order])
    return PolyVertex(pi, os)


def greedy_order(xbar: Sequence[float]) -> OrderSignPair:
    """Order by non-increasing ``|xbar|`` (stable on index) and sign of ``xbar``.

    Zero entries count as nonnegative.
    """
    xs = np.asarray(xbar, dtype=float)
    if xs.ndim != 1:
        raise ValueError("xbar must be one-dimensional")
    if np.isnan(xs).any():
        raise ValueError("xbar contains NaN")
    order = sorted(range(len(xs)), key=lambda i: -abs(xs[i]))
    signs = tuple(1 if v >= 0 else -1 for v in xs)
    return OrderSignPair(tuple(order), signs)


def generalized_greedy(oracle: FunctionOracle, xbar: Sequence[float]) -> PolyVertex:
    """Maximize ``pi @ xbar`` over ``P_f``."""
    if len(xbar) != oracle.n:
        raise ValueError(f"xbar of length {len(xbar)}, oracle over n={oracle.n}")
    return signed_greedy(oracle, greedy_order(xbar))


def separate(oracle: FunctionOracle, xbar: Sequence[float], zbar: float) -> Cut | None:
    """Most violated extremal cut at ``(xbar, zbar)``, or None if none is violated."""
    v = generalized_greedy(oracle, xbar)
    if v.value(xbar) > zbar + violation_tolerance(zbar):
        return Cut.from_vertex(v)
    return None


MAX_BRUTEFORCE_N = 12


def membership_bruteforce(oracle: FunctionOracle, pi: Sequence[float], tol: float = TOL_FEAS) -> bool:
    """Check every defining inequality of ``P_f``; exponential in n."""
    n = oracle.n
    if n > MAX_BRUTEFORCE_N:
        raise ValueError(f"refusing 3^{n} enumeration (limit n <= {MAX_BRUTEFORCE_N})")
    if len(pi) != n:
        raise ValueError(f"pi of length {len(pi)}, oracle over n={n}")
    return first_violated_biset(oracle, pi, tol) is None


def first_violated_biset(oracle: FunctionOracle, pi: Sequence[float], tol: float = TOL_FEAS) -> Biset | None:
    for b in all_bisets(oracle.n):
        lhs = sum(pi[i] for i in b.s1) - sum(pi[j] for j in b.s2)
        if lhs > oracle.evaluate(b) + tol:
            return b
    return None
