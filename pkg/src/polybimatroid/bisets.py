"""Ground sets, bisets, ternary vectors and bisubmodular function oracles.

A biset is an ordered pair ``(S1, S2)`` of disjoint subsets of the ground
set ``{0, ..., n-1}``. Its ternary characteristic vector has ``+1`` on S1,
``-1`` on S2 and ``0`` elsewhere.
"""

from __future__ import annotations

import itertools
from abc import ABC, abstractmethod
from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence


@dataclass(frozen=True)
class GroundSet:
    n: int

    def __post_init__(self) -> None:
        if self.n < 1:
            raise ValueError(f"ground set needs n >= 1, got {self.n}")

    def __iter__(self) -> Iterator[int]:
        return iter(range(self.n))

    def __len__(self) -> int:
        return self.n


@dataclass(frozen=True)
class Biset:
    """Pair of disjoint index sets over a ground set of size ``n``."""

    s1: frozenset[int]
    s2: frozenset[int]
    n: int

    def __init__(self, s1: Iterable[int], s2: Iterable[int], n: int) -> None:
        a, b = frozenset(s1), frozenset(s2)
        if n < 1:
            raise ValueError(f"ground set needs n >= 1, got {n}")
        if a & b:
            raise ValueError(f"S1 and S2 overlap on {sorted(a & b)}")
        bad = sorted(i for i in a | b if not 0 <= i < n)
        if bad:
            raise ValueError(f"indices {bad} outside ground set of size {n}")
        object.__setattr__(self, "s1", a)
        object.__setattr__(self, "s2", b)
        object.__setattr__(self, "n", n)

    @classmethod
    def empty(cls, n: int) -> Biset:
        return cls((), (), n)

    @property
    def ground(self) -> GroundSet:
        return GroundSet(self.n)

    @property
    def support(self) -> frozenset[int]:
        return self.s1 | self.s2

    def key(self) -> int:
        return canonical_key(self)

    def ternary(self) -> tuple[int, ...]:
        return biset_to_ternary(self)

    def one_based(self) -> str:
        """Render as ``({1,3},{2})`` with 1-based indices."""
        fmt = lambda s: "{" + ",".join(str(i + 1) for i in sorted(s)) + "}"
        return f"({fmt(self.s1)},{fmt(self.s2)})"

    def __repr__(self) -> str:
        return f"Biset({sorted(self.s1)}, {sorted(self.s2)}, n={self.n})"


def biset_to_ternary(b: Biset) -> tuple[int, ...]:
    return tuple(1 if i in b.s1 else -1 if i in b.s2 else 0 for i in range(b.n))


def ternary_to_biset(x: Sequence[float]) -> Biset:
    s1, s2 = [], []
    for i, v in enumerate(x):
        if v == 1:
            s1.append(i)
        elif v == -1:
            s2.append(i)
        elif v != 0:
            raise ValueError(f"entry {i} is {v!r}, expected -1, 0 or +1")
    return Biset(s1, s2, len(x))


def canonical_key(b: Biset) -> int:
    """Ternary vector read as a base-3 numeral, index 0 most significant.

    Digits are 0 for absent, 1 for S1 and 2 for S2.
    """
    key = 0
    for i in range(b.n):
        key = 3 * key + (1 if i in b.s1 else 2 if i in b.s2 else 0)
    return key


def all_bisets(n: int) -> Iterator[Biset]:
    """Every member of 3^N, in increasing canonical-key order."""
    for digits in itertools.product((0, 1, 2), repeat=n):
        yield Biset(
            (i for i, d in enumerate(digits) if d == 1),
            (i for i, d in enumerate(digits) if d == 2),
            n,
        )


class FunctionOracle(ABC):
    """Value oracle for a function on 3^N.

    Subclasses implement :meth:`_value`. With ``memoize=True`` results are
    cached by canonical key, so repeated evaluations return the identical
    float. ``calls`` counts evaluations that reached ``_value``.
    """

    def __init__(self, n: int, memoize: bool = False) -> None:
        self.ground = GroundSet(n)
        self.memoize = memoize
        self.calls = 0
        self._cache: dict[int, float] = {}

    @property
    def n(self) -> int:
        return self.ground.n

    @abstractmethod
    def _value(self, s1: frozenset[int], s2: frozenset[int]) -> float:
        ...

    def evaluate(self, b: Biset) -> float:
        if b.n != self.n:
            raise ValueError(f"biset over n={b.n}, oracle over n={self.n}")
        if not self.memoize:
            self.calls += 1
            return float(self._value(b.s1, b.s2))
        k = canonical_key(b)
        try:
            return self._cache[k]
        except KeyError:
            self.calls += 1
            v = self._cache[k] = float(self._value(b.s1, b.s2))
            return v

    def __call__(self, s1: Iterable[int] = (), s2: Iterable[int] = ()) -> float:
        return self.evaluate(Biset(s1, s2, self.n))

    def at(self, x: Sequence[float]) -> float:
        """Evaluate at a ternary vector."""
        if len(x) != self.n:
            raise ValueError(f"vector of length {len(x)}, oracle over n={self.n}")
        return self.evaluate(ternary_to_biset(x))

    def clear_cache(self) -> None:
        self._cache.clear()


def evaluate(oracle: FunctionOracle, b: Biset) -> float:
    return oracle.evaluate(b)


class ModularOracle(FunctionOracle):
    """f(S1, S2) = w(S1) - w(S2)."""

    def __init__(self, weights: Sequence[float], memoize: bool = False) -> None:
        super().__init__(len(weights), memoize)
        self.weights = tuple(float(w) for w in weights)

    def _value(self, s1, s2):
        return sum(self.weights[i] for i in s1) - sum(self.weights[j] for j in s2)


class TableOracle(FunctionOracle):
    """Explicit lookup table indexed by canonical key."""

    def __init__(self, n: int, values: Sequence[float] | dict[int, float], memoize: bool = False) -> None:
        super().__init__(n, memoize)
        if isinstance(values, dict):
            values = [values[k] for k in range(3**n)]
        if len(values) != 3**n:
            raise ValueError(f"need 3^{n} = {3**n} values, got {len(values)}")
        self.values = [float(v) for v in values]

    def _value(self, s1, s2):
        return self.values[canonical_key(Biset(s1, s2, self.n))]

    @classmethod
    def from_function(cls, n: int, fn, memoize: bool = False) -> TableOracle:
        return cls(n, [fn(b) for b in all_bisets(n)], memoize)


class ConstantOracle(FunctionOracle):
    """Constant ``c`` off the empty biset, 0 on it."""

    def __init__(self, n: int, c: float = 0.0, memoize: bool = False) -> None:
        super().__init__(n, memoize)
        self.c = float(c)

    def _value(self, s1, s2):
        return self.c if (s1 or s2) else 0.0
