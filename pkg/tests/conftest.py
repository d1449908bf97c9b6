import numpy as np
import pytest

from polybimatroid.bisets import TableOracle, all_bisets
from polybimatroid.entropy import DiscreteReadings, EntropyOracle
from polybimatroid.experiments import fixture_path, load_discrete

# three-location worked example, straight from its source table
TABLE1_TEMP = {
    1: "low low low high high high low".split(),
    2: "low low low low low high low".split(),
    3: "high high high high high low low".split(),
}
TABLE1_HUMID = {
    1: "humid dry dry dry dry dry humid".split(),
    2: "humid humid dry dry dry humid dry".split(),
    3: "humid humid dry dry humid humid humid".split(),
}


@pytest.fixture
def table1_path():
    return fixture_path("table1")


@pytest.fixture
def table1_oracle():
    return EntropyOracle(load_discrete("table1"))


def random_entropy_oracle(rng: np.random.Generator, n: int, t: int, k1: int = 3, k2: int = 2) -> EntropyOracle:
    temp = rng.integers(0, k1, size=(n, t))
    humid = rng.integers(0, k2, size=(n, t))
    return EntropyOracle(DiscreteReadings(temp, humid, k1, k2))


def random_table_oracle(rng: np.random.Generator, n: int) -> TableOracle:
    values = rng.uniform(-1.0, 1.0, size=3**n)
    values[0] = 0.0
    return TableOracle(n, values, memoize=True)


def subsampled_entropy_oracle(rng: np.random.Generator, n: int, t: int) -> EntropyOracle:
    readings = load_discrete("synthetic")
    rows = np.sort(rng.choice(readings.n, size=n, replace=False))
    cols = np.sort(rng.choice(readings.t, size=t, replace=False))
    return EntropyOracle(readings.subset(rows, cols))


def ternary_points(n: int):
    return [b.ternary() for b in all_bisets(n)]


def facet_points(v, oracle):
    """The n+1 points of the facet-support construction for vertex v."""
    order, signs = v.origin.order, v.origin.signs
    n = len(order)
    pts = []
    for i in range(n):
        x = [signs[e] for e in range(n)]
        for e in order[i:]:
            x[e] = 0
        pts.append(tuple(x))
    pts.append(tuple(signs))
    return [(x, oracle.at(x)) for x in pts]
