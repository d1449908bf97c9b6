import math

import numpy as np
import pytest

from polybimatroid.bisets import ConstantOracle, GroundSet
from polybimatroid.dcg import DcgConfig, dcg_solve, gap
from polybimatroid.errors import InfeasibleError
from polybimatroid.experiments import derive_params
from polybimatroid.master import MasterInstance
from polybimatroid.polyhedron import TOL_FEAS, violation_tolerance
from polybimatroid.verify import brute_force_min

from conftest import random_entropy_oracle, subsampled_entropy_oracle

WORKED_VALUE = 1.3787834934861753


def worked_instance():
    # locations 1,3 hold type-1 sensors and location 2 type-2 (0-based below)
    return MasterInstance(GroundSet(3), {0, 2}, {1}, 1, 1, 2)


def section6_instance(rng, n):
    p = derive_params(n)
    perm = rng.permutation(n)
    s1 = {int(i) for i in perm[: p.b1]}
    s2 = {int(i) for i in perm[p.b1 : p.b1 + p.b2]}
    return MasterInstance(GroundSet(n), s1, s2, p.b1p, p.b2p, p.w)


def check_run(oracle, inst, b, value, stats):
    assert inst.feasible(b)
    assert oracle.evaluate(b) == value
    assert stats.final_lb <= stats.final_ub + TOL_FEAS
    assert stats.cut_count <= stats.iterations
    assert stats.cut_count == sum(c is not None for _, _, c in stats.trace)
    assert all(a <= b + 1e-12 for a, b in zip(stats.lb_history, stats.lb_history[1:]))
    assert all(a >= b for a, b in zip(stats.ub_history, stats.ub_history[1:]))
    for x, z, cut in stats.trace:
        if cut is not None:
            assert cut.rhs(x) > z + violation_tolerance(z)


def test_worked(table1_oracle):
    inst = worked_instance()
    b, value, stats = dcg_solve(table1_oracle, inst, DcgConfig(epsilon=1e-6))
    assert b.one_based() == "({2},{3})"
    assert value == pytest.approx(WORKED_VALUE, abs=1e-12)
    assert abs(value - 1.38) < 0.005
    assert stats.status == "optimal"
    check_run(table1_oracle, inst, b, value, stats)


def test_zero_oracle_converges_fast():
    oracle = ConstantOracle(4, 0.0)
    inst = MasterInstance.unconstrained(4)
    b, value, stats = dcg_solve(oracle, inst)
    assert value == 0.0
    assert stats.iterations <= 2


@pytest.mark.parametrize("seed", range(20))
def test_matches_brute_force_small(seed):
    rng = np.random.default_rng(500 + seed)
    n = int(rng.integers(3, 7))
    oracle = subsampled_entropy_oracle(rng, n, int(rng.integers(5, 60)))
    inst = section6_instance(rng, n)
    b, value, stats = dcg_solve(oracle, inst)
    best_b, best = brute_force_min(oracle, inst.feasible)
    assert abs(value - best) <= 1e-6 * max(1.0, abs(best))
    check_run(oracle, inst, b, value, stats)
    assert stats.iterations <= 3**n


@pytest.mark.parametrize("seed", range(6))
def test_unconstrained_random_oracle(seed):
    rng = np.random.default_rng(seed)
    oracle = random_entropy_oracle(rng, 4, 12)
    inst = MasterInstance.unconstrained(4)
    b, value, stats = dcg_solve(oracle, inst)
    assert value == pytest.approx(brute_force_min(oracle)[1], abs=1e-9)
    check_run(oracle, inst, b, value, stats)


def test_seed_policy_none(table1_oracle):
    b, value, stats = dcg_solve(table1_oracle, worked_instance(), DcgConfig(seed_policy="none"))
    assert value == pytest.approx(WORKED_VALUE, abs=1e-12)


def test_iteration_limit_warns(table1_oracle):
    with pytest.warns(UserWarning, match="stopped after 1"):
        b, value, stats = dcg_solve(table1_oracle, worked_instance(), DcgConfig(max_iters=1))
    assert stats.status == "iteration_limit"
    assert b is not None and math.isfinite(value)
    assert worked_instance().feasible(b)


def test_infeasible_master(table1_oracle):
    inst = MasterInstance(GroundSet(3), {0}, {1}, 2, 1, 0)
    with pytest.raises(InfeasibleError):
        dcg_solve(table1_oracle, inst)


def test_dimension_mismatch(table1_oracle):
    with pytest.raises(ValueError):
        dcg_solve(table1_oracle, MasterInstance.unconstrained(4))


@pytest.mark.parametrize("kwargs", [dict(epsilon=0), dict(epsilon=-1), dict(max_iters=0), dict(seed_policy="ones")])
def test_config_validation(kwargs):
    with pytest.raises(ValueError):
        DcgConfig(**kwargs)


@pytest.mark.parametrize(
    "lb, ub, expected",
    [(1, 2, 0.5), (1.379, 1.379, 0.0), (-1, 0, 1.0), (0, 0, 0.0), (-math.inf, 3, math.inf), (1, math.inf, math.inf)],
)
def test_gap(lb, ub, expected):
    assert gap(lb, ub) == expected


def test_deterministic(table1_oracle):
    runs = [dcg_solve(table1_oracle, worked_instance()) for _ in range(2)]
    (b1, v1, s1), (b2, v2, s2) = runs
    assert (b1, v1, s1.cut_count, s1.node_count, s1.lb_history) == (b2, v2, s2.cut_count, s2.node_count, s2.lb_history)
