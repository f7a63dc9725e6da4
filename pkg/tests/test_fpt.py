import numpy as np
import pytest

from fairmatch.errors import InputError, ResourceError
from fairmatch.fpt import (
    TargetSpec, solve_kc, solve_maxmin_k, solve_maxmin_k_nonempty, solve_mov_k, solve_targeted_mov,
    token_partitions,
)
from fairmatch.model import Instance

from _util import assert_agrees, complete, random_small


def test_kc_examples():
    assert solve_kc(Instance(1, (0, 0), 1, [(0, 0)], 0, "mov")) is None
    assert solve_kc(complete((1, 1), 1, 0, "maxmin")).assign == (0, 0)
    assert solve_kc(complete((2, 1), 1, 0)) is None


def test_maxmin_k_examples():
    assert solve_maxmin_k(complete((3, 3), 1, 0, "maxmin")) is not None
    assert solve_maxmin_k(complete((5, 1), 2, 0, "maxmin")) is None


def test_maxmin_k_nonempty_examples():
    assert solve_maxmin_k_nonempty(complete((1, 1), 3, 1, "maxmin", 1)) is None
    got = solve_maxmin_k_nonempty(complete((2, 2), 2, 0, "maxmin", 1))
    assert got is not None
    assert solve_maxmin_k_nonempty(complete((3, 1), 2, 1, "maxmin", 1)) is not None


def test_targeted_examples():
    inst = complete((2, 2), 1, 0)
    assert solve_targeted_mov(inst, TargetSpec((0,), (1,))) is not None
    with pytest.raises(InputError):
        TargetSpec((0,), (0,))
    lone = Instance(2, (0,), 1, [(0, 0)], 0, "mov", size_min=1)
    assert solve_targeted_mov(lone, TargetSpec((0,), (1,)), nonempty=True) is None
    with pytest.raises(InputError):
        solve_targeted_mov(inst, TargetSpec((0,), (5,)))


def test_mov_k_examples():
    inst = complete((2, 2, 1), 1, 0)
    a = solve_mov_k(inst, seed=4)
    assert a is not None
    assert solve_mov_k(inst, seed=4) == a
    assert solve_mov_k(complete((2, 1), 1, 0), seed=0) is None
    with pytest.raises(ResourceError):
        solve_mov_k(complete((2, 1), 6, 0), seed=0)


def test_token_partitions_keep_pairs_apart():
    for part in token_partitions(2):
        for block in part:
            assert not any(t % 2 == 0 and t + 1 in block for t in block)
    assert len(token_partitions(1)) == 1


def test_exact_fpt_solvers_agree_with_oracle():
    rng = np.random.default_rng(31)
    for _ in range(150):
        inst = random_small(rng, n_max=7, size_min=int(rng.integers(0, 2)))
        assert_agrees(inst, solve_kc(inst))
        if inst.measure.value == "maxmin":
            if inst.size_free:
                assert_agrees(inst, solve_maxmin_k(inst))
            else:
                assert_agrees(inst, solve_maxmin_k_nonempty(inst))


def test_mov_k_one_sided():
    rng = np.random.default_rng(41)
    for _ in range(40):
        inst = random_small(rng, n_max=6, k_max=2, measure="mov")
        got = solve_mov_k(inst, rounds=40, seed=1)
        if got is not None:
            assert_agrees(inst, got)
