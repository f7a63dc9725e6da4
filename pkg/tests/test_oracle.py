import numpy as np
import pytest

from fairmatch.errors import ResourceError
from fairmatch.model import Instance, verify
from fairmatch.oracle import backtrack, brute_force, solve_oracle, subset_dp, subset_dp_matching

from _util import complete, random_small


def test_examples():
    assert brute_force(Instance(1, (0, 0), 1, [(0, 0)], 0, "mov")) is None
    assert brute_force(Instance(1, (0,), 1, [(0, 0)], 0, "maxmin")).assign == (0,)
    # one color under MoV: the second-largest count is 0, so MoV is 1
    assert brute_force(Instance(1, (0,), 1, [(0, 0)], 0, "mov")) is None
    assert brute_force(complete((2, 1), 1, 0)) is None


def test_budget():
    inst = complete((6, 6), 4, 0)
    with pytest.raises(ResourceError):
        brute_force(inst, budget=1000)


def test_dp_limit():
    with pytest.raises(ResourceError):
        subset_dp(complete((11, 10), 1, 0))


def test_all_oracles_agree():
    rng = np.random.default_rng(21)
    for i in range(400):
        inst = random_small(rng, size_min=int(rng.integers(0, 2)),
                            size_max=None if i % 3 else int(rng.integers(2, 5)))
        truth = brute_force(inst)
        assert subset_dp(inst) == (truth is not None)
        for got in (subset_dp_matching(inst), backtrack(inst), solve_oracle(inst)):
            assert (got is not None) == (truth is not None)
            if got is not None:
                assert verify(inst, got).valid
