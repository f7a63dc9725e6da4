import itertools

import numpy as np
import pytest

from fairmatch.errors import InputError, ResourceError
from fairmatch.ilp import IlpModel, solve_feasibility


def test_contradictory_bounds():
    m = IlpModel()
    m.add_var("x", 0, 5)
    m.ge({"x": 1}, 1)
    m.le({"x": 1}, 0)
    assert solve_feasibility(m) is None


def test_forced_point():
    m = IlpModel()
    m.add_var("x", 0, 1)
    m.add_var("y", 0, 1)
    m.eq({"x": 1, "y": 1}, 2)
    assert solve_feasibility(m) == {"x": 1, "y": 1}


def test_band():
    m = IlpModel()
    for v in "xy":
        m.add_var(v, 0, 3)
    m.le({"x": 1, "y": -1}, 1)
    m.le({"y": 1, "x": -1}, 1)
    m.eq({"x": 1, "y": 1}, 4)
    sol = solve_feasibility(m)
    assert sol is not None and m.check(sol)


def test_variable_budget():
    m = IlpModel()
    for i in range(5):
        m.add_var(i, 0, 1)
    with pytest.raises(ResourceError):
        solve_feasibility(m, max_vars=4)


def test_model_errors():
    m = IlpModel()
    m.add_var("x", 0, 1)
    with pytest.raises(InputError):
        m.add_var("x", 0, 1)
    with pytest.raises(InputError):
        m.le({"y": 1}, 0)
    with pytest.raises(InputError):
        m.add_var("z", 2, 1)


def test_dump_lists_constraints():
    m = IlpModel("demo")
    m.add_var(("z", 0, 1), 0, 4)
    m.ge({("z", 0, 1): 2}, 1, label="lower")
    text = m.dump()
    assert "lower:" in text and ">= 1" in text and "bounds" in text


def _random_model(rng):
    nv = int(rng.integers(1, 5))
    m = IlpModel()
    for i in range(nv):
        m.add_var(i, int(rng.integers(-2, 1)), int(rng.integers(0, 3)))
    for _ in range(int(rng.integers(1, 5))):
        coeffs = {i: int(rng.integers(-3, 4)) for i in range(nv) if rng.random() < 0.7}
        if coeffs:
            m.add_constraint(coeffs, str(rng.choice(["<=", ">=", "="])), int(rng.integers(-4, 5)))
    return m


def test_fuzz_against_enumeration():
    rng = np.random.default_rng(7)
    for _ in range(400):
        m = _random_model(rng)
        boxes = [range(lo, hi + 1) for lo, hi in zip(m.lower, m.upper)]
        truth = any(m.check(dict(zip(m.names, p))) for p in itertools.product(*boxes))
        sol = solve_feasibility(m)
        assert (sol is not None) == truth
        if sol is not None:
            assert m.check(sol)
