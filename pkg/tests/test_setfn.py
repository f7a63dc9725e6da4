import pytest

from fairmatch.errors import InputError
from fairmatch.gen import random_instance
from fairmatch.model import Instance
from fairmatch.setfn import (
    SeparationPreconditionError, SetFunctionTable, check_modular, check_supermodular,
    convolve_max, find_touching_separator, n_c, nu_c, nu_table,
)

# u0 - v0, u1 - v0, u1 - v1; one color
PATH = Instance(1, (0, 0), 2, [(0, 0), (1, 0), (1, 1)], 0, "mov")


def test_nu_path():
    assert nu_c(PATH, 0, {0}) == 1
    assert nu_c(PATH, 0, {0, 1}) == 2
    assert nu_c(PATH, 0, set()) == 0


def test_n_path():
    assert n_c(PATH, 0, {1}) == 1
    assert n_c(PATH, 0, set()) == 0
    assert n_c(PATH, 0, 0b11) == 2


def test_full_side_with_isolated():
    inst = Instance(1, (0, 0, 0), 2, [(0, 0), (1, 1)], 0, "mov")
    assert nu_c(inst, 0, {0, 1}) == 3
    assert n_c(inst, 0, {0, 1}) == 2


def test_bad_color():
    with pytest.raises(InputError):
        nu_c(PATH, 1, {0})


def test_modular_examples():
    assert check_modular(SetFunctionTable.from_singletons([1, 1, 1]))
    assert not check_modular([0, 1, 1, 4])
    assert check_modular([3] * 8)


def test_supermodular_examples():
    assert check_supermodular(SetFunctionTable.from_singletons([2, -1, 5]))
    assert not check_supermodular([0, 1, 1, 1])


def test_nu_tables_supermodular():
    for seed in range(40):
        inst = random_instance(9, 4, 3, seed=seed, edge_prob=0.4)
        for c in range(inst.num_colors):
            assert check_supermodular(nu_table(inst, c))


def test_table_validation():
    with pytest.raises(InputError):
        SetFunctionTable(2, (0, 1, 2))


def test_separator_single_element():
    sep = find_touching_separator([0, 1], [0, 3], [0, 2])
    assert sep.singletons == (2,) and sep.touching_value == 2


def test_separator_zero():
    sep = find_touching_separator([0] * 4, SetFunctionTable.from_singletons([2, 1]), [0] * 4)
    assert list(sep.table.values) == [0] * 4


def test_separator_forced():
    f = SetFunctionTable.from_singletons([1, 2, 0])
    g = [0, 1, 1, 2, 0, 1, 2, 3]  # g <= f and supermodular
    assert check_supermodular(g)
    sep = find_touching_separator(f, f, g)
    assert sep.table.values == f.values


def test_separator_reports_failures():
    with pytest.raises(SeparationPreconditionError) as exc:
        find_touching_separator([0, 1, 1, 4], [0, 1, 1, 4], [0, 1, 1, 1])
    text = " ".join(exc.value.failures)
    assert "not modular" in text and "not supermodular" in text


def test_convolve_max_small():
    out = convolve_max([0, 2], [0, 1])
    assert out.tolist() == [0, 2]


def test_convolve_max_includes_empty_part():
    # f dominates g on the singleton, so the best split puts everything in f
    assert convolve_max([0, 1], [0, 2]).tolist() == [0, 2]
