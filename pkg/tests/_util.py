"""Small helpers shared by the test modules."""

from fairmatch.gen import complete_instance, random_instance
from fairmatch.model import Instance, Measure, verify
from fairmatch.oracle import brute_force


def complete(counts, k, ell, measure="mov", size_min=0):
    return complete_instance(counts, k, ell, measure, size_min)


def oracle_yes(inst):
    return brute_force(inst) is not None


def assert_agrees(inst, result):
    """``result`` is a matching or None; compare with brute force and verify."""
    truth = oracle_yes(inst)
    assert (result is not None) == truth, inst
    if result is not None:
        assert verify(inst, result).valid


def random_small(rng, n_max=8, k_max=3, c_max=4, ell_max=2, **kw):
    n = int(rng.integers(1, n_max + 1))
    k = int(rng.integers(1, k_max + 1))
    c = int(rng.integers(1, c_max + 1))
    ell = int(rng.integers(0, ell_max + 1))
    kw.setdefault("edge_prob", float(rng.uniform(0.3, 0.9)))
    kw.setdefault("min_left_degree", 1)
    return random_instance(n, k, c, ell, kw.pop("measure", None) or str(rng.choice(["mov", "maxmin"])),
                           seed=int(rng.integers(1 << 31)), **kw)


__all__ = ["Instance", "Measure", "complete", "oracle_yes", "assert_agrees", "random_small"]
