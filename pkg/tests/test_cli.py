import csv
import json

import numpy as np

from fairmatch import solve
from fairmatch.cli import APPLICABLE, builtin_suite, main, route, run_solver, solve_auto
from fairmatch.model import Instance, dump_instance, load_instance, load_matching, verify

from _util import complete, random_small


def _write(tmp_path, inst, name="inst.json"):
    path = tmp_path / name
    dump_instance(inst, path)
    return str(path)


def test_route_examples():
    assert route(complete((2, 2), 2, 0)).solver == "complete"
    two = Instance(2, (0, 1, 0), 2, [(0, 0), (1, 0), (2, 1)], 0, "mov", size_min=2)
    assert route(two).solver == "two-colors"
    five = Instance(3, tuple(u % 3 for u in range(7)), 3,
                    [(u, 0) for u in range(5)] + [(5, 1), (6, 2), (0, 1)], 0, "mov")
    assert five.max_right_degree == 5
    assert route(five).solver == "mov-k"


def test_route_preconditions_hold():
    rng = np.random.default_rng(3)
    for _ in range(200):
        inst = random_small(rng, n_max=9, k_max=4, size_min=int(rng.integers(0, 3)))
        assert APPLICABLE[route(inst).solver](inst)


def test_solve_yes_writes_verified_matching(tmp_path, capsys):
    src = _write(tmp_path, complete((2, 2), 2, 0))
    out = tmp_path / "m.json"
    assert main(["solve", "--input", src, "--output", str(out)]) == 0
    report = json.loads(capsys.readouterr().out)
    assert report["answer"] == "YES" and report["solver"] == "complete"
    assert verify(load_instance(src), load_matching(out)).valid


def test_solve_no(tmp_path):
    assert main(["solve", "--input", _write(tmp_path, complete((3, 1), 1, 1))]) == 1


def test_verify_tampered(tmp_path, capsys):
    inst = Instance(2, (0, 1, 0), 2, [(0, 0), (1, 0), (2, 1)], 1, "mov")
    src = _write(tmp_path, inst)
    good, bad = tmp_path / "good.json", tmp_path / "bad.json"
    good.write_text('{"assign": [0, 0, 1]}')
    bad.write_text('{"assign": [1, 0, 1]}')  # (0, 1) is not an edge
    assert main(["verify", "--input", src, "--matching", str(good)]) == 0
    assert main(["verify", "--input", src, "--matching", str(bad)]) == 1
    assert "edge violation" in capsys.readouterr().out


def test_usage_errors(tmp_path, capsys):
    src = _write(tmp_path, complete((1, 1, 1), 1, 0))
    assert main(["solve", "--input", src, "--algo", "two-colors"]) == 2
    assert main(["solve", "--input", src, "--no-such-flag"]) == 2
    assert main(["verify", "--input", str(tmp_path / "missing.json"), "--matching", "x"]) == 2
    assert "usage" in capsys.readouterr().err


def test_generate_forms(tmp_path):
    for argv in (
        ["random", "--n", "6", "--k", "2", "--colors", "2", "--seed", "1"],
        ["complete", "--counts", "2,1", "--k", "2"],
        ["from-3dm", "--size", "2", "--triples", "3", "--seed", "2", "--variant", "24"],
        ["from-sat", "--num-vars", "3", "--seed", "0"],
    ):
        out = tmp_path / f"{argv[0]}.json"
        assert main(["generate", *argv, "--output", str(out)]) == 0
        assert load_instance(out).n >= 1


def test_dump_ilp(tmp_path):
    src = _write(tmp_path, random_small(np.random.default_rng(0), measure="maxmin"))
    dump = tmp_path / "model.lp"
    assert main(["solve", "--input", src, "--algo", "kc", "--dump-ilp", str(dump)]) in (0, 1)
    assert "subject to" in dump.read_text()


def test_bench_csv(tmp_path):
    out = tmp_path / "bench.csv"
    assert main(["bench", "--suite", "smoke", "--csv-out", str(out)]) == 0
    rows = list(csv.reader(out.open()))
    assert rows[0] == ["instance", "algo", "answer", "millis", "n", "k", "colors", "ell"]
    assert len(rows) > 1


def test_suite_round_trip():
    for name, inst in builtin_suite("smoke"):
        outcome, _ = solve_auto(inst)
        if outcome.matching is not None:
            assert verify(inst, outcome.matching).valid, name


def test_auto_equals_forced():
    rng = np.random.default_rng(9)
    for _ in range(120):
        inst = random_small(rng, n_max=7, size_min=int(rng.integers(0, 2)))
        auto, _ = solve_auto(inst)
        for name, ok in APPLICABLE.items():
            if name in ("mov-k", "targeted-mov") or not ok(inst):
                continue
            forced = run_solver(name, inst)
            assert forced.answer == auto.answer, (name, inst)


def test_package_solve():
    inst = complete((3, 2, 2), 2, 1)
    outcome = solve(inst)
    assert outcome.answer == "YES" and verify(inst, outcome.matching).valid
    assert solve(complete((3, 1), 1, 1)).answer == "NO"


def test_large_k_maxmin_not_routed_to_subset_tables(tmp_path, capsys):
    out = tmp_path / "d.json"
    argv = ["generate", "from-3dm", "--size", "3", "--triples", "5", "--seed", "1", "--variant", "24"]
    assert main([*argv, "--output", str(out)]) == 0
    inst = load_instance(out)
    assert inst.k > 24 and route(inst).solver == "oracle"
    assert main(["solve", "--input", str(out)]) in (0, 1)
