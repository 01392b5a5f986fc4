"""Acceptance criteria 1-11, each at its stated tolerance.

The whole table is produced by the command-line runner (``meanlab verify
--suite all --seed 7``) once with one thread and once with four; every
criterion prints one PASS/FAIL line, and the two report bodies must be
byte-identical.
"""
import json
import sys
from fractions import Fraction
import time

import pytest

from meanlab.cli import main

SEED = "7"
IDS = list(range(1, 12))


def _run(tmp_path_factory, threads):
    out = tmp_path_factory.mktemp("verify") / f"t{threads}.json"
    t0 = time.perf_counter()
    code = main(["verify", "--suite", "all", "--seed", SEED, "--threads", str(threads), "--out", str(out)])
    return code, out.read_text(), time.perf_counter() - t0


@pytest.fixture(scope="module")
def reports(tmp_path_factory):
    return _run(tmp_path_factory, 1), _run(tmp_path_factory, 4)


@pytest.fixture(scope="module")
def rows(reports):
    (_, text, _), _ = reports
    return {r["id"]: r for r in json.loads(text)["body"]["rows"]}


def _line(row):
    measured = json.dumps(row["measured"], sort_keys=True)
    if len(measured) > 160:
        measured = measured[:157] + "..."
    return f"criterion {row['id']:>2} {'PASS' if row['passed'] else 'FAIL'} [{row['mode']}] {row['criterion']}: {measured}"


@pytest.mark.parametrize("cid", IDS)
def test_criterion(rows, cid, capsys):
    row = rows[cid]
    with capsys.disabled():
        sys.stdout.write("\n" + _line(row))
    assert row["passed"], row["measured"]


def test_exit_code_and_runtime(reports):
    (code1, _, t1), (code4, _, t4) = reports
    assert code1 == code4 == 0
    # the declared budget for the full table is ten minutes
    assert t1 < 600 and t4 < 600


def test_bodies_identical_across_thread_counts(reports, capsys):
    (_, a, _), (_, b, _) = reports
    ja, jb = json.loads(a), json.loads(b)
    same = json.dumps(ja["body"], sort_keys=True) == json.dumps(jb["body"], sort_keys=True)
    with capsys.disabled():
        sys.stdout.write(f"\nverify --suite all --seed {SEED}: threads 1 vs 4 bodies "
                         f"{'identical' if same else 'DIFFER'}\n")
    assert same
    assert ja["header"]["config"]["threads"] == 1 and jb["header"]["config"]["threads"] == 4


def test_spot_values(rows):
    # a few measured numbers pinned against their oracles
    assert Fraction(rows[2]["measured"]["bd_upper_lower"]) >= Fraction(11, 12)
    assert Fraction(rows[2]["measured"]["centered_ratio_at_2^14"]) < Fraction(1, 100)
    assert rows[4]["measured"]["fullshift:2"] == "sensitive-certified"
    assert rows[4]["measured"]["sturmian:golden"] == "almost-equicontinuous-empirical"
    assert float(rows[5]["measured"]["golden_error"]) <= 1e-6
    assert float(rows[6]["measured"]["bound_n30"]) <= 0.12
    assert rows[7]["measured"]["phi_mismatches"] == 0
    assert rows[10]["measured"]["finite_intersection"] == "200/200"


if __name__ == "__main__":
    import tempfile

    with tempfile.TemporaryDirectory() as d:
        code = main(["verify", "--suite", "all", "--seed", SEED, "--out", f"{d}/r.json"])
        with open(f"{d}/r.json") as fh:
            for row in json.load(fh)["body"]["rows"]:
                print(_line(row))
    sys.exit(code)
