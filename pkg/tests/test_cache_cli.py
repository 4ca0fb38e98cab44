import io
import json
import os
import subprocess
import sys

import pytest

from partmod4 import cli
from partmod4.cache import SCHEMA_VERSION, CacheStore


def run(argv, capsys):
    buf = io.StringIO()
    code = cli.main(argv, out=buf)
    err = capsys.readouterr().err
    return code, buf.getvalue(), err


def stats_of(err):
    line = [l for l in err.splitlines() if l.startswith('{"cache"')][-1]
    return json.loads(line)["cache"]


def test_partition_commands(cache_root, capsys):
    assert run(["partition", "4"], capsys)[1] == "5\n"
    assert run(["partition", "0"], capsys)[1] == "1\n"
    assert run(["partition", "--upto", "10", "--mod", "4"], capsys)[1] == "1,1,2,3,1,3,3,3,2,2,2\n"
    code, _, err = run(["partition", "-3"], capsys)
    assert code == 2 and err.startswith("error:")


def test_class_and_errors(cache_root, capsys):
    code, out, _ = run(["class", "23"], capsys)
    payload = json.loads(out)
    assert code == 0 and payload["h"] == 3 and payload["forms"][0] == [1, 1, 6]
    for bad in ("24", "19", "575"):
        code, out, err = run(["class", bad], capsys)
        assert code == 2 and out == "" and "error" in err


def test_hilbert_cached_second_call(cache_root, capsys, monkeypatch):
    code, first, err = run(["--stats", "hilbert", "23"], capsys)
    assert code == 0 and stats_of(err)["writes"] == 2
    assert json.loads(first)["hilbert"] == ["12771880859375", "-5151296875", "3491750", "1"]

    def boom(*a, **k):
        raise AssertionError("recomputed despite cache hit")
    monkeypatch.setattr(cli, "hilbert_poly", boom)
    monkeypatch.setattr(cli, "reduced_forms", boom)
    code, second, err = run(["--stats", "hilbert", "23"], capsys)
    st = stats_of(err)
    assert code == 0 and second == first
    assert st["writes"] == 0 and st["misses"] == 0 and st["hits"] >= 1


def test_no_cache_writes_nothing(cache_root, capsys):
    code, _, err = run(["--no-cache", "--stats", "class", "47"], capsys)
    assert code == 0 and stats_of(err)["writes"] == 0
    assert not cache_root.exists()


def test_corrupt_cache_file_quarantined(cache_root, capsys):
    run(["class", "47"], capsys)
    path = cache_root / "classgroup" / "D=47.json"
    path.write_text('{"schema": "v1", "D": 47, "h": ')
    code, out, err = run(["--stats", "class", "47"], capsys)
    st = stats_of(err)
    assert code == 0 and json.loads(out)["h"] == 5
    assert st["quarantined"] == 1 and st["writes"] == 1
    assert (cache_root / "classgroup" / "D=47.json.corrupt").exists()
    assert json.loads(path.read_text())["schema"] == SCHEMA_VERSION


def test_schema_mismatch_is_a_miss(tmp_path):
    store = CacheStore(tmp_path)
    store.store("x", "a", {"v": 1})
    assert store.load("x", "a") == {"schema": SCHEMA_VERSION, "v": 1}
    p = store.path("x", "a")
    p.write_text(json.dumps({"schema": "v0", "v": 1}))
    assert store.load("x", "a") is None and store.stats["quarantined"] == 1


def test_atomic_store_leaves_no_temporaries(tmp_path):
    store = CacheStore(tmp_path)
    for k in range(5):
        store.store("series", f"s{k}", {"k": k})
    assert sorted(os.listdir(tmp_path / "series")) == [f"s{k}.json" for k in range(5)]


def test_series_outputs(cache_root, capsys):
    code, out, _ = run(["series", "j", "--terms", "1", "--mod", "0"], capsys)
    payload = json.loads(out)
    assert payload["valuation"] == -1 and payload["coeffs"] == ["1", "744", "196884"]
    assert run(["series", "delta", "--terms", "2", "--format", "csv"], capsys)[1] == "0,1,-24\n"
    assert run(["series", "f", "--terms", "6", "--format", "csv", "--mod", "4"], capsys)[1] == "1,1,2,3,1,3,3\n"
    assert run(["series", "omega", "--terms", "4", "--format", "csv"], capsys)[1] == "1,2,3,4,6\n"


def test_verify_thm1_and_flip(cache_root, capsys):
    code, out, _ = run(["verify-thm1", "23", "--terms", "60"], capsys)
    assert code == 0 and json.loads(out)["status"] == "ok"
    code, out, _ = run(["verify-thm1", "23", "--terms", "60", "--flip", "7:1127"], capsys)
    assert code == 1 and json.loads(out)["first_mismatch"] == 7


def test_find_relations_fixture_and_set(cache_root, capsys, tmp_path):
    code, out, _ = run(["find-relations", "--fixture", "synthetic"], capsys)
    rels = json.loads(out)
    assert code == 0 and len(rels) == 1
    assert rels[0]["class"] == "unit" and rels[0]["verified_through"] == 620
    target = tmp_path / "rels.json"
    code, out, _ = run(["find-relations", "--set", "23,47", "--out", str(target)], capsys)
    assert code == 0 and out == "" and json.loads(target.read_text()) == []


def test_cli_deterministic_across_processes(tmp_path):
    outs = []
    for k in range(2):
        env = dict(os.environ, PARTITION_MOD4_CACHE=str(tmp_path / f"c{k}"))
        res = subprocess.run([sys.executable, "-m", "partmod4", "hilbert", "47"], env=env,
                             capture_output=True, check=True)
        outs.append(res.stdout)
    assert outs[0] == outs[1]
    a = (tmp_path / "c0" / "hilbert" / "D=47.json").read_bytes()
    b = (tmp_path / "c1" / "hilbert" / "D=47.json").read_bytes()
    assert a == b
