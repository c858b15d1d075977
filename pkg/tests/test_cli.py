import io
import json
import subprocess
import sys

import pytest

from severi_fock import cache as cache_mod
from severi_fock.cli import main


def run(*argv):
    out = io.StringIO()
    code = main(list(argv), out)
    return code, out.getvalue()


def test_gw_text():
    code, text = run("gw", "--k", "1", "--d1", "1", "--d2", "1", "--genus", "0")
    assert code == 0
    assert "value=1" in text and "n=2" in text


def test_p2_json_and_csv():
    code, text = run("p2", "--degree", "3", "--genus", "0", "--format", "json")
    row = json.loads(text)
    assert code == 0 and row["value"] == "12" and row["n"] == 8
    code, text = run("p2", "--degree", "2", "--genus", "-1", "--format", "csv")
    lines = text.strip().splitlines()
    assert lines[0].startswith("kind,k,d1,d2,g,n,value")
    assert lines[1].split(",")[6] == "3"


def test_relative_and_p2rel():
    code, text = run("relative", "--k", "1", "--d1", "1", "--d2", "1", "--genus", "0",
                     "--nuC", "1")
    assert code == 0 and "value=1" in text and "n=1" in text
    code, text = run("p2rel", "--degree", "2", "--genus", "0", "--mu", "2")
    assert code == 0 and "value=2" in text


def test_transverse():
    code, text = run("transverse", "--k", "2", "--d1", "2", "--d2", "1", "--genus", "0",
                     "--format", "json")
    assert code == 0 and json.loads(text)["kind"] == "transverse"


def test_bad_input_exit_codes():
    assert run("gw", "--k", "5", "--d1", "1", "--d2", "1", "--genus", "0")[0] == 2
    assert run("gw", "--k", "1", "--d1", "1")[0] == 2
    assert run("p2", "--degree", "0", "--genus", "0")[0] == 2
    assert run("relative", "--k", "1", "--d1", "1", "--d2", "1", "--genus", "0",
               "--muC", "x")[0] == 2
    assert run("gw", "--k", "1", "--d1", "1", "--d2", "1", "--genus", "0",
               "--threads", "0")[0] == 2


def test_truncation_exit_code():
    code, _ = run("gw", "--k", "1", "--d1", "2", "--d2", "1", "--genus", "0", "--trunc-q1", "1")
    assert code == 3
    code, text = run("gw", "--k", "1", "--d1", "2", "--d2", "1", "--genus", "0",
                     "--trunc-q1", "4", "--trunc-q2", "3")
    assert code == 0


def test_threads_env(monkeypatch):
    monkeypatch.setenv("SEVERI_FOCK_THREADS", "nope")
    assert run("p2", "--degree", "1", "--genus", "0")[0] == 2
    # an explicit flag wins over the environment
    assert run("p2", "--degree", "1", "--genus", "0", "--threads", "2")[0] == 0


def test_tables():
    code, text = run("table", "--surface", "p2", "--dmax", "3", "--format", "json")
    rows = [json.loads(line) for line in text.splitlines()]
    conn = {(r["d1"], r["g"]): r["value"] for r in rows if r["kind"] == "p2_connected"}
    assert conn[(3, 0)] == "12" and conn[(3, -1)] == "0"
    code, text = run("table", "--surface", "f1", "--d1max", "1", "--d2max", "1",
                     "--connected", "--format", "csv")
    assert code == 0 and "gw_connected" in text
    code, text = run("table", "--surface", "f2", "--d1max", "0", "--d2max", "0")
    assert code == 0 and text == ""


def test_check_suite():
    code, text = run("check", "calibration")
    assert code == 0 and text.strip().endswith("passed")
    code, text = run("check", "vanishing", "--format", "json")
    assert code == 0 and all(json.loads(line)["status"] == "pass" for line in text.splitlines())


def test_cache_round_trip(tmp_path, monkeypatch):
    path = tmp_path / "results.jsonl"
    args = ("p2", "--degree", "3", "--genus", "0", "--cache", str(path))
    assert run(*args) == run(*args)
    lines = path.read_text().splitlines()
    assert json.loads(lines[0])["engine_version"] == cache_mod.ENGINE_VERSION
    assert len(lines) == 2
    entry = json.loads(lines[1])
    assert entry["value"] == "12" and "timestamp" in entry

    # a hit is served from the file
    c = cache_mod.ResultCache(str(path))
    assert c.get(entry["key"]) == 12

    # a different engine version discards the file
    monkeypatch.setattr(cache_mod, "ENGINE_VERSION", "0.0.0")
    c = cache_mod.ResultCache(str(path))
    assert len(c) == 0
    assert len(path.read_text().splitlines()) == 1


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "severi_fock", "p2", "--degree", "1",
                           "--genus", "0"], capture_output=True, text=True, timeout=60)
    assert proc.returncode == 0 and "value=1" in proc.stdout
    proc = subprocess.run([sys.executable, "-m", "severi_fock", "gw", "--k", "9", "--d1", "1",
                           "--d2", "0", "--genus", "0"], capture_output=True, text=True,
                          timeout=60)
    assert proc.returncode == 2 and "error" in proc.stderr
