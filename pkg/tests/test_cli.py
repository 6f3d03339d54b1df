import json
import subprocess
import sys

import pytest

from rackd import typed
from rackd.cli import EXIT_OK, EXIT_UNKNOWN, EXIT_USAGE, EXIT_VIOLATION, main, parse_caps, parse_m_range


@pytest.fixture(autouse=True)
def restore_caps():
    before = typed.current_caps()
    yield
    typed.set_caps(**before)


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_parse_helpers():
    assert parse_m_range("5..7") == [5, 6, 7]
    assert parse_m_range("9") == [9]
    assert parse_caps("orbit=10, subrack=3") == {"orbit": 10, "subrack": 3}
    with pytest.raises(ValueError):
        parse_caps("orbit")


def test_classify_exception_class(capsys):
    code, out, _ = run(capsys, "classify", "--group", "A", "--m", "6", "--type", "3^2")
    assert code == EXIT_OK
    assert "EXCEPTION" in out and "b:(3^2)" in out


def test_classify_json_has_witness(capsys):
    code, out, _ = run(capsys, "classify", "--group", "S", "--m", "6", "--type", "2,4", "--format", "json")
    d = json.loads(out)
    assert code == EXIT_OK and d["status"] == "TYPE_D"
    assert all(d["witness"]["checks"].values())


def test_classify_split_class(capsys):
    code, out, _ = run(capsys, "classify", "--group", "A", "--m", "5", "--type", "5", "--split", "plus")
    assert code == EXIT_OK and "NOT_TYPE_D" in out


def test_malformed_type_is_usage_error(capsys):
    code, _, err = run(capsys, "classify", "--group", "S", "--m", "5", "--type", "2,x")
    assert code == EXIT_USAGE and err.startswith("error:")
    code, _, _ = run(capsys, "classify", "--group", "S", "--m", "4", "--type", "5")
    assert code == EXIT_USAGE


def test_unknown_when_caps_starve_search(capsys):
    code, out, _ = run(capsys, "classify", "--group", "S", "--m", "6", "--type", "1,2,3",
                       "--budget", "0", "--cap-embed", "1")
    assert code == EXIT_UNKNOWN and "UNKNOWN" in out


def test_verify_roundtrip_and_mutation(tmp_path, capsys):
    code, out, _ = run(capsys, "sweep", "--m", "5..6", "--format", "json")
    assert code == EXIT_OK
    path = tmp_path / "sweep.json"
    path.write_text(out)
    code, out2, _ = run(capsys, "verify", str(path))
    assert code == EXIT_OK
    records = json.loads(out)
    rec = next(r for r in records if r["status"] == "TYPE_D")
    w = rec["witness"]
    w["S"] = w["S"][1:] if w["S"][0] != w["s"] else w["S"][:-1]
    bad = tmp_path / "bad.jsonl"
    bad.write_text(json.dumps(rec) + "\n")
    code, out3, _ = run(capsys, "verify", str(bad))
    assert code == EXIT_VIOLATION and "violation" in out3


def test_verify_bad_json_reports_position(tmp_path, capsys):
    p = tmp_path / "x.jsonl"
    p.write_text('{"a": 1}\n{oops\n')
    code, _, err = run(capsys, "verify", str(p))
    assert code == EXIT_USAGE and ":2:" in err


def test_verify_commuting_triple(tmp_path, capsys):
    from rackd.abelian import a4xcr_embed
    from rackd.group import Ambient, ConjClassSpec
    from rackd.perm import CycleType
    t = a4xcr_embed(ConjClassSpec(7, CycleType.parse("2^2,3"), Ambient.ALT))
    p = tmp_path / "t.json"
    p.write_text(json.dumps(t.to_json()))
    code, out, _ = run(capsys, "verify", str(p))
    assert code == EXIT_OK and "commuting triple ok" in out


def test_census_s5(capsys):
    code, out, _ = run(capsys, "census", "--group", "S", "--m", "5", "--type", "1,2^2", "--format", "json")
    d = json.loads(out)
    assert code == EXIT_OK
    # counts are pairs (x0, y) for the fixed first element x0
    assert d["census"] == {"D_3": 4, "D_5": 8, "abelian:2": 2}


def test_table_survivors(capsys):
    code, out, _ = run(capsys, "table", "--group", "S", "--m", "5", "--format", "json")
    d = json.loads(out)
    assert code == EXIT_OK and len(d[0]["survivors"]) == 3
    code, out, _ = run(capsys, "table", "--group", "A", "--m", "5..6")
    assert "no surviving pairs" in out


def test_reps_listing(capsys):
    code, out, _ = run(capsys, "reps", "--type", "2,3")
    assert code == EXIT_OK and "(q = -1)" in out


def test_cocycle_check(tmp_path, capsys):
    from rackd.cocycle import constant_cocycle
    from rackd.rack import catalog_rack
    good = constant_cocycle(catalog_rack("D_3"), 2, 1).to_json()
    bad = json.loads(json.dumps(good))
    p = tmp_path / "c.jsonl"
    p.write_text(json.dumps(good) + "\n")
    code, out, _ = run(capsys, "cocycle-check", str(p))
    assert code == EXIT_OK and "cocycle=True braid=True" in out
    bad["entries"][0][1] = [[[1]]]
    p.write_text(json.dumps(bad) + "\n")
    code, out, _ = run(capsys, "cocycle-check", str(p))
    assert code == EXIT_VIOLATION and "cocycle=False braid=False" in out


def test_caps_from_environment(monkeypatch, capsys):
    monkeypatch.setenv("RACKD_CAPS", "embed=1")
    code, _, _ = run(capsys, "classify", "--group", "S", "--m", "6", "--type", "1,2,3", "--budget", "0")
    assert code == EXIT_UNKNOWN


def test_sweep_output_independent_of_threads():
    cmd = [sys.executable, "-m", "rackd", "sweep", "--m", "5..7", "--format", "json"]
    one = subprocess.run(cmd + ["--threads", "1"], capture_output=True, text=True, check=True).stdout
    four = subprocess.run(cmd + ["--threads", "4"], capture_output=True, text=True, check=True).stdout
    assert one == four and json.loads(one)


@pytest.mark.parametrize("name", ["verdicts.jsonl", "triples.json"])
def test_verify_shipped_fixtures(name, capsys):
    from pathlib import Path
    path = Path(__file__).parent / "fixtures" / name
    code, out, _ = run(capsys, "verify", str(path))
    assert code == EXIT_OK and "violation" not in out and "failed" not in out
