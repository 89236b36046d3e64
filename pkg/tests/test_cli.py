import json
import subprocess
import sys

from solvcoh.catalog import BUILTIN_CONFIGS
from solvcoh.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_catalog_lists_entries(capsys):
    code, out, _ = run(capsys, "catalog")
    assert code == 0
    assert "bs_hull2" in out and "expected-FAIL: discreteness" in out
    code, out, _ = run(capsys, "catalog", "--format", "json")
    assert [e["name"] for e in json.loads(out)] == [c["name"] for c in BUILTIN_CONFIGS]


def test_cohomology_table(capsys):
    code, out, _ = run(capsys, "cohomology", "--entry", "h3")
    assert code == 0 and "lie dims: (1,2,2,1)" in out and "group dims: (1,2,2,1)" in out
    code, out, _ = run(capsys, "cohomology", "--entry", "abelian3")
    assert "lie dims: (1,3,3,1)" in out


def test_cohomology_json(capsys):
    code, out, _ = run(capsys, "cohomology", "--entry", "bs_hull2", "--format", "json")
    data = json.loads(out)
    assert code == 0
    assert data["lie"]["dims"] == [1, 1, 0] and data["group"]["dims"] == [1, 1, 0]
    assert out == json.dumps(data, sort_keys=True, ensure_ascii=False, indent=2) + "\n"


def test_cohomology_max_degree(capsys):
    _, out, _ = run(capsys, "cohomology", "--entry", "h3", "--max-degree", "1")
    assert "lie dims: (1,2)" in out


def test_cohomology_reports_certificate_failures(capsys):
    code, out, _ = run(capsys, "cohomology", "--entry", "anosov_tower")
    assert code == 0
    assert "not Q-split" in out and "group dims: (1,1,1,1)" in out


def test_verify_exit_codes(capsys):
    code, out, _ = run(capsys, "verify", "--entry", "bs_hull2", "--check", "main")
    assert code == 0 and out.startswith("bs_hull2: PASS")
    code, out, _ = run(capsys, "verify", "--entry", "multi_prime2", "--check", "main")
    assert code == 1 and "discreteness" in out and "FAIL" in out
    code, out, _ = run(capsys, "verify", "--entry", "bs_hull2", "--check", "c17", "--json")
    data = json.loads(out)
    assert code == 0 and data["status"] == "PASS"
    assert {c["check"] for c in data["checks"]} >= {"c17[bs_hull2,bs_hull3]", "c17[bs_hull2,bs_hull5]"}


def test_usage_errors(capsys):
    code, _, err = run(capsys, "verify", "--entry", "nope")
    assert code == 2 and "unknown entry" in err
    code, _, _ = run(capsys, "verify", "--entry", "h3", "--check", "bogus")
    assert code == 2
    code, _, _ = run(capsys)
    assert code == 2


def test_input_file(tmp_path, capsys):
    cfg = next(c for c in BUILTIN_CONFIGS if c["name"] == "heis_hull2")
    p = tmp_path / "heis.json"
    p.write_text(json.dumps(cfg))
    code, out, _ = run(capsys, "verify", "--input", str(p), "--check", "all")
    assert code == 0
    bad = tmp_path / "bad.json"
    bad.write_text('{"name": "x", "unipotent": {"dim": -1}}')
    code, _, err = run(capsys, "cohomology", "--input", str(bad))
    assert code == 2 and "/unipotent/dim" in err


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "solvcoh", "verify", "--entry", "all", "--json", "--no-timings"],
        capture_output=True,
        check=False,
    )
    assert proc.returncode == 1  # the non-examples fail by design
    reports = json.loads(proc.stdout.decode("utf-8"))
    status = {r["entry"]: r["status"] for r in reports}
    assert status["multi_prime2"] == "FAIL" and status["anosov_tower"] == "FAIL"
    assert all(s == "PASS" for n, s in status.items() if n not in ("multi_prime2", "multi_prime3", "anosov_tower"))
