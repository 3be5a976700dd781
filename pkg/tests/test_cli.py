import json
import pathlib

import pytest

from algentropy.cli import main
from algentropy.report import canonical_json

FIXTURES = pathlib.Path(__file__).resolve().parent.parent / "fixtures"


def test_analyze_text_and_json(tmp_path, capsys):
    out = tmp_path / "r.json"
    code = main(["analyze", str(FIXTURES / "hv.map"), "--no-oracle",
                 "--json", str(out)])
    assert code == 0
    text = capsys.readouterr().out
    assert "dynamical degree: 2.618033988750" in text
    assert "lambda**3 - 2*lambda**2 - 2*lambda + 1" in text
    assert "verdict: nonintegrable" in text
    data = json.loads(out.read_text())
    assert data["format"] == "algentropy-report/1"
    assert data["char_poly"]["coeffs"] == [1, -2, -2, 1]
    assert data["verdict"] == "nonintegrable"
    assert "oracle" not in data and data["checks"] == []


def test_analyze_runs_oracle_by_default(tmp_path, capsys):
    out = tmp_path / "r.json"
    code = main(["analyze", str(FIXTURES / "lin3.map"), "-n", "10",
                 "--json", str(out)])
    assert code == 0
    text = capsys.readouterr().out
    assert "check PASS: balance degrees vs oracle degrees" in text
    assert "check PASS: express dynamical degree vs oracle" in text
    assert "verdict: integrable (linear degree growth)" in text
    data = json.loads(out.read_text())
    assert data["oracle"]["degrees"][:5] == [0, 1, 2, 4, 6]
    assert all(c["passed"] for c in data["checks"])


def test_json_dump_is_byte_stable(tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    for out in (a, b):
        assert main(["analyze", str(FIXTURES / "lin3.map"), "-n", "10",
                     "--json", str(out)]) == 0
    assert a.read_bytes() == b.read_bytes()
    # parsing and re-serializing reproduces the bytes exactly
    assert canonical_json(json.loads(a.read_text())).encode() == a.read_bytes()


def test_orbit_seeds_flag_dedupes(tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    assert main(["analyze", str(FIXTURES / "lin3.map"), "--no-oracle",
                 "-n", "8", "--json", str(a)]) == 0
    assert main(["analyze", str(FIXTURES / "lin3.map"), "--no-oracle",
                 "-n", "8", "--orbit-seeds", "inf,0", "--json", str(b)]) == 0
    assert a.read_bytes() == b.read_bytes()


def test_max_pattern_length_flag_limits_trace(capsys):
    # a 2-entry window cannot see dp1's confinement; the pattern degrades
    # to an (honest) aperiodic prefix instead
    code = main(["analyze", str(FIXTURES / "dp1.map"), "--no-oracle",
                 "--max-pattern-length", "2"])
    assert code == 0
    assert "unconfined_aperiodic" in capsys.readouterr().out


def test_unresolved_pattern_exit_code(capsys):
    import algentropy.cli as cli
    from algentropy.errors import UnresolvedPatternError

    original = cli.rp.build_report

    def unresolved(spec, **kw):
        raise UnresolvedPatternError("trace fits no pattern class")

    cli.rp.build_report = unresolved
    try:
        code = main(["analyze", str(FIXTURES / "dp1.map")])
    finally:
        cli.rp.build_report = original
    assert code == 2
    assert "unresolved" in capsys.readouterr().err


def test_degrees_and_csv(tmp_path, capsys):
    out = tmp_path / "d.csv"
    code = main(["degrees", str(FIXTURES / "tsuda.map"), "--max-n", "8",
                 "--csv", str(out)])
    assert code == 0
    assert capsys.readouterr().out.startswith("0 1 2 4 8 14 24 40 66")
    lines = out.read_text().splitlines()
    assert lines[0] == "n,degree"
    assert lines[1] == "0,0"
    assert "truncated" not in out.read_text()


def test_degrees_resource_cap_truncation_row(tmp_path, capsys):
    import algentropy.cli as cli
    from algentropy.errors import ResourceCapExceeded
    from algentropy.oracle import read_degrees_csv

    original = cli.oc.degree_sequence

    def capped(spec, n_max, mode="modp", **kw):
        raise ResourceCapExceeded("time budget exhausted", partial=[0, 1, 2, 4])

    out = tmp_path / "d.csv"
    cli.oc.degree_sequence = capped
    try:
        code = main(["degrees", str(FIXTURES / "tsuda.map"), "-n", "20",
                     "--mode", "exact", "--csv", str(out)])
    finally:
        cli.oc.degree_sequence = original
    assert code == 0
    assert "warning" in capsys.readouterr().err
    lines = out.read_text().splitlines()
    assert lines[-1].startswith("truncated,")
    assert read_degrees_csv(out) == [0, 1, 2, 4]


def test_verify_success(capsys):
    code = main(["verify", str(FIXTURES / "lin3.map"), "-n", "10"])
    assert code == 0
    text = capsys.readouterr().out
    assert "verified" in text
    assert "check PASS: pattern reversal under the inverse mapping" in text


def test_verify_mismatch_exit_code(tmp_path, capsys):
    # a mapping whose patterns misbalance is hard to fabricate, so check
    # the exit path through a monkeypatched oracle instead
    import algentropy.cli as cli

    original = cli.rp.build_report

    def broken(spec, **kw):
        from algentropy.errors import InconsistentBalanceError
        raise InconsistentBalanceError("forced mismatch")

    cli.rp.build_report = broken
    try:
        code = main(["verify", str(FIXTURES / "lin3.map")])
    finally:
        cli.rp.build_report = original
    assert code == 3
    assert "MISMATCH" in capsys.readouterr().err


def test_verify_failed_check_exit_code(capsys):
    # an absurd tolerance cannot be met, so the lambda check row fails
    code = main(["verify", str(FIXTURES / "tsuda.map"), "-n", "8",
                 "--tolerance", "-1"])
    assert code == 3
    assert "check FAIL: express dynamical degree vs oracle" in \
        capsys.readouterr().out


def test_missing_file_exit_code(capsys):
    assert main(["analyze", "/nonexistent.map"]) == 1
    assert "error:" in capsys.readouterr().err


def test_usage_error_exit_code():
    with pytest.raises(SystemExit) as exc:
        main(["degrees"])
    assert exc.value.code == 2


def test_analysis_error_exit_code(tmp_path, capsys):
    bad = tmp_path / "bad.map"
    bad.write_text("update x1 +\n")
    assert main(["analyze", str(bad)]) == 1
