import io
import json
import subprocess
import sys

import pytest

from knotdance.cli import certified_bounds, main
from knotdance.codec import parse_code

TREFOIL = "1+ 2- 3+ 1- 2+ 3-"


def run(argv, stdin_text=None, monkeypatch=None):
    out, err = io.StringIO(), io.StringIO()
    if stdin_text is not None:
        monkeypatch.setattr(sys, "stdin", io.StringIO(stdin_text))
    code = main(argv, out=out, err=err)
    return code, out.getvalue(), err.getvalue()


@pytest.fixture
def codes_file(tmp_path):
    path = tmp_path / "codes.txt"
    path.write_text(f"# corpus\n{TREFOIL}\n\nv1 v1\n")
    return path


def test_compute_all_rules(codes_file):
    code, out, err = run(["compute", str(codes_file), "--format", "json-lines"])
    assert code == 0 and err == ""
    records = [json.loads(line) for line in out.splitlines()]
    assert [r["line"] for r in records] == [2, 3, 4]
    tref = records[0]
    assert tref["bridges"]["count"] == 3
    assert set(tref["numbers"].values()) == {2}
    assert tref["bounds"] == {"da": 2, "br": 3}
    assert records[1]["bounds"] == {"da": 1, "br": 1}
    assert records[2]["numbers"]["coincident"] == 2
    assert records[2]["bounds"] == {"da_unrestricted": 1, "da_coincident": 2, "b1": 1}


def test_compute_text(codes_file):
    code, out, _ = run(["compute", str(codes_file)])
    assert code == 0
    assert "line 2: 1+ 2- 3+ 1- 2+ 3-" in out
    assert "bridges: 3" in out and "over: 2 starts [0, 2]" in out


def test_compute_single_rule_restricted_with_trace(codes_file):
    code, out, _ = run(
        ["compute", str(codes_file), "--rule", "over", "--restrict-starts", "--trace", "--format", "json-lines"]
    )
    assert code == 0
    rec = json.loads(out.splitlines()[0])
    assert list(rec["numbers"]) == ["over"] and rec["restricted"] == ["over"]
    assert len(rec["traces"]["over"]["moves"]) == 6


def test_restrict_starts_ignored_where_unsound(codes_file):
    code, out, _ = run(["compute", str(codes_file), "--rule", "under", "--restrict-starts", "--format", "json-lines"])
    assert code == 0
    assert json.loads(out.splitlines()[0])["restricted"] == []


def test_compute_trace_tables(codes_file):
    code, out, _ = run(["compute", str(codes_file), "--rule", "coincident", "--trace"])
    assert code == 0
    assert "trace (coincident):" in out and "C1" in out


def test_empty_file(tmp_path):
    path = tmp_path / "empty.txt"
    path.write_text("")
    assert run(["compute", str(path)]) == (0, "", "")


def test_malformed_line_reports_line_number(tmp_path):
    path = tmp_path / "bad.txt"
    path.write_text("1+ 2-\n")
    code, out, err = run(["compute", str(path)])
    assert code == 2 and out == ""
    assert f"{path}:1:" in err


def test_all_bad_lines_reported(tmp_path):
    path = tmp_path / "bad.txt"
    path.write_text(f"{TREFOIL}\nq\n1+ 1+\n")
    code, _, err = run(["compute", str(path)])
    assert code == 2
    assert ":2:" in err and ":3:" in err


def test_missing_file(tmp_path):
    code, _, err = run(["compute", str(tmp_path / "nope.txt")])
    assert code == 2 and "nope.txt" in err


def test_stdin(monkeypatch):
    code, out, _ = run(["compute", "-", "--rule", "over", "--format", "json-lines"], f"{TREFOIL}\n", monkeypatch)
    assert code == 0 and json.loads(out)["numbers"] == {"over": 2}


def test_reduce(tmp_path):
    path = tmp_path / "r.txt"
    path.write_text(f"{TREFOIL}\n1+ 2- 2+ 1-\n\n")
    code, out, _ = run(["reduce", str(path), "--format", "json-lines"])
    assert code == 0
    tref, fig, empty = (json.loads(line) for line in out.splitlines())
    assert tref["bridges_after"] == tref["dance_number"] == 2 and tref["status"] == "reduced"
    assert fig["status"] == "already-minimal" and fig["reduced"] == fig["code"]
    assert empty["status"] == "no-classical-crossings"
    _, text, _ = run(["reduce", str(path)])
    assert "already-minimal" in text and "no-classical-crossings" in text


def test_trace_command(tmp_path):
    codes_file = tmp_path / "t.txt"
    codes_file.write_text(TREFOIL + "\n")
    code, out, _ = run(["trace", str(codes_file), "--starts", "0,2"])
    assert code == 0
    assert "starts [0, 2] rule over:" in out
    code, out, _ = run(["trace", str(codes_file), "--starts", "0", "--format", "json-lines"])
    assert json.loads(out.splitlines()[0])["dances"] is False
    code, out, _ = run(["trace", str(codes_file), "--rule", "under"])
    assert code == 0 and "starts [0, 3] rule under:" in out


def test_trace_bad_starts(codes_file):
    assert run(["trace", str(codes_file), "--starts", "9"])[0] == 2
    assert run(["trace", str(codes_file), "--starts", "a"])[0] == 2


def test_closure():
    code, out, _ = run(["closure", "n=2 s1 s1 s1"])
    assert code == 0 and out.strip() == TREFOIL
    code, out, _ = run(["closure", "n=2 s1 s1 v1", "--schedule"])
    assert code == 0 and "2 dancers" in out and "v3" in out
    code, out, _ = run(["closure", "n=2 s1 s1 v1", "--schedule", "--format", "json-lines"])
    assert json.loads(out)["dancers"] == 2


def test_closure_errors():
    code, _, err = run(["closure", "n=2 s1 s1"])
    assert code == 2 and "components: 2" in err
    assert run(["closure", "n=2 s5"])[0] == 2


def test_enumerate():
    code, out, _ = run(["enumerate", "--classical", "1", "--virtual", "1", "--exact"])
    assert code == 0 and len(out.splitlines()) == 3
    code, out, _ = run(["enumerate", "--classical", "2"])
    assert out.splitlines()[0] == "" and "1+ 1-" in out.splitlines()
    assert run(["enumerate", "--classical", "6"])[0] == 3


def test_check_passes():
    code, out, _ = run(["check", "--max-classical", "3"])
    assert code == 0 and "FAIL" not in out and "braid_bound" in out
    code, out, _ = run(["check", "--max-classical", "2", "--max-virtual", "1", "--format", "json-lines"])
    assert code == 0 and all(json.loads(line)["ok"] for line in out.splitlines())


def test_check_resource_limit(monkeypatch):
    assert run(["check", "--max-classical", "6"])[0] == 3
    monkeypatch.setenv("KNOTDANCE_STATE_LIMIT", "1")
    assert run(["check", "--max-classical", "2"])[0] == 3


def test_check_failure_exit_code(monkeypatch):
    import knotdance.properties as props

    monkeypatch.setitem(props.DEFAULT_PROPERTIES, "never", lambda c, f: False)
    code, out, _ = run(["check", "--max-classical", "1", "--braid-words", "0"])
    assert code == 1 and "FAIL never" in out


def test_output_is_deterministic(codes_file):
    first = run(["compute", str(codes_file), "--trace", "--format", "json-lines"])
    second = run(["compute", str(codes_file), "--trace", "--format", "json-lines"])
    assert first == second


def test_bounds_unknot_convention():
    assert certified_bounds(parse_code(""), {"over": 1, "under": 1})["br"] == 1


def test_module_entry_point(codes_file):
    proc = subprocess.run(
        [sys.executable, "-m", "knotdance", "compute", str(codes_file), "--rule", "over"],
        capture_output=True,
        text=True,
        check=False,
    )
    assert proc.returncode == 0 and "over: 2" in proc.stdout
