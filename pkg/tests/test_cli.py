import csv
import json

import pytest

from treegroups import __version__
from treegroups.cli import _default_threads, main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out


def test_version(capsys):
    code, out = run(capsys, "--version")
    assert code == 0
    assert __version__ in out


def test_check_lemmas_all_groups(capsys):
    for name in ("G", "H", "I"):
        code, out = run(capsys, "check-lemmas", "--group", name)
        assert code == 0
        assert "FAIL" not in out


def test_usage_errors(capsys):
    assert main(["check-lemmas", "--group", "X"]) == 2
    capsys.readouterr()
    assert main(["nonsense"]) == 2
    assert main(["verify", "reduction", "--group", "H"]) == 2
    capsys.readouterr()


def test_budget_exit_code(capsys):
    code, _ = run(capsys, "ball", "--group", "G", "--generators", "standard",
                  "--radius", "30", "--entry-budget", "50")
    assert code == 3


def test_failed_verification_exit_code(capsys):
    code, _ = run(capsys, "verify", "basictool", "--group", "H",
                  "--generators", "standard", "--eta", "1/10", "--p", "1",
                  "--shift", "0", "--radius", "24")
    assert code == 1


def test_ball_csv(tmp_path, capsys):
    out_path = tmp_path / "ball.csv"
    code, _ = run(capsys, "ball", "--group", "G", "--generators", "standard",
                  "--radius", "10", "--out", str(out_path))
    assert code == 0
    with open(out_path, newline="", encoding="utf-8") as fh:
        rows = list(csv.reader(fh))
    assert rows[0] == ["portrait_key", "min_length", "geodesic_word"]
    body = rows[1:]
    assert len(body) == 16  # gamma_G(10)
    lengths = [int(r[1]) for r in body]
    assert lengths == sorted(lengths)
    assert body[0][1] == "0" and body[0][2] == ""
    keys = [r[0] for r in body]
    assert len(set(keys)) == len(keys)


def test_growth_csv(tmp_path, capsys):
    out_path = tmp_path / "growth.csv"
    code, _ = run(capsys, "growth", "--group", "I", "--generators", "extended",
                  "--max-radius", "12", "--out", str(out_path))
    assert code == 0
    with open(out_path, newline="", encoding="utf-8") as fh:
        rows = list(csv.reader(fh))
    assert rows[0] == ["radius", "gamma", "rate_estimate"]
    assert len(rows) == 14
    assert rows[1][:2] == ["0", "1"]
    assert rows[-1][:2] == ["12", "22"]
    float(rows[-1][2])  # parses


def test_json_report(tmp_path, capsys):
    report_path = tmp_path / "report.json"
    code, _ = run(capsys, "badcount", "--group", "H", "--radius", "20",
                  "--epsilon", "1/10", "--json", str(report_path))
    assert code == 0
    with open(report_path, encoding="utf-8") as fh:
        payload = json.load(fh)
    assert set(payload) == {"version", "command", "config", "result"}
    assert payload["version"] == __version__
    assert payload["command"] == "badcount"
    assert payload["config"]["epsilon"] == "1/10"
    assert payload["result"]["epsilon"] == "1/10"
    assert payload["result"]["count"] <= payload["result"]["bound"]


def test_verify_reduction(capsys):
    code, out = run(capsys, "verify", "reduction", "--group", "G",
                    "--radius", "20")
    assert code == 0
    assert "σaσb: 15 -> 13" in out
    assert "σaσa: 16 -> 14" in out


def test_verify_patterns(capsys):
    code, out = run(capsys, "verify", "patterns", "--group", "I")
    assert code == 0
    assert "a, a2, b2, b3" in out
    assert "29/31" in out
    assert "FAIL" not in out


def test_badstrings_deterministic_across_threads(tmp_path, capsys):
    a = tmp_path / "a.json"
    b = tmp_path / "b.json"
    code, first = run(capsys, "badstrings", "--max-k", "10",
                      "--threads", "1", "--json", str(a))
    assert code == 0
    code, second = run(capsys, "badstrings", "--max-k", "10",
                       "--threads", "4", "--json", str(b))
    assert code == 0
    assert first == second
    pa = json.loads(a.read_text(encoding="utf-8"))
    pb = json.loads(b.read_text(encoding="utf-8"))
    for payload in (pa, pb):
        payload["config"].pop("threads")
        payload["config"].pop("json_path")
    assert pa == pb


def test_badstrings_csv(tmp_path, capsys):
    out_path = tmp_path / "counts.csv"
    code, out = run(capsys, "badstrings", "--max-k", "6",
                    "--out", str(out_path))
    assert code == 0
    with open(out_path, newline="", encoding="utf-8") as fh:
        rows = list(csv.reader(fh))
    assert rows[0] == ["k", "count"]
    assert rows[1:] == [["1", "16"], ["2", "64"], ["3", "128"],
                        ["4", "196"], ["5", "162"], ["6", "144"]]


def test_file_group(tmp_path, capsys):
    spec = tmp_path / "adding.txt"
    spec.write_text(
        "σ = (1, 1) swap\n"
        "t = (t, tσ)\n"
        "inverse t = u\n"
        "u = (u, σu)\n"
        "inverse u = t\n",
        encoding="utf-8",
    )
    code, out = run(capsys, "ball", "--group", f"file:{spec}",
                    "--generators", "standard", "--radius", "3")
    assert code == 0
    assert len(out.strip().splitlines()) > 1


def test_default_threads(monkeypatch):
    monkeypatch.setenv("TREEGROUPS_THREADS", "7")
    assert _default_threads() == 7
    monkeypatch.setenv("TREEGROUPS_THREADS", "junk")
    assert _default_threads() == 1
    monkeypatch.delenv("TREEGROUPS_THREADS")
    assert _default_threads() == 1
