import json
import subprocess
import sys

import jsonschema
import pytest

from aftkit import document
from aftkit.cli import main
from conftest import corpus_path

SCHEMA = document.load_schema("model_document.json")


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def solve_json(capsys, *argv):
    code, out, _ = run(capsys, "solve", *argv, "--json", "--deterministic")
    assert code == 0
    doc = json.loads(out)
    jsonschema.validate(doc, SCHEMA)
    return doc


def test_E_wf(capsys):
    doc = solve_json(capsys, corpus_path("E.lp"), "--semantics", "wf")
    assert doc["models"] == [{"lower": [], "upper": ["p", "q", "s"]}]


def test_E_split_matches_monolithic(capsys):
    for sem in ("supported", "kk", "stable", "wf"):
        a = solve_json(capsys, corpus_path("E.lp"), "--semantics", sem)
        b = solve_json(capsys, corpus_path("E.lp"), "--semantics", sem, "--mode", "split")
        assert a["models"] == b["models"]
        assert b["splitting"]["strata"]
        # one entry per stratum and branch
        assert {t["stratum"] for t in b["timing"]["strata"]} == {"s0", "s1", "s2"}


def test_exact_only(capsys):
    doc = solve_json(capsys, corpus_path("E.lp"), "--semantics", "stable", "--exact-only")
    assert doc["models"] == [["p"], ["q"]]


def test_F_kk(capsys):
    doc = solve_json(capsys, corpus_path("F.ael"), "--semantics", "kk")
    assert doc["models"] == [{"lower": [[], ["p"], ["q"], ["p", "q"]], "upper": [["p", "q"]]}]


def test_consistent_filter_matches_split(capsys):
    path = corpus_path("T.ael")
    for sem in ("expansions", "partial_expansions", "extensions", "partial_extensions"):
        a = solve_json(capsys, path, "--semantics", sem, "--consistent")
        b = solve_json(capsys, path, "--semantics", sem, "--mode", "split")
        assert a["models"] == b["models"]


def test_refusal_exit_code(capsys):
    code, _, err = run(capsys, "solve", corpus_path("T.ael"), "--semantics", "kk", "--mode", "split")
    assert code == 2
    assert "permaconsistent" in err


def test_error_exit_codes(capsys, tmp_path):
    bad = tmp_path / "bad.lp"
    bad.write_text("p :- .\n")
    code, _, err = run(capsys, "solve", str(bad), "--semantics", "wf")
    assert code == 1 and "line 1" in err
    assert run(capsys, "solve", corpus_path("E.lp"), "--semantics", "extensions")[0] == 1
    assert run(capsys, "solve", str(tmp_path / "missing.lp"), "--semantics", "wf")[0] == 1
    with pytest.raises(SystemExit) as e:
        main(["solve", corpus_path("E.lp")])
    assert e.value.code == 1


def test_split_file(capsys, tmp_path):
    f = tmp_path / "E.split"
    f.write_text("stratum low: r\nstratum mid: p q\nstratum top: s\norder low < mid\norder mid < top\n")
    doc = solve_json(capsys, corpus_path("E.lp"), "--semantics", "wf", "--mode", "split-file", str(f))
    assert doc["mode"] == "split-file"
    assert [s["name"] for s in doc["splitting"]["strata"]] == ["low", "mid", "top"]
    f.write_text("stratum a: s\nstratum b: p q r\norder a < b\n")
    code, _, err = run(capsys, "solve", corpus_path("E.lp"), "--semantics", "wf", "--mode", "split-file", str(f))
    assert code == 1


def test_deterministic_output_is_byte_identical():
    cmd = [sys.executable, "-m", "aftkit", "solve", corpus_path("F.ael"), "--semantics",
           "partial_expansions", "--mode", "split", "--json", "--deterministic"]
    a = subprocess.run(cmd, capture_output=True, check=True).stdout
    b = subprocess.run(cmd, capture_output=True, check=True).stdout
    assert a == b


def test_dl_document_lists_components(capsys):
    doc = solve_json(capsys, corpus_path("murder.dl"), "--semantics", "extensions", "--mode", "split")
    assert doc["models"] == [[["motive", "suspect"], ["guilty", "motive", "suspect"]]]
    (strata,) = doc["notes"]["components"]
    assert strata[1]["conservative"] == [": suspect / suspect."]


def test_text_output(capsys):
    code, out, _ = run(capsys, "solve", corpus_path("E.lp"), "--semantics", "wf")
    assert code == 0 and "p" in out


def test_split_show(capsys):
    code, out, _ = run(capsys, "split", "show", corpus_path("E.lp"), "--json")
    assert code == 0
    data = json.loads(out)
    assert [s["atoms"] for s in data["splitting"]["strata"]] == [["r"], ["p", "q"], ["s"]]


@pytest.mark.parametrize("name,sem", [("E.lp", "stable"), ("F.ael", "wf"), ("murder.dl", "extensions")])
def test_oracle_compare(capsys, name, sem):
    code, out, _ = run(capsys, "oracle", "compare", corpus_path(name), "--semantics", sem, "--json")
    assert code == 0
    assert json.loads(out)["match"] is True


def test_bench_command(capsys):
    code, out, _ = run(capsys, "bench", "chain", "--n", "4", "--k", "2")
    assert code == 0
    jsonschema.validate(json.loads(out), document.load_schema("bench_report.json"))


def test_generate_even(capsys, tmp_path):
    code, out, _ = run(capsys, "generate", "even", "--n", "4")
    assert code == 0 and out.startswith("even(0).")
    f = tmp_path / "even.lp"
    f.write_text(out)
    doc = solve_json(capsys, str(f), "--semantics", "wf", "--mode", "split")
    m = doc["models"][0]
    assert m["lower"] == m["upper"] == ["even(0)", "even(2)", "even(4)", "odd(1)", "odd(3)"]


def test_budget_env(capsys, monkeypatch):
    monkeypatch.setenv("AFTKIT_BUDGET", "2")
    assert run(capsys, "solve", corpus_path("E.lp"), "--semantics", "supported")[0] == 1
