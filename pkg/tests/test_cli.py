"""End-to-end command tests: file format, reports, exit codes."""

import io
import json

import numpy as np
import pytest

from loopforge import (
    NoIdentity,
    NotLatin,
    ParseError,
    emit_cayley,
    gen_cyclic,
    gen_q9,
    parse_cayley,
    report_document,
)
from loopforge.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_parse_emit_round_trip_on_shipped_corpus(corpus_dir):
    files = sorted(corpus_dir.glob("*.cayley"))
    assert len(files) == 10
    for path in files:
        text = path.read_text()
        assert emit_cayley(parse_cayley(str(path))) == text, path.name


def test_parse_accepts_comments_blank_lines_and_shifted_identity(tmp_path):
    content = "# a loop of order 3\n\n3\n2 0 1   # identity is element 1\n0 1 2\n1 2 0\n"
    path = tmp_path / "shifted.cayley"
    path.write_text(content)
    q = parse_cayley(str(path))
    assert q.table[0].tolist() == [0, 1, 2]
    assert q == gen_cyclic(3)


def test_parse_error_positions():
    with pytest.raises(ParseError) as err:
        parse_cayley(io.StringIO("3\n0 1 2\n1 2 x\n2 0 1\n"))
    assert err.value.line == 3 and err.value.column == 5
    with pytest.raises(ParseError) as err:
        parse_cayley(io.StringIO("2\n0 1\n1 0 0\n"))
    assert err.value.line == 3 and err.value.column == 5
    with pytest.raises(ParseError) as err:
        parse_cayley(io.StringIO("2\n0 1\n"))
    assert err.value.line == 2
    with pytest.raises(ParseError) as err:
        parse_cayley(io.StringIO("# nothing here\n"))
    assert "missing order" in str(err.value)
    with pytest.raises(ParseError):
        parse_cayley(io.StringIO("2\n0 9\n9 0\n"))  # entry out of range


def test_parse_propagates_table_level_failures():
    with pytest.raises(NotLatin):
        parse_cayley(io.StringIO("3\n0 1 2\n1 2 0\n2 0 0\n"))
    with pytest.raises(NoIdentity):
        parse_cayley(io.StringIO("3\n0 1 2\n2 0 1\n1 2 0\n"))


def test_malformed_fixture_exit_codes(capsys, fixture_dir):
    for name, marker in (
        ("malformed_parse.cayley", "line 4"),
        ("malformed_notlatin.cayley", "NotLatin"),
        ("malformed_noidentity.cayley", "NoIdentity"),
    ):
        code, _, err = run(capsys, "analyze", str(fixture_dir / name))
        assert code == 2, name
        assert marker in err, name


def test_analyze_json_schema(capsys, corpus_dir):
    code, out, _ = run(capsys, "analyze", str(corpus_dir / "z12.cayley"), "--json")
    assert code == 0
    doc = json.loads(out)
    assert list(doc) == [
        "order", "flags", "a_loop_witness", "exponent",
        "element_order_histogram", "mlt_order", "inn_order", "center_size",
        "K_order", "H_order", "simple", "solvable", "identity_suite_summary",
        "decomposition",
    ]
    assert doc["order"] == 12
    assert doc["flags"] == {
        "latin": True, "commutative": True, "power_associative": True,
        "aip": True, "a_loop": True,
    }
    assert doc["element_order_histogram"] == {
        "1": 1, "2": 1, "3": 2, "4": 2, "6": 2, "12": 4,
    }
    assert doc["K_order"] == 3 and doc["H_order"] == 4
    assert doc["solvable"] is True
    assert doc["mlt_order"] == 12 * doc["inn_order"]
    assert all(r["status"] == "holds" for r in doc["identity_suite_summary"].values())


def test_analyze_q9_reports_witness_and_nulls(capsys, corpus_dir):
    code, out, _ = run(capsys, "analyze", str(corpus_dir / "q9.cayley"), "--json")
    assert code == 0
    doc = json.loads(out)
    assert doc["flags"]["a_loop"] is False
    assert doc["a_loop_witness"] == [3, 3, 3, 3]
    assert doc["K_order"] is None and doc["decomposition"] is None
    statuses = {r["status"] for r in doc["identity_suite_summary"].values()}
    assert statuses == {"hypothesis_failed"}


def test_analyze_expectations(capsys, corpus_dir):
    code, _, _ = run(capsys, "analyze", str(corpus_dir / "z12.cayley"),
                     "--expect", "a-loop", "--expect", "solvable")
    assert code == 0
    code, _, err = run(capsys, "analyze", str(corpus_dir / "q9.cayley"),
                       "--expect", "a-loop")
    assert code == 3
    assert "a-loop" in err


def test_identities_command(capsys, corpus_dir):
    code, out, _ = run(capsys, "identities", str(corpus_dir / "fano.cayley"),
                       "--suite", "exp2")
    assert code == 0
    lines = out.strip().splitlines()
    assert len(lines) == 8 and all("holds" in ln for ln in lines)
    assert lines[0].startswith("steiner")

    # ambient failure: rows report hypothesis_failed and the exit stays 0
    code, out, err = run(capsys, "identities", str(corpus_dir / "q9.cayley"),
                         "--only", "AL,AIP")
    assert code == 0
    assert "ambient" in err
    assert out.count("hypothesis_failed") == 2

    # ungated run exposes genuine violations and exits 3
    code, out, _ = run(capsys, "identities", str(corpus_dir / "q9.cayley"),
                       "--no-gate", "--only", "AL", "--json")
    assert code == 3
    rows = json.loads(out)
    assert rows[0]["status"] == "violated"
    assert rows[0]["violations"][0] == {"x": 3, "y": 3, "u": 3, "v": 3}

    code, _, _ = run(capsys, "identities", str(corpus_dir / "z6.cayley"),
                     "--only", "bogus")
    assert code == 2


def test_associate_command_round_trips(capsys, corpus_dir, tmp_path):
    out_path = tmp_path / "assoc.cayley"
    code, _, _ = run(capsys, "associate", str(corpus_dir / "cml81.cayley"),
                     "--kind", "bruck", "--out", str(out_path))
    assert code == 0
    assert parse_cayley(str(out_path)) == parse_cayley(str(corpus_dir / "cml81.cayley"))
    code, out, _ = run(capsys, "associate", str(corpus_dir / "z6.cayley"),
                       "--kind", "nlp")
    assert code == 0 and out.startswith("# nlp associate\n6\n")
    # bruck refuses even order: input error, not a crash
    code, _, err = run(capsys, "associate", str(corpus_dir / "z6.cayley"),
                       "--kind", "bruck")
    assert code == 2 and "NotUniquely2Divisible" in err


def test_decompose_and_subloops_commands(capsys, corpus_dir):
    code, out, _ = run(capsys, "decompose", str(corpus_dir / "z12.cayley"), "--json")
    assert code == 0
    doc = json.loads(out)
    assert doc["K_members"] == [0, 4, 8] and doc["H_members"] == [0, 3, 6, 9]

    code, out, _ = run(capsys, "subloops", str(corpus_dir / "q9.cayley"), "--json")
    assert code == 0
    rows = json.loads(out)
    assert [r["order"] for r in rows] == [1, 3, 9]
    assert all(r["normal"] for r in rows)


def test_quotient_command(capsys, corpus_dir, tmp_path):
    code, out, _ = run(capsys, "quotient", str(corpus_dir / "cml81.cayley"),
                       "--subloop", "0,1,2")
    assert code == 0
    assert out.splitlines()[1] == "27"
    code, _, err = run(capsys, "quotient", str(corpus_dir / "z12.cayley"),
                       "--subloop", "0,4")
    assert code == 2 and "closure" in err

    lop = tmp_path / "lopsided.cayley"
    from tests.conftest import LOPSIDED6_ROWS
    from loopforge import validate

    lop.write_text(emit_cayley(validate(np.array(LOPSIDED6_ROWS))))
    code, _, err = run(capsys, "quotient", str(lop), "--subloop", "0,1")
    assert code == 2 and "NotNormal" in err


def test_audit_command(capsys, corpus_dir):
    code, out, _ = run(capsys, "audit", str(corpus_dir / "z12.cayley"),
                       "--lagrange", "--cauchy", "--hall", "2,3")
    assert code == 0
    doc = json.loads(out)
    assert doc["lagrange"]["all_divide"]
    assert doc["cauchy"]["complete"] and set(doc["cauchy"]["witnesses"]) == {"2", "3"}
    assert doc["hall"]["found"]
    # default run covers lagrange and cauchy
    code, out, _ = run(capsys, "audit", str(corpus_dir / "z6.cayley"))
    doc = json.loads(out)
    assert set(doc) == {"lagrange", "cauchy"}


def test_gen_command_matches_library(capsys, corpus_dir):
    code, out, _ = run(capsys, "gen", "--cocycle", "3", "quartic")
    assert code == 0
    assert out == emit_cayley(gen_q9())
    code, out, _ = run(capsys, "gen", "--elem-abelian", "2", "3")
    assert code == 0 and out.splitlines()[0] == "8"
    code, _, err = run(capsys, "gen", "--cocycle", "3", "bogus")
    assert code == 2 and "bogus" in err
    code, _, err = run(capsys, "gen", "--cyclic", "0")
    assert code == 2


def test_search_command(capsys):
    code, out, err = run(capsys, "search", "--order", "4")
    assert code == 0
    assert out.count("# class") == 2
    assert "found 2 isomorphism classes" in err
    code, out, _ = run(capsys, "search", "--order", "6", "--seed", "0",
                       "--max-nodes", "40000", "--json")
    assert code == 0
    doc = json.loads(out)
    assert doc["mode"] == "randomized"
    assert all(len(t) == 6 for t in doc["classes"])


def test_canon_and_iso_commands(capsys, corpus_dir, tmp_path):
    z12 = corpus_dir / "z12.cayley"
    z3xz4 = corpus_dir / "z3xz4.cayley"
    code, out_a, _ = run(capsys, "canon", str(z12))
    code, out_b, _ = run(capsys, "canon", str(z3xz4))
    assert out_a == out_b  # isomorphic loops share the canonical emission

    code, out, _ = run(capsys, "iso", str(z12), str(z3xz4))
    assert code == 0 and out == "isomorphic: true\n"
    code, _, _ = run(capsys, "iso", str(z12), str(z3xz4), "--expect", "no")
    assert code == 3
    code, out, _ = run(capsys, "iso", str(z12), str(corpus_dir / "z6.cayley"),
                       "--expect", "no")
    assert code == 0 and out == "isomorphic: false\n"


def test_threads_env(monkeypatch, capsys, corpus_dir):
    monkeypatch.setenv("LOOPFORGE_THREADS", "4")
    code, out, _ = run(capsys, "analyze", str(corpus_dir / "z6.cayley"), "--json")
    assert code == 0
    doc = json.loads(out)
    assert all(r["status"] == "holds" for r in doc["identity_suite_summary"].values())
    monkeypatch.setenv("LOOPFORGE_THREADS", "zero")
    code, _, err = run(capsys, "analyze", str(corpus_dir / "z6.cayley"))
    assert code == 2 and "LOOPFORGE_THREADS" in err


def test_report_document_matches_cli_json(corpus_dir):
    q = parse_cayley(str(corpus_dir / "z6.cayley"))
    doc = report_document(q)
    assert doc["order"] == 6 and doc["flags"]["a_loop"] is True
    assert doc["center_size"] == 6
