import json

import pytest

from injgen.certificate import load
from injgen.cli import main
from injgen.fixtures import corpus_path


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, out, err


def test_verdict_sec6_writes_certificate(capsys, tmp_path):
    cert = tmp_path / "c.json"
    code, out, _ = run(capsys, "verdict", corpus_path("sec6.alg"), "--emit-cert", cert)
    assert code == 0
    assert "Generates(SimplesCertificate)" in out
    assert load(cert) == load(corpus_path("sec6.cert.json"))


def test_verdict_finite_injdim(capsys, tmp_path, monkeypatch):
    monkeypatch.chdir(tmp_path)
    code, out, _ = run(capsys, "verdict", corpus_path("kx2.alg"))
    assert code == 0 and "Generates(FiniteInjDim(0))" in out
    assert "certificate: none" in out


def test_verdict_unknown_exit_code(capsys, tmp_path, monkeypatch):
    monkeypatch.chdir(tmp_path)
    code, out, _ = run(capsys, "verdict", corpus_path("sec6.alg"), "--max-dim", 6, "--max-rounds", 1,
                       "--max-steps", 2)
    assert code == 2 and "Unknown(" in out


def test_check_golden_certificate(capsys):
    code, out, _ = run(capsys, "check", corpus_path("sec6.alg"), corpus_path("sec6.cert.json"))
    assert code == 0 and out.strip() == "Accepted"


def test_check_against_wrong_algebra(capsys):
    code, out, _ = run(capsys, "check", corpus_path("nakayama.alg"), corpus_path("sec6.cert.json"))
    assert code == 1 and out.startswith("Rejected")


def test_check_corrupted_copy(capsys, tmp_path):
    doc = load(corpus_path("sec6.cert.json"))
    doc["steps"][-1]["premises"] = []
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps(doc))
    code, out, _ = run(capsys, "check", corpus_path("sec6.alg"), bad)
    assert code == 1 and out.startswith("Rejected")


def test_resolve_simple(capsys, tmp_path):
    graph = tmp_path / "g.txt"
    code, out, _ = run(capsys, "resolve", corpus_path("sec6.alg"), "--simple", 4, "--length", 4,
                       "--emit-graph", graph)
    assert code == 0 and "I^0" in out
    assert graph.read_text().startswith("# cosyzygy graph")


def test_resolve_injective_has_length_zero(capsys):
    code, out, _ = run(capsys, "resolve", corpus_path("sec6.alg"), "--injective", 2)
    assert code == 0
    assert "finite" in out and "I^1" not in out


def test_resolve_projective(capsys):
    code, out, _ = run(capsys, "resolve", corpus_path("a2.alg"), "--simple", 1, "--projective-resolution")
    assert code == 0 and "P^0" in out and "finite" in out


def test_cosyzygy_graph_named(capsys):
    code, out, _ = run(capsys, "cosyzygy-graph", corpus_path("sec6.alg"), "--named", "Ma")
    assert code == 0 and "repetition index: 0" in out


def test_cosyzygy_graph_incomplete(capsys):
    code, out, _ = run(capsys, "cosyzygy-graph", corpus_path("sec6.alg"), "--simple", 1, "--max-dim", 20)
    assert code == 2


def test_decompose(capsys):
    code, out, _ = run(capsys, "decompose", corpus_path("sec6.alg"), "--injective", 1, "--show")
    assert code == 0 and "injective I1" in out and "dims" in out


def test_errors(capsys, tmp_path):
    bad = tmp_path / "bad.alg"
    bad.write_text("field Q\nvertices 1\narrow x : 1 -> 2\n")
    assert run(capsys, "verdict", bad)[0] == 1
    assert run(capsys, "verdict", tmp_path / "missing.alg")[0] == 1
    assert run(capsys, "resolve", corpus_path("sec6.alg"))[0] == 1
    assert run(capsys, "resolve", corpus_path("sec6.alg"), "--named", "Mz")[0] == 1
    with pytest.raises(SystemExit):
        main(["frobnicate"])
