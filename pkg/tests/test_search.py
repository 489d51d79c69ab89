import pytest

from injgen.certificate import check_certificate, covers_all_simples, dumps
from injgen.modules import simple_module
from injgen.resolve import Caps
from injgen.search import derive_simple_targets, prune, search_membership, verdict


def test_sec6_certificate_shape(sec6, sec6_certificate):
    assert check_certificate(sec6_certificate, sec6).accepted
    assert covers_all_simples(sec6_certificate, sec6)


def test_search_is_deterministic(corpus):
    A = corpus("monomial.alg")
    a = search_membership(derive_simple_targets(A))
    b = search_membership(derive_simple_targets(A))
    assert dumps(a.doc) == dumps(b.doc)


def test_truncated_polynomial_search_uses_finite_type(corpus):
    # bypasses the injective-dimension shortcut: S is reached through R-FCT
    A = corpus("kx2.alg")
    cert = search_membership([simple_module(A, 0)])
    assert "R-FCT" in cert.rules()
    assert check_certificate(cert.doc, A).accepted


@pytest.mark.parametrize("name", ["rad2zero.alg", "monomial.alg"])
def test_finite_type_algebras_go_through_fct(corpus, name):
    v = verdict(corpus(name))
    assert str(v) == "Generates(SimplesCertificate)"
    assert "R-FCT" in v.certificate.rules()


@pytest.mark.parametrize("name,n", [("kx2.alg", 0), ("kx3.alg", 0), ("a2.alg", 1), ("nakayama.alg", 2)])
def test_finite_injdim_route(corpus, name, n):
    assert str(verdict(corpus(name))) == f"Generates(FiniteInjDim({n}))"


def test_starved_caps_give_unknown(sec6):
    caps = Caps(max_dim=6, max_rounds=1, max_length=2, sweep_dim=4)
    v = verdict(sec6, caps)
    assert not v.generates
    assert str(v).startswith("Unknown(")


def test_prune_keeps_only_needed_steps(sec6_certificate):
    doc = prune(sec6_certificate)
    assert doc == sec6_certificate
    assert [s["id"] for s in doc["steps"]] == list(range(len(doc["steps"])))


def test_empty_targets():
    with pytest.raises(ValueError):
        search_membership([])
