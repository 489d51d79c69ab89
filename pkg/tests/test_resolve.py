import random

import pytest
from hypothesis import HealthCheck, given, settings, strategies as st

from injgen.decomp import is_isomorphic
from injgen.modules import (direct_sum, dual_op, indec_injective, simple_module,
                            socle_dims)
from injgen.resolve import (Caps, Dim, ExceedsBound, Finite, Index, Unknown, cosyzygy,
                            cosyzygy_graph, finite_cosyzygy_type, hull_sequence, injdim_regular,
                            injective_hull, injective_index, is_injective_module,
                            min_injective_resolution, min_projective_resolution, repetition_index,
                            syzygy)

from helpers import random_module

SETTINGS = settings(max_examples=30, deadline=None, suppress_health_check=[HealthCheck.too_slow])


def assert_hull_sequence_exact(seq):
    """Exactness plus minimality: soc(M) -> soc(hull) is onto, i.e. hull multiplicities = socle dims."""
    M = seq.module
    assert seq.embedding.is_injective()
    assert seq.projection.is_surjective()
    assert (seq.projection @ seq.embedding).is_zero()
    for v in range(M.algebra.n):
        assert seq.embedding.ranks()[v] + seq.cosyzygy.dims[v] == seq.hull.dims[v]
    assert is_injective_module(seq.hull)
    assert socle_dims(seq.hull) == socle_dims(M)


@pytest.mark.parametrize("src,dst", [("Ma", "Mb"), ("Mb", "Ma"), ("Mc", "Ma"), ("Md", "Mc"),
                                     ("Me", "Mf"), ("Mf", "Me"), ("Mi", "Mj"), ("Mj", "Mi")])
def test_sec6_cosyzygies(sec6_named, src, dst):
    assert is_isomorphic(cosyzygy(sec6_named[src]), sec6_named[dst]) is not None


def test_sec6_hulls_of_ma_and_mb(sec6, sec6_named):
    _, emb = injective_hull(sec6_named["Ma"])
    assert is_isomorphic(emb.target, indec_injective(sec6, 5)) is not None
    _, emb = injective_hull(sec6_named["Mb"])
    assert is_isomorphic(emb.target, indec_injective(sec6, 4)) is not None


def test_graph_seeded_at_ma_is_a_two_cycle(sec6_named):
    g = cosyzygy_graph([sec6_named["Ma"]])
    assert g.complete
    assert len(g.nodes) == 2
    a, b = g.node_ids
    assert g.edges() == {a: {b: 1}, b: {a: 1}}
    reps = [g.nodes[k].representative for k in g.node_ids]
    assert {frozenset(n for n in ("Ma", "Mb") if is_isomorphic(R, sec6_named[n])) for R in reps} == \
        {frozenset({"Ma"}), frozenset({"Mb"})}


def test_graph_export_is_deterministic(sec6_named):
    assert cosyzygy_graph([sec6_named["Mk"]]).export() == cosyzygy_graph([sec6_named["Mk"]]).export()


@pytest.mark.parametrize("name,n", [("Ma", 0), ("Mb", 0), ("Mc", 1), ("Md", 2), ("Mk", 1)])
def test_repetition_index(sec6_named, name, n):
    assert repetition_index(sec6_named[name]) == Index(n)


def test_repetition_index_of_s4(sec6):
    assert repetition_index(simple_module(sec6, 3)) == Index(1)


def test_repetition_index_of_injective_is_zero(sec6):
    assert repetition_index(indec_injective(sec6, 2)) == Index(0)


def test_cap_hit_gives_unknown(sec6):
    r = finite_cosyzygy_type(simple_module(sec6, 0), Caps(max_dim=20))
    assert isinstance(r, Unknown) and "max_dim" in r.report


@pytest.mark.parametrize("name,expected", [("kx2.alg", 0), ("kx3.alg", 0), ("a2.alg", 1), ("nakayama.alg", 2)])
def test_injdim_regular(corpus, name, expected):
    assert injdim_regular(corpus(name)) == Dim(expected)


def test_injdim_bound_reports(corpus):
    assert isinstance(injdim_regular(corpus("nakayama.alg"), bound=1), ExceedsBound)
    assert isinstance(injdim_regular(corpus("rad2zero.alg"), bound=6), ExceedsBound)


def test_injective_resolution_of_injective_has_length_zero(sec6):
    res = min_injective_resolution(indec_injective(sec6, 0))
    assert res.finite and res.length == 0


def test_simple_over_truncated_polynomial_is_periodic(corpus):
    A = corpus("kx3.alg")
    res = min_injective_resolution(simple_module(A, 0), 4)
    dims = [S.dims for S in res.syzygies]
    assert dims == [(1,), (2,), (1,), (2,), (1,), (2,)]


def test_resolution_differentials_compose_to_zero(sec6, sec6_named):
    res = min_injective_resolution(sec6_named["Mk"], 6)
    assert (res.differentials[0] @ res.augmentation).is_zero()
    for d0, d1 in zip(res.differentials, res.differentials[1:]):
        assert (d1 @ d0).is_zero()


def test_projective_resolution(corpus):
    A = corpus("a2.alg")
    res = min_projective_resolution(simple_module(A, 0))
    assert res.finite and res.length == 1


def test_cosyzygy_of_sum_is_sum_of_cosyzygies(sec6_named):
    Ma, Mc = sec6_named["Ma"], sec6_named["Mc"]
    S, _, _ = direct_sum([Ma, Mc])
    T, _, _ = direct_sum([cosyzygy(Ma), cosyzygy(Mc)])
    assert is_isomorphic(cosyzygy(S), T) is not None


def test_fct_closure(sec6_named):
    # every successor of every node is again a node
    r = finite_cosyzygy_type(sec6_named["Mg"])
    assert isinstance(r, Finite)
    ids = set(r.witness)
    for k in ids:
        assert set(r.graph.nodes[k].successors) <= ids


@SETTINGS
@given(st.integers(0, 10**6), st.sampled_from(["sec6.alg", "nakayama.alg", "monomial.alg", "rad2zero.alg"]))
def test_hull_sequence_exact_and_minimal(corpus, seed, name):
    M = random_module(corpus(name), random.Random(seed))
    assert_hull_sequence_exact(hull_sequence(M))


@SETTINGS
@given(st.integers(0, 10**6), st.sampled_from(["sec6.alg", "nakayama.alg", "monomial.alg"]))
def test_duality_bridge(corpus, seed, name):
    # D(Sigma_A M) = Omega_{A^op}(D M)
    M = random_module(corpus(name), random.Random(seed))
    left = dual_op(cosyzygy(M))
    right = syzygy(dual_op(M))
    assert is_isomorphic(left, right) is not None


def test_injective_index(sec6):
    for i in range(6):
        assert injective_index(indec_injective(sec6, i)) == i
    assert injective_index(simple_module(sec6, 0)) is None
