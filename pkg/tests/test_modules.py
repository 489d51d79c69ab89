import random

import pytest
from hypothesis import HealthCheck, given, settings, strategies as st

from injgen.linalg import Mat
from injgen.modules import (Morphism, NaturalityError, Representation, RelationViolation, cokernel,
                            direct_sum, dual_op, format_module_text, from_literal, hom_basis, image,
                            indec_injective, indec_projective, kernel, linear_combination,
                            parse_module_text, radical, socle, socle_dims, to_literal,
                            top_dims)

from helpers import conjugate, random_module

SETTINGS = settings(max_examples=40, deadline=None, suppress_health_check=[HealthCheck.too_slow])


def test_relations_are_enforced(corpus):
    A = corpus("kx2.alg")
    with pytest.raises(RelationViolation):
        Representation(A, [3], {"x": [[0, 1, 0], [0, 0, 1], [0, 0, 0]]})
    M = Representation(A, [2], {"x": [[0, 0], [1, 0]]})
    assert M.total_dim == 2


def test_shape_mismatch(corpus):
    A = corpus("a2.alg")
    with pytest.raises(ValueError):
        Representation(A, [1, 1], {"a": [[1, 0]]})


def test_naturality_checked(corpus):
    A = corpus("a2.alg")
    F = A.field
    P1 = indec_projective(A, 0)
    assert P1.dims == (1, 1)
    # identity at vertex 1 and zero at vertex 2 does not commute with the arrow
    with pytest.raises(NaturalityError):
        Morphism(P1, P1, [Mat.identity(F, 1), Mat.zeros(F, 1, 1)])
    Morphism(P1, P1, [Mat.identity(F, 1), Mat.identity(F, 1)])


@pytest.mark.parametrize("name", ["kx2.alg", "a2.alg", "nakayama.alg", "sec6.alg"])
def test_projectives_and_injectives_have_simple_top_and_socle(corpus, name):
    A = corpus(name)
    for i in range(A.n):
        e = tuple(int(v == i) for v in range(A.n))
        assert top_dims(indec_projective(A, i)) == e
        assert socle_dims(indec_injective(A, i)) == e


def test_sec6_projective_dims(sec6):
    for i in range(6):
        assert indec_projective(sec6, i).dims == (1,) * 6
        assert indec_injective(sec6, i).dims == (1,) * 6


def test_hom_dimension_counts_paths(corpus):
    # dim Hom(P_i, M) = dim M e_i
    A = corpus("nakayama.alg")
    for i in range(A.n):
        for j in range(A.n):
            M = indec_injective(A, j)
            assert len(hom_basis(indec_projective(A, i), M)) == M.dims[i]


def test_hom_into_injective_counts_multiplicity(sec6, sec6_named):
    # dim Hom(M, I_i) = dim M e_i
    for M in sec6_named.values():
        for i in range(6):
            assert len(hom_basis(M, indec_injective(sec6, i))) == M.dims[i]


@SETTINGS
@given(st.integers(0, 10**6), st.sampled_from(["nakayama.alg", "sec6.alg", "monomial.alg", "rad2zero.alg"]))
def test_kernel_image_rank_nullity(corpus, seed, name):
    A = corpus(name)
    rng = random.Random(seed)
    M, N = random_module(A, rng), random_module(A, rng)
    basis = hom_basis(M, N)
    if not basis:
        return
    f = linear_combination(basis, [A.field(rng.randint(-2, 2)) for _ in basis])
    f.check()
    K, k = kernel(f)
    I, _ = image(f)
    C, c = cokernel(f)
    for v in range(A.n):
        assert K.dims[v] + I.dims[v] == M.dims[v]
        assert I.dims[v] + C.dims[v] == N.dims[v]
    assert (f @ k).is_zero()
    assert (c @ f).is_zero()
    assert k.is_injective() and c.is_surjective()


@SETTINGS
@given(st.integers(0, 10**6), st.sampled_from(["nakayama.alg", "sec6.alg", "monomial.alg"]))
def test_hom_basis_is_natural_and_conjugation_invariant(corpus, seed, name):
    A = corpus(name)
    rng = random.Random(seed)
    M, N = random_module(A, rng), random_module(A, rng)
    basis = hom_basis(M, N)
    for f in basis:
        assert f.failing_arrow() is None
    M2, _ = conjugate(M, rng)
    assert len(hom_basis(M2, N)) == len(basis)


@SETTINGS
@given(st.integers(0, 10**6), st.sampled_from(["nakayama.alg", "sec6.alg", "monomial.alg"]))
def test_double_dual(corpus, seed, name):
    A = corpus(name)
    M = random_module(A, random.Random(seed))
    DM = dual_op(M)
    DM.check()
    assert dual_op(DM).maps == M.maps
    assert DM.algebra.opposite() is A or DM.algebra.opposite().dim == A.dim
    assert top_dims(DM) == socle_dims(M)


def test_duality_swaps_projectives_and_injectives(sec6):
    op = sec6.opposite()
    for i in range(6):
        assert dual_op(indec_projective(sec6, i)).dims == indec_injective(op, i).dims


@SETTINGS
@given(st.integers(0, 10**6))
def test_literal_round_trips(sec6, seed):
    rng = random.Random(seed)
    M, _ = conjugate(random_module(sec6, rng), rng)
    assert from_literal(sec6, to_literal(M)) == M
    assert parse_module_text(sec6, format_module_text(M)) == M


def test_text_literal_errors(sec6):
    with pytest.raises(ValueError):
        parse_module_text(sec6, "map a46 = 1\n")
    with pytest.raises(ValueError):
        parse_module_text(sec6, "dims 0 0 0 1 0 1\nbogus\n")
    with pytest.raises(ValueError):
        from_literal(sec6, {"dims": [0] * 6, "maps": {"nope": []}})


def test_radical_and_socle_of_sum(sec6, sec6_named):
    M, _, _ = direct_sum([sec6_named["Ma"], sec6_named["Mb"]])
    R, _ = radical(M)
    S, _ = socle(M)
    assert R.total_dim == 1 + 3
    assert S.dims == tuple(a + b for a, b in zip(socle_dims(sec6_named["Ma"]), socle_dims(sec6_named["Mb"])))
