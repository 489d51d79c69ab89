"""Random module generators shared by the property tests."""

from __future__ import annotations

import random

from injgen.linalg import Mat
from injgen.modules import (Representation, closure, generated_submodule, indec_injective, indec_projective,
                            quotient, simple_module)


def random_invertible(F, n: int, rng: random.Random) -> Mat:
    while True:
        m = Mat.from_rows(F, [[F(rng.randint(-2, 2)) for _ in range(n)] for _ in range(n)], cols=n)
        if m.rank() == n:
            return m


def conjugate(M: Representation, rng: random.Random) -> tuple[Representation, list[Mat]]:
    """``M`` transported along random base changes ``T_v`` (returns the module and the ``T_v``)."""
    F = M.field
    Ts = [random_invertible(F, d, rng) for d in M.dims]
    return M.transport(Ts), Ts


def random_vectors(M: Representation, rng: random.Random, k: int):
    F = M.field
    out = []
    support = [v for v, d in enumerate(M.dims) if d]
    for _ in range(k):
        v = rng.choice(support)
        out.append((v, [F(rng.randint(-2, 2)) for _ in range(M.dims[v])]))
    return out


def random_module(A, rng: random.Random) -> Representation:
    """A quotient or submodule of an indecomposable projective or injective."""
    i = rng.randrange(A.n)
    kind = rng.choice(["P", "I", "S", "subI", "quotP"])
    if kind == "S":
        return simple_module(A, i)
    if kind in ("P", "quotP"):
        M = indec_projective(A, i)
    else:
        M = indec_injective(A, i)
    if kind == "subI":
        S, _ = generated_submodule(M, random_vectors(M, rng, rng.randint(1, 2)))
        return S if not S.is_zero() else M
    if kind == "quotP":
        Q, _ = quotient(M, closure(M, random_vectors(M, rng, 1)))
        return Q if not Q.is_zero() else M
    return M


def random_indecomposable(A, rng: random.Random) -> Representation:
    from injgen.decomp import decompose
    dec = decompose(random_module(A, rng))
    return rng.choice(dec.summands)


def krull_schmidt_trial(A, rng: random.Random, parts: int = 3) -> bool:
    """Decompose a base-changed sum of known indecomposables and match summands up to iso."""
    from injgen.decomp import decompose, is_isomorphic
    from injgen.modules import direct_sum
    chosen = [random_indecomposable(A, rng) for _ in range(rng.randint(1, parts))]
    if rng.random() < 0.3:
        chosen.append(chosen[0])
    S, _, _ = direct_sum(chosen)
    M, _ = conjugate(S, rng)
    dec = decompose(M)
    if dec.iso().is_iso() is False:
        return False
    remaining = list(chosen)
    for X in dec.summands:
        for k, Y in enumerate(remaining):
            if is_isomorphic(X, Y) is not None:
                del remaining[k]
                break
        else:
            return False
    return not remaining
