"""Krull-Schmidt decomposition and isomorphism testing.

Splitting works through the Fitting lemma: for an endomorphism ``y`` of ``M``
with ``d = dim M``, ``M = ker y^d (+) im y^d``. Candidates ``y`` are built
from endomorphisms ``x`` whose minimal polynomial has two coprime factors
(``y = g(x)`` for one primary factor ``g``). When no candidate splits, the
module is certified indecomposable by showing that ``End(M)/J`` is a field,
``J`` being the radical of the trace form ``(x, y) -> tr(x y)``. That
description of the Jacobson radical is valid in characteristic 0 and in
characteristic ``p > dim M``.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Sequence

import sympy

from .linalg import Mat, matrix_power, minimal_polynomial, poly_eval_matrix, solve, kernel_basis
from .modules import (Morphism, Representation, direct_sum, hom_basis, image, kernel,
                      linear_combination, morphism_from_columns, socle_dims, top_dims)

DEFAULT_SEED = 20240601
_RANDOM_TRIES = 24
_QUICK_TRIES = 2


class SplitExhaustion(RuntimeError):
    """The splitting strategy could neither split a module nor certify it indecomposable."""


@dataclass
class EndAlgebra:
    module: Representation
    basis: list[Morphism]
    _table: list | None = field(default=None, repr=False)

    @property
    def dim(self) -> int:
        return len(self.basis)

    def coordinates(self, f: Morphism) -> list:
        """Coordinates of an endomorphism in ``basis``."""
        F = self.module.field
        A = Mat.from_columns(F, [b.flat() for b in self.basis], len(self.basis[0].flat()))
        x = solve(A, f.flat())
        if x is None:
            raise ValueError("not an endomorphism of this module")
        return x

    def table(self) -> list[list[list]]:
        """``table[i][j]`` = coordinates of ``basis[i] o basis[j]``."""
        if self._table is None:
            self._table = [[self.coordinates(bi @ bj) for bj in self.basis] for bi in self.basis]
        return self._table

    def identity_coordinates(self) -> list:
        return self.coordinates(self.module.identity())


def end_algebra(M: Representation) -> EndAlgebra:
    if M.is_zero():
        raise ValueError("End of the zero module is not used")
    return EndAlgebra(M, hom_basis(M, M))


def _total_matrix_power(f: Morphism, k: int) -> Morphism:
    return Morphism(f.source, f.target, [matrix_power(m, k) for m in f.mats], check=False)


def fitting_split(M: Representation, f: Morphism):
    """``(ker f^d, im f^d)`` with their inclusions into ``M``; ``d = dim M``."""
    d = max(M.total_dim, 1)
    fd = _total_matrix_power(f, d)
    K, k_inc = kernel(fd)
    I, i_inc = image(fd)
    return (K, k_inc), (I, i_inc)


def is_nilpotent(f: Morphism) -> bool:
    return _total_matrix_power(f, max(f.source.total_dim, 1)).is_zero()


# polynomials ----------------------------------------------------------------

def _sympy_domain(F):
    return sympy.QQ if F.p is None else sympy.GF(F.p)


def _to_poly(coeffs: Sequence, F) -> sympy.Poly:
    t = sympy.Symbol("t")
    dom = _sympy_domain(F)
    vals = [sympy.Rational(int(c.numerator), int(c.denominator)) if F.p is None else int(c) for c in reversed(coeffs)]
    return sympy.Poly(vals, t, domain=dom)


def _from_poly(p: sympy.Poly, F) -> list:
    out = []
    for c in reversed(p.all_coeffs()):
        if F.p is None:
            c = sympy.Rational(c)
            out.append(F(f"{c.p}/{c.q}"))
        else:
            out.append(F(int(c)))
    return out


def morphism_minimal_polynomial(f: Morphism) -> sympy.Poly:
    F = f.field
    poly = None
    for m in f.mats:
        if m.rows == 0:
            continue
        p = _to_poly(minimal_polynomial(m), F)
        poly = p if poly is None else poly.lcm(p)
    if poly is None:
        poly = _to_poly([F.one], F)
    return poly


def _primary_factor(f: Morphism):
    """A primary factor ``g^e`` of the minimal polynomial when it has two coprime parts."""
    poly = morphism_minimal_polynomial(f)
    _, factors = poly.factor_list()
    if len(factors) < 2:
        return None
    g, e = factors[0]
    return g ** e


def _eval_poly_morphism(p: sympy.Poly, f: Morphism) -> Morphism:
    F = f.field
    coeffs = _from_poly(p, F)
    return Morphism(f.source, f.target, [poly_eval_matrix(coeffs, m) for m in f.mats], check=False)


# splitting --------------------------------------------------------------------

def _candidates(basis: list[Morphism], F, seed: int):
    yield from basis
    for i in range(len(basis)):
        for j in range(i + 1, len(basis)):
            yield basis[i] + basis[j]
    rng = random.Random(seed)
    for _ in range(_RANDOM_TRIES):
        yield linear_combination(basis, [F.random(rng) for _ in basis])


def _generic(basis: list[Morphism], F, seed: int, count: int = _QUICK_TRIES):
    # basis elements catch isotypic pieces whose generic elements have irreducible
    # minimal polynomials over Q; generic elements catch the rest
    yield from basis[:4]
    rng = random.Random(seed ^ 0x5EED)
    for _ in range(count):
        yield linear_combination(basis, [F.random(rng) for _ in basis])


def _try_split(M: Representation, basis: list[Morphism], seed: int, pair_cap: int = 64, quick: bool = False):
    F = M.field
    seen_pairs = 0
    cands = _generic(basis, F, seed) if quick else _candidates(basis, F, seed)
    for k, x in enumerate(cands):
        if not quick and k >= len(basis):
            seen_pairs += 1
            if seen_pairs > pair_cap + _RANDOM_TRIES:
                break
        if x.is_zero():
            continue
        g = _primary_factor(x)
        if g is None:
            continue
        y = _eval_poly_morphism(g, x)
        (K, k_inc), (I, i_inc) = fitting_split(M, y)
        if not K.is_zero() and not I.is_zero():
            return (K, k_inc), (I, i_inc)
    return None


def trace_radical(E: EndAlgebra) -> list[list]:
    """Coordinate vectors spanning ``{x : tr(x y) = 0 for all y}``."""
    F = E.module.field
    n = E.dim
    # tr(x y) = sum of x[r][c] * y[c][r], so pair flattened x with flattened transpose y
    flat = [b.flat() for b in E.basis]
    flat_t = [[x for m in b.mats for row in m.transpose().data for x in row] for b in E.basis]
    support = [[k for k, x in enumerate(v) if x] for v in flat]
    G = Mat.zeros(F, n, n)
    for i in range(n):
        vi, si = flat[i], support[i]
        for j in range(n):
            wj = flat_t[j]
            G.data[i][j] = F(sum((vi[k] * wj[k] for k in si), F.zero))
    return kernel_basis(G).columns()


def certify_local(M: Representation, basis: list[Morphism], seed: int = DEFAULT_SEED) -> bool:
    """True when ``End(M)/J`` is shown to be a field generated by one element."""
    F = M.field
    if len(basis) == 1:
        return True
    if F.p is not None and F.p <= M.total_dim:
        raise SplitExhaustion(f"GF({F.p}) needs characteristic above dim M = {M.total_dim}")
    E = EndAlgebra(M, basis)
    J = [linear_combination(basis, v) for v in trace_radical(E)]
    s = len(basis) - len(J)
    if s == 1:
        return True
    rng = random.Random(seed)
    for x in list(basis) + [linear_combination(basis, [F.random(rng) for _ in basis])
                            for _ in range(_RANDOM_TRIES)]:
        powers = [M.identity()]
        while True:
            nxt = powers[-1] @ x
            cols = [p.flat() for p in powers] + [j.flat() for j in J]
            coeffs = solve(Mat.from_columns(F, cols, len(nxt.flat())), nxt.flat())
            if coeffs is not None:
                k = len(powers)
                if k == s:
                    g = _to_poly([F(-c) for c in coeffs[:k]] + [F.one], F)
                    if g.is_irreducible:
                        return True
                break
            powers.append(nxt)
            if len(powers) > s:
                break
    return False


@dataclass
class Decomposition:
    module: Representation
    summands: list[Representation]
    inclusions: list[Morphism]

    def iso(self) -> Morphism:
        """The isomorphism ``(+) summands -> module``."""
        return morphism_from_columns(self.inclusions, self.module)

    def projections(self) -> list[Morphism]:
        inv = self.iso().inverse()
        _, _, projs = direct_sum(self.summands, algebra=self.module.algebra)
        return [p @ inv for p in projs]

    def __len__(self) -> int:
        return len(self.summands)


def decompose(M: Representation, seed: int = DEFAULT_SEED) -> Decomposition:
    """Split ``M`` into indecomposable summands with inclusions into ``M``."""
    cache = M.algebra.cache.setdefault("decompose", {})
    if M in cache:
        return cache[M]
    pieces: list[tuple[Representation, Morphism]] = []
    stack = [(M, M.identity())]
    while stack:
        X, inc = stack.pop()
        if X.is_zero():
            continue
        basis = hom_basis(X, X)
        if len(basis) > 1:
            # a generic endomorphism usually splits a decomposable module; a local
            # certificate settles indecomposables before the exhaustive candidate list
            split = _try_split(X, basis, seed, quick=True)
            if split is None:
                F = X.field
                if (F.p is None or F.p > X.total_dim) and certify_local(X, basis, seed):
                    pieces.append((X, inc))
                    continue
                split = _try_split(X, basis, seed)
            if split is not None:
                (K, k_inc), (I, i_inc) = split
                stack.append((I, inc @ i_inc))
                stack.append((K, inc @ k_inc))
                continue
            if not certify_local(X, basis, seed):
                raise SplitExhaustion(f"could not split or certify a summand with dims {list(X.dims)}")
        pieces.append((X, inc))
    pieces.sort(key=lambda p: (p[0].total_dim, p[0].dims))
    result = Decomposition(M, [p[0] for p in pieces], [p[1] for p in pieces])
    cache[M] = result
    return result


def is_indecomposable(M: Representation) -> bool:
    return not M.is_zero() and len(decompose(M)) == 1


# isomorphism ------------------------------------------------------------------

def fingerprint(M: Representation) -> tuple:
    return (M.dims, top_dims(M), socle_dims(M))


def iso_between_indecomposables(M: Representation, N: Representation) -> Morphism | None:
    """Exact iso test for indecomposable modules (local endomorphism rings).

    If ``M`` and ``N`` are isomorphic then some composite ``g o f`` of basis
    homomorphisms is a unit of ``End(M)``, and then ``f`` is an isomorphism;
    if every such composite is nilpotent, no isomorphism exists.
    """
    if M.dims != N.dims:
        return None
    fs = hom_basis(M, N)
    for f in fs:
        if f.is_iso():
            return f
    if not fs:
        return None
    gs = hom_basis(N, M)
    for f in fs:
        for g in gs:
            if not is_nilpotent(g @ f):
                return f if f.is_iso() else None
    return None


def is_isomorphic(M: Representation, N: Representation, seed: int = DEFAULT_SEED) -> Morphism | None:
    """An explicit isomorphism ``M -> N`` or ``None`` when there is none."""
    if M.algebra is not N.algebra:
        raise ValueError("modules over different algebras")
    if M.dims != N.dims:
        return None
    if M.is_zero():
        return M.zero_map_to(N)
    if M == N:
        return M.identity()
    fs = hom_basis(M, N)
    if not fs:
        return None
    for f in fs:
        if f.is_iso():
            return f
    rng = random.Random(seed)
    F = M.field
    for _ in range(4):
        f = linear_combination(fs, [F.random(rng) for _ in fs])
        if f.is_iso():
            return f
    dm, dn = decompose(M, seed), decompose(N, seed)
    if len(dm) != len(dn):
        return None
    used = [False] * len(dn)
    parts = []
    for X in dm.summands:
        for j, Y in enumerate(dn.summands):
            if used[j] or X.dims != Y.dims:
                continue
            phi = iso_between_indecomposables(X, Y)
            if phi is not None:
                used[j] = True
                parts.append(dn.inclusions[j] @ phi)
                break
        else:
            return None
    to_n = morphism_from_columns(parts, N)
    return to_n @ dm.iso().inverse()


class IsoRegistry:
    """Isomorphism classes of indecomposables; the first registered module is the representative."""

    def __init__(self):
        self.representatives: list[Representation] = []
        self._buckets: dict[tuple, list[int]] = {}

    def __len__(self) -> int:
        return len(self.representatives)

    def lookup(self, M: Representation) -> int | None:
        key = fingerprint(M)
        for idx in self._buckets.get(key, []):
            rep = self.representatives[idx]
            if rep == M or iso_between_indecomposables(M, rep) is not None:
                return idx
        return None

    def register(self, M: Representation) -> tuple[int, bool]:
        """``(class id, newly_added)``."""
        idx = self.lookup(M)
        if idx is not None:
            return idx, False
        idx = len(self.representatives)
        self.representatives.append(M)
        self._buckets.setdefault(fingerprint(M), []).append(idx)
        return idx, True
