"""Finite-dimensional right modules as quiver representations.

A :class:`Representation` stores one vector space per vertex (given by its
dimension) and, for every arrow ``a: i -> j``, a matrix of shape
``dims[j] x dims[i]`` acting on column vectors. A path ``a.b`` acts as
``M(b) @ M(a)``.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Sequence

from .algebra import Algebra
from .linalg import (Mat, block_diag, column_space, kernel_basis, left_kernel, solve_matrix, sparse_kernel,
                     vstack, hstack)


class RelationViolation(ValueError):
    pass


class NaturalityError(ValueError):
    pass


class Representation:
    __slots__ = ("algebra", "dims", "maps", "_hash")

    def __init__(self, algebra: Algebra, dims: Sequence[int], maps: Sequence[Mat] | dict | None = None,
                 *, check: bool = True):
        self.algebra = algebra
        self.dims = tuple(int(d) for d in dims)
        if len(self.dims) != algebra.n:
            raise ValueError(f"dimension vector has {len(self.dims)} entries, quiver has {algebra.n} vertices")
        F = algebra.field
        arrows = algebra.arrows
        if maps is None:
            maps = {}
        if isinstance(maps, dict):
            built = []
            for k, a in enumerate(arrows):
                m = maps.get(a.name, maps.get(k))
                if m is None:
                    m = Mat.zeros(F, self.dims[a.target], self.dims[a.source])
                elif not isinstance(m, Mat):
                    m = Mat.from_rows(F, m, cols=self.dims[a.source])
                built.append(m)
            maps = built
        self.maps = tuple(maps)
        self._hash = None
        if check:
            self.check()

    # validation -------------------------------------------------------
    def check(self) -> None:
        for a, m in zip(self.algebra.arrows, self.maps):
            if m.shape != (self.dims[a.target], self.dims[a.source]):
                raise ValueError(f"map for arrow {a.name} has shape {m.shape}, "
                                 f"expected {(self.dims[a.target], self.dims[a.source])}")
        bad = self.violated_relation()
        if bad is not None:
            raise RelationViolation(f"relation {bad} does not hold on this representation")

    def violated_relation(self) -> str | None:
        spec = self.algebra.spec
        F = self.algebra.field
        for rel in spec.relations:
            total = Mat.zeros(F, self.dims[rel.target], self.dims[rel.source])
            for c, p in rel.terms:
                total = total + self.path_matrix(p).scale(c)
            if not total.is_zero():
                return " + ".join(f"{c}*{spec.path_name(p)}" for c, p in rel.terms)
        return None

    # basic data -------------------------------------------------------
    @property
    def field(self):
        return self.algebra.field

    @property
    def total_dim(self) -> int:
        return sum(self.dims)

    def is_zero(self) -> bool:
        return self.total_dim == 0

    def path_matrix(self, path: Sequence[int]) -> Mat:
        if not path:
            raise ValueError("empty path")
        out = self.maps[path[0]]
        for a in path[1:]:
            out = self.maps[a] @ out
        return out

    def arrow_map(self, name: str) -> Mat:
        return self.maps[self.algebra.quiver.arrow_index(name)]

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Representation):
            return NotImplemented
        return self.algebra is other.algebra and self.dims == other.dims and self.maps == other.maps

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.dims, self.maps))
        return self._hash

    def __repr__(self) -> str:
        return f"Representation(dims={list(self.dims)})"

    def identity(self) -> "Morphism":
        return Morphism(self, self, [Mat.identity(self.field, d) for d in self.dims], check=False)

    def zero_map_to(self, other: "Representation") -> "Morphism":
        return Morphism(self, other, [Mat.zeros(self.field, e, d) for d, e in zip(self.dims, other.dims)],
                        check=False)

    def transport(self, mats: Sequence[Mat]) -> "Representation":
        """The module obtained by the change of basis ``mats[v]`` at each vertex."""
        inv = [m.inverse() for m in mats]
        new_maps = [mats[a.target] @ m @ inv[a.source] for a, m in zip(self.algebra.arrows, self.maps)]
        return Representation(self.algebra, self.dims, new_maps, check=False)


class Morphism:
    """A family of linear maps ``mats[v]: source.dims[v] -> target.dims[v]``."""

    __slots__ = ("source", "target", "mats")

    def __init__(self, source: Representation, target: Representation, mats: Sequence[Mat], *,
                 check: bool = True):
        self.source = source
        self.target = target
        self.mats = tuple(mats)
        if check:
            self.check()

    def check(self) -> None:
        if self.source.algebra is not self.target.algebra:
            raise ValueError("morphism between modules over different algebras")
        for v, (m, d, e) in enumerate(zip(self.mats, self.source.dims, self.target.dims)):
            if m.shape != (e, d):
                raise ValueError(f"vertex {v}: matrix shape {m.shape}, expected {(e, d)}")
        bad = self.failing_arrow()
        if bad is not None:
            raise NaturalityError(f"square for arrow {bad} does not commute")

    def failing_arrow(self) -> str | None:
        for a, mm, nm in zip(self.source.algebra.arrows, self.source.maps, self.target.maps):
            if nm @ self.mats[a.source] != self.mats[a.target] @ mm:
                return a.name
        return None

    @property
    def field(self):
        return self.source.field

    def __matmul__(self, other: "Morphism") -> "Morphism":
        """``self @ other`` is the composite ``self o other``."""
        if other.target.dims != self.source.dims:
            raise ValueError("morphisms do not compose")
        return Morphism(other.source, self.target, [a @ b for a, b in zip(self.mats, other.mats)],
                        check=False)

    def __add__(self, other: "Morphism") -> "Morphism":
        return Morphism(self.source, self.target, [a + b for a, b in zip(self.mats, other.mats)], check=False)

    def __sub__(self, other: "Morphism") -> "Morphism":
        return Morphism(self.source, self.target, [a - b for a, b in zip(self.mats, other.mats)], check=False)

    def scale(self, c) -> "Morphism":
        return Morphism(self.source, self.target, [m.scale(c) for m in self.mats], check=False)

    def ranks(self) -> list[int]:
        return [m.rank() for m in self.mats]

    def rank(self) -> int:
        return sum(self.ranks())

    def is_zero(self) -> bool:
        return all(m.is_zero() for m in self.mats)

    def is_injective(self) -> bool:
        return all(r == d for r, d in zip(self.ranks(), self.source.dims))

    def is_surjective(self) -> bool:
        return all(r == e for r, e in zip(self.ranks(), self.target.dims))

    def is_iso(self) -> bool:
        return self.source.dims == self.target.dims and self.is_injective()

    def inverse(self) -> "Morphism":
        return Morphism(self.target, self.source, [m.inverse() for m in self.mats], check=False)

    def power(self, k: int) -> "Morphism":
        out = self.source.identity()
        for _ in range(k):
            out = self @ out
        return out

    def flat(self) -> list:
        return [x for m in self.mats for r in m.data for x in r]

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Morphism):
            return NotImplemented
        return self.mats == other.mats

    def __hash__(self) -> int:
        return hash(self.mats)

    def __repr__(self) -> str:
        return f"Morphism({list(self.source.dims)} -> {list(self.target.dims)}, rank={self.rank()})"


def linear_combination(basis: Sequence[Morphism], coeffs: Sequence) -> Morphism:
    if not basis:
        raise ValueError("empty basis")
    out = basis[0].scale(coeffs[0])
    for f, c in zip(basis[1:], coeffs[1:]):
        if c:
            out = out + f.scale(c)
    return out


# canonical modules ------------------------------------------------------

def _cached(A: Algebra, key, build):
    if key not in A.cache:
        A.cache[key] = build()
    return A.cache[key]


def _check_vertex(A: Algebra, i: int) -> None:
    if not 0 <= i < A.n:
        raise IndexError(f"vertex {i} out of range 0..{A.n - 1}")


def simple_module(A: Algebra, i: int) -> Representation:
    """The simple module at vertex ``i`` (0-based)."""
    _check_vertex(A, i)
    dims = [1 if v == i else 0 for v in range(A.n)]
    return _cached(A, ("S", i), lambda: Representation(A, dims))


def indec_projective(A: Algebra, i: int) -> Representation:
    """``e_i A`` on the basis of paths starting at ``i``."""
    _check_vertex(A, i)

    def build():
        F = A.field
        idx = A.basis_from(i)
        at = {v: [k for k in idx if A.basis[k].target == v] for v in range(A.n)}
        pos = {k: at[A.basis[k].target].index(k) for k in idx}
        maps = []
        for ai, a in enumerate(A.arrows):
            m = Mat.zeros(F, len(at[a.target]), len(at[a.source]))
            for col, k in enumerate(at[a.source]):
                for j, c in A.rmul[ai][k].items():
                    m.data[pos[j]][col] = c
            maps.append(m)
        return Representation(A, [len(at[v]) for v in range(A.n)], maps)

    return _cached(A, ("P", i), build)


def indec_injective(A: Algebra, i: int) -> Representation:
    """``D(A e_i)``: the dual of the left projective, i.e. of ``e_i A^op``."""
    _check_vertex(A, i)
    return _cached(A, ("I", i), lambda: dual_op(indec_projective(A.opposite(), i)))


def regular_module(A: Algebra) -> Representation:
    return direct_sum([indec_projective(A, i) for i in range(A.n)])[0]


def dual_op(M: Representation) -> Representation:
    """``D M = Hom_k(M, k)`` as a right module over the opposite algebra."""
    op = M.algebra.opposite()
    return Representation(op, M.dims, [m.transpose() for m in M.maps], check=False)


def dual_morphism(f: Morphism) -> Morphism:
    return Morphism(dual_op(f.target), dual_op(f.source), [m.transpose() for m in f.mats], check=False)


def direct_sum(modules: Sequence[Representation], algebra: Algebra | None = None):
    """Block-diagonal sum; returns ``(M, inclusions, projections)``."""
    modules = list(modules)
    if not modules:
        if algebra is None:
            raise ValueError("empty direct sum needs an algebra")
        Z = Representation(algebra, [0] * algebra.n, check=False)
        return Z, [], []
    A = modules[0].algebra
    F = A.field
    dims = [sum(M.dims[v] for M in modules) for v in range(A.n)]
    maps = [block_diag(F, [M.maps[k] for M in modules]) for k in range(len(A.arrows))]
    S = Representation(A, dims, maps, check=False)
    inclusions, projections = [], []
    offsets = [0] * A.n
    for M in modules:
        inc, proj = [], []
        for v in range(A.n):
            i_m = Mat.zeros(F, dims[v], M.dims[v])
            p_m = Mat.zeros(F, M.dims[v], dims[v])
            for r in range(M.dims[v]):
                i_m.data[offsets[v] + r][r] = F.one
                p_m.data[r][offsets[v] + r] = F.one
            inc.append(i_m)
            proj.append(p_m)
            offsets[v] += M.dims[v]
        inclusions.append(Morphism(M, S, inc, check=False))
        projections.append(Morphism(S, M, proj, check=False))
    return S, inclusions, projections


def morphism_from_columns(source_parts: Sequence[Morphism], target: Representation) -> Morphism:
    """The map ``(+) source_k -> target`` whose restriction to summand ``k`` is ``source_parts[k]``."""
    S, _, _ = direct_sum([f.source for f in source_parts], algebra=target.algebra)
    F = target.field
    mats = [hstack(F, [f.mats[v] for f in source_parts], target.dims[v]) if source_parts
            else Mat.zeros(F, target.dims[v], 0) for v in range(target.algebra.n)]
    return Morphism(S, target, mats, check=False)


def morphism_to_sum(source: Representation, parts: Sequence[Morphism]) -> Morphism:
    """The map ``source -> (+) target_k`` with components ``parts[k]``."""
    S, _, _ = direct_sum([f.target for f in parts], algebra=source.algebra)
    F = source.field
    mats = [vstack(F, [f.mats[v] for f in parts], source.dims[v]) for v in range(source.algebra.n)]
    return Morphism(source, S, mats, check=False)


def block_morphism(blocks: Sequence[Morphism]) -> Morphism:
    """Block-diagonal map ``(+) source_k -> (+) target_k``."""
    A = blocks[0].source.algebra
    S, _, _ = direct_sum([f.source for f in blocks])
    T, _, _ = direct_sum([f.target for f in blocks])
    mats = [block_diag(A.field, [f.mats[v] for f in blocks]) for v in range(A.n)]
    return Morphism(S, T, mats, check=False)


# homomorphisms ----------------------------------------------------------

def hom_basis(M: Representation, N: Representation) -> list[Morphism]:
    """A basis of ``Hom_A(M, N)`` from the kernel of the naturality system."""
    A = M.algebra
    F = A.field
    offsets = []
    total = 0
    for v in range(A.n):
        offsets.append(total)
        total += M.dims[v] * N.dims[v]
    if total == 0:
        return []

    def var(v, r, c):
        return offsets[v] + r * M.dims[v] + c

    rows = []
    for a, mm, nm in zip(A.arrows, M.maps, N.maps):
        s, t = a.source, a.target
        # N(a) F_s - F_t M(a) = 0, entry (r, c) with r < N.dims[t], c < M.dims[s]
        for r in range(N.dims[t]):
            nrow = nm.data[r]
            for c in range(M.dims[s]):
                row: dict[int, object] = {}
                for k in range(N.dims[s]):
                    x = nrow[k]
                    if x:
                        j = var(s, k, c)
                        row[j] = row.get(j, 0) + x
                for k in range(M.dims[t]):
                    x = mm.data[k][c]
                    if x:
                        j = var(t, r, k)
                        row[j] = row.get(j, 0) - x
                if row:
                    rows.append(row)
    K = sparse_kernel(F, rows, total)
    basis = []
    for col in K:
        mats = []
        for v in range(A.n):
            o = offsets[v]
            mats.append(Mat(F, N.dims[v], M.dims[v],
                            [col[o + r * M.dims[v]: o + (r + 1) * M.dims[v]] for r in range(N.dims[v])]))
        basis.append(Morphism(M, N, mats, check=False))
    return basis


def end_basis(M: Representation) -> list[Morphism]:
    return hom_basis(M, M)


# sub- and quotient modules -----------------------------------------------

def submodule(M: Representation, bases: Sequence[Mat]) -> tuple[Representation, Morphism]:
    """The submodule spanned by the columns of ``bases[v]``; columns must be independent
    and the family closed under the arrow maps."""
    A = M.algebra
    maps = []
    for a, m in zip(A.arrows, M.maps):
        X = solve_matrix(bases[a.target], m @ bases[a.source])
        if X is None:
            raise ValueError(f"subspaces are not closed under arrow {a.name}")
        maps.append(X)
    S = Representation(A, [b.cols for b in bases], maps, check=False)
    return S, Morphism(S, M, bases, check=False)


def quotient(M: Representation, bases: Sequence[Mat]) -> tuple[Representation, Morphism]:
    """``M`` modulo the submodule spanned by ``bases[v]``; returns the projection."""
    A = M.algebra
    F = A.field
    projs = []
    for v in range(A.n):
        if bases[v].cols == 0:
            projs.append(Mat.identity(F, M.dims[v]))
        else:
            projs.append(left_kernel(bases[v]))
    sections = [solve_matrix(q, Mat.identity(F, q.rows)) for q in projs]
    maps = [projs[a.target] @ m @ sections[a.source] for a, m in zip(A.arrows, M.maps)]
    Q = Representation(A, [q.rows for q in projs], maps, check=False)
    return Q, Morphism(M, Q, projs, check=False)


def kernel(f: Morphism) -> tuple[Representation, Morphism]:
    return submodule(f.source, [kernel_basis(m) for m in f.mats])


def image(f: Morphism) -> tuple[Representation, Morphism]:
    return submodule(f.target, [column_space(m) for m in f.mats])


def cokernel(f: Morphism) -> tuple[Representation, Morphism]:
    return quotient(f.target, [column_space(m) for m in f.mats])


def closure(M: Representation, vectors: Iterable[tuple[int, Sequence]]) -> list[Mat]:
    """Column bases of the submodule generated by ``(vertex, vector)`` pairs."""
    A = M.algebra
    F = A.field
    spans: list[list[list]] = [[] for _ in range(A.n)]
    pending = [(v, [F(x) for x in vec]) for v, vec in vectors]
    while pending:
        v, vec = pending.pop()
        cand = spans[v] + [vec]
        if Mat.from_columns(F, cand, M.dims[v]).rank() == len(cand):
            spans[v].append(vec)
            for k, a in enumerate(A.arrows):
                if a.source == v:
                    pending.append((a.target, M.maps[k].apply(vec)))
    return [Mat.from_columns(F, spans[v], M.dims[v]) if spans[v] else Mat.zeros(F, M.dims[v], 0)
            for v in range(A.n)]


def generated_submodule(M: Representation, vectors) -> tuple[Representation, Morphism]:
    return submodule(M, [column_space(b) if b.cols else b for b in closure(M, vectors)])


def radical(M: Representation) -> tuple[Representation, Morphism]:
    """``M rad A``: the sum of the images of all arrow maps."""
    A = M.algebra
    F = A.field
    bases = []
    for v in range(A.n):
        incoming = [m for a, m in zip(A.arrows, M.maps) if a.target == v]
        if incoming and M.dims[v]:
            bases.append(column_space(hstack(F, incoming, M.dims[v])))
        else:
            bases.append(Mat.zeros(F, M.dims[v], 0))
    return submodule(M, bases)


def socle(M: Representation) -> tuple[Representation, Morphism]:
    """Elements killed by every arrow."""
    A = M.algebra
    F = A.field
    bases = []
    for v in range(A.n):
        outgoing = [m for a, m in zip(A.arrows, M.maps) if a.source == v]
        if outgoing and M.dims[v]:
            bases.append(kernel_basis(vstack(F, outgoing, M.dims[v])))
        else:
            bases.append(Mat.identity(F, M.dims[v]))
    return submodule(M, bases)


def top(M: Representation) -> tuple[Representation, Morphism]:
    R, inc = radical(M)
    return quotient(M, list(inc.mats))


def socle_dims(M: Representation) -> tuple[int, ...]:
    return socle(M)[0].dims


def top_dims(M: Representation) -> tuple[int, ...]:
    return top(M)[0].dims


def is_semisimple(M: Representation) -> bool:
    return all(m.is_zero() for m in M.maps)


# literals -----------------------------------------------------------------

def _fmt(x) -> str:
    return str(x)


def to_literal(M: Representation) -> dict:
    """JSON-ready literal: dimension vector plus the nonzero arrow matrices."""
    maps = {}
    for a, m in zip(M.algebra.arrows, M.maps):
        if m.rows and m.cols and not m.is_zero():
            maps[a.name] = [[_fmt(x) for x in r] for r in m.data]
    return {"dims": list(M.dims), "maps": maps}


def from_literal(A: Algebra, lit: dict, *, check: bool = True) -> Representation:
    dims = lit["dims"]
    names = {a.name for a in A.arrows}
    unknown = set(lit.get("maps", {})) - names
    if unknown:
        raise ValueError(f"unknown arrows in module literal: {sorted(unknown)}")
    maps = {}
    for name, rows in lit.get("maps", {}).items():
        a = A.arrows[A.quiver.arrow_index(name)]
        m = Mat.from_rows(A.field, rows, cols=dims[a.source])
        if m.rows != dims[a.target]:
            raise ValueError(f"arrow {name}: {m.rows} rows, expected {dims[a.target]}")
        maps[name] = m
    return Representation(A, dims, maps, check=check)


def morphism_to_literal(f: Morphism) -> list:
    return [[[_fmt(x) for x in r] for r in m.data] for m in f.mats]


def morphism_from_literal(source: Representation, target: Representation, mats: list, *,
                          check: bool = True) -> Morphism:
    F = source.field
    if len(mats) != source.algebra.n:
        raise ValueError("morphism literal needs one matrix per vertex")
    built = [Mat.from_rows(F, rows, cols=source.dims[v]) for v, rows in enumerate(mats)]
    for v, m in enumerate(built):
        if m.shape != (target.dims[v], source.dims[v]):
            raise ValueError(f"vertex {v}: matrix shape {m.shape} does not match the modules")
    return Morphism(source, target, built, check=check)


def parse_module_text(A: Algebra, text: str) -> Representation:
    """Text module literal::

        dims 0 0 0 1 0 1
        map a46 = 1
        map a12 = 1 0 ; 0 1

    Rows are separated by ``;``. Arrows without a ``map`` line act as zero.
    """
    dims = None
    maps = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, _, rest = line.partition(" ")
        if key == "dims":
            dims = [int(x) for x in rest.split()]
        elif key == "map":
            name, eq, body = rest.partition("=")
            if not eq:
                raise ValueError(f"line {lineno}: expected 'map <arrow> = <rows>'")
            maps[name.strip()] = [[Fraction(x) for x in row.split()] for row in body.split(";")]
        else:
            raise ValueError(f"line {lineno}: unknown keyword {key!r}")
    if dims is None:
        raise ValueError("module literal has no 'dims' line")
    return from_literal(A, {"dims": dims, "maps": {k: [[str(x) for x in r] for r in v] for k, v in maps.items()}})


def format_module_text(M: Representation) -> str:
    lines = ["dims " + " ".join(str(d) for d in M.dims)]
    for name, rows in to_literal(M)["maps"].items():
        lines.append(f"map {name} = " + " ; ".join(" ".join(r) for r in rows))
    return "\n".join(lines) + "\n"
