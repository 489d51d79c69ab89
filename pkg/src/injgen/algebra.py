"""Bound quiver algebras ``A = kQ/I``: parsing, path basis and structure constants.

Conventions
-----------
Vertices are numbered ``0..n-1`` in the Python API and ``1..n`` in files.
Paths are read left to right: ``a.b`` first traverses ``a`` and then ``b``,
so ``a.b`` is nonzero in ``kQ`` only when ``target(a) == source(b)``. Modules
are right modules, so an arrow ``a: i -> j`` acts on a representation as a
linear map from the space at ``i`` to the space at ``j``.

The ideal is assumed to contain every path of length ``N`` (the nilpotency
bound). The quotient is computed block by block (source, target) inside the
span of paths of length ``<= N``; every length-``N`` path is checked to lie in
the span of the ``u * r * v`` products, which is the admissibility witness.
"""

from __future__ import annotations

import hashlib
import re
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence

from .linalg import Field, _rref_rows

DEFAULT_NILPOTENCY = 12


class AlgebraParseError(ValueError):
    def __init__(self, lineno: int, message: str):
        super().__init__(f"line {lineno}: {message}")
        self.lineno = lineno
        self.message = message


class AdmissibilityFailure(ValueError):
    """Some path of length N does not reduce to zero."""


@dataclass(frozen=True)
class Arrow:
    name: str
    source: int
    target: int


@dataclass(frozen=True)
class Relation:
    """A linear combination of parallel paths; each path is a tuple of arrow indices."""

    terms: tuple[tuple[object, tuple[int, ...]], ...]
    source: int
    target: int


@dataclass
class Quiver:
    vertex_count: int
    arrows: list[Arrow] = field(default_factory=list)

    def __post_init__(self):
        names = [a.name for a in self.arrows]
        if len(set(names)) != len(names):
            raise ValueError("arrow names must be unique")
        for a in self.arrows:
            if not (0 <= a.source < self.vertex_count and 0 <= a.target < self.vertex_count):
                raise ValueError(f"arrow {a.name} has an endpoint out of range")

    def arrow_index(self, name: str) -> int:
        for k, a in enumerate(self.arrows):
            if a.name == name:
                return k
        raise KeyError(name)

    def path_endpoints(self, path: Sequence[int]) -> tuple[int, int]:
        return self.arrows[path[0]].source, self.arrows[path[-1]].target

    def is_path(self, path: Sequence[int]) -> bool:
        return all(self.arrows[a].target == self.arrows[b].source for a, b in zip(path, path[1:]))

    def opposite(self) -> "Quiver":
        return Quiver(self.vertex_count, [Arrow(a.name, a.target, a.source) for a in self.arrows])


@dataclass
class AlgebraSpec:
    field: Field
    quiver: Quiver
    relations: list[Relation]
    nilpotency: int = DEFAULT_NILPOTENCY

    def path_name(self, path: Sequence[int]) -> str:
        return ".".join(self.quiver.arrows[a].name for a in path)

    def canonical_text(self) -> str:
        """A normalized rendering of the algebra; its hash identifies the algebra."""
        lines = [f"field {self.field}", f"vertices {self.quiver.vertex_count}"]
        for a in self.quiver.arrows:
            lines.append(f"arrow {a.name} : {a.source + 1} -> {a.target + 1}")
        for r in self.relations:
            terms = sorted((self.path_name(p), str(c)) for c, p in r.terms)
            lines.append("relation " + " + ".join(f"{c}*{p}" for p, c in terms))
        lines.append(f"nilpotency {self.nilpotency}")
        return "\n".join(lines) + "\n"

    def digest(self) -> str:
        return hashlib.sha256(self.canonical_text().encode()).hexdigest()

    def opposite(self) -> "AlgebraSpec":
        rels = [Relation(tuple((c, tuple(reversed(p))) for c, p in r.terms), r.target, r.source)
                for r in self.relations]
        return AlgebraSpec(self.field, self.quiver.opposite(), rels, self.nilpotency)


_TERM = re.compile(r"\s*([+-])?\s*(?:([+-]?\d+(?:/\d+)?)\s*\*)?\s*([A-Za-z_]\w*(?:\.[A-Za-z_]\w*)*)\s*")


def parse_algebra(text: str) -> AlgebraSpec:
    """Parse the line-oriented algebra format (see README)."""
    F: Field | None = None
    n: int | None = None
    arrows: list[Arrow] = []
    names: dict[str, int] = {}
    raw_relations: list[tuple[int, str]] = []
    nilpotency = DEFAULT_NILPOTENCY

    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        keyword, _, rest = line.partition(" ")
        rest = rest.strip()
        if keyword == "field":
            parts = rest.split()
            if parts == ["Q"]:
                F = Field()
            elif len(parts) == 2 and parts[0] == "GF" and parts[1].isdigit():
                try:
                    F = Field(int(parts[1]))
                except ValueError as exc:
                    raise AlgebraParseError(lineno, str(exc)) from None
            else:
                raise AlgebraParseError(lineno, f"unknown field {rest!r}")
        elif keyword == "vertices":
            if not rest.isdigit() or int(rest) < 1:
                raise AlgebraParseError(lineno, f"bad vertex count {rest!r}")
            n = int(rest)
        elif keyword == "arrow":
            m = re.fullmatch(r"([A-Za-z_]\w*)\s*:\s*(\d+)\s*->\s*(\d+)", rest)
            if not m:
                raise AlgebraParseError(lineno, f"malformed arrow {rest!r}")
            if n is None:
                raise AlgebraParseError(lineno, "arrow declared before 'vertices'")
            name, s, t = m.group(1), int(m.group(2)), int(m.group(3))
            for v in (s, t):
                if not 1 <= v <= n:
                    raise AlgebraParseError(lineno, f"unknown vertex {v}")
            if name in names:
                raise AlgebraParseError(lineno, f"duplicate arrow {name}")
            names[name] = len(arrows)
            arrows.append(Arrow(name, s - 1, t - 1))
        elif keyword == "relation":
            raw_relations.append((lineno, rest))
        elif keyword == "nilpotency":
            if not rest.isdigit() or int(rest) < 2:
                raise AlgebraParseError(lineno, f"bad nilpotency bound {rest!r}")
            nilpotency = int(rest)
        else:
            raise AlgebraParseError(lineno, f"unknown keyword {keyword!r}")

    if n is None:
        raise AlgebraParseError(0, "missing 'vertices' line")
    F = F or Field()
    quiver = Quiver(n, arrows)
    relations = [_parse_relation(lineno, body, F, quiver, names) for lineno, body in raw_relations]
    return AlgebraSpec(F, quiver, relations, nilpotency)


def _parse_relation(lineno: int, body: str, F: Field, quiver: Quiver, names: dict[str, int]) -> Relation:
    pos = 0
    terms: dict[tuple[int, ...], object] = {}
    ends = set()
    first = True
    while pos < len(body):
        m = _TERM.match(body, pos)
        if not m or m.end() == pos:
            raise AlgebraParseError(lineno, f"cannot parse relation near {body[pos:]!r}")
        sign, coeff, pathtext = m.groups()
        if sign is None and not first:
            raise AlgebraParseError(lineno, f"missing '+' or '-' before {pathtext!r}")
        c = F(coeff) if coeff else F.one
        if sign == "-":
            c = F(-c)
        path = []
        for nm in pathtext.split("."):
            if nm not in names:
                raise AlgebraParseError(lineno, f"unknown arrow {nm!r}")
            path.append(names[nm])
        if len(path) < 2:
            raise AlgebraParseError(lineno, f"relation term {pathtext!r} has length 1 (not admissible)")
        if not quiver.is_path(path):
            raise AlgebraParseError(lineno, f"{pathtext!r} is not a path in the quiver")
        ends.add(quiver.path_endpoints(path))
        key = tuple(path)
        terms[key] = F(terms.get(key, F.zero) + c)
        pos = m.end()
        first = False
    if first:
        raise AlgebraParseError(lineno, "empty relation")
    if len(ends) != 1:
        raise AlgebraParseError(lineno, "relation terms are not parallel paths")
    s, t = ends.pop()
    kept = tuple((c, p) for p, c in terms.items() if c)
    if not kept:
        raise AlgebraParseError(lineno, "relation cancels to zero")
    return Relation(kept, s, t)


@dataclass(frozen=True)
class BasisPath:
    source: int
    target: int
    arrows: tuple[int, ...]

    @property
    def length(self) -> int:
        return len(self.arrows)


class Algebra:
    """A finite-dimensional quotient ``kQ/I`` with an explicit path basis.

    ``basis[k]`` is a residue class of a path; the trivial paths ``e_0..e_{n-1}``
    come first. ``rmul[a][k]`` is the normal form of ``basis[k] * a`` as a sparse
    dict ``{basis index: coefficient}`` and ``lmul[a][k]`` that of ``a * basis[k]``.
    """

    def __init__(self, spec: AlgebraSpec, basis: list[BasisPath], rmul, lmul, normal_forms):
        self.spec = spec
        self.field = spec.field
        self.quiver = spec.quiver
        self.basis = basis
        self.rmul = rmul
        self.lmul = lmul
        self._nf = normal_forms
        self._opposite: Algebra | None = None
        self.cache: dict = {}

    # construction -----------------------------------------------------
    @classmethod
    def from_spec(cls, spec: AlgebraSpec) -> "Algebra":
        return _build(spec)

    @classmethod
    def from_text(cls, text: str) -> "Algebra":
        return _build(parse_algebra(text))

    @classmethod
    def load(cls, path: str | Path) -> "Algebra":
        return cls.from_text(Path(path).read_text(encoding="utf-8"))

    # basic data -------------------------------------------------------
    @property
    def n(self) -> int:
        return self.quiver.vertex_count

    @property
    def arrows(self) -> list[Arrow]:
        return self.quiver.arrows

    @property
    def dim(self) -> int:
        return len(self.basis)

    def digest(self) -> str:
        return self.spec.digest()

    def __repr__(self) -> str:
        return f"Algebra(n={self.n}, arrows={len(self.arrows)}, dim={self.dim}, field={self.field})"

    def basis_from(self, i: int) -> list[int]:
        return [k for k, b in enumerate(self.basis) if b.source == i]

    def basis_to(self, i: int) -> list[int]:
        return [k for k, b in enumerate(self.basis) if b.target == i]

    def basis_between(self, i: int, j: int) -> list[int]:
        return [k for k, b in enumerate(self.basis) if b.source == i and b.target == j]

    def basis_name(self, k: int) -> str:
        b = self.basis[k]
        if not b.arrows:
            return f"e{b.source + 1}"
        return self.spec.path_name(b.arrows)

    def loewy_length(self) -> int:
        return 1 + max(b.length for b in self.basis)

    # multiplication ---------------------------------------------------
    def right_multiply(self, element: dict[int, object], arrow: int) -> dict[int, object]:
        """``element * arrow`` for an element given as a sparse coefficient dict."""
        F = self.field
        out: dict[int, object] = {}
        for k, c in element.items():
            for j, d in self.rmul[arrow][k].items():
                out[j] = F(out.get(j, F.zero) + c * d)
        return {j: c for j, c in out.items() if c}

    def left_multiply(self, arrow: int, element: dict[int, object]) -> dict[int, object]:
        F = self.field
        out: dict[int, object] = {}
        for k, c in element.items():
            for j, d in self.lmul[arrow][k].items():
                out[j] = F(out.get(j, F.zero) + c * d)
        return {j: c for j, c in out.items() if c}

    def normal_form(self, path: Sequence[int]) -> dict[int, object]:
        """Coordinates of the residue class of a path (tuple of arrow indices)."""
        return dict(self._nf(tuple(path)))

    def multiply(self, x: dict[int, object], y: dict[int, object]) -> dict[int, object]:
        """Product of two elements given in basis coordinates."""
        F = self.field
        out: dict[int, object] = {}
        for k, c in y.items():
            b = self.basis[k]
            part = {i: v for i, v in x.items() if self.basis[i].target == b.source}
            for a in b.arrows:
                part = self.right_multiply(part, a)
            for j, d in part.items():
                out[j] = F(out.get(j, F.zero) + c * d)
        return {j: c for j, c in out.items() if c}

    def is_radical_square_zero(self) -> bool:
        return all(b.length <= 1 for b in self.basis)

    def is_monomial(self) -> bool:
        """True when the ideal is spanned by paths: every relation is a single path."""
        return all(len(r.terms) == 1 for r in self.spec.relations)

    def is_commutative(self) -> bool:
        one_based = range(self.dim)
        for i in one_based:
            for j in one_based:
                if self.multiply({i: self.field.one}, {j: self.field.one}) != \
                        self.multiply({j: self.field.one}, {i: self.field.one}):
                    return False
        return True

    # opposite ---------------------------------------------------------
    def opposite(self) -> "Algebra":
        """``A^op``, sharing this algebra's basis (paths reversed)."""
        if self._opposite is None:
            basis = [BasisPath(b.target, b.source, tuple(reversed(b.arrows))) for b in self.basis]
            nf = self._nf
            op = Algebra(self.spec.opposite(), basis, self.lmul, self.rmul,
                         lambda path: nf(tuple(reversed(path))))
            op._opposite = self
            self._opposite = op
        return self._opposite


def _enumerate_paths(quiver: Quiver, max_len: int) -> list[tuple[int, ...]]:
    out_arrows = [[k for k, a in enumerate(quiver.arrows) if a.source == v] for v in range(quiver.vertex_count)]
    paths: list[tuple[int, ...]] = []
    frontier = [(k,) for k in range(len(quiver.arrows))]
    length = 1
    while frontier and length <= max_len:
        paths.extend(frontier)
        if length == max_len:
            break
        frontier = [p + (b,) for p in frontier for b in out_arrows[quiver.arrows[p[-1]].target]]
        length += 1
    return paths


def _build(spec: AlgebraSpec) -> Algebra:
    F = spec.field
    Q = spec.quiver
    n = Q.vertex_count
    N = spec.nilpotency
    paths = _enumerate_paths(Q, N)

    blocks: dict[tuple[int, int], list[tuple[int, ...]]] = {}
    for p in paths:
        blocks.setdefault(Q.path_endpoints(p), []).append(p)
    ending_at: dict[int, list[tuple[int, ...]]] = {v: [()] for v in range(n)}
    starting_at: dict[int, list[tuple[int, ...]]] = {v: [()] for v in range(n)}
    for p in paths:
        s, t = Q.path_endpoints(p)
        ending_at[t].append(p)
        starting_at[s].append(p)

    ideal_rows: dict[tuple[int, int], list[dict[tuple[int, ...], object]]] = {}
    for rel in spec.relations:
        min_len = min(len(p) for _, p in rel.terms)
        for u in ending_at[rel.source]:
            if len(u) + min_len > N:
                continue
            for v in starting_at[rel.target]:
                if len(u) + len(v) + min_len > N:
                    continue
                row: dict[tuple[int, ...], object] = {}
                for c, p in rel.terms:
                    q = u + p + v
                    if len(q) <= N:
                        row[q] = F(row.get(q, F.zero) + c)
                row = {q: c for q, c in row.items() if c}
                if row:
                    s = Q.arrows[u[0]].source if u else rel.source
                    t = Q.arrows[v[-1]].target if v else rel.target
                    ideal_rows.setdefault((s, t), []).append(row)

    # normal forms inside each block: columns sorted longest first so that
    # pivots fall on the largest path of each ideal element
    block_basis: dict[tuple[int, int], list[tuple[int, ...]]] = {}
    block_reducer: dict[tuple[int, int], dict[tuple[int, ...], dict[tuple[int, ...], object]]] = {}
    for key, bpaths in blocks.items():
        cols = sorted(bpaths, key=lambda p: (len(p), p), reverse=True)
        colidx = {p: j for j, p in enumerate(cols)}
        rows = [[F.zero] * len(cols) for _ in ideal_rows.get(key, [])]
        for r, row in zip(rows, ideal_rows.get(key, [])):
            for q, c in row.items():
                r[colidx[q]] = c
        R, pivots = _rref_rows(F, rows, len(cols))
        # a length-N path lies in the ideal iff its column is a pivot whose
        # reduced row is the unit vector of that path
        unit_rows = {pc for i, pc in enumerate(pivots)
                     if not any(R[i][j] for j in range(len(cols)) if j != pc)}
        missing = [p for j, p in enumerate(cols) if len(p) == N and j not in unit_rows]
        if missing:
            raise AdmissibilityFailure(
                f"path {spec.path_name(missing[0])} of length {N} is not in the ideal; "
                f"raise the nilpotency bound or check the relations")
        # drop the length-N coordinates and reduce again: the ideal modulo J_N
        short = [j for j, p in enumerate(cols) if len(p) < N]
        trunc = [[R[i][j] for j in short] for i in range(len(pivots))]
        trunc = [r for r in trunc if any(r)]
        scols = [cols[j] for j in short]
        R2, piv2 = _rref_rows(F, trunc, len(scols))
        piv2_set = set(piv2)
        block_basis[key] = [scols[j] for j in range(len(scols)) if j not in piv2_set]
        red: dict[tuple[int, ...], dict[tuple[int, ...], object]] = {}
        for i, pc in enumerate(piv2):
            red[scols[pc]] = {scols[j]: F(-R2[i][j]) for j in range(len(scols))
                              if j not in piv2_set and R2[i][j]}
        block_reducer[key] = red

    basis: list[BasisPath] = [BasisPath(v, v, ()) for v in range(n)]
    nontrivial = []
    for (s, t), bp in block_basis.items():
        nontrivial.extend(BasisPath(s, t, p) for p in bp)
    nontrivial.sort(key=lambda b: (b.length, b.source, b.target, b.arrows))
    basis.extend(nontrivial)
    index = {(b.source, b.arrows): k for k, b in enumerate(basis)}

    def nf(path: tuple[int, ...]) -> dict[int, object]:
        if not path:
            raise ValueError("use vertex idempotents for trivial paths")
        if not Q.is_path(path):
            return {}
        if len(path) >= N:
            return {}
        s, t = Q.path_endpoints(path)
        red = block_reducer.get((s, t), {})
        if path in red:
            return {index[(s, q)]: c for q, c in red[path].items()}
        return {index[(s, path)]: F.one}

    rmul = []
    lmul = []
    for k_a, arrow in enumerate(Q.arrows):
        rrow = []
        lrow = []
        for b in basis:
            if b.target == arrow.source:
                rrow.append(nf(b.arrows + (k_a,)))
            else:
                rrow.append({})
            if arrow.target == b.source:
                lrow.append(nf((k_a,) + b.arrows))
            else:
                lrow.append({})
        rmul.append(rrow)
        lmul.append(lrow)

    return Algebra(spec, basis, rmul, lmul, nf)


def load_algebra(path: str | Path) -> Algebra:
    return Algebra.load(path)
