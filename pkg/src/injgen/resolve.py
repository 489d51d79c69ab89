"""Injective hulls, cosyzygies, resolutions and the cosyzygy transition graph.

The hull of ``M`` is built directly from the pairing
``Hom_A(M, D(A e_i)) = D(M e_i)``: a functional ``phi`` on the space at
vertex ``i`` gives the homomorphism ``m -> (p -> phi(m . p))`` for basis paths
``p`` ending at ``i``. Taking ``phi`` dual to a basis of ``soc(M) e_i`` for
every ``i`` yields an embedding into ``(+) I_i^{m_i}`` that is an isomorphism
on socles, hence an injective hull.

Projective covers and syzygies are duals of hulls and cosyzygies over the
opposite algebra.

Repetition index
----------------
Let ``D_t`` be the set of classes of non-injective indecomposable summands of
``Sigma^t M``. Because ``Sigma`` commutes with finite sums and kills
injectives, ``D_{t+1}`` is the union of the successor sets of the members of
``D_t`` in the cosyzygy graph. So ``t -> D_t`` is a deterministic map on the
finite set of subsets of nodes and becomes periodic from some ``mu`` on, with
period ``lam``. A class occurs in ``D_t`` for infinitely many ``t`` exactly
when it lies in ``R = D_mu | ... | D_{mu+lam-1}``, and every ``D_t`` with
``t >= mu`` is contained in ``R``. The repetition index is therefore the least
``n`` with ``D_n`` contained in ``R``; it is at most ``mu``.
"""

from __future__ import annotations

from collections import Counter, deque
from dataclasses import dataclass, field

from .algebra import Algebra
from .decomp import IsoRegistry, decompose
from .linalg import Mat, solve_matrix
from .modules import (Morphism, Representation, cokernel, direct_sum, dual_morphism, dual_op,
                      indec_injective, indec_projective, socle)


class ExtensionFailure(RuntimeError):
    """The hull embedding is not injective; indicates an internal bug."""


class CapExceeded(RuntimeError):
    pass


@dataclass(frozen=True)
class Caps:
    max_nodes: int = 200
    max_dim: int = 80
    max_length: int = 64
    max_rounds: int = 12
    max_members: int = 400
    injective_multiplicity: int = 2
    sweep_dim: int = 24  # node size for the early finite-type sweep of a search

    def scaled(self, factor: int) -> "Caps":
        return Caps(self.max_nodes * factor, self.max_dim * factor, self.max_length * factor,
                    self.max_rounds * factor, self.max_members * factor, self.injective_multiplicity,
                    self.sweep_dim * factor)


DEFAULT_CAPS = Caps()


@dataclass
class HullSequence:
    """``0 -> module --embedding--> hull --projection--> cosyzygy -> 0``."""

    module: Representation
    hull: Representation
    embedding: Morphism
    cosyzygy: Representation
    projection: Morphism
    vertices: list[int]


def _hull_components(M: Representation):
    A = M.algebra
    F = A.field
    soc, inc = socle(M)
    vertices: list[int] = []
    components: list[Morphism] = []
    for i in range(A.n):
        m_i = soc.dims[i]
        if not m_i:
            continue
        B = inc.mats[i]
        # functionals phi with phi B = identity on the socle coordinates
        Phi = solve_matrix(B.transpose(), Mat.identity(F, m_i)).transpose()
        I = indec_injective(A, i)
        op = A.opposite()
        for k in range(m_i):
            phi = Mat(F, 1, M.dims[i], [list(Phi.data[k])])
            mats = []
            for j in range(A.n):
                rows = []
                for b in op.basis_between(i, j):
                    path = A.basis[b].arrows
                    if path:
                        rows.append((phi @ M.path_matrix(path)).data[0])
                    else:
                        rows.append(list(phi.data[0]))
                mats.append(Mat(F, len(rows), M.dims[j], rows) if rows else Mat.zeros(F, 0, M.dims[j]))
            components.append(Morphism(M, I, mats, check=False))
            vertices.append(i)
    return vertices, components


def injective_hull(M: Representation) -> tuple[Representation, Morphism]:
    """``(I, e)`` with ``e: M -> I`` a minimal injective embedding."""
    seq = hull_sequence(M)
    return seq.hull, seq.embedding


def hull_sequence(M: Representation) -> HullSequence:
    A = M.algebra
    cache = A.cache.setdefault("hull", {})
    if M in cache:
        return cache[M]
    vertices, components = _hull_components(M)
    injs = [indec_injective(A, i) for i in vertices]
    I, incs, _ = direct_sum(injs, algebra=A)
    F = A.field
    mats = []
    for v in range(A.n):
        rows = []
        for comp in components:
            rows.extend(comp.mats[v].data)
        mats.append(Mat(F, len(rows), M.dims[v], [list(r) for r in rows]))
    e = Morphism(M, I, mats, check=False)
    if not e.is_injective():
        raise ExtensionFailure("hull embedding is not injective")
    C, p = cokernel(e)
    seq = HullSequence(M, I, e, C, p, vertices)
    cache[M] = seq
    return seq


def cosyzygy(M: Representation) -> Representation:
    return hull_sequence(M).cosyzygy


def is_injective_module(M: Representation) -> bool:
    """``M`` is injective iff its hull has the same dimension vector."""
    A = M.algebra
    soc_dims = socle(M)[0].dims
    dims = [0] * A.n
    for i, m in enumerate(soc_dims):
        if m:
            I = indec_injective(A, i)
            dims = [d + m * e for d, e in zip(dims, I.dims)]
    return tuple(dims) == M.dims


@dataclass
class CoverSequence:
    """``0 -> syzygy --inclusion--> cover --projection--> module -> 0``."""

    module: Representation
    cover: Representation
    projection: Morphism
    syzygy: Representation
    inclusion: Morphism
    vertices: list[int]


def cover_sequence(M: Representation) -> CoverSequence:
    """Projective cover as the dual of the hull of ``D M`` over the opposite algebra."""
    seq = hull_sequence(dual_op(M))
    P = dual_op(seq.hull)
    proj = dual_morphism(seq.embedding)
    # D(D M) is M with the same matrices; rebuild the morphism onto M itself
    proj = Morphism(P, M, proj.mats, check=False)
    K = dual_op(seq.cosyzygy)
    inc = Morphism(K, P, dual_morphism(seq.projection).mats, check=False)
    return CoverSequence(M, P, proj, K, inc, seq.vertices)


def projective_cover(M: Representation) -> tuple[Representation, Morphism]:
    seq = cover_sequence(M)
    return seq.cover, seq.projection


def syzygy(M: Representation) -> Representation:
    return cover_sequence(M).syzygy


@dataclass
class Resolution:
    base: Representation
    terms: list[Representation]
    differentials: list[Morphism]
    kind: str
    syzygies: list[Representation] = field(default_factory=list)
    augmentation: Morphism | None = None
    finite: bool = False

    @property
    def length(self) -> int:
        return len(self.terms) - 1 if self.finite else len(self.terms)


def min_injective_resolution(M: Representation, length: int = DEFAULT_CAPS.max_length) -> Resolution:
    """``0 -> M -> I^0 -> I^1 -> ...`` computed through ``length`` cosyzygy steps.

    ``syzygies[t]`` is ``Sigma^t M``; ``differentials[t]: I^t -> I^{t+1}``.
    ``finite`` is set when some cosyzygy vanishes (then ``length`` is the
    injective dimension).
    """
    if length < 0:
        raise ValueError("length must be non-negative")
    terms: list[Representation] = []
    diffs: list[Morphism] = []
    cos = [M]
    seqs: list[HullSequence] = []
    cur = M
    finite = M.is_zero()
    for t in range(length + 1):
        if cur.is_zero():
            finite = True
            break
        seq = hull_sequence(cur)
        seqs.append(seq)
        terms.append(seq.hull)
        cur = seq.cosyzygy
        cos.append(cur)
        if cur.is_zero():
            finite = True
            break
    for t in range(len(seqs) - 1):
        diffs.append(seqs[t + 1].embedding @ seqs[t].projection)
    aug = seqs[0].embedding if seqs else None
    return Resolution(M, terms, diffs, "MinimalInjective", cos, aug, finite)


def min_projective_resolution(M: Representation, length: int = DEFAULT_CAPS.max_length) -> Resolution:
    """``... -> P_1 -> P_0 -> M -> 0``; ``differentials[t]: P_{t+1} -> P_t``."""
    terms: list[Representation] = []
    seqs: list[CoverSequence] = []
    syz = [M]
    cur = M
    finite = M.is_zero()
    for t in range(length + 1):
        if cur.is_zero():
            finite = True
            break
        seq = cover_sequence(cur)
        seqs.append(seq)
        terms.append(seq.cover)
        cur = seq.syzygy
        syz.append(cur)
        if cur.is_zero():
            finite = True
            break
    diffs = [seqs[t].inclusion @ seqs[t + 1].projection for t in range(len(seqs) - 1)]
    aug = seqs[0].projection if seqs else None
    return Resolution(M, terms, diffs, "MinimalProjective", syz, aug, finite)


# cosyzygy graph -------------------------------------------------------------

@dataclass
class NodeData:
    representative: Representation
    hull: HullSequence | None = None
    successors: Counter = field(default_factory=Counter)
    injective_summands: Counter = field(default_factory=Counter)
    summand_classes: list = field(default_factory=list)  # (kind, id or vertex, iso to summand)
    expanded: bool = False


@dataclass
class CosyzygyGraph:
    algebra: Algebra
    registry: IsoRegistry
    nodes: dict[int, NodeData]
    seeds: list[int]
    caps: Caps
    complete: bool
    reason: str = ""

    @property
    def node_ids(self) -> list[int]:
        return sorted(self.nodes)

    def edges(self) -> dict[int, Counter]:
        return {k: self.nodes[k].successors for k in self.node_ids}

    def export(self) -> str:
        lines = [f"# cosyzygy graph: {len(self.nodes)} nodes, "
                 f"{'complete' if self.complete else 'incomplete (' + self.reason + ')'}",
                 "seeds " + " ".join(str(s) for s in self.seeds)]
        for k in self.node_ids:
            lines.append(f"node {k} dims " + " ".join(str(d) for d in self.nodes[k].representative.dims))
        for k in self.node_ids:
            nd = self.nodes[k]
            if not nd.expanded:
                lines.append(f"edge {k} -> ?")
                continue
            succ = " ".join(f"{j}*{m}" for j, m in sorted(nd.successors.items()))
            inj = " ".join(f"I{i + 1}*{m}" for i, m in sorted(nd.injective_summands.items()))
            lines.append(f"edge {k} -> {succ} | inj {inj}".rstrip())
        return "\n".join(lines) + "\n"


def injective_index(M: Representation) -> int | None:
    """The vertex ``i`` with ``M = I_i`` for an indecomposable injective ``M``."""
    if not is_injective_module(M):
        return None
    soc = socle(M)[0].dims
    if sum(soc) != 1:
        return None
    return soc.index(1)


def split_summands(M: Representation, registry: IsoRegistry):
    """Classify the summands of ``M``: ``(kind, key, summand, inclusion)`` with kind
    ``'inj'`` (key = vertex) or ``'node'`` (key = class id, possibly new)."""
    out = []
    dec = decompose(M)
    for X, inc in zip(dec.summands, dec.inclusions):
        i = injective_index(X)
        if i is not None:
            out.append(("inj", i, X, inc))
        else:
            idx, _ = registry.register(X)
            out.append(("node", idx, X, inc))
    return out, dec


def cosyzygy_graph(seeds, caps: Caps = DEFAULT_CAPS, registry: IsoRegistry | None = None) -> CosyzygyGraph:
    """Breadth-first closure of ``X -> non-injective summands of Sigma X``."""
    seeds = list(seeds)
    if not seeds:
        raise ValueError("at least one seed module is needed")
    A = seeds[0].algebra
    registry = registry if registry is not None else IsoRegistry()
    nodes: dict[int, NodeData] = {}
    seed_ids: list[int] = []
    queue: deque[int] = deque()

    def touch(idx: int) -> None:
        if idx not in nodes:
            nodes[idx] = NodeData(registry.representatives[idx])
            queue.append(idx)

    for S in seeds:
        parts, _ = split_summands(S, registry)
        for kind, key, _, _ in parts:
            if kind == "node":
                touch(key)
                if key not in seed_ids:
                    seed_ids.append(key)

    complete = True
    reason = ""
    while queue:
        idx = queue.popleft()
        nd = nodes[idx]
        X = nd.representative
        if X.total_dim > caps.max_dim:
            complete, reason = False, f"node {idx} exceeds max_dim {caps.max_dim}"
            break
        seq = hull_sequence(X)
        if seq.cosyzygy.total_dim > caps.max_dim:
            complete, reason = False, f"cosyzygy of node {idx} has dimension {seq.cosyzygy.total_dim} > max_dim {caps.max_dim}"
            break
        nd.hull = seq
        parts, dec = split_summands(seq.cosyzygy, registry)
        for kind, key, Y, inc in parts:
            if kind == "inj":
                nd.injective_summands[key] += 1
            else:
                nd.successors[key] += 1
                touch(key)
        nd.summand_classes = [(kind, key) for kind, key, _, _ in parts]
        nd.expanded = True
        if len(nodes) > caps.max_nodes:
            complete, reason = False, f"more than {caps.max_nodes} nodes"
            break
    return CosyzygyGraph(A, registry, nodes, seed_ids, caps, complete, reason)


@dataclass(frozen=True)
class Finite:
    witness: tuple[int, ...]
    graph: CosyzygyGraph = field(compare=False, repr=False)


@dataclass(frozen=True)
class Unknown:
    report: str


def finite_cosyzygy_type(M: Representation, caps: Caps = DEFAULT_CAPS,
                         registry: IsoRegistry | None = None) -> Finite | Unknown:
    if M.is_zero() or is_injective_module(M):
        g = CosyzygyGraph(M.algebra, registry or IsoRegistry(), {}, [], caps, True)
        return Finite((), g)
    g = cosyzygy_graph([M], caps, registry)
    if not g.complete:
        return Unknown(g.reason)
    return Finite(tuple(g.node_ids), g)


def cosyzygy_orbit(graph: CosyzygyGraph, start: frozenset[int]):
    """The sets ``D_0, D_1, ...`` until the first repetition; returns ``(sets, mu, lam)``."""
    seen: dict[frozenset, int] = {}
    sets: list[frozenset] = []
    cur = frozenset(start)
    while cur not in seen:
        seen[cur] = len(sets)
        sets.append(cur)
        nxt = set()
        for k in cur:
            nd = graph.nodes[k]
            if not nd.expanded:
                raise CapExceeded("graph not expanded at an orbit node")
            nxt.update(nd.successors)
        cur = frozenset(nxt)
    mu = seen[cur]
    return sets, mu, len(sets) - mu


@dataclass(frozen=True)
class Index:
    n: int


def repetition_index(M: Representation, graph: CosyzygyGraph | None = None,
                     caps: Caps = DEFAULT_CAPS) -> Index | Unknown:
    """Least ``n`` such that every non-injective summand class of ``Sigma^n M`` recurs
    at infinitely many depths of the cosyzygy orbit.

    Why the finite computation is exact: let ``D_t`` be the set of non-injective
    summand classes of ``Sigma^t M``. Sigma commutes with finite sums and the
    classes in ``Sigma X`` depend only on the class of ``X``, so
    ``D_{t+1} = succ(D_t)`` for the graph's successor map. That map acts on the
    finite set of subsets of graph nodes, so ``D_0, D_1, ...`` is eventually
    periodic: ``D_{t+lam} = D_t`` for all ``t >= mu``. A class occurs at infinitely
    many depths iff it lies in some ``D_t`` with ``t >= mu``, i.e. in the union of
    ``D_mu .. D_{mu+lam-1}``. The index is the first ``n`` with ``D_n`` inside that
    union; it is at most ``mu``.
    """
    if M.is_zero() or is_injective_module(M):
        return Index(0)
    if graph is None:
        graph = cosyzygy_graph([M], caps)
    if not graph.complete:
        return Unknown(graph.reason)
    parts, _ = split_summands(M, graph.registry)
    start = frozenset(key for kind, key, _, _ in parts if kind == "node")
    sets, mu, lam = cosyzygy_orbit(graph, start)
    recurring = frozenset().union(*sets[mu:mu + lam])
    for n, D in enumerate(sets):
        if D <= recurring:
            return Index(n)
    return Index(mu)


@dataclass(frozen=True)
class Dim:
    n: int


@dataclass(frozen=True)
class ExceedsBound:
    bound: int
    reason: str = ""


def injdim_regular(A: Algebra, bound: int = DEFAULT_CAPS.max_length, caps: Caps = DEFAULT_CAPS) -> Dim | ExceedsBound:
    """Injective dimension of ``A_A`` if it is at most ``bound``."""
    if bound < 0:
        raise ValueError("bound must be non-negative")
    registry = IsoRegistry()
    nodes: dict[int, NodeData] = {}
    current: set[int] = set()
    for i in range(A.n):
        P = indec_projective(A, i)
        if not is_injective_module(P):
            idx, _ = registry.register(P)
            nodes.setdefault(idx, NodeData(P))
            current.add(idx)
    for t in range(bound + 1):
        if not current:
            return Dim(t)
        if t == bound:
            break
        nxt: set[int] = set()
        for idx in sorted(current):
            nd = nodes[idx]
            if not nd.expanded:
                if nd.representative.total_dim > caps.max_dim:
                    return ExceedsBound(bound, f"module of dimension {nd.representative.total_dim} exceeds max_dim")
                cos = hull_sequence(nd.representative).cosyzygy
                if cos.total_dim > caps.max_dim:
                    return ExceedsBound(bound, f"cosyzygy of dimension {cos.total_dim} exceeds max_dim")
                parts, _ = split_summands(cos, registry)
                for kind, key, _, _ in parts:
                    if kind == "node":
                        nd.successors[key] += 1
                        nodes.setdefault(key, NodeData(registry.representatives[key]))
                    else:
                        nd.injective_summands[key] += 1
                nd.expanded = True
                if len(nodes) > caps.max_nodes:
                    return ExceedsBound(bound, f"more than {caps.max_nodes} cosyzygy classes")
            nxt.update(nd.successors)
        current = nxt
    return ExceedsBound(bound, "cosyzygies of the regular module are not injective within the bound")
