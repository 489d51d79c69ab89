"""Saturation search for membership certificates and the top-level verdict.

The searcher keeps a growing set of member classes (indecomposables already
shown to lie in the localizing subcategory generated by injectives). Every
admission is recorded as a certificate step, so the final document can be
re-verified by :func:`injgen.certificate.check_certificate` without trusting
anything computed here.

Moves, each producing steps of one rule:

m1  the indecomposable injectives and their small sums (R-INJ);
m2  hull sequences: ``Sigma X`` from a member ``X``, and a tracked module from
    a cosyzygy that is already provable (R-SES);
m3  kernels of surjections ``J -> Z`` from injective sums and between members;
m4  cokernels of injections between members (R-SES);
m5  indecomposable summands of every new member (R-SUM);
m6  interlocking pairs ``f: X -> Y``, ``g: Y -> X`` with ``im f = ker g`` and
    ``im g = ker f``, whose cokernels are members (R-PER, period 1 or 2);
m7  targets of finite cosyzygy type, admitted with their whole graph (R-FCT).

Only the steps needed for the goals survive in the emitted certificate.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, replace

from .algebra import Algebra
from .certificate import CertificateBuilder, _module_refs, check_certificate
from .decomp import DEFAULT_SEED, IsoRegistry, SplitExhaustion, decompose, is_isomorphic
from .modules import (Morphism, Representation, block_morphism, cokernel, direct_sum, hom_basis,
                      indec_injective, kernel, linear_combination, morphism_from_columns,
                      morphism_to_literal, simple_module)
from .resolve import (DEFAULT_CAPS, Caps, Dim, Finite, Unknown, finite_cosyzygy_type, hull_sequence,
                      injdim_regular, is_injective_module, split_summands)

_GENERIC_TRIES = 2
_SURJECTIONS_PER_TARGET = 4


@dataclass
class Certificate:
    doc: dict
    rounds: int = 0
    members: int = 0

    def rules(self) -> set[str]:
        return {s["rule"] for s in self.doc["steps"]}


@dataclass(frozen=True)
class Verdict:
    status: str  # "Generates" or "Unknown"
    by: str | None = None  # "FiniteInjDim" or "SimplesCertificate"
    injdim: int | None = None
    certificate: Certificate | None = None
    report: str = ""

    @property
    def generates(self) -> bool:
        return self.status == "Generates"

    def __str__(self) -> str:
        if self.by == "FiniteInjDim":
            return f"Generates(FiniteInjDim({self.injdim}))"
        if self.by == "SimplesCertificate":
            return "Generates(SimplesCertificate)"
        return f"Unknown({self.report})"


def derive_simple_targets(A: Algebra) -> list[Representation]:
    return [simple_module(A, i) for i in range(A.n)]


def _search_dim(caps: Caps) -> int:
    return caps.max_dim


class _Search:
    def __init__(self, A: Algebra, targets, caps: Caps, seed: int):
        self.A = A
        self.caps = caps
        self.seed = seed
        self.rng = random.Random(seed)
        self.cert = CertificateBuilder(A, seed)
        self.registry = IsoRegistry()
        self.members: dict[int, Representation] = {}
        self.new: list[int] = []
        self.targets = list(targets)
        self.cap_notes: set[str] = set()

    # bookkeeping ----------------------------------------------------------
    def established(self, M: Representation) -> bool:
        return self.cert.is_member(M)

    def step_of(self, M: Representation) -> int:
        return self.cert.step_of(M)

    def member_class(self, M: Representation) -> int | None:
        idx = self.registry.lookup(M)
        return idx if idx is not None and idx in self.members else None

    def record(self, rule: str, premises, M: Representation, payload: dict) -> bool:
        """Add a step concluding ``M`` and admit its summands; False if ``M`` was known."""
        if M.is_zero() or self.established(M):
            return False
        self.cert.add_step(rule, premises, [self.cert.module_id(M)], payload)
        self.absorb(M)
        return True

    def absorb(self, M: Representation) -> None:
        """Admit the indecomposable summands of an established module (m5)."""
        try:
            dec = decompose(M, self.seed)
        except SplitExhaustion as exc:
            self.cap_notes.add(f"decomposition failed: {exc}")
            return
        if len(dec) == 1:
            self._admit(M)
            return
        iso = dec.iso().inverse()
        ids = [self.cert.module_id(X) for X in dec.summands]
        for X, xid in zip(dec.summands, ids):
            if self.member_class(X) is not None or self.established(X):
                continue
            if X.total_dim > _search_dim(self.caps):
                self.cap_notes.add(f"summand of dimension {X.total_dim} above max_dim")
                continue
            self.cert.add_step("R-SUM", [self.step_of(M)], [xid],
                               {"whole": self.cert.module_id(M), "summands": ids,
                                "iso": morphism_to_literal(iso)})
            self._admit(X)

    def _admit(self, X: Representation) -> None:
        idx, _ = self.registry.register(X)
        if idx in self.members:
            return
        if len(self.members) >= self.caps.max_members:
            self.cap_notes.add(f"member cap {self.caps.max_members} reached")
            return
        self.members[idx] = X
        self.new.append(idx)

    def injective_sum(self, vertices) -> Representation:
        """Establish ``(+) I_v`` (R-INJ) and return it."""
        J = direct_sum([indec_injective(self.A, v) for v in vertices], algebra=self.A)[0]
        if not self.established(J):
            self.cert.add_step("R-INJ", [], [self.cert.module_id(J)],
                               {"vertices": list(vertices), "iso": morphism_to_literal(J.identity())})
            if len(vertices) == 1:
                self._admit(J)
        return J

    def prove(self, M: Representation) -> bool:
        """Establish the literal ``M`` when all its summands are member classes."""
        if self.established(M):
            return True
        if M.is_zero():
            return False
        dec = decompose(M, self.seed)
        reps, parts = [], []
        for X, inc in zip(dec.summands, dec.inclusions):
            idx = self.member_class(X)
            if idx is None:
                return False
            rep = self.members[idx]
            phi = is_isomorphic(rep, X, self.seed)
            reps.append(rep)
            parts.append(inc @ phi)
        S = reps[0]
        for rep in reps[1:]:
            T, incs, projs = direct_sum([S, rep], algebra=self.A)
            if not self.established(T):
                self.cert.add_step("R-SES", [self.step_of(S), self.step_of(rep)], [self.cert.module_id(T)],
                                   {"modules": [self.cert.module_id(S), self.cert.module_id(T),
                                                self.cert.module_id(rep)],
                                    "f": morphism_to_literal(incs[0]), "g": morphism_to_literal(projs[1])})
            S = T
        # the composite (+) reps -> M; the nested sums agree with the flat one
        iso = morphism_from_columns(parts, M)
        iso = Morphism(S, M, iso.mats, check=False)
        if not self.established(M):
            self.cert.add_step("R-SUM", [self.step_of(S)], [self.cert.module_id(M)],
                               {"whole": self.cert.module_id(S), "summands": [self.cert.module_id(M)],
                                "iso": morphism_to_literal(iso)})
        return True

    def ses(self, X, Y, Z, f: Morphism, g: Morphism, conclude: Representation) -> bool:
        if conclude.is_zero() or self.established(conclude):
            return False
        if conclude.total_dim > _search_dim(self.caps):
            self.cap_notes.add(f"module of dimension {conclude.total_dim} above max_dim")
            return False
        others = [M for M in (X, Y, Z) if M is not conclude]
        premises = [self.step_of(M) for M in others]
        return self.record("R-SES", premises, conclude,
                           {"modules": [self.cert.module_id(M) for M in (X, Y, Z)],
                            "f": morphism_to_literal(f), "g": morphism_to_literal(g)})

    def done(self) -> bool:
        return all(self.member_class(T) is not None for T in self.targets)

    def generic(self, basis: list[Morphism]) -> Morphism:
        F = self.A.field
        return linear_combination(basis, [F.random(self.rng) for _ in basis])

    # moves ----------------------------------------------------------------
    def m1(self) -> None:
        for v in range(self.A.n):
            self.injective_sum([v])

    def m2_sigma(self, X: Representation) -> None:
        if is_injective_module(X):
            return
        seq = hull_sequence(X)
        J = self.injective_sum(seq.vertices)
        self.ses(X, J, seq.cosyzygy, seq.embedding, seq.projection, seq.cosyzygy)

    def m2_inverse(self, T: Representation) -> None:
        if self.member_class(T) is not None or is_injective_module(T):
            return
        seq = hull_sequence(T)
        if seq.cosyzygy.total_dim > _search_dim(self.caps) or not self.prove(seq.cosyzygy):
            return
        J = self.injective_sum(seq.vertices)
        self.ses(T, J, seq.cosyzygy, seq.embedding, seq.projection, T)

    def m3_injective(self, Z: Representation) -> None:
        if is_injective_module(Z):
            return
        A = self.A
        homs = {v: hom_basis(indec_injective(A, v), Z) for v in range(A.n)}
        support = [v for v in range(A.n) if homs[v]]
        mult = self.caps.injective_multiplicity
        found: list[tuple[int, ...]] = []
        for size in range(1, len(support) * mult + 1):
            if len(found) >= _SURJECTIONS_PER_TARGET:
                break
            for combo in itertools.combinations_with_replacement(support, size):
                if any(combo.count(v) > mult for v in combo):
                    continue
                if any(set(prev) <= set(combo) and all(prev.count(v) <= combo.count(v) for v in prev)
                       for prev in found):
                    continue
                J = direct_sum([indec_injective(A, v) for v in combo], algebra=A)[0]
                if J.total_dim - Z.total_dim > _search_dim(self.caps):
                    continue
                parts = [self.generic(homs[v]) for v in combo]
                g = morphism_from_columns(parts, Z)
                g = Morphism(J, Z, g.mats, check=False)
                if not g.is_surjective():
                    continue
                found.append(combo)
                K, inc = kernel(g)
                self.injective_sum(combo)
                self.ses(K, J, Z, inc, g, K)
                if len(found) >= _SURJECTIONS_PER_TARGET:
                    break

    def _candidate_maps(self, basis: list[Morphism]):
        seen = list(basis)
        for _ in range(_GENERIC_TRIES if len(basis) > 1 else 0):
            seen.append(self.generic(basis))
        return seen

    def m3_m4_pair(self, X: Representation, Y: Representation) -> None:
        """Kernels of surjections and cokernels of injections ``X -> Y``."""
        basis = hom_basis(X, Y)
        if not basis:
            return
        for f in self._candidate_maps(basis):
            if f.is_zero() or f.is_iso():
                continue
            if f.is_surjective():
                K, inc = kernel(f)
                self.ses(K, X, Y, inc, f, K)
            elif f.is_injective():
                C, p = cokernel(f)
                self.ses(X, Y, C, f, p, C)

    def m6_pair(self, X: Representation, Y: Representation) -> None:
        if X.dims != Y.dims:
            return
        fs = hom_basis(X, Y)
        gs = fs if X is Y else hom_basis(Y, X)
        if not fs or not gs:
            return
        for f in self._candidate_maps(fs):
            if f.is_zero() or f.is_iso():
                continue
            for g in ([f] if X is Y else self._candidate_maps(gs)):
                if g.is_zero() or g.is_iso():
                    continue
                if not (g @ f).is_zero() or not (f @ g).is_zero():
                    continue
                if any(rf + rg != d for rf, rg, d in zip(f.ranks(), g.ranks(), X.dims)):
                    continue
                self._periodic(X, Y, f, g)

    def _periodic(self, X, Y, f: Morphism, g: Morphism) -> None:
        """Record the cokernels of an interlocking pair."""
        if X is Y:
            C, p = cokernel(f)
            self._per([X], [f], C, p)
            return
        C, p = cokernel(f)
        self._per([Y, X], [f, g], C, p)
        D, q = cokernel(g)
        self._per([X, Y], [g, f], D, q)

    def _per(self, chain, maps, C, p) -> None:
        if C.is_zero() or self.established(C):
            return
        premises = [self.step_of(M) for M in chain]
        self.record("R-PER", premises, C,
                    {"chain": [self.cert.module_id(M) for M in chain], "prefix": 0, "period": len(chain),
                     "maps": [morphism_to_literal(m) for m in maps], "cokernel": morphism_to_literal(p)})

    def m7(self, T: Representation, caps: Caps) -> bool:
        if self.member_class(T) is not None or is_injective_module(T):
            return False
        registry = IsoRegistry()
        res = finite_cosyzygy_type(T, caps, registry)
        if not isinstance(res, Finite):
            self.cap_notes.add(f"finite cosyzygy type undecided for dims {list(T.dims)}: {res.report}")
            return False
        g = res.graph
        reps = {k: g.nodes[k].representative for k in g.node_ids}
        nodes = []
        for k in g.node_ids:
            nd = g.nodes[k]
            seq = nd.hull
            parts, dec = split_summands(seq.cosyzygy, registry)
            summands, isos = [], []
            for kind, key, Y, _ in parts:
                if kind == "inj":
                    target = indec_injective(self.A, key)
                    summands.append({"kind": "inj", "vertex": key})
                else:
                    target = reps[key]
                    summands.append({"kind": "node", "module": self.cert.module_id(target)})
                isos.append(is_isomorphic(Y, target, self.seed))
            iso = block_morphism(isos) @ dec.iso().inverse() if isos else seq.cosyzygy.identity()
            nodes.append({"module": self.cert.module_id(nd.representative), "hull": list(seq.vertices),
                          "embedding": morphism_to_literal(seq.embedding),
                          "cosyzygy": self.cert.module_id(seq.cosyzygy),
                          "projection": morphism_to_literal(seq.projection),
                          "summands": summands, "iso": morphism_to_literal(iso)})
        conclusions = [n["module"] for n in nodes if n["module"] not in self.cert.established]
        if not conclusions:
            return False
        self.cert.add_step("R-FCT", [], conclusions, {"nodes": nodes})
        for k in g.node_ids:
            self._admit(reps[k])
        return True

    # driver ---------------------------------------------------------------
    def run(self) -> Certificate | Unknown:
        self.m1()
        quick = replace(self.caps, max_dim=min(self.caps.sweep_dim, self.caps.max_dim))
        for T in self.targets:
            self.m7(T, quick)
        rounds = 0
        frontier = self.take_new()
        full_sweep = quick.max_dim >= self.caps.max_dim
        while not self.done():
            while frontier and not self.done() and rounds < self.caps.max_rounds:
                rounds += 1
                self.round(frontier)
                frontier = self.take_new()
            if self.done() or full_sweep:
                break
            # the cheap moves stalled: retry the sweep with the full node size
            full_sweep = True
            for T in self.targets:
                self.m7(T, self.caps)
            frontier = self.take_new()
            if not frontier:
                break
        if not self.done():
            missing = [T for T in self.targets if self.member_class(T) is None]
            notes = "; ".join(sorted(self.cap_notes)) or "no further moves apply"
            why = f"round cap {self.caps.max_rounds} reached" if frontier else "member set saturated"
            shown = [list(X.dims) for X in frontier[:6]]
            more = f" and {len(frontier) - 6} more" if len(frontier) > 6 else ""
            return Unknown(f"{len(missing)} of {len(self.targets)} targets unproved "
                           f"(dims {[list(T.dims) for T in missing]}); {len(self.members)} member classes; "
                           f"frontier {len(frontier)} modules {shown}{more}; {why}; {notes}")
        goals = []
        for T in self.targets:
            self.prove(T)
            goals.append(T)
        for v, T in enumerate(goals):
            if T.dims == tuple(1 if i == v else 0 for i in range(self.A.n)):
                self.cert.add_goal(v, T)
        return Certificate(prune(self.cert.to_json()), rounds, len(self.members))

    def round(self, frontier: list[Representation]) -> None:
        snapshot = [self.members[i] for i in sorted(self.members)]
        for X in frontier:
            self.m2_sigma(X)
        for T in self.targets:
            self.m2_inverse(T)
        for X in frontier:
            if self.done():
                return
            self.m3_injective(X)
        for X in frontier:
            for Y in snapshot:
                if self.done():
                    return
                self.m3_m4_pair(X, Y)
                if Y is not X:
                    self.m3_m4_pair(Y, X)
                self.m6_pair(X, Y)

    def take_new(self) -> list[Representation]:
        fresh = [self.members[i] for i in self.new]
        self.new = []
        fresh.sort(key=lambda M: (M.total_dim, M.dims, self.cert.module_id(M)))
        return fresh


def prune(doc: dict) -> dict:
    """Keep only the steps the goals depend on and renumber them."""
    concluded = {}
    for s in doc["steps"]:
        for c in s["conclusions"]:
            concluded.setdefault(c, s["id"])
    needed = set()
    stack = [concluded[g["module"]] for g in doc["goals"] if g["module"] in concluded]
    while stack:
        sid = stack.pop()
        if sid in needed:
            continue
        needed.add(sid)
        stack.extend(doc["steps"][sid]["premises"])
    renum = {old: new for new, old in enumerate(sorted(needed))}
    steps = []
    for old in sorted(needed):
        s = dict(doc["steps"][old])
        s["id"] = renum[old]
        s["premises"] = sorted(renum[p] for p in s["premises"])
        steps.append(s)
    used = set(g["module"] for g in doc["goals"])
    for s in steps:
        used |= _module_refs(s)
    out = dict(doc)
    out["steps"] = steps
    out["modules"] = {k: v for k, v in doc["modules"].items() if k in used}
    return out


def search_membership(targets, caps: Caps = DEFAULT_CAPS, seed: int = DEFAULT_SEED) -> Certificate | Unknown:
    """Search for a certificate that every target lies in the subcategory generated by injectives."""
    targets = list(targets)
    if not targets:
        raise ValueError("no targets")
    return _Search(targets[0].algebra, targets, caps, seed).run()


def verdict(A: Algebra, caps: Caps = DEFAULT_CAPS, seed: int = DEFAULT_SEED) -> Verdict:
    """Decide "injectives generate" where the artifact can: finite injdim or a checked certificate."""
    inj = injdim_regular(A, caps.max_length, caps)
    if isinstance(inj, Dim):
        return Verdict("Generates", "FiniteInjDim", injdim=inj.n)
    res = search_membership(derive_simple_targets(A), caps, seed)
    if isinstance(res, Unknown):
        return Verdict("Unknown", report=f"injdim: {inj.reason or 'exceeds bound'}; search: {res.report}")
    check = check_certificate(res.doc, A)
    if not check.accepted:
        return Verdict("Unknown", report=f"certificate rejected by the checker: {check}")
    return Verdict("Generates", "SimplesCertificate", certificate=res)
