"""Membership certificates for the localizing subcategory generated by injectives.

A certificate is a JSON document with a table of module literals and an
ordered list of steps. Each step applies one rule and names the earlier steps
whose conclusions it uses:

``R-INJ``  a finite sum of indecomposable injectives ``I_v`` (explicit iso);
``R-SES``  a short exact sequence ``0 -> X -> Y -> Z -> 0`` with two members;
``R-SUM``  a summand of a member (explicit iso ``whole -> (+) summands``);
``R-PER``  the cokernel of ``d_0`` in an exact complex ``... -> C_1 -> C_0``
           of members that is eventually periodic;
``R-FCT``  every module in a finite set closed under cosyzygies up to
           injective summands, with each hull sequence spelled out.

:func:`check_certificate` re-verifies every payload with exact linear algebra.
It builds the injectives ``I_v`` from the algebra itself and never consults
the search code.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

import jsonschema

from .algebra import Algebra
from .modules import (Morphism, Representation, direct_sum, from_literal, indec_injective,
                      morphism_from_literal, socle, to_literal)

FORMAT = "injgen-certificate/1"
RULES = ("R-INJ", "R-SES", "R-SUM", "R-PER", "R-FCT")

_MATRIX = {"type": "array", "items": {"type": "array", "items": {"type": "string"}}}
_MORPHISM = {"type": "array", "items": _MATRIX}

CERTIFICATE_SCHEMA = {
    "type": "object",
    "required": ["format", "algebra", "modules", "steps", "goals"],
    "properties": {
        "format": {"const": FORMAT},
        "algebra": {
            "type": "object",
            "required": ["digest", "vertices"],
            "properties": {"digest": {"type": "string"}, "vertices": {"type": "integer", "minimum": 1}},
        },
        "seed": {"type": "integer"},
        "modules": {
            "type": "object",
            "additionalProperties": {
                "type": "object",
                "required": ["dims", "maps"],
                "properties": {
                    "dims": {"type": "array", "items": {"type": "integer", "minimum": 0}},
                    "maps": {"type": "object", "additionalProperties": _MATRIX},
                },
            },
        },
        "steps": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["id", "rule", "premises", "conclusions", "payload"],
                "properties": {
                    "id": {"type": "integer", "minimum": 0},
                    "rule": {"enum": list(RULES)},
                    "premises": {"type": "array", "items": {"type": "integer"}},
                    "conclusions": {"type": "array", "items": {"type": "string"}, "minItems": 1},
                    "payload": {"type": "object"},
                },
            },
        },
        "goals": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["vertex", "module"],
                "properties": {"vertex": {"type": "integer", "minimum": 0}, "module": {"type": "string"}},
            },
        },
    },
}


class Rejected(Exception):
    def __init__(self, step, reason: str):
        super().__init__(f"step {step}: {reason}")
        self.step = step
        self.reason = reason


@dataclass(frozen=True)
class CheckResult:
    accepted: bool
    step: int | str | None = None
    reason: str = ""

    def __bool__(self) -> bool:
        return self.accepted

    def __str__(self) -> str:
        return "Accepted" if self.accepted else f"Rejected(step {self.step}: {self.reason})"


# building -------------------------------------------------------------------------

class CertificateBuilder:
    """Accumulates module literals and steps; module ids are assigned in insertion order."""

    def __init__(self, algebra: Algebra, seed: int | None = None):
        self.algebra = algebra
        self.seed = seed
        self.modules: dict[str, dict] = {}
        self._ids: dict[Representation, str] = {}
        self.steps: list[dict] = []
        self.established: dict[str, int] = {}
        self.goals: list[dict] = []

    def module_id(self, M: Representation) -> str:
        if M not in self._ids:
            mid = f"m{len(self._ids)}"
            self._ids[M] = mid
            self.modules[mid] = to_literal(M)
        return self._ids[M]

    def is_member(self, M: Representation) -> bool:
        return M in self._ids and self._ids[M] in self.established

    def step_of(self, M: Representation) -> int:
        return self.established[self._ids[M]]

    def add_step(self, rule: str, premises, conclusions, payload: dict) -> int:
        sid = len(self.steps)
        concl = [c for c in conclusions if c not in self.established]
        if not concl:
            raise ValueError("step concludes nothing new")
        self.steps.append({"id": sid, "rule": rule, "premises": sorted(set(premises)),
                           "conclusions": concl, "payload": payload})
        for c in concl:
            self.established[c] = sid
        return sid

    def add_goal(self, vertex: int, M: Representation) -> None:
        self.goals.append({"vertex": vertex, "module": self.module_id(M)})

    def to_json(self) -> dict:
        used = set()
        for step in self.steps:
            used.update(_module_refs(step))
        for g in self.goals:
            used.add(g["module"])
        doc = {
            "format": FORMAT,
            "algebra": {"digest": self.algebra.digest(), "vertices": self.algebra.n},
            "modules": {k: v for k, v in self.modules.items() if k in used},
            "steps": self.steps,
            "goals": sorted(self.goals, key=lambda g: g["vertex"]),
        }
        if self.seed is not None:
            doc["seed"] = self.seed
        return doc


def _module_refs(step: dict) -> set[str]:
    refs = set(step["conclusions"])
    p = step["payload"]
    rule = step["rule"]
    if rule == "R-SES":
        refs.update(p["modules"])
    elif rule == "R-SUM":
        refs.add(p["whole"])
        refs.update(p["summands"])
    elif rule == "R-PER":
        refs.update(p["chain"])
    elif rule == "R-FCT":
        for node in p["nodes"]:
            refs.add(node["module"])
            refs.add(node["cosyzygy"])
            refs.update(s["module"] for s in node["summands"] if s["kind"] == "node")
    return refs


def dumps(doc: dict) -> str:
    return json.dumps(doc, sort_keys=True, indent=1) + "\n"


def save(doc: dict, path: str | Path) -> None:
    Path(path).write_text(dumps(doc), encoding="utf-8")


def load(path: str | Path) -> dict:
    return json.loads(Path(path).read_text(encoding="utf-8"))


# checking -------------------------------------------------------------------------

class _Checker:
    def __init__(self, doc: dict, algebra: Algebra):
        self.doc = doc
        self.A = algebra
        self.modules: dict[str, Representation] = {}
        self.injectives = [indec_injective(algebra, i) for i in range(algebra.n)]
        self.established: dict[str, int] = {}
        self.conclusions_of: dict[int, list[str]] = {}

    def module(self, mid: str, where) -> Representation:
        if mid not in self.modules:
            lit = self.doc["modules"].get(mid)
            if lit is None:
                raise Rejected(where, f"unknown module {mid}")
            if len(lit["dims"]) != self.A.n:
                raise Rejected(where, f"module {mid} has a dimension vector of the wrong length")
            try:
                self.modules[mid] = from_literal(self.A, lit, check=True)
            except (ValueError, KeyError) as exc:
                raise Rejected(where, f"module {mid} is not a valid representation: {exc}") from None
        return self.modules[mid]

    def morphism(self, src: Representation, dst: Representation, mats, where, what: str) -> Morphism:
        try:
            f = morphism_from_literal(src, dst, mats, check=False)
        except (ValueError, KeyError, TypeError, ZeroDivisionError) as exc:
            raise Rejected(where, f"{what}: malformed morphism ({exc})") from None
        bad = f.failing_arrow()
        if bad is not None:
            raise Rejected(where, f"{what}: not a homomorphism (square for arrow {bad} fails)")
        return f

    def injective_sum(self, vertices, where) -> Representation:
        for v in vertices:
            if not isinstance(v, int) or not 0 <= v < self.A.n:
                raise Rejected(where, f"bad injective index {v}")
        return direct_sum([self.injectives[v] for v in vertices], algebra=self.A)[0]

    def require_iso(self, f: Morphism, where, what: str) -> None:
        for v, m in enumerate(f.mats):
            if m.rows != m.cols or m.rank() != m.rows:
                raise Rejected(where, f"{what}: not invertible at vertex {v + 1}")

    def require_members(self, step: dict, needed: list[str]) -> None:
        sid = step["id"]
        available = set()
        for p in step["premises"]:
            if not isinstance(p, int) or p < 0 or p >= sid:
                raise Rejected(sid, f"premise {p} is not an earlier step")
            available.update(self.conclusions_of[p])
        for mid in needed:
            if mid not in available:
                raise Rejected(sid, f"module {mid} is not established by the cited premises")

    # rules --------------------------------------------------------------------
    def check_inj(self, step: dict) -> None:
        sid = step["id"]
        p = step["payload"]
        (target,) = self._single(step)
        T = self.module(target, sid)
        S = self.injective_sum(p["vertices"], sid)
        iso = self.morphism(S, T, p["iso"], sid, "iso")
        self.require_iso(iso, sid, "iso")

    def check_ses(self, step: dict) -> None:
        sid = step["id"]
        p = step["payload"]
        ids = p["modules"]
        if len(ids) != 3:
            raise Rejected(sid, "a short exact sequence needs three modules")
        X, Y, Z = (self.module(m, sid) for m in ids)
        (concl,) = self._single(step)
        if concl not in ids:
            raise Rejected(sid, "conclusion is not a term of the sequence")
        k = ids.index(concl)
        self.require_members(step, [m for j, m in enumerate(ids) if j != k])
        f = self.morphism(X, Y, p["f"], sid, "f")
        g = self.morphism(Y, Z, p["g"], sid, "g")
        for v in range(self.A.n):
            if not (g.mats[v] @ f.mats[v]).is_zero():
                raise Rejected(sid, f"g o f is nonzero at vertex {v + 1}")
            if f.mats[v].rank() != X.dims[v]:
                raise Rejected(sid, f"f is not injective at vertex {v + 1}")
            if g.mats[v].rank() != Z.dims[v]:
                raise Rejected(sid, f"g is not surjective at vertex {v + 1}")
            if Y.dims[v] != X.dims[v] + Z.dims[v]:
                raise Rejected(sid, f"sequence is not exact in the middle at vertex {v + 1}")

    def check_sum(self, step: dict) -> None:
        sid = step["id"]
        p = step["payload"]
        (concl,) = self._single(step)
        if concl not in p["summands"]:
            raise Rejected(sid, "conclusion is not one of the summands")
        self.require_members(step, [p["whole"]])
        W = self.module(p["whole"], sid)
        parts = [self.module(m, sid) for m in p["summands"]]
        S = direct_sum(parts, algebra=self.A)[0]
        iso = self.morphism(W, S, p["iso"], sid, "iso")
        self.require_iso(iso, sid, "iso")

    def check_per(self, step: dict) -> None:
        sid = step["id"]
        p = step["payload"]
        chain_ids = p["chain"]
        q, period = p["prefix"], p["period"]
        if period < 1 or q < 0 or len(chain_ids) != q + period or len(p["maps"]) != q + period:
            raise Rejected(sid, "inconsistent chain, prefix and period lengths")
        self.require_members(step, list(dict.fromkeys(chain_ids)))
        chain = [self.module(m, sid) for m in chain_ids]

        def pos(t: int) -> int:
            return t if t < q else q + (t - q) % period

        maps = []
        for k in range(q + period):
            src = chain[pos(k + 1)]
            dst = chain[k]
            maps.append(self.morphism(src, dst, p["maps"][k], sid, f"d_{k}"))

        def d(t: int) -> Morphism:
            return maps[pos(t)]

        # exactness at C_t for t = 1 .. q + period covers every distinct position
        for t in range(1, q + period + 1):
            inner, outer = d(t), d(t - 1)
            where = f"position {t}" + (" (period seam)" if t >= q + period - 1 else "")
            for v in range(self.A.n):
                if not (outer.mats[v] @ inner.mats[v]).is_zero():
                    raise Rejected(sid, f"{where}: composite is nonzero at vertex {v + 1}")
                if inner.mats[v].rank() + outer.mats[v].rank() != chain[pos(t)].dims[v]:
                    raise Rejected(sid, f"{where}: not exact at vertex {v + 1}")
        (concl,) = self._single(step)
        Z = self.module(concl, sid)
        pi = self.morphism(chain[0], Z, p["cokernel"], sid, "cokernel map")
        d0 = maps[0]
        for v in range(self.A.n):
            if pi.mats[v].rank() != Z.dims[v]:
                raise Rejected(sid, f"cokernel map is not surjective at vertex {v + 1}")
            if not (pi.mats[v] @ d0.mats[v]).is_zero():
                raise Rejected(sid, f"cokernel map does not kill the image of d_0 at vertex {v + 1}")
            if d0.mats[v].rank() + Z.dims[v] != chain[0].dims[v]:
                raise Rejected(sid, f"conclusion is not the cokernel of d_0 at vertex {v + 1}")

    def check_fct(self, step: dict) -> None:
        sid = step["id"]
        p = step["payload"]
        nodes = p["nodes"]
        node_ids = [nd["module"] for nd in nodes]
        if len(set(node_ids)) != len(node_ids):
            raise Rejected(sid, "repeated node")
        if not set(step["conclusions"]) <= set(node_ids):
            raise Rejected(sid, "conclusions must be nodes of the closed set")
        node_set = set(node_ids)
        for nd in nodes:
            where = f"{sid} node {nd['module']}"
            X = self.module(nd["module"], sid)
            soc_dims = socle(X)[0].dims
            hv = nd["hull"]
            counts = [hv.count(i) for i in range(self.A.n)]
            if counts != list(soc_dims):
                raise Rejected(where, "hull is not minimal: multiplicities differ from the socle")
            J = self.injective_sum(hv, where)
            e = self.morphism(X, J, nd["embedding"], where, "embedding")
            C = self.module(nd["cosyzygy"], sid)
            pr = self.morphism(J, C, nd["projection"], where, "projection")
            for v in range(self.A.n):
                if e.mats[v].rank() != X.dims[v]:
                    raise Rejected(where, f"embedding not injective at vertex {v + 1}")
                if not (pr.mats[v] @ e.mats[v]).is_zero():
                    raise Rejected(where, f"projection does not kill the module at vertex {v + 1}")
                if pr.mats[v].rank() != C.dims[v] or J.dims[v] != X.dims[v] + C.dims[v]:
                    raise Rejected(where, f"hull sequence not exact at vertex {v + 1}")
            parts = []
            for s in nd["summands"]:
                if s["kind"] == "node":
                    if s["module"] not in node_set:
                        raise Rejected(where, f"summand {s['module']} is not a node of the set")
                    parts.append(self.module(s["module"], sid))
                elif s["kind"] == "inj":
                    parts.append(self.injective_sum([s["vertex"]], where))
                else:
                    raise Rejected(where, f"unknown summand kind {s['kind']!r}")
            S = direct_sum(parts, algebra=self.A)[0]
            iso = self.morphism(C, S, nd["iso"], where, "cosyzygy decomposition")
            self.require_iso(iso, where, "cosyzygy decomposition")

    def _single(self, step: dict) -> list[str]:
        if len(step["conclusions"]) != 1:
            raise Rejected(step["id"], f"{step['rule']} concludes exactly one module")
        return step["conclusions"]

    def run(self) -> None:
        doc = self.doc
        if doc["algebra"]["digest"] != self.A.digest():
            raise Rejected("header", "certificate was issued for a different algebra")
        if doc["algebra"]["vertices"] != self.A.n:
            raise Rejected("header", "vertex count mismatch")
        handlers = {"R-INJ": self.check_inj, "R-SES": self.check_ses, "R-SUM": self.check_sum,
                    "R-PER": self.check_per, "R-FCT": self.check_fct}
        for k, step in enumerate(doc["steps"]):
            if step["id"] != k:
                raise Rejected(step["id"], "step ids must be consecutive from 0")
            for q in step["premises"]:
                if not 0 <= q < k:
                    raise Rejected(k, f"premise {q} is not an earlier step")
            try:
                handlers[step["rule"]](step)
            except Rejected:
                raise
            except (KeyError, TypeError, ValueError, IndexError) as exc:
                raise Rejected(k, f"malformed payload ({exc.__class__.__name__}: {exc})") from None
            self.conclusions_of[k] = list(step["conclusions"])
            for c in step["conclusions"]:
                self.established.setdefault(c, k)
        for goal in doc["goals"]:
            mid = goal["module"]
            v = goal["vertex"]
            if not 0 <= v < self.A.n:
                raise Rejected("goals", f"vertex {v} out of range")
            M = self.module(mid, "goals")
            if M.dims != tuple(1 if i == v else 0 for i in range(self.A.n)):
                raise Rejected("goals", f"goal module {mid} is not the simple at vertex {v + 1}")
            if mid not in self.established:
                raise Rejected("goals", f"goal module {mid} is never established")


def check_certificate(doc: dict, algebra: Algebra) -> CheckResult:
    """Re-verify every step of a certificate against ``algebra``."""
    try:
        jsonschema.validate(doc, CERTIFICATE_SCHEMA)
    except jsonschema.ValidationError as exc:
        return CheckResult(False, "schema", exc.message)
    try:
        _Checker(doc, algebra).run()
    except Rejected as rej:
        return CheckResult(False, rej.step, rej.reason)
    return CheckResult(True)


def covers_all_simples(doc: dict, algebra: Algebra) -> bool:
    return sorted(g["vertex"] for g in doc["goals"]) == list(range(algebra.n))
