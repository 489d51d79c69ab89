"""Single-point corruptions of certificates, used to probe checker soundness.

Each corruption is placed where it must break a fact the checker verifies:

``entry``   one matrix entry of an exact-sequence map, a hull embedding, or an
            arrow matrix of a module that receives a surjection;
``premise`` one premise id of a step replaced by a different step id;
``seam``    one entry of the wrap-around map of a periodic complex.

Entries are changed by adding one, which always alters the value.
"""

from __future__ import annotations

import copy
import random
from fractions import Fraction

KINDS = ("entry", "premise", "seam")


def _val(s: str) -> Fraction:
    return Fraction(s)


def _bump(s: str) -> str:
    return str(_val(s) + 1)


def _nonzero_rows(m) -> list[int]:
    return [i for i, row in enumerate(m) if any(_val(x) for x in row)]


def _nonzero_cols(m) -> list[int]:
    if not m:
        return []
    return [j for j in range(len(m[0])) if any(_val(row[j]) for row in m)]


def _entry_candidates(doc: dict) -> list[tuple]:
    """``(description, path into doc)`` pairs whose bump must be detected."""
    cands = []
    for step in doc["steps"]:
        p = step["payload"]
        sid = step["id"]
        if step["rule"] == "R-SES":
            for v, (fm, gm) in enumerate(zip(p["f"], p["g"])):
                # g' = g + E_rc makes g' f nonzero whenever row c of f is nonzero
                for c in _nonzero_rows(fm):
                    for r in range(len(gm)):
                        cands.append((f"step {sid}: g[{v}][{r}][{c}]", ("payload", sid, "g", v, r, c)))
            # arrow matrices of Z: naturality with the surjection g fails
            zid = p["modules"][2]
            for name, rows in doc["modules"][zid]["maps"].items():
                for r in range(len(rows)):
                    for c in range(len(rows[r])):
                        cands.append((f"module {zid}: {name}[{r}][{c}]", ("module", zid, name, r, c)))
        elif step["rule"] == "R-FCT":
            for k, node in enumerate(p["nodes"]):
                for v, (em, pm) in enumerate(zip(node["embedding"], node["projection"])):
                    for r in _nonzero_cols(pm):
                        for c in range(len(em[r]) if r < len(em) else 0):
                            cands.append((f"step {sid}: node {k} embedding[{v}][{r}][{c}]",
                                          ("fct", sid, k, v, r, c)))
    return cands


def _apply_entry(doc: dict, target: tuple) -> None:
    kind = target[0]
    if kind == "payload":
        _, sid, key, v, r, c = target
        m = doc["steps"][sid]["payload"][key][v]
        m[r][c] = _bump(m[r][c])
    elif kind == "module":
        _, mid, name, r, c = target
        m = doc["modules"][mid]["maps"][name]
        m[r][c] = _bump(m[r][c])
    elif kind == "fct":
        _, sid, k, v, r, c = target
        m = doc["steps"][sid]["payload"]["nodes"][k]["embedding"][v]
        m[r][c] = _bump(m[r][c])


def _matmul(a, b):
    if not a or not b:
        return []
    return [[sum((_val(a[i][k]) * _val(b[k][j]) for k in range(len(b))), Fraction(0))
             for j in range(len(b[0]))] for i in range(len(a))]


def _is_zero(m) -> bool:
    return all(x == 0 for row in m for x in row)


def _seam_candidates(doc: dict) -> list[tuple]:
    cands = []
    for step in doc["steps"]:
        if step["rule"] != "R-PER":
            continue
        p = step["payload"]
        q, per = p["prefix"], p["period"]
        last = q + per - 1
        maps = p["maps"]
        outer = maps[last - 1] if last >= 1 else None
        nxt = maps[q]
        for v, m in enumerate(maps[last]):
            for r in range(len(m)):
                for c in range(len(m[r])):
                    bumped = [list(row) for row in m]
                    bumped[r][c] = _bump(bumped[r][c])
                    broken = False
                    if outer is not None and not _is_zero(_matmul(outer[v], bumped)):
                        broken = True
                    inner = bumped if per == 1 and q == 0 else nxt[v]
                    if not _is_zero(_matmul(bumped, inner)):
                        broken = True
                    if broken:
                        cands.append((f"step {step['id']}: seam map[{v}][{r}][{c}]", (step["id"], last, v, r, c)))
    return cands


def _premise_candidates(doc: dict) -> list[tuple]:
    n = len(doc["steps"])
    cands = []
    for step in doc["steps"]:
        for k, pid in enumerate(step["premises"]):
            for other in range(n):
                if other != pid:
                    cands.append((f"step {step['id']}: premise {pid} -> {other}", (step["id"], k, other)))
    return cands


def mutate(doc: dict, kind: str, rng: random.Random) -> tuple[dict, str] | None:
    """A corrupted deep copy of ``doc``, or None if ``kind`` has no site."""
    out = copy.deepcopy(doc)
    if kind == "entry":
        cands = _entry_candidates(out)
        if not cands:
            return None
        desc, target = rng.choice(cands)
        _apply_entry(out, target)
    elif kind == "premise":
        cands = _premise_candidates(out)
        if not cands:
            return None
        desc, (sid, k, other) = rng.choice(cands)
        out["steps"][sid]["premises"][k] = other
    elif kind == "seam":
        cands = _seam_candidates(out)
        if not cands:
            return None
        desc, (sid, last, v, r, c) = rng.choice(cands)
        m = out["steps"][sid]["payload"]["maps"][last][v]
        m[r][c] = _bump(m[r][c])
    else:
        raise ValueError(f"unknown mutation kind {kind!r}")
    return out, f"{kind}: {desc}"


def mutation_suite(doc: dict, count: int = 100, seed: int = 0) -> list[tuple[dict, str]]:
    """``count`` corruptions cycling through the kinds that have sites in ``doc``."""
    rng = random.Random(seed)
    kinds = [k for k in KINDS if mutate(doc, k, random.Random(0)) is not None]
    if not kinds:
        raise ValueError("certificate offers no mutation sites")
    out = []
    for i in range(count):
        m = mutate(doc, kinds[i % len(kinds)], rng)
        out.append(m)
    return out
