"""Command line front end: ``injgen <subcommand> ALGEBRA [options]``.

Exit status: 0 for Generates / Accepted / a complete result, 2 for Unknown or
an incomplete graph, 1 for errors (parse, admissibility, rejected certificate).
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from dataclasses import replace
from pathlib import Path

from . import certificate as certmod
from .algebra import AdmissibilityFailure, Algebra, AlgebraParseError
from .decomp import DEFAULT_SEED, SplitExhaustion, decompose
from .fixtures import GENERATORS, sec6_module
from .modules import (Representation, format_module_text, from_literal, indec_injective,
                      indec_projective, parse_module_text, simple_module)
from .resolve import (DEFAULT_CAPS, Caps, cosyzygy_graph, injective_index,
                      is_injective_module, min_injective_resolution, min_projective_resolution,
                      repetition_index)
from .search import verdict

EXIT_OK, EXIT_ERROR, EXIT_UNKNOWN = 0, 1, 2


def _caps(args) -> Caps:
    caps = DEFAULT_CAPS
    if args.max_dim is not None:
        caps = replace(caps, max_dim=args.max_dim)
    if args.max_nodes is not None:
        caps = replace(caps, max_nodes=args.max_nodes)
    if args.max_steps is not None:
        caps = replace(caps, max_length=args.max_steps)
    if args.max_rounds is not None:
        caps = replace(caps, max_rounds=args.max_rounds)
    return caps


def _module(A: Algebra, args) -> Representation:
    chosen = [s for s in ("simple", "projective", "injective", "module", "named") if getattr(args, s) is not None]
    if len(chosen) != 1:
        raise ValueError("choose exactly one of --simple, --projective, --injective, --module, --named")
    kind = chosen[0]
    if kind == "module":
        path = Path(args.module)
        text = path.read_text(encoding="utf-8")
        if path.suffix == ".json":
            return from_literal(A, json.loads(text))
        return parse_module_text(A, text)
    if kind == "named":
        if args.named not in GENERATORS:
            raise ValueError(f"unknown named module {args.named}; choose from {', '.join(GENERATORS)}")
        return sec6_module(A, args.named)
    i = getattr(args, kind) - 1
    build = {"simple": simple_module, "projective": indec_projective, "injective": indec_injective}[kind]
    return build(A, i)


def _describe(M: Representation) -> str:
    return "dims " + " ".join(str(d) for d in M.dims)


def _injective_terms(I: Representation) -> str:
    if I.is_zero():
        return "0"
    parts = []
    for X in decompose(I).summands:
        i = injective_index(X)
        parts.append(f"I{i + 1}" if i is not None else f"?({_describe(X)})")
    return " + ".join(parts)


def cmd_verdict(args) -> int:
    A = Algebra.load(args.algebra)
    caps = _caps(args)
    t0 = time.perf_counter()
    v = verdict(A, caps, args.seed)
    elapsed = time.perf_counter() - t0
    cert_path = "none"
    if v.by == "SimplesCertificate":
        path = Path(args.emit_cert) if args.emit_cert else Path(Path(args.algebra).stem + ".cert.json")
        certmod.save(v.certificate.doc, path)
        cert_path = str(path)
    print(f"algebra: {Path(args.algebra).name} (sha256 {A.digest()[:16]}, dim {A.dim})")
    print(f"verdict: {v}")
    if v.by == "SimplesCertificate":
        doc = v.certificate.doc
        rules = sorted({s['rule'] for s in doc['steps']})
        print(f"certificate: {cert_path} ({len(doc['steps'])} steps; rules {', '.join(rules)})")
    else:
        print(f"certificate: {cert_path}")
    print(f"caps: max_dim={caps.max_dim} max_nodes={caps.max_nodes} max_steps={caps.max_length} "
          f"max_rounds={caps.max_rounds}")
    print(f"seed: {args.seed}")
    print(f"time: {elapsed:.2f}s")
    return EXIT_OK if v.generates else EXIT_UNKNOWN


def cmd_check(args) -> int:
    A = Algebra.load(args.algebra)
    doc = certmod.load(args.certificate)
    res = certmod.check_certificate(doc, A)
    print(res)
    if res.accepted and not certmod.covers_all_simples(doc, A):
        print("note: goals do not cover every simple module")
    return EXIT_OK if res.accepted else EXIT_ERROR


def cmd_resolve(args) -> int:
    A = Algebra.load(args.algebra)
    M = _module(A, args)
    length = args.length
    if args.projective_resolution:
        res = min_projective_resolution(M, length)
        print(f"minimal projective resolution of module with {_describe(M)}")
        for k, (P, Om) in enumerate(zip(res.terms, res.syzygies[1:])):
            print(f"P^{k}: dims {' '.join(map(str, P.dims))}  syzygy {k + 1}: {_describe(Om)}")
    else:
        res = min_injective_resolution(M, length)
        print(f"minimal injective resolution of module with {_describe(M)}")
        for k, (I, S) in enumerate(zip(res.terms, res.syzygies[1:])):
            print(f"I^{k} = {_injective_terms(I)}  cosyzygy {k + 1}: {_describe(S)}")
    print("finite" if res.finite else f"stopped after {len(res.terms)} terms")
    if args.emit_graph:
        g = cosyzygy_graph([M], _caps(args)) if not is_injective_module(M) else None
        Path(args.emit_graph).write_text(g.export() if g else "# cosyzygy graph: 0 nodes, complete\n",
                                         encoding="utf-8")
    return EXIT_OK


def cmd_graph(args) -> int:
    A = Algebra.load(args.algebra)
    M = _module(A, args)
    if is_injective_module(M):
        print("# cosyzygy graph: 0 nodes, complete")
        print("repetition index: 0")
        return EXIT_OK
    g = cosyzygy_graph([M], _caps(args))
    text = g.export()
    sys.stdout.write(text)
    if g.complete:
        print(f"repetition index: {repetition_index(M, g).n}")
    if args.emit_graph:
        Path(args.emit_graph).write_text(text, encoding="utf-8")
    return EXIT_OK if g.complete else EXIT_UNKNOWN


def cmd_decompose(args) -> int:
    A = Algebra.load(args.algebra)
    M = _module(A, args)
    dec = decompose(M, args.seed)
    print(f"module with {_describe(M)}: {len(dec)} indecomposable summand(s)")
    for k, X in enumerate(dec.summands):
        i = injective_index(X)
        tag = f" (injective I{i + 1})" if i is not None else ""
        print(f"summand {k + 1}: {_describe(X)}{tag}")
        if args.show:
            print(format_module_text(X).rstrip())
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="injgen", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, module=False):
        p.add_argument("algebra", help="algebra file (.alg)")
        p.add_argument("--max-dim", type=int)
        p.add_argument("--max-nodes", type=int)
        p.add_argument("--max-steps", type=int, help="resolution length / injective dimension bound")
        p.add_argument("--max-rounds", type=int, help="search rounds")
        p.add_argument("--seed", type=int, default=DEFAULT_SEED)
        p.add_argument("--threads", type=int, default=1, help="accepted for compatibility; work is serial")
        if module:
            g = p.add_argument_group("module selection (vertices are 1-based)")
            g.add_argument("--simple", type=int)
            g.add_argument("--projective", type=int)
            g.add_argument("--injective", type=int)
            g.add_argument("--module", help="module file (text literal, or JSON literal with .json suffix)")
            g.add_argument("--named", help="named module of the six-vertex corpus algebra, e.g. Ma")

    p = sub.add_parser("verdict", help="decide whether injectives generate (Generates or Unknown)")
    common(p)
    p.add_argument("--emit-cert", help="where to write the certificate")
    p.set_defaults(func=cmd_verdict)

    p = sub.add_parser("check", help="re-verify a certificate against an algebra")
    p.add_argument("algebra")
    p.add_argument("certificate")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("resolve", help="minimal injective (or projective) resolution of a module")
    common(p, module=True)
    p.add_argument("--length", type=int, default=10, help="number of terms to compute (default 10)")
    p.add_argument("--projective-resolution", action="store_true")
    p.add_argument("--emit-graph")
    p.set_defaults(func=cmd_resolve)

    p = sub.add_parser("cosyzygy-graph", help="cosyzygy transition graph and repetition index")
    common(p, module=True)
    p.add_argument("--emit-graph")
    p.set_defaults(func=cmd_graph)

    p = sub.add_parser("decompose", help="Krull-Schmidt decomposition of a module")
    common(p, module=True)
    p.add_argument("--show", action="store_true", help="print each summand as a module literal")
    p.set_defaults(func=cmd_decompose)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (AlgebraParseError, AdmissibilityFailure, SplitExhaustion, ValueError, OSError,
            json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
