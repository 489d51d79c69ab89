"""Named modules over the six-vertex corpus algebra ``corpus/sec6.alg``.

Every indecomposable projective and injective of that algebra has exactly one
basis vector at each vertex, so "the element labelled j" of ``P_i`` or ``I_i``
is unambiguous. Each named module is the submodule generated by a few such
elements; ``DIAGRAMS`` records the support and the nonzero arrow actions the
module must have, and :func:`check_diagram` compares the two.
"""

from __future__ import annotations

from importlib import resources
from pathlib import Path

from .algebra import Algebra
from .modules import Representation, generated_submodule, indec_injective, indec_projective

# name -> (ambient kind, ambient vertex, generating labels); labels and vertices 1-based
GENERATORS = {
    "Ma": ("I", 6, [4]),
    "Mb": ("I", 5, [1]),
    "Mc": ("I", 3, [2]),
    "Md": ("I", 4, [6]),
    "Me": ("I", 1, [6, 3]),
    "Mf": ("I", 2, [5, 4]),
    "Mg": ("I", 1, [3]),
    "Mh": ("I", 2, [5]),
    "Mi": ("P", 1, [2]),
    "Mj": ("I", 4, [1]),
    "Mk": ("I", 5, [2]),
    "Ml": ("I", 3, [1]),
}

# name -> (support, edges) with 1-based vertex labels
DIAGRAMS = {
    "Ma": ({4, 6}, {(4, 6)}),
    "Mb": ({1, 2, 3, 5}, {(1, 2), (1, 3), (2, 5), (3, 5)}),
    "Mc": ({2, 1, 5, 3}, {(2, 1), (2, 5), (1, 3), (5, 3)}),
    "Md": ({6, 4}, {(6, 4)}),
    "Me": ({6, 3, 1}, {(6, 1), (3, 1)}),
    "Mf": ({4, 5, 2}, {(4, 2), (5, 2)}),
    "Mg": ({3, 1}, {(3, 1)}),
    "Mh": ({5, 2}, {(5, 2)}),
    "Mi": ({2, 5, 6}, {(2, 5), (5, 6)}),
    "Mj": ({1, 3, 4}, {(1, 3), (3, 4)}),
    "Mk": ({2, 5}, {(2, 5)}),
    "Ml": ({1, 3}, {(1, 3)}),
}


def corpus_dir() -> Path:
    return Path(str(resources.files("injgen") / "corpus"))


def corpus_path(name: str) -> Path:
    return corpus_dir() / name


def sec6_algebra() -> Algebra:
    return Algebra.load(corpus_path("sec6.alg"))


def _labelled(A: Algebra, M: Representation, label: int):
    v = label - 1
    if M.dims[v] != 1:
        raise ValueError(f"vertex {label} does not carry a single basis vector")
    return (v, [A.field.one])


def sec6_module(A: Algebra, name: str) -> Representation:
    kind, vertex, labels = GENERATORS[name]
    ambient = indec_injective(A, vertex - 1) if kind == "I" else indec_projective(A, vertex - 1)
    S, _ = generated_submodule(ambient, [_labelled(A, ambient, lab) for lab in labels])
    return S


def sec6_modules(A: Algebra) -> dict[str, Representation]:
    return {name: sec6_module(A, name) for name in GENERATORS}


def diagram_of(M: Representation) -> tuple[set[int], set[tuple[int, int]]]:
    """Support and nonzero arrow actions of a module with at most one dimension per vertex."""
    support = {v + 1 for v, d in enumerate(M.dims) if d}
    edges = {(a.source + 1, a.target + 1) for a, m in zip(M.algebra.arrows, M.maps)
             if m.rows and m.cols and not m.is_zero()}
    return support, edges


def check_diagram(M: Representation, name: str) -> bool:
    if any(d > 1 for d in M.dims):
        return False
    return diagram_of(M) == DIAGRAMS[name]
