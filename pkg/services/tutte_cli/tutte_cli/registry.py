"""What the command line can compute and verify, per input type."""
from __future__ import annotations

import random
from collections.abc import Callable
from dataclasses import dataclass
from typing import Any

from pydantic import BaseModel

from unitutte_core import arithmetic, colored, delta, graph, matroid, polysub, relative
from unitutte_core.algebra import MRPoly
from unitutte_core.arithmetic import AbelianPresentation, ArithMatroid, from_presentation
from unitutte_core.characters import delcon_check, exp_star_check
from unitutte_core.colored import ColoredMatroid
from unitutte_core.delta import DMPerspective, FeasibleFamily, Perspective
from unitutte_core.errors import AlgebraDomainError, UnsupportedSystemError
from unitutte_core.graph import EdgeGraph
from unitutte_core.matroid import MATROIDS, RankTable
from unitutte_core.minors import MinorsSystem
from unitutte_core.norms import norm_candidate
from unitutte_core.polysub import SubmodTable
from unitutte_core.relative import RelMatroid
from unitutte_core.schemas import Witness

PALETTE = ("r", "g")


@dataclass(frozen=True)
class Family:
    """An input type: how to load it, list it and draw it at random."""

    name: str
    system: Callable[[Any], MinorsSystem]
    load: Callable[[BaseModel], Any]
    enumerate: Callable[[int], list] | None
    random: Callable[[random.Random, int], Any]


def _relatives(k: int) -> list[RelMatroid]:
    return [RelMatroid(m, z) for m in matroid.matroid_classes(k) for z in range(1 << k)]


def _colored_random(rng: random.Random, n: int) -> ColoredMatroid:
    return colored.colored_system(PALETTE).random(rng, n)


FAMILIES: dict[str, Family] = {
    f.name: f
    for f in (
        Family(
            "matroid",
            lambda x: MATROIDS,
            RankTable.from_doc,
            matroid.matroid_classes,
            matroid.random_matroid,
        ),
        Family(
            "graph",
            lambda x: graph.GRAPHS,
            EdgeGraph.from_doc,
            graph.enumerate_graphs,
            graph.random_graph,
        ),
        Family(
            "delta",
            lambda x: delta.DELTAS,
            FeasibleFamily.from_doc,
            delta.delta_classes,
            delta.random_delta,
        ),
        Family(
            "perspective",
            lambda x: delta.PERSPECTIVES,
            Perspective.from_doc,
            delta.enumerate_perspectives,
            delta.random_perspective,
        ),
        Family(
            "dmp",
            lambda x: delta.DMPS,
            DMPerspective.from_doc,
            delta.enumerate_dmps,
            delta.random_dmp,
        ),
        Family(
            "relative",
            lambda x: relative.RELATIVES,
            RelMatroid.from_doc,
            _relatives,
            relative.random_relative,
        ),
        Family(
            "submodular",
            lambda x: polysub.SUBMODULAR,
            SubmodTable.from_doc,
            None,
            polysub.random_submodular,
        ),
        Family(
            "colored",
            lambda x: colored.system_for(x, PALETTE),
            ColoredMatroid.from_doc,
            colored.colored_system(PALETTE).enumerate,
            _colored_random,
        ),
        Family(
            "arithmetic",
            lambda x: arithmetic.ARITHMETIC,
            ArithMatroid.from_doc,
            arithmetic.small_arithmetic,
            arithmetic.ARITHMETIC.random,
        ),
    )
}


def load(doc: BaseModel) -> tuple[Family, Any]:
    """Validated structure for a parsed input document."""
    if doc.type == "arithmetic_presentation":
        return FAMILIES["arithmetic"], from_presentation(AbelianPresentation.from_doc(doc))
    if doc.type not in FAMILIES:
        raise UnsupportedSystemError(f"input type {doc.type!r} has no invariants")
    fam = FAMILIES[doc.type]
    return fam, fam.load(doc)


# --- Invariants ---

Computed = tuple[MRPoly, dict[str, Any] | None]


def _plain(fn: Callable[[Any], MRPoly]) -> Callable[[Any], Computed]:
    return lambda x: (fn(x), None)


def _arith_plocal(prime: int | None) -> Callable[[Any], Computed]:
    return _plain(
        lambda x: arithmetic.arith_specialize(arithmetic.universal_arith_tutte(x), "p_local", prime)
    )


INVARIANTS: dict[str, dict[str, Callable[[Any], Computed]]] = {
    "tutte": {
        "matroid": _plain(matroid.tutte),
        "graph": _plain(graph.graph_tutte),
        "relative": relative.relative_tutte,
    },
    "universal": {
        "matroid": _plain(matroid.universal_tutte),
        "graph": _plain(graph.universal_graph_tutte),
        "delta": _plain(delta.universal_delta),
        "perspective": _plain(delta.universal_matper),
        "dmp": _plain(delta.universal_dmp),
        "relative": relative.universal_relative,
        "submodular": _plain(polysub.t_sf),
        "colored": _plain(colored.universal_colored),
        "arithmetic": _plain(arithmetic.universal_arith_character),
    },
    "corank-nullity": {"matroid": _plain(matroid.corank_nullity)},
    "multivariate": {"matroid": _plain(matroid.multivariate_tutte)},
    "dichromatic": {"graph": _plain(graph.dichromatic)},
    "chromatic": {"graph": _plain(graph.chromatic)},
    "br": {"delta": _plain(delta.bollobas_riordan)},
    "las-vergnas": {"perspective": _plain(delta.las_vergnas)},
    "krushkal": {"dmp": _plain(delta.krushkal)},
    "pointed": {"relative": _plain(relative.pointed_tutte)},
    "t-sf": {"submodular": _plain(polysub.t_sf)},
    "sf-reduced": {"submodular": _plain(polysub.sf_reduced)},
    "colored-tutte": {"colored": _plain(colored.colored_tutte)},
    "arith-tutte": {"arithmetic": _plain(arithmetic.universal_arith_tutte)},
    "arith-tutte-full": {"arithmetic": _plain(arithmetic.arithmetic_tutte)},
    "arith-tutte-forget": {
        "arithmetic": _plain(
            lambda x: arithmetic.arith_specialize(arithmetic.universal_arith_tutte(x), "forget")
        )
    },
}


def invariant(name: str, family: Family, prime: int | None = None) -> Callable[[Any], Computed]:
    if name == "arith-tutte-plocal" and family.name == "arithmetic":
        if prime is None:
            raise AlgebraDomainError("arith-tutte-plocal needs --prime")
        return _arith_plocal(prime)
    table = INVARIANTS.get(name)
    if table is None:
        raise UnsupportedSystemError(f"unknown invariant {name!r}")
    if family.name not in table:
        raise UnsupportedSystemError(f"invariant {name!r} is not defined for {family.name} input")
    return table[family.name]


# --- Identities ---

@dataclass(frozen=True)
class Identity:
    name: str
    family: str
    check: Callable[[Any], Witness | None]


def _matroid_exp_star(m: RankTable) -> Witness | None:
    return exp_star_check(
        MATROIDS, m, lambda y: MATROIDS.universal_norm(y, "1"), MATROIDS.universal_signature()
    )


def _delcon(family: str) -> Callable[[Any], Witness | None]:
    def check(x) -> Witness | None:
        system = FAMILIES[family].system(x)
        return delcon_check(system, x, system.universal_spec())

    return check


def _arith_axioms(x: ArithMatroid) -> Witness | None:
    problem = arithmetic.axiom_failure(x)
    if problem is None:
        return None
    return Witness(identity="arith-axioms", structure=x.to_doc(), detail=problem)


IDENTITIES: dict[str, Identity] = {
    i.name: i
    for i in (
        Identity("universal-prefactor", "matroid", matroid.universal_prefactor_check),
        Identity("duality", "matroid", matroid.duality_check),
        Identity("bihomogeneity", "matroid", matroid.bihomogeneity_check),
        Identity("kung", "matroid", matroid.kung_check),
        Identity("krs", "matroid", matroid.krs_check),
        Identity("iterated", "matroid", matroid.iterated_check),
        Identity("iterated-tutte", "matroid", matroid.iterated_tutte_check),
        Identity("signflip", "matroid", matroid.signflip_check),
        Identity("exp-star", "matroid", _matroid_exp_star),
        Identity("delcon", "matroid", _delcon("matroid")),
        Identity("delta-collapse", "matroid", delta.matroid_collapse_check),
        Identity("relative-empty", "matroid", relative.empty_zero_check),
        Identity("decomposition", "matroid", relative.decomposition_check),
        Identity("sf-inclusion", "matroid", polysub.matroid_inclusion_check),
        Identity("colored-monochrome", "matroid", colored.monochrome_check),
        Identity("colored-multivariate", "matroid", colored.multivariate_check),
        Identity("arith-kung", "matroid", arithmetic.kung_collapse_check),
        Identity("dichromatic-recurrence", "graph", graph.dichromatic_recurrence_check),
        Identity("graph-matroid", "graph", graph.matroid_compatibility_check),
        Identity("chromatic-convolution", "graph", graph.chromatic_convolution_check),
        Identity("graph-delcon", "graph", _delcon("graph")),
        Identity("br-convolution", "delta", delta.br_convolution_check),
        Identity("delta-prefactor", "delta", delta.delta_prefactor_check),
        Identity("discrepancy", "delta", delta.discrepancy_check),
        Identity("bounds-minor", "delta", delta.bounds_minor_check),
        Identity("saturated-roundtrip", "delta", delta.saturated_roundtrip_check),
        Identity("delta-delcon", "delta", _delcon("delta")),
        Identity("tardos", "perspective", delta.tardos_check),
        Identity("lv-convolution", "perspective", delta.lv_convolution_check),
        Identity("matper-prefactor", "perspective", delta.matper_prefactor_check),
        Identity("rank-sum", "perspective", polysub.rank_sum_check),
        Identity("krushkal-prefactor", "dmp", delta.krushkal_prefactor_check),
        Identity("functoriality", "dmp", delta.functoriality_check),
        Identity("relative-perspective-minor", "relative", relative.perspective_minor_check),
        Identity("relative-delta", "relative", relative.delta_compatibility_check),
        Identity("pointed", "relative", relative.pointed_check),
        Identity("relative-delcon", "relative", relative.relative_delcon_check),
        Identity("sf-prefactor", "submodular", polysub.prefactor_check),
        Identity("sf-homogeneity", "submodular", polysub.sf_homogeneity_check),
        Identity("colored-delcon", "colored", _delcon("colored")),
        Identity("arith-axioms", "arithmetic", _arith_axioms),
        Identity("arith-forget", "arithmetic", arithmetic.forget_check),
        Identity("arith-convolution", "arithmetic", arithmetic.biarith_convolution_check),
        Identity("backman-lenz", "arithmetic", arithmetic.backman_lenz_check),
    )
}


# --- Counts and global checks ---

COUNTS: dict[str, Callable[[int], int]] = {
    "matroid-count": lambda k: len(matroid.matroid_classes(k)),
    "matroid-labeled-count": lambda k: len(matroid.enumerate_matroids(k)),
    "delta-count": lambda k: len(delta.enumerate_deltas(k)),
    "nonsaturated-count": lambda k: sum(not delta.is_saturated(d) for d in delta.enumerate_deltas(k)),
    "perspective-count": lambda k: len(delta.enumerate_perspectives(k)),
    "dmp-count": lambda k: len(delta.enumerate_dmps(k)),
}

KNOWN_COUNTS: dict[tuple[str, int], int] = {
    ("matroid-count", 0): 1,
    ("matroid-count", 1): 2,
    ("matroid-count", 2): 4,
    ("matroid-count", 3): 8,
    ("matroid-count", 4): 17,
    ("delta-count", 2): 15,
    ("nonsaturated-count", 2): 3,
    ("perspective-count", 1): 3,
    ("dmp-count", 1): 5,
    ("dmp-count", 2): 38,
}

NORM_SYSTEMS = ("set", "mat", "gra", "matper", "delta", "dmp", "col", "amat")


def global_check(name: str) -> Callable[[], Witness | None] | None:
    """Checks that take no structure: norm candidates and fixed relations."""
    if name.startswith("norm-") and name[5:] in NORM_SYSTEMS:
        return norm_candidate(name[5:]).verify
    if name == "ow-relation":
        return lambda: (
            None
            if polysub.universal_ow_check()
            else Witness(identity="ow-relation", structure={"type": "submodular"})
        )
    if name == "br-relations":
        return lambda: colored.br_relations_check(colored.from_norms(("r", "g", "b")))
    return None
