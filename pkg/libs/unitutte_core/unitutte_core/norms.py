"""Candidate universal norms per minors system, checked against the
Grothendieck relations."""
from __future__ import annotations

import logging
from collections.abc import Callable
from dataclasses import dataclass
from typing import Any

from unitutte_core.algebra import MonoidSig, MRPoly
from unitutte_core.arithmetic import ARITHMETIC, UV_RATIONAL, rational_norm, relation_instances
from unitutte_core.characters import grothendieck_relations, verify_norm_candidate
from unitutte_core.colored import colored_system, embedding_candidate
from unitutte_core.delta import DELTA_CLASSES, DELTAS, DMP_CLASSES, DMPS, PERSPECTIVES
from unitutte_core.errors import UnsupportedSystemError
from unitutte_core.graph import GRAPHS
from unitutte_core.matroid import MATROIDS
from unitutte_core.minors import SETS, MinorsSystem
from unitutte_core.polysub import SUBMODULAR
from unitutte_core.relative import RELATIVES
from unitutte_core.schemas import Witness

logger = logging.getLogger(__name__)

UV = MonoidSig(["u", "v"])
UVW = MonoidSig(["u", "v", "w"])
DEFAULT_PALETTE = ("r", "g", "b")


def _monos(sig: MonoidSig, table: dict[str, dict[str, int]]) -> dict[str, MRPoly]:
    return {name: MRPoly.mono(sig.monomial(**exps)) for name, exps in table.items()}


@dataclass
class NormCandidate:
    system: MinorsSystem
    sig: MonoidSig
    mapping: dict[str, Any] | Callable
    structures: list | None = None
    samples: list | None = None

    def verify(self) -> Witness | None:
        w = verify_norm_candidate(self.system, self.mapping, self.sig, self.structures, self.samples)
        logger.info("norm candidate for %s: %s", self.system.NAME, "fail" if w else "pass")
        return w


def norm_candidate(name: str, palette: tuple[str, ...] = DEFAULT_PALETTE) -> NormCandidate:
    """The monomial norm of each system, keyed by system NAME."""
    if name == "set":
        return NormCandidate(SETS, MonoidSig(["u"]), _monos(MonoidSig(["u"]), {"e": {"u": 1}}))
    if name in ("mat", "gra"):
        system = MATROIDS if name == "mat" else GRAPHS
        return NormCandidate(system, UV, _monos(UV, {"c": {"u": 1}, "l": {"v": 1}}))
    if name == "matper":
        table = {"cc": {"u": 1}, "ll": {"v": 1}, "cl": {"w": 1}}
        return NormCandidate(PERSPECTIVES, UVW, _monos(UVW, table))
    if name == "delta":
        table = {"c": {"u": 1}, "l": {"v": 1}, "n": {"w": 1}}
        return NormCandidate(DELTAS, DELTA_CLASSES, _monos(DELTA_CLASSES, table))
    if name == "dmp":
        table = {
            "ccl": {"s": 1},
            "cll": {"t": 1},
            "ccc": {"u": 1},
            "lll": {"v": 1},
            "cnl": {"w": 1},
        }
        return NormCandidate(DMPS, DMP_CLASSES, _monos(DMP_CLASSES, table))
    if name == "col":
        mapping, sig = embedding_candidate(palette)
        return NormCandidate(colored_system(tuple(sorted(set(palette)))), sig, mapping)
    if name == "amat":
        return NormCandidate(
            ARITHMETIC,
            UV_RATIONAL,
            rational_norm,
            structures=list(relation_instances().values()),
            samples=ARITHMETIC.empty_samples(),
        )
    raise UnsupportedSystemError(f"{name}: no norm candidate")


SYSTEMS: dict[str, MinorsSystem] = {
    s.NAME: s
    for s in (SETS, MATROIDS, GRAPHS, DELTAS, PERSPECTIVES, DMPS, RELATIVES, SUBMODULAR, ARITHMETIC)
}


def system_named(name: str, palette: tuple[str, ...] = DEFAULT_PALETTE) -> MinorsSystem:
    if name == "col":
        return colored_system(tuple(sorted(set(palette))))
    if name not in SYSTEMS:
        known = ", ".join(sorted([*SYSTEMS, "col"]))
        raise UnsupportedSystemError(f"unknown system {name!r}; expected one of {known}")
    return SYSTEMS[name]


def describe_monoid(system: MinorsSystem) -> str:
    """Generators and relations, or the built-in monoid when enumeration is declined."""
    try:
        return grothendieck_relations(system).render()
    except UnsupportedSystemError:
        return f"enumeration unsupported; built-in monoid {system.builtin_monoid()}"
