"""Colored matroids, the colored Tutte polynomial and the Bollobás–Riordan
relations for recurrences with color-dependent coefficients."""
from __future__ import annotations

import itertools
import logging
import random
from collections.abc import Hashable, Mapping, Sequence
from dataclasses import dataclass
from functools import lru_cache
from typing import Any

from sympy.polys.domains import ZZ
from sympy.polys.domains.domain import Domain

from unitutte_core.algebra import MonoidSig, MRPoly
from unitutte_core.bits import elements
from unitutte_core.characters import (
    NormValue,
    as_poly,
    delcon_evaluate,
    recurrence_welldef_check,
    witness,
)
from unitutte_core.config import settings
from unitutte_core.errors import InvariantViolation, StructureError, check_size
from unitutte_core.matroid import (
    COLOOP,
    LOOP,
    U12,
    RankTable,
    matroid_classes,
    multivariate_tutte,
    random_matroid,
    tutte,
)
from unitutte_core.minors import MinorsSystem
from unitutte_core.schemas import ColoredDoc, Witness
from unitutte_core.variables import XY, indexed, var

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class ColoredMatroid:
    matroid: RankTable
    colors: tuple[str, ...]

    def __post_init__(self):
        if len(self.colors) != self.matroid.n:
            raise StructureError(f"{len(self.colors)} colors for {self.matroid.n} elements")

    @property
    def n(self) -> int:
        return self.matroid.n

    @property
    def palette(self) -> tuple[str, ...]:
        return tuple(sorted(set(self.colors)))

    def restrict(self, a: int) -> ColoredMatroid:
        return ColoredMatroid(self.matroid.restrict(a), tuple(self.colors[i] for i in elements(a)))

    def contract(self, a: int) -> ColoredMatroid:
        kept = self.matroid.ground & ~a
        return ColoredMatroid(self.matroid.contract(a), tuple(self.colors[i] for i in elements(kept)))

    def direct_sum(self, other: ColoredMatroid) -> ColoredMatroid:
        return ColoredMatroid(self.matroid.direct_sum(other.matroid), self.colors + other.colors)

    def to_doc(self) -> dict[str, Any]:
        return {"type": "colored", "matroid": self.matroid.to_doc(), "colors": list(self.colors)}

    @classmethod
    def from_doc(cls, doc: ColoredDoc | dict) -> ColoredMatroid:
        if isinstance(doc, dict):
            doc = ColoredDoc.model_validate(doc)
        return cls(RankTable.from_doc(doc.matroid), tuple(doc.colors))


def color_axis(color: str) -> str:
    return f"a_{color}"


class ColoredSystem(MinorsSystem[ColoredMatroid]):
    """Colored matroids over a fixed finite palette."""

    NAME = "col"
    MULTIPLICATIVE = True

    def __init__(self, palette: Sequence[str]):
        self.palette = tuple(sorted(set(palette)))
        self.UNIVERSAL_AXES = ("u", "v", *(color_axis(c) for c in self.palette))
        self._universal = None

    def ground_size(self, x: ColoredMatroid) -> int:
        return x.n

    def restrict(self, x: ColoredMatroid, mask: int) -> ColoredMatroid:
        return x.restrict(mask)

    def contract(self, x: ColoredMatroid, mask: int) -> ColoredMatroid:
        return x.contract(mask)

    def direct_sum(self, x: ColoredMatroid, y: ColoredMatroid) -> ColoredMatroid:
        return x.direct_sum(y)

    def unit(self) -> ColoredMatroid:
        return ColoredMatroid(RankTable(0, (0,)), ())

    def to_doc(self, x: ColoredMatroid) -> dict[str, Any]:
        return x.to_doc()

    def universal_class(self, x: ColoredMatroid) -> dict[str, int]:
        out = {"u": x.matroid.rank, "v": x.matroid.corank}
        for c in x.colors:
            out[color_axis(c)] = out.get(color_axis(c), 0) + 1
        return out

    def exact_key(self, x: ColoredMatroid) -> Hashable:
        return (x.matroid.rk, x.colors)

    def enumerate(self, k: int) -> list[ColoredMatroid]:
        """Every coloring of every matroid class; colorings are not reduced."""
        return [
            ColoredMatroid(m, colors)
            for m in matroid_classes(k)
            for colors in itertools.product(self.palette, repeat=k)
        ]

    def generator_name(self, x: ColoredMatroid) -> str:
        return ("c_" if x.matroid.rank else "l_") + x.colors[0]

    def random(self, rng: random.Random, n: int) -> ColoredMatroid:
        return ColoredMatroid(random_matroid(rng, n), tuple(rng.choice(self.palette) for _ in range(n)))


@lru_cache(maxsize=None)
def colored_system(palette: tuple[str, ...]) -> ColoredSystem:
    return ColoredSystem(palette)


def system_for(x: ColoredMatroid, palette: Sequence[str] = ()) -> ColoredSystem:
    return colored_system(tuple(sorted(set(x.colors) | set(palette))))


def colored_signature(palette: Sequence[str]) -> MonoidSig:
    return MonoidSig(["x", "y", *(color_axis(c) for c in sorted(set(palette)))])


def coloop(color: str) -> ColoredMatroid:
    return ColoredMatroid(COLOOP, (color,))


def loop(color: str) -> ColoredMatroid:
    return ColoredMatroid(LOOP, (color,))


# --- Colored Tutte polynomial ---

def universal_colored(x: ColoredMatroid, palette: Sequence[str] = ()) -> MRPoly:
    check_size(x.n, settings.max_tutte, "colored tutte")
    system = system_for(x, palette)
    return delcon_evaluate(system, x, system.universal_spec())


def colored_tutte(x: ColoredMatroid, universal: bool = False, palette: Sequence[str] = ()) -> MRPoly:
    """sum_A prod_{e in A} a_λ(e) (x-1)^(rk M - rk A) (y-1)^(|A| - rk A)."""
    u = universal_colored(x, palette)
    if universal:
        return u
    system = system_for(x, palette)
    sig = colored_signature(system.palette)
    xv, yv = var(sig, "x"), var(sig, "y")
    image: dict[str, Any] = {"u1": 1, "v1": yv - 1, "u2": xv - 1, "v2": 1}
    for c in system.palette:
        image[f"{color_axis(c)}1"] = var(sig, color_axis(c))
        image[f"{color_axis(c)}2"] = 1
    return u.specialize(image, sig)


def monochrome_check(m: RankTable) -> Witness | None:
    """One color and a -> 1 gives the Tutte polynomial."""
    x = ColoredMatroid(m, ("r",) * m.n)
    got = colored_tutte(x).specialize({color_axis("r"): 1}, XY)
    want = tutte(m)
    if got != want:
        return witness("colored-monochrome", system_for(x), x, got, want)
    return None


def multivariate_check(m: RankTable) -> Witness | None:
    """One color per element turns the colored polynomial into the multivariate one."""
    names = indexed("alpha", m.n)
    x = ColoredMatroid(m, tuple(names))
    want = multivariate_tutte(m)
    got = colored_tutte(x).specialize({color_axis(n): var(want.sig, n) for n in names}, want.sig)
    if got != want:
        return witness("colored-multivariate", system_for(x), x, got, want)
    return None


# --- Grothendieck ---

def embedding_candidate(palette: Sequence[str]) -> tuple[dict[str, MRPoly], MonoidSig]:
    """c_λ -> u a_λ and l_λ -> v a_λ."""
    sig = MonoidSig(["u", "v", *(color_axis(c) for c in sorted(set(palette)))])
    mapping = {}
    for c in sorted(set(palette)):
        a = var(sig, color_axis(c))
        mapping[f"c_{c}"] = var(sig, "u") * a
        mapping[f"l_{c}"] = var(sig, "v") * a
    return mapping, sig


# --- Bollobás–Riordan relations ---

@dataclass
class BRCoefficients:
    """Values u_{λ,i}, v_{λ,i} (i = 1, 2) of a colored recurrence."""

    sig: MonoidSig
    u1: Mapping[str, NormValue]
    v1: Mapping[str, NormValue]
    u2: Mapping[str, NormValue]
    v2: Mapping[str, NormValue]
    ring: Domain = ZZ

    @property
    def palette(self) -> tuple[str, ...]:
        return tuple(sorted(self.u1))

    def get(self, table: Mapping[str, NormValue], color: str) -> MRPoly:
        return as_poly(table[color], self.sig, self.ring)

    def c1(self, x: ColoredMatroid) -> MRPoly:
        return self.get(self.u1 if x.matroid.rank else self.v1, x.colors[0])

    def c2(self, x: ColoredMatroid) -> MRPoly:
        return self.get(self.u2 if x.matroid.rank else self.v2, x.colors[0])

    def diff(self, level: int, lam: str, mu: str) -> MRPoly:
        u, v = (self.u1, self.v1) if level == 1 else (self.u2, self.v2)
        return self.get(u, lam) * self.get(v, mu) - self.get(u, mu) * self.get(v, lam)


def from_norms(palette: Sequence[str]) -> BRCoefficients:
    """u_{λ,i} = U_i a_λ, v_{λ,i} = V_i a_λ over symbols U1, V1, U2, V2, a_λ."""
    colors = sorted(set(palette))
    sig = MonoidSig(["U1", "V1", "U2", "V2", *(color_axis(c) for c in colors)])
    a = {c: var(sig, color_axis(c)) for c in colors}
    return BRCoefficients(
        sig,
        {c: var(sig, "U1") * a[c] for c in colors},
        {c: var(sig, "V1") * a[c] for c in colors},
        {c: var(sig, "U2") * a[c] for c in colors},
        {c: var(sig, "V2") * a[c] for c in colors},
    )


def br_criterion(co: BRCoefficients) -> str | None:
    """Name of the first failing relation among the three families, or None.

    first:  u_λ1 v_μ1 - u_μ1 v_λ1 = u_λ2 v_μ2 - u_μ2 v_λ2
    second: (u_λ1 v_μ1 - u_μ1 v_λ1)(v_ν1 + v_ν2) = 0
    third:  (u_λ2 v_μ2 - u_μ2 v_λ2)(u_ν1 + u_ν2) = 0
    """
    colors = co.palette
    for lam, mu in itertools.combinations(colors, 2):
        if co.diff(1, lam, mu) != co.diff(2, lam, mu):
            return f"first({lam},{mu})"
    for lam, mu in itertools.combinations(colors, 2):
        d1, d2 = co.diff(1, lam, mu), co.diff(2, lam, mu)
        for nu in colors:
            if not (d1 * (co.get(co.v1, nu) + co.get(co.v2, nu))).is_zero:
                return f"second({lam},{mu},{nu})"
            if not (d2 * (co.get(co.u1, nu) + co.get(co.u2, nu))).is_zero:
                return f"third({lam},{mu},{nu})"
    return None


def br_relations_check(co: BRCoefficients, max_size: int = 3) -> Witness | None:
    """Well-definedness of the colored recurrence, checked twice.

    The generic recurrence checker runs on all colored matroids up to
    ``max_size`` and the explicit relations run on the coefficients; the two
    must agree.
    """
    system = colored_system(co.palette)
    w = recurrence_welldef_check(system, co.c1, co.c2, co.sig, max_size, ring=co.ring)
    failed = br_criterion(co)
    if max_size >= 3 and (w is None) != (failed is None):
        raise InvariantViolation(
            f"recurrence checker and relations disagree: witness={w is not None}, relation={failed}"
        )
    if w is not None and failed is not None:
        w.detail = failed
    return w


def u12(lam: str, mu: str) -> ColoredMatroid:
    return ColoredMatroid(U12, (lam, mu))


def u13(colors: tuple[str, str, str]) -> ColoredMatroid:
    return ColoredMatroid(RankTable.uniform(1, 3), colors)
