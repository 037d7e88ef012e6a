"""Relative matroids: a matroid on E ⊔ E0 whose minors only touch E.

The structures on the empty set are matroids on the zero set E0. The twist
sends one of them to the product of formal variables, one per isomorphism
class of its connected components. These variables are registered per
evaluation and named C0, C1, ... in canonical-form order.
"""
from __future__ import annotations

import itertools
import logging
import random
from collections.abc import Hashable
from dataclasses import dataclass
from typing import Any

from unitutte_core.algebra import MonoidSig, MRPoly
from unitutte_core.bits import compress, elements, expand, full, mask_of, popcount
from unitutte_core.characters import CharacterSpec, delcon_evaluate, tutte_character, witness
from unitutte_core.config import settings
from unitutte_core.delta import (
    FeasibleFamily,
    Perspective,
    las_vergnas,
    perspective_to_delta,
)
from unitutte_core.errors import AlgebraDomainError, StructureError, check_size
from unitutte_core.matroid import (
    RankTable,
    canonical_form,
    connected_components,
    is_isomorphic,
    random_matroid,
    tutte,
)
from unitutte_core.minors import COPIES, MinorsSystem
from unitutte_core.schemas import RelativeDoc, Witness
from unitutte_core.variables import XY, XYZ, var

logger = logging.getLogger(__name__)

MINOR_MODES = ("restrict", "contract", "delete")


@dataclass(frozen=True)
class RelMatroid:
    matroid: RankTable
    zero: int

    def __post_init__(self):
        if self.zero & ~self.matroid.ground:
            raise StructureError(f"zero set outside 0..{self.matroid.n - 1}")

    @property
    def e_mask(self) -> int:
        return self.matroid.ground & ~self.zero

    @property
    def n(self) -> int:
        """|E|; E0 is not part of the ground set."""
        return popcount(self.e_mask)

    def zero_part(self) -> RankTable:
        """The matroid on E0 left after deleting E."""
        return self.matroid.restrict(self.zero)

    def to_doc(self) -> dict[str, Any]:
        return {"type": "relative", "matroid": self.matroid.to_doc(), "zero_set": elements(self.zero)}

    @classmethod
    def from_doc(cls, doc: RelativeDoc | dict) -> RelMatroid:
        if isinstance(doc, dict):
            doc = RelativeDoc.model_validate(doc)
        m = RankTable.from_doc(doc.matroid)
        check_size(m.n, settings.max_relative, "relative matroid")
        return cls(m, mask_of(doc.zero_set))


def rel_minor(m: RelMatroid, a: int, mode: str) -> RelMatroid:
    """Minor along A ⊆ E, with A given in E ⊔ E0 labels."""
    if a & m.zero:
        raise AlgebraDomainError("minors of a relative matroid never touch the zero set")
    if a & ~m.matroid.ground:
        raise AlgebraDomainError(f"subset outside a {m.matroid.n}-element ground set")
    if mode == "restrict":
        kept = a | m.zero
        return RelMatroid(m.matroid.restrict(kept), compress(m.zero, kept))
    if mode == "contract":
        kept = m.matroid.ground & ~a
        return RelMatroid(m.matroid.contract(a), compress(m.zero, kept))
    if mode == "delete":
        return rel_minor(m, m.e_mask & ~a, "restrict")
    raise ValueError(f"unknown minor mode {mode!r}; expected one of {MINOR_MODES}")


def to_perspective(m: RelMatroid) -> Perspective:
    """(M∖E0, M/E0) on E."""
    e = m.e_mask
    return Perspective(m.matroid.restrict(e), m.matroid.contract(m.zero))


def to_delta(m: RelMatroid) -> FeasibleFamily:
    """A ⊆ E is feasible iff A ⊔ A0 is a basis for some A0 ⊆ E0."""
    e = m.e_mask
    bases = set(m.matroid.bases())
    feasible = []
    for a in range(1 << m.n):
        big = expand(a, e)
        sub = m.zero
        while True:
            if big | sub in bases:
                feasible.append(a)
                break
            if not sub:
                break
            sub = (sub - 1) & m.zero
    return FeasibleFamily(m.n, tuple(feasible))


# --- Connected components and R0 ---

def components(m: RankTable) -> list[RankTable]:
    """Canonical forms of the connected components, sorted; none for the empty matroid."""
    parts = [canonical_form(m.restrict(mask_of(c))) for c in connected_components(m)]
    return sorted(parts, key=lambda c: (c.n, c.rk))


def decomposition_check(m: RankTable) -> Witness | None:
    """The direct sum of the components is isomorphic to the matroid."""
    total = RankTable(0, (0,))
    for c in components(m):
        total = total.direct_sum(c)
    if not is_isomorphic(total, m):
        return witness("connected-decomposition", RELATIVES, RelMatroid(m, m.ground), str(total.rk), str(m.rk))
    return None


@dataclass
class ComponentRegistry:
    """Formal variables of R0 seen in one evaluation."""

    forms: list[RankTable]

    @classmethod
    def collect(cls, m: RelMatroid) -> ComponentRegistry:
        seen: dict[tuple, RankTable] = {}
        for a in range(1 << m.n):
            part = RELATIVES.minors(m, a, a).zero_part()
            for c in components(part):
                seen.setdefault((c.n, c.rk), c)
        return cls([seen[k] for k in sorted(seen)])

    @property
    def names(self) -> list[str]:
        return [f"C{i}" for i in range(len(self.forms))]

    def name_of(self, c: RankTable) -> str:
        return f"C{self.forms.index(c)}"

    def legend(self) -> dict[str, Any]:
        return {name: c.to_doc() for name, c in zip(self.names, self.forms)}


class RelativeSystem(MinorsSystem[RelMatroid]):
    NAME = "rel"
    MULTIPLICATIVE = True
    UNIVERSAL_AXES = ("u", "v", "w")

    def ground_size(self, x: RelMatroid) -> int:
        return x.n

    def restrict(self, x: RelMatroid, mask: int) -> RelMatroid:
        return rel_minor(x, expand(mask, x.e_mask), "restrict")

    def contract(self, x: RelMatroid, mask: int) -> RelMatroid:
        return rel_minor(x, expand(mask, x.e_mask), "contract")

    def direct_sum(self, x: RelMatroid, y: RelMatroid) -> RelMatroid:
        return RelMatroid(x.matroid.direct_sum(y.matroid), x.zero | (y.zero << x.matroid.n))

    def unit(self) -> RelMatroid:
        return RelMatroid(RankTable(0, (0,)), 0)

    def to_doc(self, x: RelMatroid) -> dict[str, Any]:
        return x.to_doc()

    def universal_class(self, x: RelMatroid) -> dict[str, int]:
        p = to_perspective(x)
        return {"u": p.Mprime.rank, "v": p.M.corank, "w": p.M.rank - p.Mprime.rank}

    def exact_key(self, x: RelMatroid) -> Hashable:
        return relative_key(x)

    def empty_samples(self) -> list[RelMatroid]:
        return [RelMatroid(RankTable.uniform(r, k), full(k)) for k in range(3) for r in range(k + 1)]

    def random(self, rng: random.Random, n: int) -> RelMatroid:
        return random_relative(rng, n)

    def builtin_monoid(self) -> str:
        return "u^N v^N w^N tensor R0, R0 free on connected matroids (one class per iso type)"

    def character_spec(self, x: RelMatroid) -> tuple[CharacterSpec, ComponentRegistry]:
        """Universal spec over u1, v1, w1, C0.., u2, v2, w2 for the minors of ``x``."""
        reg = ComponentRegistry.collect(x)
        axes = [f"{n}{COPIES[0]}" for n in self.UNIVERSAL_AXES]
        axes += reg.names
        axes += [f"{n}{COPIES[1]}" for n in self.UNIVERSAL_AXES]
        sig = MonoidSig(axes)

        def norm(copy: str):
            return lambda y: sig.raw({f"{k}{copy}": e for k, e in self.universal_class(y).items()})

        def twist(y: RelMatroid):
            exps: dict[str, int] = {}
            for c in components(y.zero_part()):
                name = reg.name_of(c)
                exps[name] = exps.get(name, 0) + 1
            return sig.raw(exps)

        return CharacterSpec(sig=sig, norm1=norm(COPIES[0]), norm2=norm(COPIES[1]), twist=twist), reg


RELATIVES = RelativeSystem()


def relative_key(m: RelMatroid) -> tuple:
    """Rank table with E kept in place and E0 relabeled to its smallest form."""
    check_size(popcount(m.zero), settings.max_canonical, "relative canonical form")
    zs = elements(m.zero)
    best = None
    for perm in itertools.permutations(zs):
        image = list(range(m.matroid.n))
        for src, dst in zip(zs, perm):
            image[src] = dst
        rk = m.matroid.relabel(tuple(image)).rk
        if best is None or rk < best:
            best = rk
    return (m.zero, best)


def random_relative(rng: random.Random, n: int) -> RelMatroid:
    k = rng.randint(0, 2)
    m = random_matroid(rng, n + k)
    zero = 0
    for e in rng.sample(range(n + k), k):
        zero |= 1 << e
    return RelMatroid(m, zero)


# --- Relative Tutte polynomial ---

def universal_relative(m: RelMatroid) -> tuple[MRPoly, dict[str, Any]]:
    check_size(m.matroid.n, settings.max_relative, "relative tutte")
    spec, reg = RELATIVES.character_spec(m)
    return delcon_evaluate(RELATIVES, m, spec), reg.legend()


def relative_tutte(m: RelMatroid, universal: bool = False) -> tuple[MRPoly, dict[str, Any]]:
    """sum_A τ(M/A|E0) (x-1)^(rk(E⊔E0)-rk(A⊔E0)) (y-1)^(|A|-rk A) z^(rk E + rk(A⊔E0) - rk A - rk(E⊔E0)).

    Returns the polynomial and the legend of its C-variables.
    """
    u, legend = universal_relative(m)
    if universal:
        return u, legend
    sig = XYZ.extended(legend)
    x, y, z = (var(sig, n) for n in "xyz")
    return u.specialize({"u1": 1, "v1": y - 1, "w1": 1, "u2": x - 1, "v2": 1, "w2": z}, sig), legend


def forget_components(p: MRPoly) -> MRPoly:
    """The ring map sending every C-variable to 1, onto x, y, z."""
    return p.specialize({n: 1 for n in p.sig.names if n.startswith("C")}, XYZ)


def pointed_tutte(m: RelMatroid) -> MRPoly:
    """sum_A (x-1)^(rk(E⊔E0)-rk(A⊔E0)) (y-1)^(|A|-rk A) z^(rk(A⊔E0)-rk A)."""
    x, y, z = (var(XYZ, n) for n in "xyz")
    rk, e = m.matroid.rk, m.e_mask
    top = m.matroid.rank
    total = MRPoly.zero(XYZ)
    for a in range(1 << m.n):
        big = expand(a, e)
        total = total + (
            (x - 1) ** (top - rk[big | m.zero])
            * (y - 1) ** (popcount(big) - rk[big])
            * z ** (rk[big | m.zero] - rk[big])
        )
    return total


# --- Identities ---

def perspective_minor_check(m: RelMatroid) -> Witness | None:
    """to_perspective commutes with restriction and contraction."""
    p = to_perspective(m)
    for a in range(1 << m.n):
        if to_perspective(RELATIVES.restrict(m, a)) != p.restrict(a):
            return witness("relative-perspective-restrict", RELATIVES, m, subsets=[a])
        if to_perspective(RELATIVES.contract(m, a)) != p.contract(a):
            return witness("relative-perspective-contract", RELATIVES, m, subsets=[a])
    return None


def delta_compatibility_check(m: RelMatroid) -> Witness | None:
    """to_delta agrees with perspective_to_delta ∘ to_perspective."""
    got, want = to_delta(m), perspective_to_delta(to_perspective(m))
    if got != want:
        return witness("relative-delta", RELATIVES, m, str(got.feasible), str(want.feasible))
    return None


def pointed_check(m: RelMatroid) -> Witness | None:
    """C -> 1 and a factor z^(rk(E⊔E0) - rk E) give the pointed polynomial;
    without the C-variables the polynomial is Las Vergnas's of the perspective."""
    rel, _ = relative_tutte(m)
    flat = forget_components(rel)
    lv = las_vergnas(to_perspective(m))
    if flat != lv:
        return witness("relative-las-vergnas", RELATIVES, m, flat, lv)
    shift = m.matroid.rank - m.matroid.rk[m.e_mask]
    lhs = flat * var(XYZ, "z") ** shift
    rhs = pointed_tutte(m)
    if lhs != rhs:
        return witness("relative-pointed", RELATIVES, m, lhs, rhs)
    return None


def empty_zero_check(m: RankTable) -> Witness | None:
    """With E0 empty the relative polynomial is 𝔗_M with no z."""
    rel, legend = relative_tutte(RelMatroid(m, 0))
    want = tutte(m)
    if legend or rel.specialize({}, XY) != want:
        return witness("relative-empty-zero", RELATIVES, RelMatroid(m, 0), rel, want)
    return None


def relative_delcon_check(m: RelMatroid) -> Witness | None:
    """Deletion-contraction agrees with the subset expansion."""
    spec, _ = RELATIVES.character_spec(m)
    got, want = delcon_evaluate(RELATIVES, m, spec), tutte_character(RELATIVES, m, spec)
    if got != want:
        return witness("relative-delcon", RELATIVES, m, got, want)
    return None

