"""Submodular functions and polymatroids.

Tables may take negative values. Minors and direct sums use the same
formulas as matroids, so they go through :class:`RankTable`.
"""
from __future__ import annotations

import logging
import random
from collections.abc import Hashable
from dataclasses import dataclass
from typing import Any

from unitutte_core.algebra import Axis, MonoidElem, MonoidSig, MRPoly
from unitutte_core.characters import delcon_evaluate, homogeneity_check, witness
from unitutte_core.config import settings
from unitutte_core.delta import PERSPECTIVES, Perspective, universal_matper
from unitutte_core.errors import AlgebraDomainError, StructureError, check_size
from unitutte_core.matroid import (
    MATROIDS,
    RankTable,
    check_set_function,
    random_matroid,
    universal_tutte,
)
from unitutte_core.minors import COPIES, MinorsSystem
from unitutte_core.schemas import SubmodularDoc, Witness
from unitutte_core.variables import laurent, var

logger = logging.getLogger(__name__)

# x^N y^Z, of which only {1} ∪ {x^a y^b : a > 0} is reached
SF_CLASSES = MonoidSig([Axis("x"), Axis("y", signed=True)])


@dataclass(frozen=True)
class SubmodTable:
    table: RankTable
    polymatroid: bool = False

    @classmethod
    def validated(cls, n: int, rk, polymatroid: bool = False) -> SubmodTable:
        rk = tuple(int(r) for r in rk)
        check_size(n, settings.max_rank_table, "submodular table")
        check_set_function(n, rk, bounded=False, monotone=polymatroid, what="submodular function")
        return cls(RankTable(n, rk), polymatroid)

    @property
    def n(self) -> int:
        return self.table.n

    @property
    def rk(self) -> tuple[int, ...]:
        return self.table.rk

    @property
    def rank(self) -> int:
        return self.table.rank

    @property
    def r_bound(self) -> int:
        """Largest value on a single element; an r-polymatroid has r_bound <= r."""
        return max((self.rk[1 << e] for e in range(self.n)), default=0)

    def restrict(self, a: int) -> SubmodTable:
        return SubmodTable(self.table.restrict(a), self.polymatroid)

    def contract(self, a: int) -> SubmodTable:
        return SubmodTable(self.table.contract(a), self.polymatroid)

    def direct_sum(self, other: SubmodTable) -> SubmodTable:
        return SubmodTable(self.table.direct_sum(other.table), self.polymatroid and other.polymatroid)

    def to_doc(self) -> dict[str, Any]:
        doc: dict[str, Any] = {"type": "submodular", "n": self.n, "rank": list(self.rk)}
        if self.polymatroid:
            doc["polymatroid"] = True
        return doc

    @classmethod
    def from_doc(cls, doc: SubmodularDoc | dict) -> SubmodTable:
        if isinstance(doc, dict):
            doc = SubmodularDoc.model_validate(doc)
        return cls.validated(doc.n, doc.rank, doc.polymatroid)


EMPTY_SF = SubmodTable(RankTable(0, (0,)))


def single(b: int) -> SubmodTable:
    """s_b: one element of value b."""
    return SubmodTable(RankTable(1, (0, b)), b >= 0)


def from_matroid(m: RankTable) -> SubmodTable:
    """The inclusion j of matroids into polymatroids."""
    return SubmodTable(m, True)


def relation_table(a: int, b: int, c: int) -> SubmodTable:
    """(0, a, c, a+b) on {e, f}: its minors give [s_a][s_b] = [s_c][s_(a+b-c)]."""
    return SubmodTable.validated(2, (0, a, c, a + b))


def random_submodular(rng: random.Random, n: int, polymatroid: bool = False) -> SubmodTable:
    """Nonnegative combination of matroid ranks plus, unless polymatroid, a modular part."""
    total = [0] * (1 << n)
    for _ in range(rng.randint(1, 3)):
        m = random_matroid(rng, n)
        k = rng.randint(1, 3)
        total = [t + k * r for t, r in zip(total, m.rk)]
    if not polymatroid:
        weights = [rng.randint(-3, 3) for _ in range(n)]
        total = [
            t + sum(w for e, w in enumerate(weights) if a >> e & 1) for a, t in enumerate(total)
        ]
    return SubmodTable.validated(n, total, polymatroid)


class SubmodularSystem(MinorsSystem[SubmodTable]):
    NAME = "sf"
    MULTIPLICATIVE = True
    UNIVERSAL_AXES = ("x", "y")

    def ground_size(self, x: SubmodTable) -> int:
        return x.n

    def restrict(self, x: SubmodTable, mask: int) -> SubmodTable:
        return x.restrict(mask)

    def contract(self, x: SubmodTable, mask: int) -> SubmodTable:
        return x.contract(mask)

    def direct_sum(self, x: SubmodTable, y: SubmodTable) -> SubmodTable:
        return x.direct_sum(y)

    def unit(self) -> SubmodTable:
        return EMPTY_SF

    def to_doc(self, x: SubmodTable) -> dict[str, Any]:
        return x.to_doc()

    def universal_class(self, x: SubmodTable) -> dict[str, int]:
        return {"x": x.n, "y": x.rank}

    def universal_signature(self) -> MonoidSig:
        if self._universal is None:
            self._universal = MonoidSig(
                [Axis(f"{n}{c}", signed=(n == "y")) for c in COPIES for n in self.UNIVERSAL_AXES]
            )
        return self._universal

    def exact_key(self, x: SubmodTable) -> Hashable:
        return x.rk

    def random(self, rng: random.Random, n: int) -> SubmodTable:
        return random_submodular(rng, n)

    def builtin_monoid(self) -> str:
        return "x^N y^Z (restricted image: 1 and x^a y^b with a > 0)"


SUBMODULAR = SubmodularSystem()


def sf_universal_image(m: SubmodTable) -> MonoidElem:
    """x^|E| y^rk(E)."""
    return SF_CLASSES.monomial(x=m.n, y=m.rank)


def in_image(e: MonoidElem) -> bool:
    """Membership in {1} ∪ {x^a y^b : a > 0}."""
    d = e.as_dict()
    return d.get("x", 0) > 0 or not d.get("y", 0)


def check_image(e: MonoidElem) -> MonoidElem:
    if not in_image(e):
        raise AlgebraDomainError(f"{e.render()} is not the class of a submodular function")
    return e


def t_sf(m: SubmodTable) -> MRPoly:
    """sum_A x1^|A| y1^rk(A) x2^|E-A| y2^rk(M/A)."""
    check_size(m.n, settings.max_tutte, "submodular character")
    return delcon_evaluate(SUBMODULAR, m, SUBMODULAR.universal_spec())


def sf_reduced(m: SubmodTable) -> MRPoly:
    """sum_A x^|A| y^rk(A)."""
    terms: dict = {}
    for a in range(1 << m.n):
        mono = SF_CLASSES.monomial(x=a.bit_count(), y=m.rk[a])
        terms[mono] = terms.get(mono, 0) + 1
    return MRPoly(SF_CLASSES, terms)


# --- Identities ---

def prefactor_check(m: SubmodTable) -> Witness | None:
    """T^SF = x2^|E| y2^rk(E) S(x1/x2, y1/y2) with S the reduced sum."""
    sig = laurent(SUBMODULAR.universal_signature())
    lhs = t_sf(m).specialize({}, sig)
    x1, y1, x2, y2 = (var(sig, n) for n in ("x1", "y1", "x2", "y2"))
    rhs = sf_reduced(m).specialize({"x": x1 * x2 ** -1, "y": y1 * y2 ** -1}, sig)
    rhs = rhs * x2 ** m.n * y2 ** m.rank
    if lhs != rhs:
        return witness("sf-prefactor", SUBMODULAR, m, lhs, rhs)
    return None


def sf_homogeneity_check(m: SubmodTable) -> Witness | None:
    """x-degree |E| and y-degree rk(E) on every monomial; no negative y for polymatroids."""
    w = homogeneity_check(SUBMODULAR, m)
    if w is not None or not m.polymatroid:
        return w
    for mono in t_sf(m).monomials():
        if any(v < 0 for v in mono.as_dict().values()):
            return witness("polymatroid-sign", SUBMODULAR, m, mono.render(), "nonnegative")
    return None


def matroid_inclusion_check(m: RankTable) -> Witness | None:
    """t_sf(j(M)) = T^Mat(M) under u_i -> x_i y_i, v_i -> x_i."""
    sig = SUBMODULAR.universal_signature()
    image = {}
    for c in COPIES:
        image[f"u{c}"] = var(sig, f"x{c}") * var(sig, f"y{c}")
        image[f"v{c}"] = var(sig, f"x{c}")
    want = universal_tutte(m).specialize(image, sig)
    got = t_sf(from_matroid(m))
    if got != want:
        return witness("sf-matroid-inclusion", MATROIDS, m, got, want)
    return None


def ow_norm_relation_check(n0, n1, n2) -> bool:
    """N(s_0) N(s_2) = N(s_1)^2."""
    return n0 * n2 == n1 * n1


def universal_ow_check() -> bool:
    n0, n1, n2 = (MRPoly.mono(sf_universal_image(single(b))) for b in range(3))
    return ow_norm_relation_check(n0, n1, n2)


def rank_sum(p: Perspective) -> SubmodTable:
    """rk_N = rk_M + rk_M', a 2-polymatroid."""
    table = tuple(a + b for a, b in zip(p.M.rk, p.Mprime.rk))
    return SubmodTable.validated(p.n, table, polymatroid=True)


def rank_sum_check(p: Perspective) -> Witness | None:
    """The rank sum is a 2-polymatroid and T^MatPer maps onto its T^SF under
    u -> x y^2, v -> x, w -> x y."""
    try:
        n = rank_sum(p)
    except StructureError as exc:
        return witness("rank-sum-valid", PERSPECTIVES, p, detail=str(exc))
    if n.r_bound > 2:
        return witness("rank-sum-bound", PERSPECTIVES, p, n.r_bound, 2)
    sig = SUBMODULAR.universal_signature()
    image = {}
    for c in COPIES:
        x, y = var(sig, f"x{c}"), var(sig, f"y{c}")
        image |= {f"u{c}": x * y * y, f"v{c}": x, f"w{c}": x * y}
    want = universal_matper(p).specialize(image, sig)
    got = t_sf(n)
    if got != want:
        return witness("rank-sum-character", PERSPECTIVES, p, got, want)
    return None
