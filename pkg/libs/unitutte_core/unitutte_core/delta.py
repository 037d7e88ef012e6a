"""Delta-matroids, matroid perspectives and delta-matroid perspectives.

Half-integer exponents (powers of σ) are stored doubled on ``half`` axes.
"""
from __future__ import annotations

import itertools
import logging
import random
from collections.abc import Hashable, Iterable
from dataclasses import dataclass
from functools import lru_cache
from typing import Any

import numpy as np
from sympy.polys.domains import ZZ_I

from unitutte_core.algebra import IMAG, Axis, MonoidSig, MRPoly, Rule
from unitutte_core.bits import compress, elements, full, mask_of, popcount
from unitutte_core.characters import delcon_evaluate, witness
from unitutte_core.config import settings
from unitutte_core.errors import AlgebraDomainError, SizeLimitError, StructureError, check_size
from unitutte_core.matroid import (
    COLOOP,
    LOOP,
    RankTable,
    corank_nullity,
    enumerate_matroids,
    random_matroid,
)
from unitutte_core.minors import MinorsSystem
from unitutte_core.schemas import DeltaDoc, DMPDoc, PerspectiveDoc, Witness
from unitutte_core.variables import ABCDEF, XYZ, laurent, ratio, var

logger = logging.getLogger(__name__)

ENUMERATION_CAP = 4

# p = x - 1 and q = y - 1, both in half-integer powers
X1, Y1 = "p", "q"
BR = MonoidSig([Axis(X1, half=True), Axis(Y1, half=True)])
BR_ABCD = MonoidSig([Axis(n, half=True) for n in "abcd"])
KRUSHKAL = MonoidSig([Axis("x"), Axis("y"), Axis("a", half=True), Axis("b", half=True)])
DMP_CLASSES = MonoidSig(["s", "t", "u", "v", "w"], [Rule("w", ("s", "t"))])
DELTA_CLASSES = MonoidSig(["u", "v", "w"], [Rule("w", ("u", "v"))])


def unit_of(sig: MonoidSig, name: str, power: int = 1, coeff=1, ring=None) -> MRPoly:
    """name^power with a whole-unit exponent, also on half axes."""
    m = sig.monomial(**{name: power})
    return MRPoly.mono(m, coeff, ring) if ring is not None else MRPoly.mono(m, coeff)


def stored(sig: MonoidSig, exps: dict[str, int]) -> MRPoly:
    """Monomial from stored-unit exponents."""
    return MRPoly.mono(sig.raw(exps))


def half_of(sig: MonoidSig, names: Iterable[str], coeff=1, ring=ZZ_I) -> MRPoly:
    """coeff * prod name^(1/2)."""
    return MRPoly.mono(sig.raw({n: 1 for n in names}), coeff, ring)


# --- Delta-matroids ---

def _remove(f: int, e: int) -> int:
    return f & ~(1 << e)


@dataclass(frozen=True)
class FeasibleFamily:
    """A delta-matroid on {0..n-1} as its sorted feasible bitmasks."""

    n: int
    feasible: tuple[int, ...]

    @classmethod
    def validated(cls, n: int, feasible: Iterable[int]) -> FeasibleFamily:
        check_size(n, settings.max_rank_table, "delta-matroid")
        fam = tuple(sorted(set(feasible)))
        if not fam:
            raise StructureError("a delta-matroid has at least one feasible set")
        if any(f >> n for f in fam):
            raise StructureError(f"feasible set outside 0..{n - 1}")
        d = cls(n, fam)
        bad = d.exchange_failure()
        if bad is not None:
            raise StructureError(
                f"symmetric exchange fails for feasible sets {bad[0]}, {bad[1]} at element {bad[2]}"
            )
        return d

    def exchange_failure(self) -> tuple[int, int, int] | None:
        fam = set(self.feasible)
        for a in self.feasible:
            for b in self.feasible:
                diff = a ^ b
                for x in elements(diff):
                    if not any(a ^ ((1 << x) | (1 << y)) in fam for y in elements(diff)):
                        return a, b, x
        return None

    @property
    def ground(self) -> int:
        return full(self.n)

    def is_coloop(self, e: int) -> bool:
        return all(f >> e & 1 for f in self.feasible)

    def is_loop(self, e: int) -> bool:
        return not any(f >> e & 1 for f in self.feasible)

    # --- Minors, element by element ---

    def _delete_one(self, fam: list[int], e: int) -> list[int]:
        if all(f >> e & 1 for f in fam):
            return [_remove(f, e) for f in fam]
        return [f for f in fam if not f >> e & 1]

    def _contract_one(self, fam: list[int], e: int) -> list[int]:
        if not any(f >> e & 1 for f in fam):
            return list(fam)
        return [_remove(f, e) for f in fam if f >> e & 1]

    def _minor(self, deleted: int, contracted: int) -> FeasibleFamily:
        if (deleted | contracted) & ~self.ground:
            raise AlgebraDomainError(f"subset outside a {self.n}-element ground set")
        fam = list(self.feasible)
        for e in elements(deleted):
            fam = self._delete_one(fam, e)
        for e in elements(contracted):
            fam = self._contract_one(fam, e)
        kept = self.ground & ~(deleted | contracted)
        return FeasibleFamily(popcount(kept), tuple(sorted({compress(f, kept) for f in fam})))

    def restrict(self, a: int) -> FeasibleFamily:
        return self._minor(self.ground & ~a, 0)

    def contract(self, a: int) -> FeasibleFamily:
        return self._minor(0, a)

    def delete(self, a: int) -> FeasibleFamily:
        return self._minor(a, 0)

    def direct_sum(self, other: FeasibleFamily) -> FeasibleFamily:
        return FeasibleFamily(
            self.n + other.n,
            tuple(sorted(f | (g << self.n) for f in self.feasible for g in other.feasible)),
        )

    def twist(self, a: int) -> FeasibleFamily:
        """D △ A."""
        return FeasibleFamily(self.n, tuple(sorted(f ^ a for f in self.feasible)))

    def relabel(self, perm: tuple[int, ...]) -> FeasibleFamily:
        return FeasibleFamily(
            self.n, tuple(sorted(sum(1 << perm[i] for i in elements(f)) for f in self.feasible))
        )

    # --- Upper and lower matroids ---

    def _matroid_of(self, size: int) -> RankTable:
        bases = [f for f in self.feasible if popcount(f) == size]
        return RankTable(self.n, tuple(max(popcount(a & b) for b in bases) for a in range(1 << self.n)))

    @property
    def upper(self) -> RankTable:
        return self._matroid_of(max(popcount(f) for f in self.feasible))

    @property
    def lower(self) -> RankTable:
        return self._matroid_of(min(popcount(f) for f in self.feasible))

    @property
    def sigma2(self) -> int:
        """2σ = rk(D_max) + rk(D_min)."""
        return max(popcount(f) for f in self.feasible) + min(popcount(f) for f in self.feasible)

    def is_saturated(self) -> bool:
        fam = set(self.feasible)
        for x in self.feasible:
            for z in self.feasible:
                if x & ~z or x == z:
                    continue
                gap = z & ~x
                sub = gap
                while sub:
                    if x | sub not in fam:
                        return False
                    sub = (sub - 1) & gap
        return True

    def to_doc(self) -> dict[str, Any]:
        return {"type": "delta", "n": self.n, "feasible": [elements(f) for f in self.feasible]}

    @classmethod
    def from_doc(cls, doc: DeltaDoc | dict) -> FeasibleFamily:
        if isinstance(doc, dict):
            doc = DeltaDoc.model_validate(doc)
        return cls.validated(doc.n, (mask_of(f) for f in doc.feasible))


def matroid_as_delta(m: RankTable) -> FeasibleFamily:
    return FeasibleFamily(m.n, tuple(m.bases()))


N_ELEMENT = FeasibleFamily(1, (0, 1))
C_ELEMENT = FeasibleFamily(1, (1,))
L_ELEMENT = FeasibleFamily(1, (0,))
EMPTY_DELTA = FeasibleFamily(0, (0,))


def upper_lower(d: FeasibleFamily) -> tuple[RankTable, RankTable, int]:
    return d.upper, d.lower, d.sigma2


def is_saturated(d: FeasibleFamily) -> bool:
    return d.is_saturated()


def _check_enum(k: int) -> None:
    if k > ENUMERATION_CAP:
        raise SizeLimitError(f"delta enumeration: size {k} exceeds cap {ENUMERATION_CAP}")


@lru_cache(maxsize=None)
def _labeled_deltas(k: int) -> tuple[FeasibleFamily, ...]:
    out = []
    for fam in range(1, 1 << (1 << k)):
        d = FeasibleFamily(k, tuple(elements(fam)))
        if d.exchange_failure() is None:
            out.append(d)
    return tuple(out)


def enumerate_deltas(k: int) -> list[FeasibleFamily]:
    """Every delta-matroid on {0..k-1}, labeled."""
    _check_enum(k)
    out = list(_labeled_deltas(k))
    logger.debug("delta-matroids on %d elements: %d", k, len(out))
    return out


def delta_canonical(d: FeasibleFamily) -> tuple[int, ...]:
    check_size(d.n, settings.max_canonical, "delta canonical form")
    return min(d.relabel(p).feasible for p in itertools.permutations(range(d.n)))


def delta_classes(k: int) -> list[FeasibleFamily]:
    keys = sorted({delta_canonical(d) for d in enumerate_deltas(k)})
    return [FeasibleFamily(k, key) for key in keys]


def random_delta(rng: random.Random, n: int) -> FeasibleFamily:
    """Random perspective turned saturated delta-matroid, or a twisted matroid."""
    if rng.random() < 0.5:
        m = random_matroid(rng, n)
        return matroid_as_delta(m).twist(rng.randrange(1 << n))
    return perspective_to_delta(random_perspective(rng, n))


# --- Matroid perspectives ---

def _increments(m: RankTable) -> np.ndarray:
    arr = np.asarray(m.rk, dtype=np.int64)
    idx = np.arange(1 << m.n, dtype=np.int64)
    rows = []
    for i in range(m.n):
        base = idx[(idx >> i) & 1 == 0]
        rows.append(arr[base | (1 << i)] - arr[base])
    return np.array(rows, dtype=np.int64).reshape(m.n, -1)


def is_perspective(m: RankTable, mp: RankTable) -> bool:
    """Single-step form: rk_M(A+e) - rk_M(A) >= rk_M'(A+e) - rk_M'(A)."""
    if m.n != mp.n:
        return False
    if m.n == 0:
        return True
    return bool((_increments(m) >= _increments(mp)).all())


@dataclass(frozen=True)
class Perspective:
    M: RankTable
    Mprime: RankTable

    @classmethod
    def validated(cls, m: RankTable, mp: RankTable) -> Perspective:
        if m.n != mp.n:
            raise StructureError("perspective matroids live on different ground sets")
        if not is_perspective(m, mp):
            raise StructureError("rank increments of M do not dominate those of M'")
        return cls(m, mp)

    @property
    def n(self) -> int:
        return self.M.n

    def restrict(self, a: int) -> Perspective:
        return Perspective(self.M.restrict(a), self.Mprime.restrict(a))

    def contract(self, a: int) -> Perspective:
        return Perspective(self.M.contract(a), self.Mprime.contract(a))

    def direct_sum(self, other: Perspective) -> Perspective:
        return Perspective(self.M.direct_sum(other.M), self.Mprime.direct_sum(other.Mprime))

    def to_doc(self) -> dict[str, Any]:
        return {"type": "perspective", "M": self.M.to_doc(), "Mprime": self.Mprime.to_doc()}

    @classmethod
    def from_doc(cls, doc: PerspectiveDoc | dict) -> Perspective:
        if isinstance(doc, dict):
            doc = PerspectiveDoc.model_validate(doc)
        return cls.validated(RankTable.from_doc(doc.M), RankTable.from_doc(doc.Mprime))


def perspective_to_delta(p: Perspective) -> FeasibleFamily:
    """Feasible sets: independent in M and spanning in M'."""
    return FeasibleFamily(
        p.n,
        tuple(a for a in range(1 << p.n) if p.M.independent(a) and p.Mprime.spanning(a)),
    )


def delta_to_perspective(d: FeasibleFamily) -> Perspective:
    if not d.is_saturated():
        raise AlgebraDomainError("only saturated delta-matroids come from perspectives")
    return Perspective(d.upper, d.lower)


def random_perspective(rng: random.Random, n: int) -> Perspective:
    m = random_matroid(rng, n)
    mp = m
    for _ in range(rng.randrange(3)):
        mp = mp.truncate()
    return Perspective(m, mp)


def enumerate_perspectives(k: int) -> list[Perspective]:
    ms = enumerate_matroids(k)
    return [Perspective(m, mp) for m in ms for mp in ms if is_perspective(m, mp)]


# --- Delta-matroid perspectives ---

@dataclass(frozen=True)
class DMPerspective:
    M: RankTable
    D: FeasibleFamily
    Mprime: RankTable

    @classmethod
    def validated(cls, m: RankTable, d: FeasibleFamily, mp: RankTable) -> DMPerspective:
        if not m.n == d.n == mp.n:
            raise StructureError("M, D and M' live on different ground sets")
        if not is_perspective(m, d.upper):
            raise StructureError("(M, D_max) is not a matroid perspective")
        if not is_perspective(d.lower, mp):
            raise StructureError("(D_min, M') is not a matroid perspective")
        return cls(m, d, mp)

    @property
    def n(self) -> int:
        return self.D.n

    def restrict(self, a: int) -> DMPerspective:
        return DMPerspective(self.M.restrict(a), self.D.restrict(a), self.Mprime.restrict(a))

    def contract(self, a: int) -> DMPerspective:
        return DMPerspective(self.M.contract(a), self.D.contract(a), self.Mprime.contract(a))

    def direct_sum(self, other: DMPerspective) -> DMPerspective:
        return DMPerspective(
            self.M.direct_sum(other.M), self.D.direct_sum(other.D), self.Mprime.direct_sum(other.Mprime)
        )

    def to_doc(self) -> dict[str, Any]:
        return {"type": "dmp", "M": self.M.to_doc(), "D": self.D.to_doc(), "Mprime": self.Mprime.to_doc()}

    @classmethod
    def from_doc(cls, doc: DMPDoc | dict) -> DMPerspective:
        if isinstance(doc, dict):
            doc = DMPDoc.model_validate(doc)
        return cls.validated(
            RankTable.from_doc(doc.M), FeasibleFamily.from_doc(doc.D), RankTable.from_doc(doc.Mprime)
        )


def dmp_of_perspective(p: Perspective) -> DMPerspective:
    """(M, D(M, M'), M')."""
    return DMPerspective(p.M, perspective_to_delta(p), p.Mprime)


def enumerate_dmps(k: int) -> list[DMPerspective]:
    """Labeled: every D with every M above D_max and every M' below D_min."""
    ms = enumerate_matroids(k)
    out = []
    for d in enumerate_deltas(k):
        up, low = d.upper, d.lower
        above = [m for m in ms if is_perspective(m, up)]
        below = [m for m in ms if is_perspective(low, m)]
        out.extend(DMPerspective(m, d, mp) for m in above for mp in below)
    return out


def random_dmp(rng: random.Random, n: int) -> DMPerspective:
    if rng.random() < 0.5:
        p = random_perspective(rng, n)
        inner = p.M.truncate() if rng.random() < 0.5 and is_perspective(p.M.truncate(), p.Mprime) else p.M
        d = perspective_to_delta(Perspective(inner, p.Mprime))
        return DMPerspective(p.M, d, p.Mprime)
    d = matroid_as_delta(random_matroid(rng, n)).twist(rng.randrange(1 << n))
    low = d.lower
    return DMPerspective(d.upper, d, low.truncate() if rng.random() < 0.3 else low)


# --- Minors systems ---

def _flag(m: RankTable) -> str:
    return "c" if m.rank else "l"


def _delta_flag(d: FeasibleFamily) -> str:
    return {(1,): "c", (0,): "l"}.get(d.feasible, "n")


class DeltaSystem(MinorsSystem[FeasibleFamily]):
    NAME = "delta"
    MULTIPLICATIVE = True
    UNIVERSAL_AXES = ("u", "v", "w")
    UNIVERSAL_RULES = (("w", "u", "v"),)

    def ground_size(self, x: FeasibleFamily) -> int:
        return x.n

    def restrict(self, x: FeasibleFamily, mask: int) -> FeasibleFamily:
        return x.restrict(mask)

    def contract(self, x: FeasibleFamily, mask: int) -> FeasibleFamily:
        return x.contract(mask)

    def direct_sum(self, x: FeasibleFamily, y: FeasibleFamily) -> FeasibleFamily:
        return x.direct_sum(y)

    def unit(self) -> FeasibleFamily:
        return EMPTY_DELTA

    def to_doc(self, x: FeasibleFamily) -> dict[str, Any]:
        return x.to_doc()

    def universal_class(self, x: FeasibleFamily) -> dict[str, int]:
        hi, lo = x.upper.rank, x.lower.rank
        return {"u": lo, "v": x.n - hi, "w": hi - lo}

    def canonical_key(self, x: FeasibleFamily) -> Hashable | None:
        return delta_canonical(x) if x.n <= settings.max_canonical else None

    def exact_key(self, x: FeasibleFamily) -> Hashable:
        return (x.n, x.feasible)

    def enumerate(self, k: int) -> list[FeasibleFamily]:
        return delta_classes(k)

    def generator_name(self, x: FeasibleFamily) -> str:
        return _delta_flag(x)

    def random(self, rng: random.Random, n: int) -> FeasibleFamily:
        return random_delta(rng, n)


class PerspectiveSystem(MinorsSystem[Perspective]):
    NAME = "matper"
    MULTIPLICATIVE = True
    UNIVERSAL_AXES = ("u", "v", "w")

    def ground_size(self, x: Perspective) -> int:
        return x.n

    def restrict(self, x: Perspective, mask: int) -> Perspective:
        return x.restrict(mask)

    def contract(self, x: Perspective, mask: int) -> Perspective:
        return x.contract(mask)

    def direct_sum(self, x: Perspective, y: Perspective) -> Perspective:
        return x.direct_sum(y)

    def unit(self) -> Perspective:
        e = RankTable(0, (0,))
        return Perspective(e, e)

    def to_doc(self, x: Perspective) -> dict[str, Any]:
        return x.to_doc()

    def universal_class(self, x: Perspective) -> dict[str, int]:
        return {"u": x.Mprime.rank, "v": x.M.corank, "w": x.M.rank - x.Mprime.rank}

    def exact_key(self, x: Perspective) -> Hashable:
        return (x.M.rk, x.Mprime.rk)

    def enumerate(self, k: int) -> list[Perspective]:
        return enumerate_perspectives(k)

    def generator_name(self, x: Perspective) -> str:
        return _flag(x.M) + _flag(x.Mprime)

    def random(self, rng: random.Random, n: int) -> Perspective:
        return random_perspective(rng, n)


class DMPSystem(MinorsSystem[DMPerspective]):
    NAME = "dmp"
    MULTIPLICATIVE = True
    UNIVERSAL_AXES = ("s", "t", "u", "v", "w")
    UNIVERSAL_RULES = (("w", "s", "t"),)

    def ground_size(self, x: DMPerspective) -> int:
        return x.n

    def restrict(self, x: DMPerspective, mask: int) -> DMPerspective:
        return x.restrict(mask)

    def contract(self, x: DMPerspective, mask: int) -> DMPerspective:
        return x.contract(mask)

    def direct_sum(self, x: DMPerspective, y: DMPerspective) -> DMPerspective:
        return x.direct_sum(y)

    def unit(self) -> DMPerspective:
        e = RankTable(0, (0,))
        return DMPerspective(e, EMPTY_DELTA, e)

    def to_doc(self, x: DMPerspective) -> dict[str, Any]:
        return x.to_doc()

    def universal_class(self, x: DMPerspective) -> dict[str, int]:
        hi, lo = x.D.upper.rank, x.D.lower.rank
        return {
            "s": lo - x.Mprime.rank,
            "t": x.M.rank - hi,
            "u": x.Mprime.rank,
            "v": x.M.corank,
            "w": hi - lo,
        }

    def exact_key(self, x: DMPerspective) -> Hashable:
        return (x.M.rk, x.D.feasible, x.Mprime.rk)

    def enumerate(self, k: int) -> list[DMPerspective]:
        return enumerate_dmps(k)

    def generator_name(self, x: DMPerspective) -> str:
        return _flag(x.M) + _delta_flag(x.D) + _flag(x.Mprime)

    def random(self, rng: random.Random, n: int) -> DMPerspective:
        return random_dmp(rng, n)


DELTAS = DeltaSystem()
PERSPECTIVES = PerspectiveSystem()
DMPS = DMPSystem()


# --- Bollobás–Riordan ---

def universal_delta(d: FeasibleFamily) -> MRPoly:
    check_size(d.n, settings.max_tutte, "delta character")
    return delcon_evaluate(DELTAS, d, DELTAS.universal_spec())


def bollobas_riordan(d: FeasibleFamily, universal: bool = False) -> MRPoly:
    """R̃_D = sum_A p^(σ(D)-σ(A)) q^(|A|-σ(A)), with p = x-1 and q = y-1 in half-integer powers."""
    u = universal_delta(d)
    if universal:
        return u
    return u.specialize(
        {
            "u1": 1,
            "v1": unit_of(BR, Y1),
            "w1": MRPoly.var(BR, Y1),
            "u2": unit_of(BR, X1),
            "v2": 1,
            "w2": MRPoly.var(BR, X1),
        },
        BR,
    )


def bollobas_riordan_direct(d: FeasibleFamily) -> MRPoly:
    terms: dict = {}
    s = d.sigma2
    for a in range(1 << d.n):
        sa = d.restrict(a).sigma2
        mono = BR.raw({X1: s - sa, Y1: 2 * popcount(a) - sa})
        terms[mono] = terms.get(mono, 0) + 1
    return MRPoly(BR, terms)


def _br_at(p: MRPoly, xh: MRPoly, yh: MRPoly, target: MonoidSig) -> MRPoly:
    """Substitute the half-units p^(1/2), q^(1/2)."""
    return p.specialize({X1: xh, Y1: yh}, target)


def br_convolution_check(d: FeasibleFamily) -> Witness | None:
    """R̃_D(1-ab, 1-cd) = sum_A a^(σ(D)-σ(A)) d^(|A|-σ(A)) R̃_{D|A}(1-a, 1-c) R̃_{D/A}(1-b, 1-d).

    Square roots of -ab and the like are taken with Gaussian coefficients:
    on the left p^(1/2) -> i (ab)^(1/2), q^(1/2) -> i (cd)^(1/2);
    on restrictions -i a^(1/2), i c^(1/2); on contractions i b^(1/2), i d^(1/2).
    """
    sig = BR_ABCD
    lhs = _br_at(bollobas_riordan(d), half_of(sig, "ab", IMAG), half_of(sig, "cd", IMAG), sig)
    rhs = MRPoly.zero(sig, ZZ_I)
    s = d.sigma2
    for a in range(1 << d.n):
        dr, dc = d.restrict(a), d.contract(a)
        sa = dr.sigma2
        pref = MRPoly.mono(sig.raw({"a": s - sa, "d": 2 * popcount(a) - sa}), 1, ZZ_I)
        left = _br_at(bollobas_riordan(dr), half_of(sig, "a", -IMAG), half_of(sig, "c", IMAG), sig)
        right = _br_at(bollobas_riordan(dc), half_of(sig, "b", IMAG), half_of(sig, "d", IMAG), sig)
        rhs = rhs + pref * left * right
    if lhs != rhs:
        return witness("br-convolution", DELTAS, d, lhs, rhs)

    # R̃_D(x, y) = sum_A R̃_{D|A}(0, y) R̃_{D/A}(x, 0)
    lhs = bollobas_riordan(d).to_ring(ZZ_I)
    rhs = MRPoly.zero(BR, ZZ_I)
    for a in range(1 << d.n):
        left = _br_at(
            bollobas_riordan(d.restrict(a)),
            MRPoly.const(BR, -IMAG, ZZ_I),
            MRPoly.var(BR, Y1, ZZ_I),
            BR,
        )
        right = _br_at(
            bollobas_riordan(d.contract(a)),
            MRPoly.var(BR, X1, ZZ_I),
            MRPoly.const(BR, IMAG, ZZ_I),
            BR,
        )
        rhs = rhs + left * right
    if lhs != rhs:
        return witness("br-convolution-xy", DELTAS, d, lhs, rhs)
    return None


def delta_prefactor_check(d: FeasibleFamily) -> Witness | None:
    """T^ΔMat(D) = u1^σ v2^(|E|-σ) R̃(1 + u2/u1, 1 + v1/v2), with w_i = (u_i v_i)^(1/2)."""
    names = ("u1", "v1", "u2", "v2")
    sig = MonoidSig([Axis(n, signed=True, half=True) for n in names])
    lhs = universal_delta(d).specialize(
        {
            **{n: unit_of(sig, n) for n in names},
            "w1": stored(sig, {"u1": 1, "v1": 1}),
            "w2": stored(sig, {"u2": 1, "v2": 1}),
        },
        sig,
    )
    rhs = _br_at(
        bollobas_riordan(d),
        stored(sig, {"u2": 1, "u1": -1}),
        stored(sig, {"v1": 1, "v2": -1}),
        sig,
    )
    rhs = rhs * stored(sig, {"u1": d.sigma2, "v2": 2 * d.n - d.sigma2})
    if lhs != rhs:
        return witness("delta-prefactor", DELTAS, d, lhs, rhs)
    return None


def discrepancy_check(d: FeasibleFamily) -> Witness | None:
    """rk(D_max) - rk((D|A)_max) - rk((D/A)_max) = rk((D|A)_min) + rk((D/A)_min) - rk(D_min) >= 0."""
    hi, lo = d.upper.rank, d.lower.rank
    for a in range(1 << d.n):
        dr, dc = d.restrict(a), d.contract(a)
        left = hi - dr.upper.rank - dc.upper.rank
        right = dr.lower.rank + dc.lower.rank - lo
        if left != right or left < 0:
            return witness("discrepancy", DELTAS, d, left, right, subsets=[a])
    return None


def bounds_minor_check(d: FeasibleFamily) -> Witness | None:
    """Does D -> (D_max, D_min) commute with minors? Fails in general."""
    up, low = d.upper, d.lower
    for a in range(1 << d.n):
        for name, got, want in (
            ("upper-restrict", d.restrict(a).upper, up.restrict(a)),
            ("upper-contract", d.contract(a).upper, up.contract(a)),
            ("lower-restrict", d.restrict(a).lower, low.restrict(a)),
            ("lower-contract", d.contract(a).lower, low.contract(a)),
        ):
            if got != want:
                return witness(f"bounds-minor-{name}", DELTAS, d, str(got.rk), str(want.rk), subsets=[a])
    return None


# --- Saturated delta-matroids and perspectives ---

def tardos_check(p: Perspective) -> Witness | None:
    """D(M, M') is saturated, has D_max = M and D_min = M', and commutes with minors."""
    d = perspective_to_delta(p)
    if d.exchange_failure() is not None or not d.is_saturated():
        return witness("tardos-saturated", PERSPECTIVES, p, detail=str(d.feasible))
    if delta_to_perspective(d) != p:
        return witness("tardos-roundtrip", PERSPECTIVES, p, detail=str(d.feasible))
    for a in range(1 << p.n):
        if perspective_to_delta(p.restrict(a)) != d.restrict(a):
            return witness("tardos-restrict", PERSPECTIVES, p, subsets=[a])
        if perspective_to_delta(p.contract(a)) != d.contract(a):
            return witness("tardos-contract", PERSPECTIVES, p, subsets=[a])
    return None


def saturated_roundtrip_check(d: FeasibleFamily) -> Witness | None:
    if d.is_saturated() and perspective_to_delta(delta_to_perspective(d)) != d:
        return witness("saturated-roundtrip", DELTAS, d)
    return None


# --- Las Vergnas ---

def universal_matper(p: Perspective) -> MRPoly:
    check_size(p.n, settings.max_tutte, "perspective character")
    return delcon_evaluate(PERSPECTIVES, p, PERSPECTIVES.universal_spec())


def las_vergnas(p: Perspective, universal: bool = False) -> MRPoly:
    """sum_A (x-1)^(rk M' - rk M'(A)) (y-1)^(|A| - rk M(A)) z^((rk M - rk M(A)) - (rk M' - rk M'(A)))."""
    u = universal_matper(p)
    if universal:
        return u
    x, y, z = (var(XYZ, n) for n in "xyz")
    return u.specialize({"u1": 1, "v1": y - 1, "w1": 1, "u2": x - 1, "v2": 1, "w2": z}, XYZ)


def las_vergnas_direct(p: Perspective) -> MRPoly:
    x, y, z = (var(XYZ, n) for n in "xyz")
    m, mp = p.M, p.Mprime
    total = MRPoly.zero(XYZ)
    for a in range(1 << p.n):
        cm, cmp = m.rank - m.rk[a], mp.rank - mp.rk[a]
        total = total + (x - 1) ** cmp * (y - 1) ** m.nullity(a) * z ** (cm - cmp)
    return total


def _lv_at(p: MRPoly, xv, yv, zv, target: MonoidSig) -> MRPoly:
    return p.specialize({"x": xv, "y": yv, "z": zv}, target)


def lv_convolution_check(p: Perspective) -> Witness | None:
    """LV(1-ab, 1-cd, -ef) = sum_A a^cork_M'(A) d^null_M(A) e^(cork_M(A) - cork_M'(A))
    LV_{|A}(1-a, 1-c, -e) LV_{/A}(1-b, 1-d, -f), plus the 3-variable form
    LV(x, y, z) = sum_A LV_{|A}(0, y, -1) LV_{/A}(x, 0, z)."""
    sig = ABCDEF
    a, b, c, d, e, f = (var(sig, n) for n in "abcdef")
    m, mp = p.M, p.Mprime
    lhs = _lv_at(las_vergnas(p), 1 - a * b, 1 - c * d, -e * f, sig)
    rhs = MRPoly.zero(sig)
    for s in range(1 << p.n):
        cm, cmp = m.rank - m.rk[s], mp.rank - mp.rk[s]
        pref = a ** cmp * d ** m.nullity(s) * e ** (cm - cmp)
        left = _lv_at(las_vergnas(p.restrict(s)), 1 - a, 1 - c, -e, sig)
        right = _lv_at(las_vergnas(p.contract(s)), 1 - b, 1 - d, -f, sig)
        rhs = rhs + pref * left * right
    if lhs != rhs:
        return witness("lv-convolution", PERSPECTIVES, p, lhs, rhs)

    x, y, z = (var(XYZ, n) for n in "xyz")
    lhs = las_vergnas(p)
    rhs = MRPoly.zero(XYZ)
    for s in range(1 << p.n):
        rhs = rhs + _lv_at(las_vergnas(p.restrict(s)), 0, y, -1, XYZ) * _lv_at(
            las_vergnas(p.contract(s)), x, 0, z, XYZ
        )
    if lhs != rhs:
        return witness("lv-convolution-xyz", PERSPECTIVES, p, lhs, rhs)
    return None


def matper_prefactor_check(p: Perspective) -> Witness | None:
    """T^MatPer = u1^rk M' v2^cork M w1^(rk M - rk M') LV(1 + u2/u1, 1 + v1/v2, w2/w1)."""
    sig = laurent(PERSPECTIVES.universal_signature())
    lhs = universal_matper(p).specialize({}, sig)
    rhs = _lv_at(
        las_vergnas(p),
        1 + ratio(sig, "u2", "u1"),
        1 + ratio(sig, "v1", "v2"),
        ratio(sig, "w2", "w1"),
        sig,
    )
    rhs = rhs * MRPoly.mono(
        sig.raw({"u1": p.Mprime.rank, "v2": p.M.corank, "w1": p.M.rank - p.Mprime.rank})
    )
    if lhs != rhs:
        return witness("matper-prefactor", PERSPECTIVES, p, lhs, rhs)
    return None


# --- Krushkal ---

def universal_dmp(t: DMPerspective) -> MRPoly:
    check_size(t.n, settings.max_tutte, "dmp character")
    return delcon_evaluate(DMPS, t, DMPS.universal_spec())


def krushkal(t: DMPerspective, universal: bool = False) -> MRPoly:
    """K = sum_A x^(rk M' - rk M'(A)) y^(|A| - rk M(A)) a^(σ(D|A) - rk M'(A)) b^(rk M(A) - σ(D|A)).

    From the universal character at (s1, t1, u1, v1, s2, t2, u2, v2) =
    (a, b, 1, y, 1, 1, x, 1) with w1 -> (ab)^(1/2) and w2 -> 1.
    """
    u = universal_dmp(t)
    if universal:
        return u
    sig = KRUSHKAL
    return u.specialize(
        {
            "s1": unit_of(sig, "a"),
            "t1": unit_of(sig, "b"),
            "u1": 1,
            "v1": var(sig, "y"),
            "w1": stored(sig, {"a": 1, "b": 1}),
            "s2": 1,
            "t2": 1,
            "u2": var(sig, "x"),
            "v2": 1,
            "w2": 1,
        },
        sig,
    )


def krushkal_direct(t: DMPerspective) -> MRPoly:
    terms: dict = {}
    m, mp = t.M, t.Mprime
    for a in range(1 << t.n):
        sa = t.D.restrict(a).sigma2
        mono = KRUSHKAL.raw(
            {
                "x": mp.rank - mp.rk[a],
                "y": m.nullity(a),
                "a": sa - 2 * mp.rk[a],
                "b": 2 * m.rk[a] - sa,
            }
        )
        terms[mono] = terms.get(mono, 0) + 1
    return MRPoly(KRUSHKAL, terms)


def krushkal_prefactor_check(t: DMPerspective) -> Witness | None:
    """T^ΔMatPer = s2^(σ - rk M') t2^(rk M - σ) u1^rk M' v2^cork M K(u2/u1, v1/v2, s1/s2, t1/t2)
    with w_i = (s_i t_i)^(1/2)."""
    names = ("s1", "t1", "u1", "v1", "s2", "t2", "u2", "v2")
    sig = MonoidSig([Axis(n, signed=True, half=True) for n in names])
    lhs = universal_dmp(t).specialize(
        {
            **{n: unit_of(sig, n) for n in names},
            "w1": stored(sig, {"s1": 1, "t1": 1}),
            "w2": stored(sig, {"s2": 1, "t2": 1}),
        },
        sig,
    )
    whole = {k: stored(sig, {num: 2, den: -2}) for k, num, den in (("x", "u2", "u1"), ("y", "v1", "v2"))}
    half = {k: stored(sig, {num: 1, den: -1}) for k, num, den in (("a", "s1", "s2"), ("b", "t1", "t2"))}
    rhs = krushkal(t).specialize(whole | half, sig)
    s = t.D.sigma2
    rhs = rhs * MRPoly.mono(
        sig.raw(
            {
                "s2": s - 2 * t.Mprime.rank,
                "t2": 2 * t.M.rank - s,
                "u1": 2 * t.Mprime.rank,
                "v2": 2 * t.M.corank,
            }
        )
    )
    if lhs != rhs:
        return witness("krushkal-prefactor", DMPS, t, lhs, rhs)
    return None


def functoriality_check(t: DMPerspective) -> Witness | None:
    """s = t = w sends (M, D(M,M'), M') to T^MatPer(M, M'); s = u, t = v sends T^ΔMatPer to T^ΔMat(D)."""
    u = universal_dmp(t)
    dsig = DELTAS.universal_signature()
    to_delta = {
        f"s{c}": var(dsig, f"u{c}") for c in "12"
    } | {f"t{c}": var(dsig, f"v{c}") for c in "12"}
    got = u.specialize(to_delta, dsig)
    want = universal_delta(t.D)
    if got != want:
        return witness("dmp-to-delta", DMPS, t, got, want)

    p = Perspective(t.M, t.Mprime)
    if t.D == perspective_to_delta(p):
        psig = PERSPECTIVES.universal_signature()
        to_persp = {f"s{c}": var(psig, f"w{c}") for c in "12"} | {
            f"t{c}": var(psig, f"w{c}") for c in "12"
        }
        got = u.specialize(to_persp, psig)
        want = universal_matper(p)
        if got != want:
            return witness("dmp-to-matper", DMPS, t, got, want)
    return None


def matroid_collapse_check(m: RankTable) -> Witness | None:
    """For a matroid, R̃ is the corank-nullity polynomial in x-1, y-1."""
    want = corank_nullity(m).specialize({"x": unit_of(BR, X1), "y": unit_of(BR, Y1)}, BR)
    got = bollobas_riordan(matroid_as_delta(m))
    if got != want:
        return witness("br-matroid", DELTAS, matroid_as_delta(m), got, want)
    return None


ONE_ELEMENT_PERSPECTIVES = (
    Perspective(COLOOP, COLOOP),
    Perspective(COLOOP, LOOP),
    Perspective(LOOP, LOOP),
)
