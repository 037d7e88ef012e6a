"""Matroids as full rank tables, and their Tutte polynomials."""
from __future__ import annotations

import itertools
import logging
import math
import random
from collections.abc import Hashable, Iterable
from dataclasses import dataclass
from functools import lru_cache
from typing import Any

import numpy as np
from networkx.utils import UnionFind

from unitutte_core.algebra import MonoidSig, MRPoly
from unitutte_core.bits import elements, expand, full, mask_of, popcount
from unitutte_core.characters import (
    convolution_check,
    delcon_evaluate,
    iterated_convolution_check,
    level_flags,
    parallel_sum,
    witness,
)
from unitutte_core.config import settings
from unitutte_core.errors import AlgebraDomainError, SizeLimitError, StructureError, check_size
from unitutte_core.minors import MinorsSystem
from unitutte_core.schemas import MatroidDoc, Witness
from unitutte_core.variables import ABCD, XY, indexed, laurent, one, ratio, var

logger = logging.getLogger(__name__)

ENUMERATION_CAP = 5


# --- Rank tables ---

def subset_sizes(n: int) -> np.ndarray:
    idx = np.arange(1 << n, dtype=np.int64)
    sizes = np.zeros(1 << n, dtype=np.int64)
    for i in range(n):
        sizes += (idx >> i) & 1
    return sizes


def check_set_function(
    n: int,
    rk: Iterable[int],
    *,
    bounded: bool = True,
    monotone: bool = True,
    what: str = "rank function",
) -> None:
    """Raise StructureError unless ``rk`` is normalized and submodular.

    ``bounded`` adds 0 <= rk(A) <= |A|, ``monotone`` adds rk(A) <= rk(A+e).
    Submodularity is checked in its local form on pairs of added elements.
    """
    arr = np.asarray(list(rk), dtype=np.int64)
    if arr.shape != (1 << n,):
        raise StructureError(f"{what}: expected {1 << n} values, got {arr.shape[0]}")
    if arr[0] != 0:
        raise StructureError(f"{what}: value on the empty set is {arr[0]}, not 0")
    idx = np.arange(1 << n, dtype=np.int64)
    if bounded:
        sizes = subset_sizes(n)
        bad = np.flatnonzero((arr < 0) | (arr > sizes))
        if bad.size:
            raise StructureError(f"{what}: rank of subset {int(bad[0])} out of [0, |A|]")
    for i in range(n):
        base = idx[(idx >> i) & 1 == 0]
        step = arr[base | (1 << i)] - arr[base]
        if monotone and (step < 0).any():
            a = int(base[np.flatnonzero(step < 0)[0]])
            raise StructureError(f"{what}: not monotone at subset {a} adding {i}")
        for j in range(i + 1, n):
            b = base[(base >> j) & 1 == 0]
            lhs = arr[b | (1 << i)] + arr[b | (1 << j)]
            rhs = arr[b | (1 << i) | (1 << j)] + arr[b]
            if (lhs < rhs).any():
                a = int(b[np.flatnonzero(lhs < rhs)[0]])
                raise StructureError(f"{what}: not submodular at subset {a} with {i}, {j}")


@dataclass(frozen=True)
class RankTable:
    """A matroid on {0..n-1}: rk[A] for every bitmask A."""

    n: int
    rk: tuple[int, ...]

    def __post_init__(self):
        check_size(self.n, settings.max_rank_table, "rank table")
        if len(self.rk) != 1 << self.n:
            raise StructureError(f"rank table needs {1 << self.n} entries, got {len(self.rk)}")

    @classmethod
    def validated(cls, n: int, rk: Iterable[int]) -> RankTable:
        table = tuple(int(r) for r in rk)
        check_size(n, settings.max_rank_table, "rank table")
        check_set_function(n, table)
        return cls(n, table)

    @classmethod
    def from_bases(cls, n: int, bases: Iterable[Iterable[int]]) -> RankTable:
        masks = sorted({mask_of(b) for b in bases})
        if not masks:
            raise StructureError("a matroid has at least one basis")
        if len({popcount(b) for b in masks}) != 1:
            raise StructureError("bases have different sizes")
        if any(b >> n for b in masks):
            raise StructureError(f"basis element outside 0..{n - 1}")
        table = [max(popcount(a & b) for b in masks) for a in range(1 << n)]
        m = cls.validated(n, table)
        if set(m.bases()) != set(masks):
            raise StructureError("basis family fails the exchange axiom")
        return m

    @classmethod
    def uniform(cls, r: int, n: int) -> RankTable:
        return cls(n, tuple(min(popcount(a), r) for a in range(1 << n)))

    @classmethod
    def free(cls, n: int) -> RankTable:
        return cls.uniform(n, n)

    @classmethod
    def loops(cls, n: int) -> RankTable:
        return cls.uniform(0, n)

    # --- Queries ---

    @property
    def rank(self) -> int:
        return self.rk[-1]

    @property
    def corank(self) -> int:
        return self.n - self.rank

    @property
    def ground(self) -> int:
        return full(self.n)

    def nullity(self, a: int) -> int:
        return popcount(a) - self.rk[a]

    def is_loop(self, e: int) -> bool:
        return self.rk[1 << e] == 0

    def is_coloop(self, e: int) -> bool:
        return self.rk[self.ground & ~(1 << e)] == self.rank - 1

    def bases(self) -> list[int]:
        r = self.rank
        return [a for a in range(1 << self.n) if popcount(a) == r and self.rk[a] == r]

    def independent(self, a: int) -> bool:
        return self.rk[a] == popcount(a)

    def spanning(self, a: int) -> bool:
        return self.rk[a] == self.rank

    # --- Minors and sums ---

    def _check_subset(self, a: int) -> None:
        if a & ~self.ground:
            raise AlgebraDomainError(f"subset {a} is not inside a {self.n}-element ground set")

    def restrict(self, a: int) -> RankTable:
        self._check_subset(a)
        return RankTable(popcount(a), tuple(self.rk[expand(b, a)] for b in range(1 << popcount(a))))

    def contract(self, a: int) -> RankTable:
        self._check_subset(a)
        kept = self.ground & ~a
        base = self.rk[a]
        k = popcount(kept)
        return RankTable(k, tuple(self.rk[expand(b, kept) | a] - base for b in range(1 << k)))

    def delete(self, a: int) -> RankTable:
        self._check_subset(a)
        return self.restrict(self.ground & ~a)

    def dual(self) -> RankTable:
        g, r = self.ground, self.rank
        return RankTable(self.n, tuple(self.rk[g & ~a] + popcount(a) - r for a in range(1 << self.n)))

    def direct_sum(self, other: RankTable) -> RankTable:
        n = self.n + other.n
        check_size(n, settings.max_rank_table, "direct sum")
        low = full(self.n)
        return RankTable(
            n, tuple(self.rk[a & low] + other.rk[a >> self.n] for a in range(1 << n))
        )

    def relabel(self, perm: tuple[int, ...]) -> RankTable:
        """Element i becomes perm[i]."""
        out = [0] * (1 << self.n)
        for a in range(1 << self.n):
            out[sum(1 << perm[i] for i in elements(a))] = self.rk[a]
        return RankTable(self.n, tuple(out))

    def truncate(self) -> RankTable:
        r = self.rank - 1
        if r < 0:
            return self
        return RankTable(self.n, tuple(min(x, r) for x in self.rk))

    # --- Serialization ---

    def to_doc(self) -> dict[str, Any]:
        return {"type": "matroid", "n": self.n, "rank": list(self.rk)}

    @classmethod
    def from_doc(cls, doc: MatroidDoc | dict) -> RankTable:
        if isinstance(doc, dict):
            doc = MatroidDoc.model_validate(doc)
        if doc.rank is not None:
            return cls.validated(doc.n, doc.rank)
        return cls.from_bases(doc.n, doc.bases or [])


COLOOP = RankTable(1, (0, 1))
LOOP = RankTable(1, (0, 0))
EMPTY = RankTable(0, (0,))
U12 = RankTable.uniform(1, 2)


# --- Structure theory ---

def circuits(m: RankTable) -> list[int]:
    out = []
    for a in range(1, 1 << m.n):
        k = popcount(a)
        if m.rk[a] == k - 1 and all(m.rk[a & ~(1 << e)] == k - 1 for e in elements(a)):
            out.append(a)
    return out


def connected_components(m: RankTable) -> list[list[int]]:
    """Blocks of the finest separator partition; two elements share a block
    iff some circuit contains both."""
    uf = UnionFind(range(m.n))
    for c in circuits(m):
        members = elements(c)
        uf.union(*members)
    blocks = [sorted(b) for b in uf.to_sets()]
    return sorted(blocks)


def is_connected(m: RankTable) -> bool:
    return m.n > 0 and len(connected_components(m)) == 1


def _canonical_table(n: int, rk: tuple[int, ...]) -> tuple[int, ...]:
    best = rk
    for perm in itertools.permutations(range(n)):
        bit = [1 << p for p in perm]
        out = [0] * (1 << n)
        for a in range(1, 1 << n):
            out[_push(a, bit)] = rk[a]
        t = tuple(out)
        if t < best:
            best = t
    return best


def _push(a: int, bit: list[int]) -> int:
    b = 0
    i = 0
    while a:
        if a & 1:
            b |= bit[i]
        a >>= 1
        i += 1
    return b


@lru_cache(maxsize=65536)
def canonical_rank(n: int, rk: tuple[int, ...]) -> tuple[int, ...]:
    check_size(n, settings.max_canonical, "canonical form")
    return _canonical_table(n, rk)


def canonical_form(m: RankTable) -> RankTable:
    """Lexicographically smallest rank table among all relabelings."""
    return RankTable(m.n, canonical_rank(m.n, m.rk))


def is_isomorphic(m1: RankTable, m2: RankTable) -> bool:
    return m1.n == m2.n and m1.rank == m2.rank and canonical_form(m1) == canonical_form(m2)


def _basis_family_ok(family: list[int]) -> bool:
    fam = set(family)
    for b1 in family:
        for b2 in family:
            for x in elements(b1 & ~b2):
                if not any((b1 & ~(1 << x)) | (1 << y) in fam for y in elements(b2 & ~b1)):
                    return False
    return True


def enumerate_matroids(n: int) -> list[RankTable]:
    """Every matroid on {0..n-1}, labeled, by brute force over basis families."""
    if n > ENUMERATION_CAP:
        raise SizeLimitError(f"matroid enumeration: size {n} exceeds cap {ENUMERATION_CAP}")
    out = []
    for r in range(n + 1):
        candidates = [a for a in range(1 << n) if popcount(a) == r]
        for pick in range(1, 1 << len(candidates)):
            family = [candidates[i] for i in elements(pick)]
            if _basis_family_ok(family):
                table = tuple(max(popcount(a & b) for b in family) for a in range(1 << n))
                out.append(RankTable(n, table))
    return out


@lru_cache(maxsize=None)
def _classes(n: int) -> tuple[RankTable, ...]:
    seen = sorted({canonical_rank(m.n, m.rk) for m in enumerate_matroids(n)})
    return tuple(RankTable(n, t) for t in seen)


def matroid_classes(n: int) -> list[RankTable]:
    return list(_classes(n))


def random_matroid(rng: random.Random, n: int) -> RankTable:
    """Grow a matroid one element at a time by loops, coloops, free and
    parallel extensions, with an occasional truncation or dual."""
    m = EMPTY
    while m.n < n:
        move = rng.random()
        if move < 0.15:
            m = m.direct_sum(LOOP)
        elif move < 0.3:
            m = m.direct_sum(COLOOP)
        elif move < 0.65 or m.n == 0:
            m = free_extension(m)
        else:
            m = parallel_extension(m, rng.randrange(m.n))
        roll = rng.random()
        if roll < 0.1:
            m = m.truncate()
        elif roll < 0.25:
            m = m.dual()
    return m


def free_extension(m: RankTable) -> RankTable:
    """Add an element in general position inside the span of M."""
    r = m.rank
    top = [min(x + 1, r) for x in m.rk]
    return RankTable(m.n + 1, tuple(m.rk) + tuple(top))


def parallel_extension(m: RankTable, e: int) -> RankTable:
    top = [m.rk[a | (1 << e)] for a in range(1 << m.n)]
    return RankTable(m.n + 1, tuple(m.rk) + tuple(top))


# --- Minors system ---

class MatroidSystem(MinorsSystem[RankTable]):
    NAME = "mat"
    MULTIPLICATIVE = True

    def ground_size(self, x: RankTable) -> int:
        return x.n

    def restrict(self, x: RankTable, mask: int) -> RankTable:
        return x.restrict(mask)

    def contract(self, x: RankTable, mask: int) -> RankTable:
        return x.contract(mask)

    def direct_sum(self, x: RankTable, y: RankTable) -> RankTable:
        return x.direct_sum(y)

    def unit(self) -> RankTable:
        return EMPTY

    def to_doc(self, x: RankTable) -> dict[str, Any]:
        return x.to_doc()

    def universal_class(self, x: RankTable) -> dict[str, int]:
        return {"u": x.rank, "v": x.corank}

    def canonical_key(self, x: RankTable) -> Hashable | None:
        if x.n > settings.max_canonical:
            return None
        return canonical_rank(x.n, x.rk)

    def exact_key(self, x: RankTable) -> Hashable:
        return x.rk

    def enumerate(self, k: int) -> list[RankTable]:
        return matroid_classes(k)

    def generator_name(self, x: RankTable) -> str:
        return "c" if x.rank else "l"

    def random(self, rng: random.Random, n: int) -> RankTable:
        return random_matroid(rng, n)


MATROIDS = MatroidSystem()


# --- Tutte polynomials ---

def universal_tutte(m: RankTable) -> MRPoly:
    """sum_A u1^rk(A) v1^null(A) u2^rk(M/A) v2^cork(M/A)."""
    check_size(m.n, settings.max_tutte, "tutte")
    return delcon_evaluate(MATROIDS, m, MATROIDS.universal_spec())


def classical_from_universal(p: MRPoly) -> MRPoly:
    x, y = var(XY, "x"), var(XY, "y")
    return p.specialize({"u1": 1, "v1": y - 1, "u2": x - 1, "v2": 1}, XY)


def corank_nullity(m: RankTable) -> MRPoly:
    """sum_A x^(rk M - rk A) y^(|A| - rk A)."""
    check_size(m.n, settings.max_tutte, "corank-nullity")
    terms: dict = {}
    for a in range(1 << m.n):
        mono = XY.monomial(x=m.rank - m.rk[a], y=m.nullity(a))
        terms[mono] = terms.get(mono, 0) + 1
    return MRPoly(XY, terms)


def multivariate_tutte(m: RankTable) -> MRPoly:
    """sum_A prod_{e in A} alpha_e (x-1)^(rk M - rk A) (y-1)^(|A| - rk A)."""
    check_size(m.n, settings.max_tutte, "multivariate tutte")
    sig = MonoidSig(["x", "y", *indexed("alpha", m.n)])
    x1, y1 = var(sig, "x") - 1, var(sig, "y") - 1
    total = MRPoly.zero(sig)
    for a in range(1 << m.n):
        weight = MRPoly.mono(sig.raw({f"alpha{e}": 1 for e in elements(a)}))
        total = total + weight * x1 ** (m.rank - m.rk[a]) * y1 ** m.nullity(a)
    return total


TUTTE_MODES = ("universal", "classical", "corank-nullity", "multivariate")


def tutte(m: RankTable, mode: str = "classical") -> MRPoly:
    if mode == "universal":
        return universal_tutte(m)
    if mode == "classical":
        return classical_from_universal(universal_tutte(m))
    if mode == "corank-nullity":
        return corank_nullity(m)
    if mode == "multivariate":
        return multivariate_tutte(m)
    raise ValueError(f"unknown tutte mode {mode!r}; expected one of {TUTTE_MODES}")


def at(p: MRPoly, xv: MRPoly | int, yv: MRPoly | int, target: MonoidSig) -> MRPoly:
    """𝔗(x, y) evaluated at two values of ``target``."""
    return p.specialize({"x": xv, "y": yv}, target)


# --- Identities ---

def universal_prefactor_check(m: RankTable) -> Witness | None:
    """T^Mat(M) = u1^rk v2^cork 𝔗(1 + u2/u1, 1 + v1/v2)."""
    sig = laurent(MATROIDS.universal_signature())
    lhs = universal_tutte(m).specialize({}, sig)
    t = tutte(m)
    rhs = at(t, 1 + ratio(sig, "u2", "u1"), 1 + ratio(sig, "v1", "v2"), sig)
    rhs = rhs * var(sig, "u1") ** m.rank * var(sig, "v2") ** m.corank
    if lhs != rhs:
        return witness("tutte-prefactor", MATROIDS, m, lhs, rhs)
    return None


def duality_check(m: RankTable) -> Witness | None:
    """𝔗_{M*}(x, y) = 𝔗_M(y, x), and the universal form swaps (u1,v1,u2,v2) -> (v2,u2,v1,u1)."""
    t, td = tutte(m), tutte(m.dual())
    swapped = at(t, var(XY, "y"), var(XY, "x"), XY)
    if td != swapped:
        return witness("duality", MATROIDS, m, td, swapped)
    sig = MATROIDS.universal_signature()
    u = universal_tutte(m)
    image = u.specialize(
        {"u1": var(sig, "v2"), "v1": var(sig, "u2"), "u2": var(sig, "v1"), "v2": var(sig, "u1")}
    )
    ud = universal_tutte(m.dual())
    if ud != image:
        return witness("universal-duality", MATROIDS, m, ud, image)
    return None


def multiplicativity_check(m1: RankTable, m2: RankTable) -> Witness | None:
    lhs = universal_tutte(m1.direct_sum(m2))
    rhs = universal_tutte(m1) * universal_tutte(m2)
    if lhs != rhs:
        return witness("multiplicativity", MATROIDS, m1.direct_sum(m2), lhs, rhs)
    return None


def bihomogeneity_check(m: RankTable) -> Witness | None:
    for mono in universal_tutte(m).monomials():
        d = mono.as_dict()
        u = d.get("u1", 0) + d.get("u2", 0)
        v = d.get("v1", 0) + d.get("v2", 0)
        if (u, v) != (m.rank, m.corank):
            return witness(
                "bihomogeneity", MATROIDS, m, mono.render(), f"u^{m.rank}*v^{m.corank}"
            )
    return None


def _tutte_minors(m: RankTable):
    for a in range(1 << m.n):
        yield a, tutte(m.restrict(a)), tutte(m.contract(a))


def kung_check(m: RankTable) -> Witness | None:
    """𝔗_M(1-ab, 1-cd) = sum_A a^corank(A) d^null(A) 𝔗_{M|A}(1-a, 1-c) 𝔗_{M/A}(1-b, 1-d).

    Also runs the same identity through the generic convolution formula with
    norms N0 = (-1)^rk (cd)^cork, N1 = (-a)^rk d^cork, N2 = (-ab)^rk.
    """
    a, b, c, d = (var(ABCD, n) for n in "abcd")
    lhs = at(tutte(m), 1 - a * b, 1 - c * d, ABCD)
    rhs = MRPoly.zero(ABCD)
    for s, tr, tc in _tutte_minors(m):
        pref = a ** (m.rank - m.rk[s]) * d ** m.nullity(s)
        rhs = rhs + pref * at(tr, 1 - a, 1 - c, ABCD) * at(tc, 1 - b, 1 - d, ABCD)
    if lhs != rhs:
        return witness("kung", MATROIDS, m, lhs, rhs)

    def norm(u, v):
        return lambda x: u ** x.rank * v ** x.corank

    return convolution_check(
        MATROIDS, m, ABCD,
        norm(-one(ABCD), c * d), None,
        norm(-a, d), None,
        norm(-a * b, one(ABCD)),
    )


def krs_check(m: RankTable) -> Witness | None:
    """𝔗_M(x, y) = sum_A 𝔗_{M|A}(0, y) 𝔗_{M/A}(x, 0)."""
    x, y = var(XY, "x"), var(XY, "y")
    lhs = tutte(m)
    rhs = MRPoly.zero(XY)
    for _, tr, tc in _tutte_minors(m):
        rhs = rhs + at(tr, 0, y, XY) * at(tc, x, 0, XY)
    if lhs != rhs:
        return witness("krs", MATROIDS, m, lhs, rhs)
    return None


def flag_signature(levels: int) -> MonoidSig:
    return MonoidSig([*indexed("a", levels, 1), *indexed("b", levels, 1)])


def iterated_tutte_check(m: RankTable, levels: int = 3) -> Witness | None:
    """𝔗_M(1 - a1..an, 1 - b1..bn) as a sum over flags of
    prod_i a_i^rk(M/A_i) b_i^null(A_{i-1}) 𝔗_{M|A_i/A_{i-1}}(1 - a_i, 1 - b_i).
    """
    if levels < 1:
        raise ValueError("iterated convolution needs at least one level")
    sig = flag_signature(levels)
    a = [var(sig, f"a{i}") for i in range(1, levels + 1)]
    b = [var(sig, f"b{i}") for i in range(1, levels + 1)]
    lhs = at(tutte(m), 1 - math.prod(a, start=one(sig)), 1 - math.prod(b, start=one(sig)), sig)

    # per evaluation; concurrent inserts only ever store equal values
    factors: dict[tuple[int, int, int], MRPoly] = {}

    def factor(i: int, lo: int, hi: int) -> MRPoly:
        hit = factors.get((i, lo, hi))
        if hit is None:
            minor = tutte(MATROIDS.minors(m, lo, hi))
            hit = a[i] ** (m.rank - m.rk[hi]) * b[i] ** m.nullity(lo)
            hit = hit * at(minor, 1 - a[i], 1 - b[i], sig)
            factors[i, lo, hi] = hit
        return hit

    def term(chain: list[int]) -> MRPoly:
        acc = one(sig)
        for i in range(levels):
            acc = acc * factor(i, chain[i], chain[i + 1])
        return acc

    rhs = parallel_sum(list(level_flags(m.n, levels)), term, sig)
    if lhs != rhs:
        return witness("iterated-tutte", MATROIDS, m, lhs, rhs)
    return None


def iterated_check(m: RankTable, levels: int = 3) -> Witness | None:
    """The explicit flag-sum formula, then the generic flag-sum convolution for
    universal norms N_i = u_i^rk v_i^cork, i = 0..levels."""
    w = iterated_tutte_check(m, levels)
    if w is not None:
        return w
    sig = MonoidSig([*indexed("u", levels + 1), *indexed("v", levels + 1)])
    norms = [
        (lambda x, i=i: sig.raw({f"u{i}": x.rank, f"v{i}": x.corank}))
        for i in range(levels + 1)
    ]
    return iterated_convolution_check(MATROIDS, m, sig, norms, [None] * levels)


def signflip_check(m: RankTable) -> Witness | None:
    """𝔗_M(x^2, y^2) = sum_A (1-x)^corank(A) (1+y)^null(A) 𝔗_{M|A}(x, y) 𝔗_{M/A}(-x, -y)."""
    x, y = var(XY, "x"), var(XY, "y")
    lhs = at(tutte(m), x * x, y * y, XY)
    rhs = MRPoly.zero(XY)
    for s, tr, tc in _tutte_minors(m):
        pref = (1 - x) ** (m.rank - m.rk[s]) * (1 + y) ** m.nullity(s)
        rhs = rhs + pref * tr * at(tc, -x, -y, XY)
    if lhs != rhs:
        return witness("signflip", MATROIDS, m, lhs, rhs)
    return None


CONVOLUTIONS = ("kung", "krs", "iterated", "signflip")


def matroid_convolutions(m: RankTable, which: str, levels: int = 3) -> Witness | None:
    if which == "kung":
        return kung_check(m)
    if which == "krs":
        return krs_check(m)
    if which == "iterated":
        return iterated_check(m, levels)
    if which == "signflip":
        return signflip_check(m)
    raise ValueError(f"unknown convolution {which!r}; expected one of {CONVOLUTIONS}")

