"""Arithmetic matroids and their Tutte polynomials.

Multiplicities live on the prime axes of the target monoid: [m] is the
monomial prod a_p^(v_p(m)). Ordinary and p-local polynomials are ring maps
on those axes.
"""
from __future__ import annotations

import itertools
import logging
import random
from collections.abc import Hashable, Iterator, Sequence
from dataclasses import dataclass
from typing import Any

from unitutte_core.algebra import (
    IntMatrix,
    MonoidElem,
    MonoidSig,
    MRPoly,
    factorize,
    p_part,
    quotient_invariants,
)
from unitutte_core.bits import elements, expand, full, iter_submasks, popcount
from unitutte_core.characters import delcon_evaluate, witness
from unitutte_core.config import settings
from unitutte_core.errors import AlgebraDomainError, InvariantViolation, StructureError, check_size
from unitutte_core.matroid import RankTable, tutte
from unitutte_core.minors import MinorsSystem
from unitutte_core.schemas import ArithmeticDoc, PresentationDoc, Witness
from unitutte_core.variables import ABCD, XY, var

logger = logging.getLogger(__name__)

XY_PRIMES = MonoidSig(["x", "y"], primes="nat")
ABCD_PRIMES = MonoidSig(["a", "b", "c", "d"], primes="nat")
# [c_a] -> a u, [l_a] -> v / a
UV_RATIONAL = MonoidSig(["u", "v"], primes="rat")

SPECIALIZATIONS = ("forget", "full", "p_local")


# --- Molecules ---

Molecule = tuple[int, int, int]


def _is_molecule(m: RankTable, r: int, f: int, t: int) -> bool:
    base = m.rk[r]
    for s in iter_submasks(f | t):
        if m.rk[r | s] != base + popcount(s & f):
            return False
    return True


def molecules(m: RankTable) -> Iterator[Molecule]:
    """Disjoint (R, F, T) with rk(A) = rk(R) + |A ∩ F| for every R ⊆ A ⊆ R ∪ F ∪ T."""
    check_size(m.n, settings.max_molecules, "molecules")
    g = m.ground
    for r in range(1 << m.n):
        rest = g & ~r
        for f in iter_submasks(rest):
            for t in iter_submasks(rest & ~f):
                if _is_molecule(m, r, f, t):
                    yield r, f, t


def molecule_sum(mult: Sequence[int], mol: Molecule) -> int:
    """(-1)^|T| sum_{R ⊆ A ⊆ R∪F∪T} (-1)^|(R∪F∪T) - A| m(A)."""
    r, f, t = mol
    top = r | f | t
    total = 0
    for s in iter_submasks(f | t):
        a = r | s
        total += (-1) ** popcount(top & ~a) * mult[a]
    return (-1) ** popcount(t) * total


# --- Arithmetic matroids ---

@dataclass(frozen=True)
class ArithMatroid:
    matroid: RankTable
    mult: tuple[int, ...]

    def __post_init__(self):
        if len(self.mult) != 1 << self.matroid.n:
            want = 1 << self.matroid.n
            raise StructureError(f"multiplicity needs {want} entries, got {len(self.mult)}")

    @classmethod
    def validated(cls, matroid: RankTable, mult: Sequence[int]) -> ArithMatroid:
        x = cls(matroid, tuple(int(v) for v in mult))
        problem = axiom_failure(x)
        if problem is not None:
            raise StructureError(problem)
        return x

    @property
    def n(self) -> int:
        return self.matroid.n

    def restrict(self, a: int) -> ArithMatroid:
        k = popcount(a)
        return ArithMatroid(
            self.matroid.restrict(a), tuple(self.mult[expand(b, a)] for b in range(1 << k))
        )

    def contract(self, a: int) -> ArithMatroid:
        kept = self.matroid.ground & ~a
        k = popcount(kept)
        return ArithMatroid(
            self.matroid.contract(a), tuple(self.mult[expand(b, kept) | a] for b in range(1 << k))
        )

    def direct_sum(self, other: ArithMatroid) -> ArithMatroid:
        low = full(self.n)
        n = self.n + other.n
        return ArithMatroid(
            self.matroid.direct_sum(other.matroid),
            tuple(self.mult[a & low] * other.mult[a >> self.n] for a in range(1 << n)),
        )

    def to_doc(self) -> dict[str, Any]:
        return {"type": "arithmetic", "matroid": self.matroid.to_doc(), "multiplicity": list(self.mult)}

    @classmethod
    def from_doc(cls, doc: ArithmeticDoc | dict) -> ArithMatroid:
        if isinstance(doc, dict):
            doc = ArithmeticDoc.model_validate(doc)
        return cls.validated(RankTable.from_doc(doc.matroid), doc.multiplicity)


def empty_arith(m0: int) -> ArithMatroid:
    """The structure on ∅ with multiplicity m0."""
    return ArithMatroid(RankTable(0, (0,)), (m0,))


def axiom_failure(x: ArithMatroid) -> str | None:
    """First violated axiom among positivity, A1, A2 and P, or None."""
    m, mult = x.matroid, x.mult
    if any(v < 1 for v in mult):
        return "multiplicities must be positive integers"
    for a in range(1 << m.n):
        for e in elements(m.ground & ~a):
            b = a | (1 << e)
            if m.rk[b] == m.rk[a]:
                if mult[a] % mult[b]:
                    return f"A1: m({b}) does not divide m({a}) though {e} is dependent on {a}"
            elif mult[b] % mult[a]:
                return f"A1: m({a}) does not divide m({b}) though {e} is independent of {a}"
    for r, f, t in molecules(m):
        if mult[r] * mult[r | f | t] != mult[r | f] * mult[r | t]:
            return f"A2: molecule ({r}, {f}, {t})"
        if molecule_sum(mult, (r, f, t)) < 0:
            return f"P: molecule ({r}, {f}, {t})"
    return None


def arith_dual(x: ArithMatroid) -> ArithMatroid:
    """(M*, m*(A) = m(E - A))."""
    g = x.matroid.ground
    return ArithMatroid(x.matroid.dual(), tuple(x.mult[g & ~a] for a in range(1 << x.n)))


def biarith_product(x1: ArithMatroid, x2: ArithMatroid) -> ArithMatroid:
    """Pointwise product of multiplicities on one matroid."""
    if x1.matroid != x2.matroid:
        raise AlgebraDomainError("bi-arithmetic product needs identical rank tables")
    out = ArithMatroid(x1.matroid, tuple(a * b for a, b in zip(x1.mult, x2.mult)))
    problem = axiom_failure(out)
    if problem is not None:
        raise InvariantViolation(f"product of arithmetic matroids is not arithmetic: {problem}")
    return out


def trivial(m: RankTable) -> ArithMatroid:
    return ArithMatroid(m, (1,) * (1 << m.n))


# --- Presentations ---

@dataclass(frozen=True)
class AbelianPresentation:
    """Vectors in Z^r ⊕ Z/d_1 ⊕ ... ⊕ Z/d_t."""

    free_rank: int
    torsion: tuple[int, ...]
    columns: tuple[tuple[int, ...], ...]

    @classmethod
    def validated(
        cls, free_rank: int, torsion: Sequence[int], columns: Sequence[Sequence[int]]
    ) -> AbelianPresentation:
        torsion = tuple(int(d) for d in torsion)
        if any(d < 2 for d in torsion):
            raise StructureError("torsion moduli must be at least 2")
        width = free_rank + len(torsion)
        cols = []
        for i, col in enumerate(columns):
            if len(col) != width:
                raise StructureError(f"column {i} has {len(col)} entries, expected {width}")
            reduced = list(int(v) for v in col)
            for j, d in enumerate(torsion):
                reduced[free_rank + j] %= d
            cols.append(tuple(reduced))
        check_size(len(cols), settings.max_presentation_columns, "presentation")
        return cls(free_rank, torsion, tuple(cols))

    @property
    def n(self) -> int:
        return len(self.columns)

    def relation_matrix(self, a: int) -> IntMatrix:
        """[diag(d) | columns of A] on Z^(r+t)."""
        rows = self.free_rank + len(self.torsion)
        gens = [
            tuple(d if i == self.free_rank + j else 0 for i in range(rows))
            for j, d in enumerate(self.torsion)
        ]
        gens += [self.columns[i] for i in elements(a)]
        return IntMatrix.from_rows([[g[i] for g in gens] for i in range(rows)], len(gens))

    def quotient(self, a: int) -> tuple[int, int]:
        """(free rank, torsion order) of G / <A>."""
        return quotient_invariants(self.relation_matrix(a))

    def scaled(self, k: int) -> AbelianPresentation:
        """Every column times k; same matroid, other multiplicities."""
        return AbelianPresentation.validated(
            self.free_rank, self.torsion, [[k * v for v in col] for col in self.columns]
        )

    @classmethod
    def from_doc(cls, doc: PresentationDoc | dict) -> AbelianPresentation:
        if isinstance(doc, dict):
            doc = PresentationDoc.model_validate(doc)
        return cls.validated(doc.free_rank, doc.torsion, doc.columns)

    def to_doc(self) -> dict[str, Any]:
        return {
            "type": "arithmetic_presentation",
            "free_rank": self.free_rank,
            "torsion": list(self.torsion),
            "columns": [list(c) for c in self.columns],
        }


def from_presentation(p: AbelianPresentation) -> ArithMatroid:
    """rk(A) = r - free rank of G/<A>, m(A) = |torsion of G/<A>|."""
    rk, mult = [], []
    for a in range(1 << p.n):
        free, tors = p.quotient(a)
        rk.append(p.free_rank - free)
        mult.append(tors)
    x = ArithMatroid(RankTable.validated(p.n, rk), tuple(mult))
    problem = axiom_failure(x)
    if problem is not None:
        raise InvariantViolation(f"presentation gave a non-arithmetic matroid: {problem}")
    return x


def relation_instances(a: int = 2, b: int = 3) -> dict[str, ArithMatroid]:
    """One instance per relation family among 2-element arithmetic matroids.

    gamma-lambda: (1, a) in Z gives [c_a][l_a] = [c_1][l_1]
    lambda-lambda: (1, a) in Z/ab gives [l_a][l_b] = [l_ab][l_1]
    gamma-gamma: the arithmetic dual of the previous one
    """
    gl = from_presentation(AbelianPresentation.validated(1, (), [(1,), (a,)]))
    ll = from_presentation(AbelianPresentation.validated(0, (a * b,), [(1,), (a,)]))
    return {"gamma-lambda": gl, "lambda-lambda": ll, "gamma-gamma": arith_dual(ll)}


def random_presentation(rng: random.Random, n: int) -> AbelianPresentation:
    r = rng.randint(0, 2)
    torsion = [rng.choice((2, 3, 4, 6)) for _ in range(rng.randint(0, 1))]
    cols = [[rng.randint(-3, 3) for _ in range(r + len(torsion))] for _ in range(n)]
    return AbelianPresentation.validated(r, torsion, cols)


# column palettes per ambient group
_PALETTES: tuple[tuple[int, tuple[int, ...], tuple[tuple[int, ...], ...]], ...] = (
    (1, (), ((0,), (1,), (2,), (3,))),
    (2, (), ((1, 0), (0, 1), (1, 1), (1, 2), (2, 0))),
    (1, (2,), ((1, 0), (0, 1), (1, 1), (2, 0))),
    (0, (6,), ((1,), (2,), (3,))),
)


def small_presentations(n: int) -> list[AbelianPresentation]:
    """Every multiset of n columns from a few fixed palettes in Z, Z^2, Z+Z/2 and Z/6."""
    out = []
    for r, torsion, palette in _PALETTES:
        for cols in itertools.combinations_with_replacement(palette, n):
            out.append(AbelianPresentation.validated(r, torsion, cols))
    return out


def small_arithmetic(n: int) -> list[ArithMatroid]:
    return [from_presentation(p) for p in small_presentations(n)]


def biarithmetic_pairs(n: int) -> list[tuple[ArithMatroid, ArithMatroid]]:
    """Representable pairs on one matroid: (P, P), (P, 2P) and (P, trivial)."""
    out = []
    for p in small_presentations(n):
        x = from_presentation(p)
        out.append((x, x))
        out.append((x, from_presentation(p.scaled(2))))
        out.append((x, trivial(x.matroid)))
    return out


# --- Minors system ---

def _generator(x: ArithMatroid) -> str:
    lo, hi = x.mult[0], x.mult[1]
    if x.matroid.rank:
        return f"c_{hi // lo}"
    return f"l_{lo // hi}"


class ArithmeticSystem(MinorsSystem[ArithMatroid]):
    NAME = "amat"
    MULTIPLICATIVE = True
    TWIST_PRIMES = "nat"

    def ground_size(self, x: ArithMatroid) -> int:
        return x.n

    def restrict(self, x: ArithMatroid, mask: int) -> ArithMatroid:
        return x.restrict(mask)

    def contract(self, x: ArithMatroid, mask: int) -> ArithMatroid:
        return x.contract(mask)

    def direct_sum(self, x: ArithMatroid, y: ArithMatroid) -> ArithMatroid:
        return x.direct_sum(y)

    def unit(self) -> ArithMatroid:
        return empty_arith(1)

    def to_doc(self, x: ArithMatroid) -> dict[str, Any]:
        return x.to_doc()

    def universal_class(self, x: ArithMatroid) -> dict[str, int]:
        return {"u": x.matroid.rank, "v": x.matroid.corank}

    def twist_class(self, x: ArithMatroid) -> tuple[dict[str, int], dict[int, int]]:
        return {}, dict(factorize(x.mult[0]))

    def exact_key(self, x: ArithMatroid) -> Hashable:
        return (x.matroid.rk, x.mult)

    def generator_name(self, x: ArithMatroid) -> str:
        return _generator(x)

    def empty_samples(self) -> list[ArithMatroid]:
        return [empty_arith(k) for k in (1, 2, 6)]

    def random(self, rng: random.Random, n: int) -> ArithMatroid:
        return from_presentation(random_presentation(rng, n))

    def builtin_monoid(self) -> str:
        return "generators c_a, l_a (a >= 1) and (Z>0, *) on the empty set; c_a -> a u, l_a -> v / a"


ARITHMETIC = ArithmeticSystem()


def rational_norm(x: ArithMatroid) -> MonoidElem:
    """u^rk v^cork m(E)/m(∅), the norm behind c_a -> a u and l_a -> v/a."""
    primes: dict[int, int] = {}
    for p, e in factorize(x.mult[-1]):
        primes[p] = primes.get(p, 0) + e
    for p, e in factorize(x.mult[0]):
        primes[p] = primes.get(p, 0) - e
    return UV_RATIONAL.raw({"u": x.matroid.rank, "v": x.matroid.corank}, primes)


# --- Tutte polynomials ---

def universal_arith_character(x: ArithMatroid) -> MRPoly:
    """sum_A [m(A)] u1^rk(A) v1^null(A) u2^rk(M/A) v2^cork(M/A)."""
    check_size(x.n, settings.max_tutte, "arithmetic tutte")
    return delcon_evaluate(ARITHMETIC, x, ARITHMETIC.universal_spec())


def universal_arith_tutte(x: ArithMatroid) -> MRPoly:
    """sum_A [m(A)] (x-1)^(rk M - rk A) (y-1)^(|A| - rk A)."""
    xv, yv = var(XY_PRIMES, "x"), var(XY_PRIMES, "y")
    return universal_arith_character(x).specialize(
        {"u1": 1, "v1": yv - 1, "u2": xv - 1, "v2": 1}, XY_PRIMES
    )


def arith_specialize(p: MRPoly, mode: str, prime: int | None = None, target: MonoidSig = XY) -> MRPoly:
    """Ring map on the prime axes: forget a_p -> 1, full a_p -> p, p_local a_q -> q iff q = p."""
    if mode == "forget":
        image = lambda q: 1  # noqa: E731
    elif mode == "full":
        image = lambda q: q  # noqa: E731
    elif mode == "p_local":
        if prime is None:
            raise AlgebraDomainError("p_local needs a prime")
        image = lambda q: p_part(q, prime)  # noqa: E731
    else:
        raise ValueError(f"unknown specialization {mode!r}; expected one of {SPECIALIZATIONS}")
    return p.specialize({}, target, primes=image)


def arithmetic_tutte(x: ArithMatroid) -> MRPoly:
    """𝔐(x, y) = sum_A m(A) (x-1)^(rk M - rk A) (y-1)^(|A| - rk A)."""
    return arith_specialize(universal_arith_tutte(x), "full")


def arithmetic_tutte_direct(x: ArithMatroid) -> MRPoly:
    xv, yv = var(XY, "x"), var(XY, "y")
    m = x.matroid
    total = MRPoly.zero(XY)
    for a in range(1 << x.n):
        total = total + x.mult[a] * (xv - 1) ** (m.rank - m.rk[a]) * (yv - 1) ** m.nullity(a)
    return total


# --- Identities ---

def _at(p: MRPoly, xv, yv, target: MonoidSig) -> MRPoly:
    return p.specialize({"x": xv, "y": yv}, target)


def forget_check(x: ArithMatroid) -> Witness | None:
    got = arith_specialize(universal_arith_tutte(x), "forget")
    want = tutte(x.matroid)
    if got != want:
        return witness("arith-forget", ARITHMETIC, x, got, want)
    got = arithmetic_tutte(x)
    want = arithmetic_tutte_direct(x)
    if got != want:
        return witness("arith-full", ARITHMETIC, x, got, want)
    return None


def arith_convolution_check(x1: ArithMatroid, x2: ArithMatroid) -> Witness | None:
    """𝔐_(M,m1m2)(1-ab, 1-cd) = sum_A a^(rk M - rk A) d^(|A| - rk A)
    𝔐_(M,m1)|A(1-a, 1-c) 𝔐_(M,m2)/A(1-b, 1-d), with multiplicities kept as [m]."""
    prod = biarith_product(x1, x2)
    sig = ABCD_PRIMES
    a, b, c, d = (var(sig, n) for n in "abcd")
    m = prod.matroid
    lhs = _at(universal_arith_tutte(prod), 1 - a * b, 1 - c * d, sig)
    rhs = MRPoly.zero(sig)
    for s in range(1 << prod.n):
        pref = a ** (m.rank - m.rk[s]) * d ** m.nullity(s)
        left = _at(universal_arith_tutte(x1.restrict(s)), 1 - a, 1 - c, sig)
        right = _at(universal_arith_tutte(x2.contract(s)), 1 - b, 1 - d, sig)
        rhs = rhs + pref * left * right
    if lhs != rhs:
        return witness("arith-convolution", ARITHMETIC, prod, lhs, rhs)
    return None


def biarith_convolution_check(x: ArithMatroid) -> Witness | None:
    """The convolution for (m, m), (m, 1) and (1, m) on the matroid of ``x``."""
    one = trivial(x.matroid)
    for x1, x2 in ((x, x), (x, one), (one, x)):
        w = arith_convolution_check(x1, x2)
        if w is not None:
            return w
    return None


def backman_lenz_check(x: ArithMatroid) -> Witness | None:
    """𝔐(x, y) = sum_A 𝔐_|A(0, y) 𝔗_/A(x, 0) = sum_A 𝔗_|A(0, y) 𝔐_/A(x, 0)."""
    sig = XY_PRIMES
    xv, yv = var(sig, "x"), var(sig, "y")
    lhs = universal_arith_tutte(x)
    first = MRPoly.zero(sig)
    second = MRPoly.zero(sig)
    for s in range(1 << x.n):
        xr, xc = x.restrict(s), x.contract(s)
        first = first + _at(universal_arith_tutte(xr), 0, yv, sig) * _at(
            universal_arith_tutte(trivial(xc.matroid)), xv, 0, sig
        )
        second = second + _at(universal_arith_tutte(trivial(xr.matroid)), 0, yv, sig) * _at(
            universal_arith_tutte(xc), xv, 0, sig
        )
    if lhs != first:
        return witness("backman-lenz-restrict", ARITHMETIC, x, lhs, first)
    if lhs != second:
        return witness("backman-lenz-contract", ARITHMETIC, x, lhs, second)
    return None


def kung_collapse_check(m: RankTable) -> Witness | None:
    """With trivial multiplicities the convolution is Kung's identity."""
    x = trivial(m)
    w = arith_convolution_check(x, x)
    if w is not None:
        return w
    got = arith_specialize(
        _at(universal_arith_tutte(x), 1 - var(ABCD_PRIMES, "a") * var(ABCD_PRIMES, "b"),
            1 - var(ABCD_PRIMES, "c") * var(ABCD_PRIMES, "d"), ABCD_PRIMES),
        "forget",
        target=ABCD,
    )
    a, b, c, d = (var(ABCD, n) for n in "abcd")
    want = tutte(m).specialize({"x": 1 - a * b, "y": 1 - c * d}, ABCD)
    if got != want:
        return witness("arith-kung", ARITHMETIC, x, got, want)
    return None
