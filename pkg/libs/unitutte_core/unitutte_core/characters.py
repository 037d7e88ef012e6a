"""Tutte characters over an arbitrary minors system.

A character is the convolution N1 * tau * N2 of two norms and a twist:

    T(X) = sum over A ⊆ E of N1(X|A) * tau(X|A/A) * N2(X/A)

Everything here works on any :class:`MinorsSystem`; the family modules only
supply structures, norms and twists.
"""
from __future__ import annotations

import itertools
import logging
import math
from collections.abc import Callable, Iterator, Mapping, Sequence
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Any

from sympy.polys.domains import QQ, ZZ
from sympy.polys.domains.domain import Domain

from unitutte_core.algebra import MonoidElem, MonoidSig, MRPoly
from unitutte_core.bits import compress, elements, full, popcount
from unitutte_core.config import settings
from unitutte_core.errors import RingModeError, UnsupportedSystemError
from unitutte_core.minors import COPIES, MinorsSystem
from unitutte_core.schemas import Witness

logger = logging.getLogger(__name__)

NormValue = MRPoly | MonoidElem | int
Norm = Callable[[Any], NormValue]

SCALARS = MonoidSig(())


def as_poly(v: NormValue, sig: MonoidSig, ring: Domain = ZZ) -> MRPoly:
    if isinstance(v, MRPoly):
        return v
    if isinstance(v, MonoidElem):
        return MRPoly.mono(v, 1, ring)
    return MRPoly.const(sig, v, ring)


@dataclass(frozen=True)
class CharacterSpec:
    """(norm1, twist, norm2) over a target signature.

    ``labeled`` marks specs whose values depend on element labels (per-element
    variables); those are never memoized by isomorphism class.
    """

    sig: MonoidSig
    norm1: Norm
    norm2: Norm
    twist: Norm | None = None
    ring: Domain = ZZ
    labeled: bool = False

    def n1(self, x) -> MRPoly:
        return as_poly(self.norm1(x), self.sig, self.ring)

    def n2(self, x) -> MRPoly:
        return as_poly(self.norm2(x), self.sig, self.ring)

    def tau(self, x) -> MRPoly:
        if self.twist is None:
            return MRPoly.one(self.sig, self.ring)
        return as_poly(self.twist(x), self.sig, self.ring)


def signed(system: MinorsSystem, norm: Norm, sig: MonoidSig) -> Norm:
    """N̄(X) = (-1)^|E| N(X)."""

    def bar(x):
        v = as_poly(norm(x), sig)
        return -v if system.ground_size(x) % 2 else v

    return bar


def witness(
    identity: str,
    system: MinorsSystem,
    x,
    left: Any = "",
    right: Any = "",
    *,
    subsets: Sequence[int] = (),
    elements_: Sequence[int] = (),
    detail: str = "",
) -> Witness:
    render = lambda v: v.render() if isinstance(v, MRPoly) else str(v)  # noqa: E731
    w = Witness(
        identity=identity,
        structure=system.to_doc(x),
        subsets=list(subsets),
        elements=list(elements_),
        left=render(left),
        right=render(right),
        detail=detail,
    )
    logger.debug("identity %s failed on %s", identity, w.structure)
    return w


def _chunks(items: list, k: int) -> list[list]:
    k = max(1, min(k, len(items)))
    size = -(-len(items) // k)
    return [items[i : i + size] for i in range(0, len(items), size)]


def parallel_sum(
    items: list,
    fn: Callable[[Any], MRPoly],
    sig: MonoidSig,
    ring: Domain = ZZ,
    threads: int | None = None,
) -> MRPoly:
    """Sum ``fn`` over ``items``; partial sums are reduced in submission order."""
    threads = threads or settings.threads

    def partial(chunk: list) -> MRPoly:
        acc = MRPoly.zero(sig, ring)
        for it in chunk:
            acc = acc + fn(it)
        return acc

    if threads <= 1 or len(items) < 2:
        return partial(items)
    with ThreadPoolExecutor(max_workers=threads) as pool:
        parts = list(pool.map(partial, _chunks(items, threads)))
    total = MRPoly.zero(sig, ring)
    for p in parts:
        total = total + p
    return total


# --- Characters ---

def coproduct_terms(system: MinorsSystem, x) -> Iterator[tuple[int, Any, Any]]:
    """(A, X|A, X/A) for every A ⊆ E in increasing bitmask order."""
    for a in range(1 << system.ground_size(x)):
        yield a, system.restrict(x, a), system.contract(x, a)


def tutte_character(system: MinorsSystem, x, spec: CharacterSpec) -> MRPoly:
    n = system.ground_size(x)

    def term(a: int) -> MRPoly:
        xa = system.restrict(x, a)
        k = popcount(a)
        return spec.n1(xa) * spec.tau(system.contract(xa, full(k))) * spec.n2(system.contract(x, a))

    return parallel_sum(list(range(1 << n)), term, spec.sig, spec.ring)


def delcon_evaluate(
    system: MinorsSystem,
    x,
    spec: CharacterSpec,
    memo: bool = True,
) -> MRPoly:
    """Deletion-contraction on the smallest element.

    T(X) = N1(X|e) T(X/e) + N2(X/e^c) T(X∖e), with T = tau on the empty set.
    The cache is per call and keyed by isomorphism class when available.
    """
    cache: dict = {}
    use_iso = memo and not spec.labeled

    def key_of(y):
        if not memo:
            return None
        k = system.canonical_key(y) if use_iso else None
        return ("iso", k) if k is not None else ("exact", system.exact_key(y))

    def rec(y) -> MRPoly:
        n = system.ground_size(y)
        if n == 0:
            return spec.tau(y)
        key = key_of(y)
        if key is not None and key in cache:
            return cache[key]
        rest = full(n) & ~1
        val = spec.n1(system.restrict(y, 1)) * rec(system.contract(y, 1))
        val = val + spec.n2(system.contract(y, rest)) * rec(system.delete(y, 1))
        if key is not None:
            cache[key] = val
        return val

    return rec(x)


# --- Identities ---

def inverse_norm_check(system: MinorsSystem, x, norm: Norm, sig: MonoidSig) -> Witness | None:
    """sum_A (-1)^|A| N(X|A) N(X/A) vanishes unless X lives on the empty set."""
    total = MRPoly.zero(sig)
    for a, xa, xc in coproduct_terms(system, x):
        t = as_poly(norm(xa), sig) * as_poly(norm(xc), sig)
        total = total - t if popcount(a) % 2 else total + t
    expected = MRPoly.one(sig) if system.ground_size(x) == 0 else MRPoly.zero(sig)
    if total != expected:
        return witness("inverse-norm", system, x, total, expected)
    return None


def convolution_check(
    system: MinorsSystem,
    x,
    sig: MonoidSig,
    n0: Norm,
    tau1: Norm | None,
    n1: Norm,
    tau2: Norm | None,
    n2: Norm,
    ring: Domain = ZZ,
) -> Witness | None:
    """T_{N̄0,τ1τ2,N2}(X) = sum_A T_{N̄0,τ1,N1}(X|A) T_{N̄1,τ2,N2}(X/A)."""
    return iterated_convolution_check(system, x, sig, [n0, n1, n2], [tau1, tau2], ring)


def _twist_product(taus: Sequence[Norm | None], sig: MonoidSig, ring: Domain) -> Norm:
    def tau(x):
        acc = MRPoly.one(sig, ring)
        for t in taus:
            if t is not None:
                acc = acc * as_poly(t(x), sig, ring)
        return acc

    return tau


def level_flags(n: int, levels: int) -> Iterator[list[int]]:
    """Chains ∅ = A0 ⊆ A1 ⊆ ... ⊆ A_levels = E, as bitmask lists."""
    for assign in itertools.product(range(1, levels + 1), repeat=n):
        chain = [0]
        for i in range(1, levels + 1):
            chain.append(sum(1 << e for e, lv in enumerate(assign) if lv <= i))
        yield chain


def iterated_convolution_check(
    system: MinorsSystem,
    x,
    sig: MonoidSig,
    norms: Sequence[Norm],
    taus: Sequence[Norm | None],
    ring: Domain = ZZ,
) -> Witness | None:
    """Flag-sum form of the convolution formula for norms N0..Nn and twists τ1..τn.

    T_{N̄0, τ1...τn, Nn}(X) = sum over flags of prod_i T_{N̄_{i-1}, τ_i, N_i}(X|A_i/A_{i-1})
    """
    levels = len(taus)
    if len(norms) != levels + 1 or levels < 1:
        raise ValueError("need n twists and n + 1 norms")
    n = system.ground_size(x)

    lhs_spec = CharacterSpec(
        sig, signed(system, norms[0], sig), norms[-1], _twist_product(taus, sig, ring), ring, True
    )
    lhs = tutte_character(system, x, lhs_spec)

    specs = [
        CharacterSpec(sig, signed(system, norms[i], sig), norms[i + 1], taus[i], ring, True)
        for i in range(levels)
    ]
    if levels == 1:
        rhs = tutte_character(system, x, specs[0])
    else:
        def term(chain: list[int]) -> MRPoly:
            acc = MRPoly.one(sig, ring)
            for i, spec in enumerate(specs):
                acc = acc * tutte_character(system, system.minors(x, chain[i], chain[i + 1]), spec)
            return acc

        rhs = parallel_sum(list(level_flags(n, levels)), term, sig, ring)
    if lhs != rhs:
        return witness(f"convolution[{levels}]", system, x, lhs, rhs)
    return None


# --- Grothendieck monoid ---

@dataclass
class Presentation:
    generators: list[str]
    relations: list[tuple[tuple[str, str], tuple[str, str]]] = field(default_factory=list)

    def render(self) -> str:
        lines = ["generators: " + ", ".join(self.generators)]
        if not self.relations:
            lines.append("relations: none")
        for lhs, rhs in self.relations:
            lines.append(f"relation: {'*'.join(lhs)} = {'*'.join(rhs)}")
        return "\n".join(lines)


def _split_names(system: MinorsSystem, x) -> tuple[tuple[str, str], tuple[str, str]]:
    """Generator pairs ([X|e],[X/e]) and ([X|f],[X/f]) of a 2-element structure."""
    g = system.generator_name
    first = (g(system.restrict(x, 1)), g(system.contract(x, 1)))
    second = (g(system.restrict(x, 2)), g(system.contract(x, 2)))
    return first, second


def grothendieck_relations(system: MinorsSystem) -> Presentation:
    gens = sorted({system.generator_name(x) for x in system.enumerate(1)})
    pairs = system.enumerate(2)
    seen: set = set()
    relations = []
    for x in pairs:
        first, second = _split_names(system, x)
        a, b = tuple(sorted(first)), tuple(sorted(second))
        if a == b:
            continue
        rel = (min(a, b), max(a, b))
        if rel not in seen:
            seen.add(rel)
            relations.append(rel)
    relations.sort()
    logger.info("%s: %d generators, %d relations", system.NAME, len(gens), len(relations))
    return Presentation(gens, relations)


def verify_norm_candidate(
    system: MinorsSystem,
    mapping: Mapping[str, NormValue] | Norm,
    sig: MonoidSig,
    structures: Sequence | None = None,
    samples: Sequence | None = None,
) -> Witness | None:
    """Does a map on 1-element classes extend to a norm?

    Checks [X|e][X/e] = [X|f][X/f] on 2-element structures and
    [X ⊕ Y] = [X] for 1-element X and Y on the empty set. ``mapping`` is a
    table keyed by generator name or a function on 1-element structures.
    """
    if callable(mapping):
        value = lambda y: as_poly(mapping(y), sig)  # noqa: E731
    else:
        value = lambda y: as_poly(mapping[system.generator_name(y)], sig)  # noqa: E731

    twos = list(structures) if structures is not None else system.enumerate(2)
    samples = list(samples) if samples is not None else system.empty_samples()

    ones: list = []
    for x in twos:
        lhs = value(system.restrict(x, 1)) * value(system.contract(x, 1))
        rhs = value(system.restrict(x, 2)) * value(system.contract(x, 2))
        if lhs != rhs:
            return witness("norm-candidate", system, x, lhs, rhs, elements_=[0, 1])
        ones.extend(system.restrict(x, b) for b in (1, 2))
        ones.extend(system.contract(x, b) for b in (1, 2))
    if structures is None:
        try:
            ones.extend(system.enumerate(1))
        except UnsupportedSystemError:
            pass
    for x in ones:
        base = value(x)
        for y in samples:
            summed = value(system.direct_sum(x, y))
            if summed != base:
                return witness("norm-candidate-unit", system, x, summed, base)
    return None


# --- General recurrences ---

def recurrence_welldef_check(
    system: MinorsSystem,
    c1: Norm,
    c2: Norm,
    sig: MonoidSig,
    max_size: int,
    tau: Norm | None = None,
    ring: Domain = ZZ,
    structures: Callable[[int], Sequence] | None = None,
) -> Witness | None:
    """Well-definedness of Φ(X) = c1(X|e)Φ(X/e) + c2(X/e^c)Φ(X∖e) up to ``max_size``.

    Φ is computed with the smallest element as pivot. For every structure
    and every pair e < f we compare

        (c1(X_ef|e)c1(X_ef/e) - c1(X_ef|f)c1(X_ef/f)) Φ(X/{e,f})
        (c2(X^ef|e)c2(X^ef/e) - c2(X^ef|f)c2(X^ef/f)) Φ(X∖{e,f})

    where X_ef = X|{e,f} and X^ef = X/{e,f}^c.
    """
    spec = CharacterSpec(sig, c1, c2, tau, ring, labeled=True)
    enum = structures or system.enumerate
    coef1 = lambda y: as_poly(c1(y), sig, ring)  # noqa: E731
    coef2 = lambda y: as_poly(c2(y), sig, ring)  # noqa: E731

    def defect(coef, pair) -> MRPoly:
        return coef(system.restrict(pair, 1)) * coef(system.contract(pair, 1)) - coef(
            system.restrict(pair, 2)
        ) * coef(system.contract(pair, 2))

    count = 0
    for size in range(2, max_size + 1):
        for x in enum(size):
            count += 1
            for e, f in itertools.combinations(range(size), 2):
                ef = (1 << e) | (1 << f)
                rest = full(size) & ~ef
                left = defect(coef1, system.restrict(x, ef)) * delcon_evaluate(
                    system, system.contract(x, ef), spec
                )
                right = defect(coef2, system.contract(x, rest)) * delcon_evaluate(
                    system, system.delete(x, ef), spec
                )
                if left != right:
                    return witness("general-recurrence", system, x, left, right, elements_=[e, f])
    logger.info("%s: recurrence well defined on %d structures", system.NAME, count)
    return None


# --- Exponential ---

def exp_star(system: MinorsSystem, x, nu: Norm, sig: MonoidSig, ring: Domain = QQ) -> MRPoly:
    """exp_*(ν)(X) = (1/n!) sum over orders σ of prod_i ν(X^σ_i).

    X^σ_i is the 1-element minor (X|{σ1..σi})/{σ1..σ(i-1)}. Only ν on
    1-element structures is used.
    """
    if not ring.is_Field:
        raise RingModeError(f"exp_* needs a rational coefficient ring, got {ring}")
    cache: dict = {}

    def orders(y, mask: int) -> MRPoly:
        # sum over orders of the elements of ``mask``; the last one is contracted onto
        if mask == 0:
            return MRPoly.one(sig, ring)
        if mask in cache:
            return cache[mask]
        acc = MRPoly.zero(sig, ring)
        for g in elements(mask):
            rest = mask & ~(1 << g)
            last = system.minors(y, rest, mask)
            acc = acc + as_poly(nu(last), sig, ring) * orders(y, rest)
        cache[mask] = acc
        return acc

    n = system.ground_size(x)
    total = orders(x, full(n)).to_ring(ring)
    return total * ring(1, math.factorial(n))


def exp_star_check(system: MinorsSystem, x, norm: Norm, sig: MonoidSig) -> Witness | None:
    got = exp_star(system, x, norm, sig)
    expected = as_poly(norm(x), sig).to_ring(QQ)
    if got != expected:
        return witness("exp-star", system, x, got, expected)
    return None



# --- Engine self-checks ---

def delcon_check(system: MinorsSystem, x, spec: CharacterSpec) -> Witness | None:
    """Deletion-contraction agrees with the subset expansion."""
    lhs = tutte_character(system, x, spec)
    rhs = delcon_evaluate(system, x, spec)
    if lhs != rhs:
        return witness("delcon", system, x, lhs, rhs)
    return None


def norm_law_check(system: MinorsSystem, x, norm: Norm, sig: MonoidSig) -> Witness | None:
    """N(X) = N(X|A) N(X/A) for every A."""
    whole = as_poly(norm(x), sig)
    for a, xa, xc in coproduct_terms(system, x):
        split = as_poly(norm(xa), sig) * as_poly(norm(xc), sig)
        if split != whole:
            return witness("norm-law", system, x, split, whole, subsets=[a])
    return None


def homogeneity_check(system: MinorsSystem, x) -> Witness | None:
    """Each monomial of the universal character, copies merged, is the class of X."""
    target = {k: v for k, v in system.universal_class(x).items() if v}
    value = tutte_character(system, x, system.universal_spec())
    names = system.UNIVERSAL_AXES
    rules = {w: (s, t) for w, s, t in system.UNIVERSAL_RULES}
    for mono in value.monomials():
        d = mono.as_dict()
        merged = {n: sum(d.get(f"{n}{c}", 0) for c in COPIES) for n in names}
        if _rewrite(merged, rules) != _rewrite(dict(target), rules):
            return witness("homogeneity", system, x, mono.render(), str(target))
    return None


def _rewrite(exps: dict, rules: dict) -> dict:
    out = {k: v for k, v in exps.items()}
    for w, (s, t) in rules.items():
        q, r = divmod(out.get(w, 0), 2)
        out[w] = r
        out[s] = out.get(s, 0) + q
        out[t] = out.get(t, 0) + q
    return {k: v for k, v in out.items() if v}


def axioms_check(system: MinorsSystem, x, a: int, b: int) -> Witness | None:
    """Coassociativity, counit and unit on disjoint A, B ⊆ E."""
    n = system.ground_size(x)
    key = system.exact_key
    ab = a | b
    checks = [
        ("restrict-restrict", system.restrict(system.restrict(x, ab), compress(a, ab)), system.restrict(x, a)),
        ("contract-contract", system.contract(system.contract(x, a), compress(b, full(n) & ~a)), system.contract(x, ab)),
        ("contract-restrict", system.restrict(system.contract(x, a), compress(b, full(n) & ~a)), system.minors(x, a, ab)),
        ("counit-restrict", system.restrict(x, full(n)), x),
        ("counit-contract", system.contract(x, 0), x),
        ("unit", system.direct_sum(x, system.unit()), x),
    ]
    for name, got, want in checks:
        if key(got) != key(want):
            return witness(f"axiom-{name}", system, x, str(key(got)), str(key(want)), subsets=[a, b])
    return None
