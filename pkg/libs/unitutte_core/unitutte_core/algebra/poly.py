from __future__ import annotations

from collections.abc import Callable, Iterable, Mapping
from typing import Any, Union

from sympy.polys.domains import QQ, ZZ, ZZ_I
from sympy.polys.domains.domain import Domain

from unitutte_core.algebra.monoid import MonoidElem, MonoidSig
from unitutte_core.errors import (
    InversionError,
    MissingAssignmentError,
    SignatureMismatchError,
)

Scalar = Any  # element of a sympy domain, or a Python int
Value = Union["MRPoly", MonoidElem, int]

IMAG = ZZ_I(0, 1)


def unify_rings(*rings: Domain) -> Domain:
    out = rings[0]
    for r in rings[1:]:
        out = out.unify(r)
    return out


class MRPoly:
    """Sparse element of a monoid ring: a finite map MonoidElem -> coefficient.

    Coefficients live in a sympy domain (``ZZ``, ``QQ``, ``ZZ_I`` or
    ``QQ_I``). Zero coefficients are never stored. Values are treated as
    immutable once built.
    """

    __slots__ = ("sig", "ring", "terms")

    def __init__(
        self,
        sig: MonoidSig,
        terms: Mapping[MonoidElem, Scalar] | None = None,
        ring: Domain = ZZ,
    ):
        self.sig = sig
        self.ring = ring
        clean: dict[MonoidElem, Scalar] = {}
        for m, c in (terms or {}).items():
            if m.sig is not sig and m.sig != sig:
                raise SignatureMismatchError(f"term over {m.sig!r} in poly over {sig!r}")
            if c:
                clean[m] = c
        self.terms = clean

    # --- Constructors ---

    @classmethod
    def zero(cls, sig: MonoidSig, ring: Domain = ZZ) -> MRPoly:
        return cls(sig, {}, ring)

    @classmethod
    def one(cls, sig: MonoidSig, ring: Domain = ZZ) -> MRPoly:
        return cls(sig, {sig.one(): ring.one}, ring)

    @classmethod
    def const(cls, sig: MonoidSig, c: Scalar, ring: Domain | None = None) -> MRPoly:
        ring = ring or _ring_of(c)
        return cls(sig, {sig.one(): ring.convert(c)}, ring)

    @classmethod
    def mono(cls, m: MonoidElem, c: Scalar = 1, ring: Domain = ZZ) -> MRPoly:
        return cls(m.sig, {m: ring.convert(c)}, ring)

    @classmethod
    def var(cls, sig: MonoidSig, name: str, ring: Domain = ZZ) -> MRPoly:
        """The generator ``name`` (its half-unit on half axes)."""
        return cls(sig, {sig.raw({name: 1}): ring.one}, ring)

    @classmethod
    def from_items(
        cls,
        sig: MonoidSig,
        items: Iterable[tuple[MonoidElem, Scalar]],
        ring: Domain = ZZ,
    ) -> MRPoly:
        acc: dict[MonoidElem, Scalar] = {}
        for m, c in items:
            acc[m] = acc.get(m, ring.zero) + c
        return cls(sig, acc, ring)

    # --- Ring structure ---

    def to_ring(self, ring: Domain) -> MRPoly:
        if ring == self.ring:
            return self
        return MRPoly(self.sig, {m: ring.convert_from(c, self.ring) for m, c in self.terms.items()}, ring)

    def _coerce(self, other: Value) -> MRPoly:
        if isinstance(other, MRPoly):
            if other.sig is not self.sig and other.sig != self.sig:
                raise SignatureMismatchError(f"{self.sig!r} vs {other.sig!r}")
            return other
        if isinstance(other, MonoidElem):
            return MRPoly.mono(other, 1, self.ring)
        return MRPoly.const(self.sig, other, _ring_of(other, self.ring))

    def _aligned(self, other: Value) -> tuple[MRPoly, MRPoly]:
        o = self._coerce(other)
        ring = unify_rings(self.ring, o.ring)
        return self.to_ring(ring), o.to_ring(ring)

    def __add__(self, other: Value) -> MRPoly:
        a, b = self._aligned(other)
        terms = dict(a.terms)
        for m, c in b.terms.items():
            terms[m] = terms.get(m, a.ring.zero) + c
        return MRPoly(a.sig, terms, a.ring)

    __radd__ = __add__

    def __neg__(self) -> MRPoly:
        return MRPoly(self.sig, {m: -c for m, c in self.terms.items()}, self.ring)

    def __sub__(self, other: Value) -> MRPoly:
        return self + (-self._coerce(other))

    def __rsub__(self, other: Value) -> MRPoly:
        return self._coerce(other) + (-self)

    def __mul__(self, other: Value) -> MRPoly:
        a, b = self._aligned(other)
        if len(b.terms) == 1 and b.sig.one() in b.terms:
            c0 = b.terms[b.sig.one()]
            return MRPoly(a.sig, {m: c * c0 for m, c in a.terms.items()}, a.ring)
        terms: dict[MonoidElem, Scalar] = {}
        zero = a.ring.zero
        for m1, c1 in a.terms.items():
            for m2, c2 in b.terms.items():
                m = m1 * m2
                terms[m] = terms.get(m, zero) + c1 * c2
        return MRPoly(a.sig, terms, a.ring)

    __rmul__ = __mul__

    def __pow__(self, k: int) -> MRPoly:
        if k < 0:
            return self.inverse() ** (-k)
        result = MRPoly.one(self.sig, self.ring)
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def inverse(self) -> MRPoly:
        """Inverse of a unit: a single invertible monomial with unit coefficient."""
        if len(self.terms) != 1:
            raise InversionError(f"{self.render()} is not a monomial")
        (m, c), = self.terms.items()
        if not m.is_invertible():
            raise InversionError(f"monomial {m.render()} is not invertible in {self.sig!r}")
        ring = self.ring
        if ring.is_Field:
            inv_c = ring.one / c
        elif c == ring.one or c == -ring.one:
            inv_c = c
        elif ring == ZZ_I and c in (IMAG, -IMAG):
            inv_c = -c
        else:
            raise InversionError(f"coefficient {c} is not a unit of {ring}")
        return MRPoly(self.sig, {m.inverse(): inv_c}, ring)

    def __eq__(self, other: object) -> bool:
        if isinstance(other, (int, MonoidElem)):
            other = self._coerce(other)
        if not isinstance(other, MRPoly):
            return NotImplemented
        if other.sig != self.sig:
            return False
        ring = unify_rings(self.ring, other.ring)
        return self.to_ring(ring).terms == other.to_ring(ring).terms

    __hash__ = None  # type: ignore[assignment]

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __len__(self) -> int:
        return len(self.terms)

    @property
    def is_zero(self) -> bool:
        return not self.terms

    def coeff(self, m: MonoidElem) -> Scalar:
        return self.terms.get(m, self.ring.zero)

    def constant(self) -> Scalar:
        return self.coeff(self.sig.one())

    def monomials(self) -> list[MonoidElem]:
        return sorted(self.terms, key=lambda m: m.sort_key())

    def map_coeffs(self, fn: Callable[[Scalar], Scalar], ring: Domain | None = None) -> MRPoly:
        ring = ring or self.ring
        return MRPoly(self.sig, {m: fn(c) for m, c in self.terms.items()}, ring)

    # --- Specialization ---

    def specialize(
        self,
        assignment: Mapping[str, Value],
        target: MonoidSig | None = None,
        primes: Callable[[int], Value] | None = None,
        strict: bool = False,
    ) -> MRPoly:
        """Ring morphism defined on generators.

        ``assignment`` maps an axis name to its image (for a half axis: the
        image of its half-unit). Unassigned axes whose name exists in
        ``target`` with the same exponent scale carry over, unless
        ``strict``. Prime axes carry over when ``primes`` is not given and
        the target has prime axes; otherwise ``primes(p)`` is the image of
        the prime generator ``a_p``.
        """
        target = target or self.sig
        images: dict[str, MRPoly] = {}
        for name, v in assignment.items():
            if isinstance(v, MRPoly):
                if v.sig is not target and v.sig != target:
                    raise SignatureMismatchError(f"image of {name} lives over {v.sig!r}")
                images[name] = v
            elif isinstance(v, MonoidElem):
                images[name] = MRPoly.mono(v)
            else:
                images[name] = MRPoly.const(target, v, _ring_of(v))

        ring = unify_rings(self.ring, *(p.ring for p in images.values()))
        powers: dict[tuple[str, int], MRPoly] = {}

        def power(key: str, e: int, base: Callable[[], MRPoly]) -> MRPoly:
            hit = powers.get((key, e))
            if hit is None:
                hit = base() ** e
                powers[(key, e)] = hit
            return hit

        acc: dict[MonoidElem, Scalar] = {}
        for m, c in self.terms.items():
            carried = [0] * len(target.axes)
            carried_primes: list[tuple[int, int]] = []
            factors: list[MRPoly] = []
            for ax, e in zip(self.sig.axes, m.exps):
                if not e:
                    continue
                if ax.name in images:
                    img = images[ax.name]
                    factors.append(power(ax.name, e, lambda img=img: img))
                    continue
                t_idx = target.index.get(ax.name)
                if strict or t_idx is None or target.axes[t_idx].half != ax.half:
                    raise MissingAssignmentError(f"no value for axis {ax.name!r}")
                if e < 0 and not target.axes[t_idx].signed:
                    raise InversionError(f"axis {ax.name!r} is not invertible in the target")
                carried[t_idx] += e
            for p, e in m.primes:
                if primes is not None:
                    factors.append(
                        power(f"[{p}]", e, lambda p=p: _as_poly(primes(p), target))
                    )
                elif target.primes is None:
                    raise MissingAssignmentError(f"no value for prime axis a_{p}")
                else:
                    carried_primes.append((p, e))
            term = MRPoly(target, {target.canonicalize(carried, carried_primes): ring.convert_from(c, self.ring)}, ring)
            for f in factors:
                term = term * f
            if term.ring != ring:
                wider = unify_rings(ring, term.ring)
                acc = {k: wider.convert_from(v, ring) for k, v in acc.items()}
                term = term.to_ring(wider)
                ring = wider
            for tm, tc in term.terms.items():
                acc[tm] = acc.get(tm, ring.zero) + tc
        return MRPoly(target, acc, ring)

    # --- Rendering ---

    def render(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for m in self.monomials():
            coeff = render_coeff(self.terms[m], self.ring)
            mono = m.render()
            parts.append(f"{coeff}*{mono}" if mono else coeff)
        return " + ".join(parts)

    def to_json_terms(self) -> list[dict]:
        return [
            {
                "coeff": render_coeff(self.terms[m], self.ring),
                "monomial": {
                    **({"primes": {str(p): e for p, e in m.primes}} if m.primes else {}),
                    **{k: _json_exp(v) for k, v in m.as_dict().items()},
                },
            }
            for m in self.monomials()
        ]

    def __repr__(self) -> str:
        return f"MRPoly({self.render()})"


def _json_exp(v) -> int | str:
    return int(v) if v.denominator == 1 else f"{v.numerator}/{v.denominator}"


def _ring_of(c: Any, default: Domain = ZZ) -> Domain:
    if isinstance(c, int) or ZZ.of_type(c):
        return default
    if QQ.of_type(c):
        return default.unify(QQ)
    if hasattr(c, "parent"):
        return c.parent()
    return default


def _as_poly(v: Value, target: MonoidSig) -> MRPoly:
    if isinstance(v, MRPoly):
        return v
    if isinstance(v, MonoidElem):
        return MRPoly.mono(v)
    return MRPoly.const(target, v)


def render_coeff(c: Scalar, ring: Domain) -> str:
    if ring.is_GaussianRing or ring.is_GaussianField:
        re, im = str(ring.dom.to_sympy(c.x)), str(ring.dom.to_sympy(c.y))
        if not c.y:
            return re
        sign = "-" if im.startswith("-") else "+"
        return f"({re}{sign}{im.lstrip('-')}i)"
    return str(ring.to_sympy(c))
