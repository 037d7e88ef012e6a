from __future__ import annotations

from collections.abc import Iterable, Mapping, Sequence
from dataclasses import dataclass
from fractions import Fraction

from unitutte_core.errors import AlgebraDomainError, SignatureMismatchError

PRIME_MODES = (None, "nat", "rat")


@dataclass(frozen=True)
class Axis:
    """One generator of an exponent monoid.

    ``signed`` allows negative exponents (Laurent axis). ``half`` stores
    exponents doubled so that half-integer powers stay integral.
    """

    name: str
    signed: bool = False
    half: bool = False


@dataclass(frozen=True)
class Rule:
    """Quotient relation ``gen^2 -> into[0] * into[1]``."""

    gen: str
    into: tuple[str, str]


class MonoidSig:
    """A finitely presented commutative exponent monoid.

    Canonical forms reduce every ruled generator below exponent 2. Rule
    targets may not be ruled themselves, so one pass is enough and the
    result does not depend on the order rules fire in.
    """

    __slots__ = ("axes", "rules", "primes", "index", "_rule_idx", "_ruled", "_key")

    def __init__(
        self,
        axes: Iterable[Axis | str],
        rules: Iterable[Rule] = (),
        primes: str | None = None,
    ):
        self.axes: tuple[Axis, ...] = tuple(
            a if isinstance(a, Axis) else Axis(a) for a in axes
        )
        self.rules: tuple[Rule, ...] = tuple(rules)
        if primes not in PRIME_MODES:
            raise AlgebraDomainError(f"unknown prime mode {primes!r}")
        self.primes = primes

        self.index: dict[str, int] = {}
        for i, ax in enumerate(self.axes):
            if ax.name in self.index:
                raise AlgebraDomainError(f"duplicate axis {ax.name!r}")
            self.index[ax.name] = i

        ruled = {r.gen for r in self.rules}
        if len(ruled) != len(self.rules):
            raise AlgebraDomainError("at most one rule per generator")
        idx = []
        for r in self.rules:
            for name in (r.gen, *r.into):
                if name not in self.index:
                    raise AlgebraDomainError(f"rule mentions unknown axis {name!r}")
            if r.gen in r.into or ruled.intersection(r.into):
                raise AlgebraDomainError(f"rule {r} is not of the supported shape")
            gen_axis = self.axes[self.index[r.gen]]
            if gen_axis.signed or gen_axis.half:
                raise AlgebraDomainError(f"ruled axis {r.gen!r} must be a plain axis")
            idx.append((self.index[r.gen], self.index[r.into[0]], self.index[r.into[1]]))
        self._rule_idx = tuple(idx)
        self._ruled = frozenset(g for g, _, _ in idx)
        self._key = (self.axes, self.rules, self.primes)

    def __eq__(self, other: object) -> bool:
        if self is other:
            return True
        return isinstance(other, MonoidSig) and self._key == other._key

    def __hash__(self) -> int:
        return hash(self._key)

    def __repr__(self) -> str:
        names = ",".join(a.name for a in self.axes)
        rules = ",".join(f"{r.gen}^2={r.into[0]}{r.into[1]}" for r in self.rules)
        return f"MonoidSig({names}{'; ' + rules if rules else ''}; primes={self.primes})"

    @property
    def names(self) -> tuple[str, ...]:
        return tuple(a.name for a in self.axes)

    def axis(self, name: str) -> Axis:
        return self.axes[self.index[name]]

    def one(self) -> MonoidElem:
        return MonoidElem(self, (0,) * len(self.axes), ())

    def canonicalize(
        self,
        exps: Sequence[int],
        primes: Iterable[tuple[int, int]] | Mapping[int, int] = (),
    ) -> MonoidElem:
        """Bring a raw (stored-unit) exponent vector to canonical form."""
        if len(exps) != len(self.axes):
            raise AlgebraDomainError(
                f"exponent vector of length {len(exps)} for {len(self.axes)} axes"
            )
        v = list(exps)
        for g, a, b in self._rule_idx:
            if v[g] < 0:
                raise AlgebraDomainError(f"negative exponent on ruled axis {self.axes[g].name}")
            q, r = divmod(v[g], 2)
            if q:
                v[g] = r
                v[a] += q
                v[b] += q
        for ax, e in zip(self.axes, v):
            if e < 0 and not ax.signed:
                raise AlgebraDomainError(f"negative exponent {e} on axis {ax.name!r}")
        return MonoidElem(self, tuple(v), self._canonical_primes(primes))

    def _canonical_primes(self, primes) -> tuple[tuple[int, int], ...]:
        items = primes.items() if isinstance(primes, Mapping) else primes
        merged: dict[int, int] = {}
        for p, e in items:
            merged[p] = merged.get(p, 0) + e
        out = tuple(sorted((p, e) for p, e in merged.items() if e))
        if out:
            if self.primes is None:
                raise AlgebraDomainError("signature has no prime axes")
            if self.primes == "nat" and any(e < 0 for _, e in out):
                raise AlgebraDomainError("negative prime exponent in a natural monoid")
        return out

    def raw(
        self,
        exps: Mapping[str, int] | None = None,
        primes: Mapping[int, int] | None = None,
    ) -> MonoidElem:
        """Element from stored-unit exponents (half axes already doubled)."""
        v = [0] * len(self.axes)
        for name, e in (exps or {}).items():
            if name not in self.index:
                raise AlgebraDomainError(f"unknown axis {name!r}")
            v[self.index[name]] += e
        return self.canonicalize(v, primes or ())

    def monomial(self, primes: Mapping[int, int] | None = None, **exps: int | Fraction) -> MonoidElem:
        """Element from true exponents; half axes accept multiples of 1/2."""
        stored = {}
        for name, e in exps.items():
            if name not in self.index:
                raise AlgebraDomainError(f"unknown axis {name!r}")
            if self.axes[self.index[name]].half:
                doubled = Fraction(e) * 2
                if doubled.denominator != 1:
                    raise AlgebraDomainError(f"exponent {e} is not a half-integer")
                stored[name] = int(doubled)
            else:
                if Fraction(e).denominator != 1:
                    raise AlgebraDomainError(f"fractional exponent {e} on integral axis {name!r}")
                stored[name] = int(e)
        return self.raw(stored, primes)

    def extended(
        self,
        axes: Iterable[Axis | str] = (),
        rules: Iterable[Rule] = (),
        primes: str | None = ...,  # type: ignore[assignment]
    ) -> MonoidSig:
        return MonoidSig(
            (*self.axes, *axes),
            (*self.rules, *rules),
            self.primes if primes is ... else primes,
        )


class MonoidElem:
    """Canonical element of a :class:`MonoidSig` (immutable, hashable)."""

    __slots__ = ("sig", "exps", "primes", "_hash")

    def __init__(self, sig: MonoidSig, exps: tuple[int, ...], primes: tuple[tuple[int, int], ...]):
        self.sig = sig
        self.exps = exps
        self.primes = primes
        self._hash = hash((exps, primes))

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, MonoidElem):
            return NotImplemented
        return self.exps == other.exps and self.primes == other.primes and self.sig == other.sig

    def __hash__(self) -> int:
        return self._hash

    def __mul__(self, other: MonoidElem) -> MonoidElem:
        if not isinstance(other, MonoidElem):
            return NotImplemented
        if other.sig is not self.sig and other.sig != self.sig:
            raise SignatureMismatchError(f"{self.sig!r} vs {other.sig!r}")
        exps = [a + b for a, b in zip(self.exps, other.exps)]
        primes = self.primes + other.primes if other.primes else self.primes
        return self.sig.canonicalize(exps, primes)

    def __pow__(self, k: int) -> MonoidElem:
        if k < 0:
            return self.inverse() ** (-k)
        exps = [e * k for e in self.exps]
        return self.sig.canonicalize(exps, [(p, e * k) for p, e in self.primes])

    def inverse(self) -> MonoidElem:
        """Inverse in the Laurent completion; raises if some axis is not signed."""
        return self.sig.canonicalize(
            [-e for e in self.exps], [(p, -e) for p, e in self.primes]
        )

    def is_invertible(self) -> bool:
        if any(self.exps[g] for g in self.sig._ruled):
            return False
        if self.primes and self.sig.primes != "rat":
            return False
        return all(ax.signed for ax, e in zip(self.sig.axes, self.exps) if e)

    @property
    def is_one(self) -> bool:
        return not self.primes and not any(self.exps)

    @property
    def degree(self) -> int:
        return sum(self.exps)

    def exponent(self, name: str) -> int:
        """Stored exponent (doubled on half axes)."""
        return self.exps[self.sig.index[name]]

    def value(self, name: str) -> Fraction:
        ax = self.sig.axis(name)
        e = self.exponent(name)
        return Fraction(e, 2) if ax.half else Fraction(e)

    def as_dict(self) -> dict[str, Fraction]:
        return {ax.name: self.value(ax.name) for ax, e in zip(self.sig.axes, self.exps) if e}

    def sort_key(self) -> tuple:
        return (-sum(self.exps), tuple(-e for e in self.exps), self.primes)

    def render(self) -> str:
        parts = []
        if self.primes:
            parts.append("[" + "*".join(f"{p}^{e}" for p, e in self.primes) + "]")
        for ax, e in zip(self.sig.axes, self.exps):
            if not e:
                continue
            if ax.half and e % 2:
                parts.append(f"{ax.name}^({e}/2)")
            elif ax.half:
                parts.append(f"{ax.name}^{e // 2}")
            else:
                parts.append(f"{ax.name}^{e}")
        return "*".join(parts)

    def __repr__(self) -> str:
        return f"MonoidElem({self.render() or '1'})"
