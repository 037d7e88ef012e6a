from __future__ import annotations

import logging
import random
from abc import ABC, abstractmethod
from collections.abc import Hashable
from typing import Any, Generic, TypeVar

from unitutte_core.algebra import MonoidElem, MonoidSig, MRPoly, Rule
from unitutte_core.bits import compress, full
from unitutte_core.errors import UnsupportedSystemError

logger = logging.getLogger(__name__)

X = TypeVar("X")

COPIES = ("1", "2")


class MinorsSystem(ABC, Generic[X]):
    """Base class for a family of structures closed under minors.

    Handles:
    - Restriction/contraction along ground-set bitmasks (ground sets are 0..n-1)
    - Direct sum with structures on the empty set (or full direct sum when
      MULTIPLICATIVE)
    - The universal norm: one monomial per structure in the copies u1, v1, ...
      and u2, v2, ... of UNIVERSAL_AXES
    - The identity twist on empty-ground-set structures (TWIST_AXES)
    - Small enumeration for Grothendieck presentations, if finite

    Subclasses override the abstract methods; the rest has working defaults.
    """

    NAME: str = ""
    MULTIPLICATIVE: bool = False
    UNIVERSAL_AXES: tuple[str, ...] = ("u", "v")
    # (w, s, t) meaning w^2 = s * t in every copy
    UNIVERSAL_RULES: tuple[tuple[str, str, str], ...] = ()
    TWIST_AXES: tuple[str, ...] = ()
    TWIST_PRIMES: str | None = None

    _universal: MonoidSig | None = None

    # --- Structure contract ---

    @abstractmethod
    def ground_size(self, x: X) -> int: ...

    @abstractmethod
    def restrict(self, x: X, mask: int) -> X:
        """X|A, relabeled onto 0..|A|-1 in increasing order."""

    @abstractmethod
    def contract(self, x: X, mask: int) -> X:
        """X/A, relabeled onto 0..|E-A|-1 in increasing order."""

    @abstractmethod
    def direct_sum(self, x: X, y: X) -> X:
        """X ⊕ Y; elements of Y are placed after those of X."""

    @abstractmethod
    def unit(self) -> X: ...

    @abstractmethod
    def to_doc(self, x: X) -> dict[str, Any]: ...

    @abstractmethod
    def universal_class(self, x: X) -> dict[str, int]:
        """Exponents of the universal norm of ``x`` on UNIVERSAL_AXES."""

    # --- Defaults ---

    def delete(self, x: X, mask: int) -> X:
        return self.restrict(x, full(self.ground_size(x)) & ~mask)

    def twist_class(self, x: X) -> tuple[dict[str, int], dict[int, int]]:
        """Image of an empty-ground-set structure under the identity twist."""
        return {}, {}

    def canonical_key(self, x: X) -> Hashable | None:
        return None

    def exact_key(self, x: X) -> Hashable:
        return repr(self.to_doc(x))

    def enumerate(self, k: int) -> list[X]:
        """Isomorphism class representatives on a k-element ground set."""
        raise UnsupportedSystemError(f"{self.NAME}: enumeration unsupported")

    def generator_name(self, x: X) -> str:
        raise UnsupportedSystemError(f"{self.NAME}: no generator names")

    def empty_samples(self) -> list[X]:
        return [self.unit()]

    def random(self, rng: random.Random, n: int) -> X:
        raise UnsupportedSystemError(f"{self.NAME}: no random generator")

    def builtin_monoid(self) -> str:
        return ""

    def minors(self, x: X, a: int, b: int) -> X:
        """(X|B)/A for A ⊆ B, on B - A."""
        return self.contract(self.restrict(x, b), compress(a, b))

    # --- Universal character ---

    def universal_signature(self) -> MonoidSig:
        if self._universal is None:
            axes = [f"{n}{COPIES[0]}" for n in self.UNIVERSAL_AXES]
            axes += list(self.TWIST_AXES)
            axes += [f"{n}{COPIES[1]}" for n in self.UNIVERSAL_AXES]
            rules = [
                Rule(f"{w}{c}", (f"{s}{c}", f"{t}{c}"))
                for c in COPIES
                for w, s, t in self.UNIVERSAL_RULES
            ]
            self._universal = MonoidSig(axes, rules, primes=self.TWIST_PRIMES)
        return self._universal

    def universal_norm(self, x: X, copy: str) -> MonoidElem:
        sig = self.universal_signature()
        return sig.raw({f"{k}{copy}": e for k, e in self.universal_class(x).items()})

    def universal_twist(self, x: X) -> MRPoly:
        sig = self.universal_signature()
        exps, primes = self.twist_class(x)
        return MRPoly.mono(sig.raw(exps, primes))

    def universal_spec(self):
        from unitutte_core.characters import CharacterSpec

        sig = self.universal_signature()
        return CharacterSpec(
            sig=sig,
            norm1=lambda x: self.universal_norm(x, COPIES[0]),
            norm2=lambda x: self.universal_norm(x, COPIES[1]),
            twist=self.universal_twist,
        )


class SetSystem(MinorsSystem[int]):
    """Finite sets: a structure is just its cardinality."""

    NAME = "set"
    MULTIPLICATIVE = True
    UNIVERSAL_AXES = ("u",)

    def ground_size(self, x: int) -> int:
        return x

    def restrict(self, x: int, mask: int) -> int:
        return mask.bit_count()

    def contract(self, x: int, mask: int) -> int:
        return x - mask.bit_count()

    def direct_sum(self, x: int, y: int) -> int:
        return x + y

    def unit(self) -> int:
        return 0

    def to_doc(self, x: int) -> dict[str, Any]:
        return {"type": "set", "n": x}

    def universal_class(self, x: int) -> dict[str, int]:
        return {"u": x}

    def canonical_key(self, x: int) -> Hashable:
        return x

    def enumerate(self, k: int) -> list[int]:
        return [k]

    def generator_name(self, x: int) -> str:
        return "e"

    def random(self, rng: random.Random, n: int) -> int:
        return n


SETS = SetSystem()
