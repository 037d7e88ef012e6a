"""Target signatures shared by the classical specializations."""
from __future__ import annotations

from sympy.polys.domains import ZZ
from sympy.polys.domains.domain import Domain

from unitutte_core.algebra import Axis, MonoidSig, MRPoly

XY = MonoidSig(["x", "y"])
XYZ = MonoidSig(["x", "y", "z"])
ABCD = MonoidSig(["a", "b", "c", "d"])
ABCDEF = MonoidSig(["a", "b", "c", "d", "e", "f"])


def var(sig: MonoidSig, name: str, ring: Domain = ZZ) -> MRPoly:
    return MRPoly.var(sig, name, ring)


def one(sig: MonoidSig, ring: Domain = ZZ) -> MRPoly:
    return MRPoly.one(sig, ring)


def laurent(sig: MonoidSig) -> MonoidSig:
    """Same axes, all invertible. Only for rule-free signatures."""
    return MonoidSig(
        [Axis(a.name, signed=True, half=a.half) for a in sig.axes], primes=sig.primes
    )


def ratio(sig: MonoidSig, num: str, den: str) -> MRPoly:
    return var(sig, num) * var(sig, den) ** -1


def indexed(prefix: str, count: int, start: int = 0) -> list[str]:
    return [f"{prefix}{i}" for i in range(start, start + count)]
