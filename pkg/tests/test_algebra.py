from fractions import Fraction

import pytest
from sympy import Matrix
from sympy.matrices.normalforms import smith_normal_form as sympy_snf
from sympy.polys.domains import QQ, ZZ, ZZ_I

from unitutte_core.algebra import (
    IMAG,
    Axis,
    IntMatrix,
    MonoidSig,
    MRPoly,
    Rule,
    factorize,
    p_part,
    quotient_invariants,
    smith_normal_form,
)
from unitutte_core.errors import (
    AlgebraDomainError,
    InversionError,
    MissingAssignmentError,
    SignatureMismatchError,
)
from unitutte_core.variables import XY, laurent, var

UVW = MonoidSig(["u", "v", "w"], [Rule("w", ("u", "v"))])


# --- Monoids ---

def test_quotient_rule_reduces_square():
    w = UVW.monomial(w=1)
    assert w * w == UVW.monomial(u=1, v=1)
    assert UVW.monomial(w=2) == UVW.monomial(u=1, v=1)
    assert UVW.monomial(w=3) == UVW.monomial(u=1, v=1, w=1)


def test_quotient_rule_shape_is_checked():
    with pytest.raises(AlgebraDomainError):
        MonoidSig(["u", "v"], [Rule("u", ("u", "v"))])
    with pytest.raises(AlgebraDomainError):
        MonoidSig(["u"], [Rule("u", ("u", "x"))])


def test_half_axis_storage_and_render():
    sig = MonoidSig([Axis("a", half=True), "b"])
    root = sig.monomial(a=Fraction(1, 2))
    assert root.render() == "a^(1/2)"
    assert (root * root).render() == "a^1"
    assert root.value("a") == Fraction(1, 2)
    with pytest.raises(AlgebraDomainError):
        sig.monomial(b=Fraction(1, 2))


def test_negative_exponent_needs_signed_axis():
    with pytest.raises(AlgebraDomainError):
        XY.raw({"x": -1})
    lx = laurent(XY)
    x = var(lx, "x")
    assert x * x ** -1 == MRPoly.one(lx)


def test_prime_axes_modes():
    nat = MonoidSig(["x"], primes="nat")
    rat = MonoidSig(["x"], primes="rat")
    assert nat.raw(primes={2: 1, 3: 1}).render() == "[2^1*3^1]"
    with pytest.raises(AlgebraDomainError):
        nat.raw(primes={2: -1})
    half = rat.raw(primes={2: -1})
    assert half * rat.raw(primes={2: 1}) == rat.one()
    with pytest.raises(AlgebraDomainError):
        XY.raw(primes={2: 1})


def test_mixing_signatures_raises():
    with pytest.raises(SignatureMismatchError):
        var(XY, "x") + var(UVW, "u")


# --- Polynomials ---

def test_ring_arithmetic_and_render():
    x, y = var(XY, "x"), var(XY, "y")
    p = (x + 1) ** 2
    assert p == x * x + 2 * x + 1
    assert p.render() == "1*x^2 + 2*x^1 + 1"
    assert (x - x).render() == "0"
    assert (x + y).render() == "1*x^1 + 1*y^1"
    assert (3 - x).constant() == 3


def test_rational_and_gaussian_coefficients():
    x = var(XY, "x")
    half = x * QQ(1, 2)
    assert half.ring == QQ
    assert half.render() == "1/2*x^1"
    gauss = MRPoly.const(XY, IMAG, ZZ_I)
    assert gauss * gauss == MRPoly.const(XY, -1)


def test_inverse_of_units_only():
    lx = laurent(XY)
    x = var(lx, "x")
    assert (-x).inverse() == -(x ** -1)
    with pytest.raises(InversionError):
        (x + 1).inverse()
    with pytest.raises(InversionError):
        var(XY, "x").inverse()
    with pytest.raises(InversionError):
        (2 * x).inverse()


def test_specialize_is_a_ring_map():
    x, y = var(XY, "x"), var(XY, "y")
    p = x * x * y + 3 * y
    assert p.specialize({"x": 2, "y": 1}) == MRPoly.const(XY, 7)
    assert p.specialize({"x": y, "y": x}) == y * y * x + 3 * x
    q = p.specialize({"x": QQ(1, 2)})
    assert q == y * QQ(1, 4) + 3 * y


def test_specialize_missing_axis():
    target = MonoidSig(["x"])
    p = var(XY, "x") + var(XY, "y")
    with pytest.raises(MissingAssignmentError):
        p.specialize({"x": var(target, "x")}, target)
    with pytest.raises(MissingAssignmentError):
        p.specialize({"x": 1}, strict=True)


def test_specialize_primes():
    sig = MonoidSig(["x"], primes="nat")
    p = var(sig, "x") + MRPoly.mono(sig.raw(primes={2: 1, 3: 1}))
    assert p.specialize({}, MonoidSig(["x"]), primes=lambda q: q) == var(MonoidSig(["x"]), "x") + 6
    with pytest.raises(MissingAssignmentError):
        p.specialize({}, MonoidSig(["x"]))


def test_json_terms():
    sig = MonoidSig([Axis("a", half=True), "b"], primes="nat")
    p = MRPoly.mono(sig.monomial(primes={5: 1}, a=Fraction(3, 2), b=2), -4)
    (term,) = p.to_json_terms()
    assert term == {"coeff": "-4", "monomial": {"primes": {"5": 1}, "a": "3/2", "b": 2}}


# --- Number theory ---

def test_factorize_and_p_part():
    assert factorize(1) == ()
    assert factorize(12) == ((2, 2), (3, 1))
    assert p_part(12, 2) == 4
    assert p_part(12, 5) == 1
    with pytest.raises(AlgebraDomainError):
        factorize(0)


def test_determinant():
    assert IntMatrix.from_rows([[2, 1], [1, 3]]).det() == 5
    assert IntMatrix.from_rows([[0, 1], [1, 0]]).det() == -1
    assert IntMatrix.from_rows([[1, 2], [2, 4]]).det() == 0


@pytest.mark.parametrize(
    "rows",
    [
        [[2, 0], [0, 3]],
        [[2, 4, 4], [-6, 6, 12], [10, -4, -16]],
        [[1, 2, 3], [4, 5, 6]],
        [[0, 0], [0, 0]],
        [[6], [4]],
        [[3, 9, -6], [0, 12, 4]],
    ],
)
def test_smith_normal_form(rows):
    m = IntMatrix.from_rows(rows)
    snf = smith_normal_form(m)
    assert snf.U @ m @ snf.V == snf.D
    assert abs(snf.U.det()) == 1 and abs(snf.V.det()) == 1
    nonzero = [d for d in snf.factors if d]
    assert all(d > 0 for d in nonzero)
    assert all(b % a == 0 for a, b in zip(nonzero, nonzero[1:]))
    reference = sympy_snf(Matrix(rows), domain=ZZ)
    ref = sorted(abs(int(reference[i, i])) for i in range(min(m.rows, m.cols)) if reference[i, i])
    assert sorted(nonzero) == ref


def test_quotient_invariants():
    assert quotient_invariants(IntMatrix.from_rows([[2]])) == (0, 2)
    assert quotient_invariants(IntMatrix(2, 0, ((), ()))) == (2, 1)
    assert quotient_invariants(IntMatrix.from_rows([[2, 0], [0, 3]])) == (0, 6)
    assert quotient_invariants(IntMatrix.from_rows([[2], [0]])) == (1, 2)
