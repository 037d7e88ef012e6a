import pytest

from unitutte_core.algebra import MRPoly
from unitutte_core.arithmetic import (
    ARITHMETIC,
    UV_RATIONAL,
    XY_PRIMES,
    AbelianPresentation,
    ArithMatroid,
    arith_convolution_check,
    arith_dual,
    arith_specialize,
    arithmetic_tutte,
    arithmetic_tutte_direct,
    axiom_failure,
    backman_lenz_check,
    biarith_convolution_check,
    biarith_product,
    biarithmetic_pairs,
    forget_check,
    from_presentation,
    kung_collapse_check,
    rational_norm,
    relation_instances,
    small_arithmetic,
    trivial,
    universal_arith_tutte,
)
from unitutte_core.characters import verify_norm_candidate
from unitutte_core.errors import AlgebraDomainError, StructureError
from unitutte_core.matroid import COLOOP, LOOP, U12, matroid_classes
from unitutte_core.variables import XY, var

x = var(XY, "x")


@pytest.fixture
def doubled():
    """The column (2) in Z."""
    doc = {"type": "arithmetic_presentation", "free_rank": 1, "columns": [[2]]}
    return from_presentation(AbelianPresentation.from_doc(doc))


def _split(a: ArithMatroid) -> tuple[list[str], list[str]]:
    g = ARITHMETIC.generator_name
    first = sorted([g(a.restrict(0b01)), g(a.contract(0b01))])
    second = sorted([g(a.restrict(0b10)), g(a.contract(0b10))])
    return first, second


def test_presentation_gives_matroid_and_multiplicity(doubled):
    assert doubled.matroid == COLOOP
    assert doubled.mult == (1, 2)


def test_presentation_validation():
    with pytest.raises(StructureError):
        AbelianPresentation.validated(0, (1,), [(0,)])
    with pytest.raises(StructureError):
        AbelianPresentation.validated(1, (), [(1, 2)])
    p = AbelianPresentation.validated(0, (6,), [(7,)])
    assert p.columns == ((1,),)
    assert p.quotient(0) == (0, 6)
    assert p.quotient(1) == (0, 1)


def test_universal_arithmetic_tutte(doubled):
    xp, two = var(XY_PRIMES, "x"), MRPoly.mono(XY_PRIMES.raw(primes={2: 1}))
    u = universal_arith_tutte(doubled)
    assert u == xp - 1 + two
    assert arith_specialize(u, "full") == x + 1
    assert arith_specialize(u, "full").render() == "1*x^1 + 1"
    assert arith_specialize(u, "forget") == x
    assert arith_specialize(u, "p_local", 3) == x
    assert arith_specialize(u, "p_local", 2) == x + 1


def test_specialization_modes_are_checked(doubled):
    u = universal_arith_tutte(doubled)
    with pytest.raises(AlgebraDomainError):
        arith_specialize(u, "p_local")
    with pytest.raises(ValueError):
        arith_specialize(u, "partial")


def test_relation_instances():
    inst = relation_instances()
    assert _split(inst["gamma-lambda"]) == (["c_1", "l_1"], ["c_2", "l_2"])
    assert _split(inst["lambda-lambda"]) == (["l_1", "l_6"], ["l_2", "l_3"])
    assert inst["gamma-gamma"] == arith_dual(inst["lambda-lambda"])
    for a in inst.values():
        assert axiom_failure(a) is None


def test_axioms_are_enforced():
    with pytest.raises(StructureError):
        ArithMatroid.validated(COLOOP, (2, 3))
    with pytest.raises(StructureError):
        ArithMatroid.validated(LOOP, (0, 1))
    with pytest.raises(StructureError):
        ArithMatroid(U12, (1, 1))
    assert axiom_failure(ArithMatroid(LOOP, (2, 1))) is None
    assert axiom_failure(ArithMatroid(LOOP, (1, 2))) is not None


def test_biarithmetic_product_needs_one_matroid(doubled):
    with pytest.raises(AlgebraDomainError):
        biarith_product(doubled, trivial(LOOP))
    assert biarith_product(doubled, doubled).mult == (1, 4)


def test_full_specialization_matches_direct_sum(doubled):
    assert arithmetic_tutte(doubled) == arithmetic_tutte_direct(doubled)


@pytest.mark.parametrize("n", range(3))
def test_arithmetic_identities(n):
    for a in small_arithmetic(n):
        assert forget_check(a) is None
        assert backman_lenz_check(a) is None
        assert biarith_convolution_check(a) is None


def test_biarithmetic_pairs():
    for x1, x2 in biarithmetic_pairs(2):
        assert arith_convolution_check(x1, x2) is None


def test_kung_collapse():
    for k in range(4):
        for m in matroid_classes(k):
            assert kung_collapse_check(m) is None


def test_random_arithmetic(rng):
    for _ in range(5):
        a = ARITHMETIC.random(rng, rng.randint(0, 3))
        assert axiom_failure(a) is None
        assert forget_check(a) is None


def test_rational_norm_extends():
    structures = small_arithmetic(2)
    assert verify_norm_candidate(ARITHMETIC, rational_norm, UV_RATIONAL, structures) is None
    assert rational_norm(relation_instances()["gamma-lambda"]) == UV_RATIONAL.raw({"u": 1, "v": 1})
