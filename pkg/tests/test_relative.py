import pytest

from unitutte_core.delta import N_ELEMENT, Perspective
from unitutte_core.errors import AlgebraDomainError, StructureError
from unitutte_core.matroid import COLOOP, LOOP, U12, RankTable, matroid_classes
from unitutte_core.relative import (
    RelMatroid,
    components,
    decomposition_check,
    delta_compatibility_check,
    empty_zero_check,
    forget_components,
    perspective_minor_check,
    pointed_check,
    random_relative,
    rel_minor,
    relative_delcon_check,
    relative_tutte,
    to_delta,
    to_perspective,
)
from unitutte_core.variables import XYZ, var


def _small_relatives(max_n: int = 3):
    for k in range(max_n + 1):
        for m in matroid_classes(k):
            for zero in range(1 << k):
                yield RelMatroid(m, zero)


def test_zero_set_must_fit():
    with pytest.raises(StructureError):
        RelMatroid(U12, 0b100)


def test_minors_never_touch_the_zero_set():
    m = RelMatroid(U12, 0b10)
    with pytest.raises(AlgebraDomainError):
        rel_minor(m, 0b10, "contract")
    with pytest.raises(ValueError):
        rel_minor(m, 0b01, "shrink")
    assert rel_minor(m, 0b01, "delete") == RelMatroid(COLOOP, 0b1)


def test_perspective_and_delta_of_relative():
    m = RelMatroid(U12, 0b10)
    assert m.n == 1
    assert to_perspective(m) == Perspective(COLOOP, LOOP)
    assert to_delta(m) == N_ELEMENT


def test_relative_tutte_names_components():
    rel, legend = relative_tutte(RelMatroid(U12, 0b10))
    assert legend == {"C0": LOOP.to_doc(), "C1": COLOOP.to_doc()}
    sig = XYZ.extended(legend)
    assert rel == var(sig, "C0") + var(sig, "C1") * var(sig, "z")
    assert forget_components(rel) == var(XYZ, "z") + 1


def test_components_of_direct_sum():
    m = U12.direct_sum(COLOOP).direct_sum(LOOP)
    assert components(m) == [LOOP, COLOOP, U12]
    assert components(RankTable(0, (0,))) == []


def test_empty_zero_set_gives_tutte_polynomial():
    for k in range(4):
        for m in matroid_classes(k):
            assert empty_zero_check(m) is None
            assert decomposition_check(m) is None


def test_relative_identities_on_small_cases():
    for m in _small_relatives(3):
        assert perspective_minor_check(m) is None
        assert delta_compatibility_check(m) is None
        assert pointed_check(m) is None


def test_relative_delcon_on_small_cases():
    for m in _small_relatives(2):
        assert relative_delcon_check(m) is None


def test_random_relatives(rng):
    for _ in range(5):
        m = random_relative(rng, rng.randint(0, 3))
        assert perspective_minor_check(m) is None
        assert delta_compatibility_check(m) is None
        assert pointed_check(m) is None
        assert relative_delcon_check(m) is None
