import pytest

from unitutte_core.delta import ONE_ELEMENT_PERSPECTIVES, enumerate_perspectives, random_perspective
from unitutte_core.errors import AlgebraDomainError, StructureError
from unitutte_core.matroid import matroid_classes
from unitutte_core.polysub import (
    SF_CLASSES,
    SUBMODULAR,
    SubmodTable,
    check_image,
    in_image,
    matroid_inclusion_check,
    prefactor_check,
    random_submodular,
    rank_sum,
    rank_sum_check,
    relation_table,
    sf_homogeneity_check,
    sf_reduced,
    sf_universal_image,
    single,
    t_sf,
    universal_ow_check,
)
from unitutte_core.variables import var


def test_submodularity_is_validated():
    with pytest.raises(StructureError):
        SubmodTable.validated(2, (0, 1, 1, 3))
    with pytest.raises(StructureError):
        SubmodTable.validated(1, (1, 0))
    # negative values are fine unless the table is a polymatroid
    assert SubmodTable.validated(1, (0, -2)).rank == -2
    with pytest.raises(StructureError):
        SubmodTable.validated(1, (0, -2), polymatroid=True)


def test_relation_table_minors():
    t = relation_table(1, 0, 2)
    assert t.rk == (0, 1, 2, 1)
    assert SUBMODULAR.restrict(t, 0b01).rk == single(1).rk
    assert SUBMODULAR.contract(t, 0b01).rk == single(0).rk
    assert SUBMODULAR.restrict(t, 0b10).rk == single(2).rk
    assert SUBMODULAR.contract(t, 0b10).rk == single(-1).rk
    with pytest.raises(StructureError):
        relation_table(0, 2, 1)


def test_universal_image_satisfies_relation():
    assert universal_ow_check()
    assert sf_universal_image(single(2)) == SF_CLASSES.monomial(x=1, y=2)


def test_image_membership():
    assert in_image(SF_CLASSES.one())
    assert in_image(SF_CLASSES.monomial(x=1, y=-3))
    assert not in_image(SF_CLASSES.monomial(y=1))
    with pytest.raises(AlgebraDomainError):
        check_image(SF_CLASSES.monomial(y=-1))


def test_single_element_values():
    sig = SUBMODULAR.universal_signature()
    x1, y1, x2, y2 = (var(sig, n) for n in ("x1", "y1", "x2", "y2"))
    assert t_sf(single(1)) == x1 * y1 + x2 * y2
    x, y = var(SF_CLASSES, "x"), var(SF_CLASSES, "y")
    assert sf_reduced(single(1)) == 1 + x * y
    assert sf_reduced(single(0)) == 1 + x


def test_random_submodular_identities(rng):
    for _ in range(8):
        m = random_submodular(rng, rng.randint(0, 3))
        assert prefactor_check(m) is None
        assert sf_homogeneity_check(m) is None


def test_random_polymatroid_identities(rng):
    for _ in range(5):
        m = random_submodular(rng, rng.randint(0, 3), polymatroid=True)
        assert m.polymatroid
        assert sf_homogeneity_check(m) is None


def test_matroid_inclusion():
    for k in range(4):
        for m in matroid_classes(k):
            assert matroid_inclusion_check(m) is None


def test_rank_sum_of_perspectives(rng):
    for p in ONE_ELEMENT_PERSPECTIVES:
        assert rank_sum(p).r_bound <= 2
    for p in enumerate_perspectives(2):
        assert rank_sum_check(p) is None
    for _ in range(3):
        assert rank_sum_check(random_perspective(rng, 3)) is None
