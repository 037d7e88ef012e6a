import pytest

from unitutte_core.characters import grothendieck_relations
from unitutte_core.delta import (
    DELTAS,
    DMPS,
    EMPTY_DELTA,
    N_ELEMENT,
    ONE_ELEMENT_PERSPECTIVES,
    FeasibleFamily,
    Perspective,
    bollobas_riordan,
    bollobas_riordan_direct,
    bounds_minor_check,
    br_convolution_check,
    delta_classes,
    delta_prefactor_check,
    delta_to_perspective,
    discrepancy_check,
    enumerate_deltas,
    enumerate_dmps,
    enumerate_perspectives,
    functoriality_check,
    is_saturated,
    krushkal,
    krushkal_direct,
    krushkal_prefactor_check,
    las_vergnas,
    las_vergnas_direct,
    lv_convolution_check,
    matper_prefactor_check,
    matroid_as_delta,
    matroid_collapse_check,
    perspective_to_delta,
    random_delta,
    random_dmp,
    random_perspective,
    saturated_roundtrip_check,
    tardos_check,
)
from unitutte_core.errors import AlgebraDomainError, SizeLimitError, StructureError
from unitutte_core.matroid import COLOOP, LOOP, U12, RankTable, matroid_classes


def test_exchange_axiom_is_enforced():
    with pytest.raises(StructureError):
        FeasibleFamily.validated(3, [0b000, 0b111])
    with pytest.raises(StructureError):
        FeasibleFamily.validated(2, [])
    with pytest.raises(StructureError):
        FeasibleFamily.validated(1, [0b10])
    assert FeasibleFamily.validated(2, [0b00, 0b11]).feasible == (0, 3)


def test_from_doc():
    d = FeasibleFamily.from_doc({"type": "delta", "n": 2, "feasible": [[], [0], [0, 1]]})
    assert d.feasible == (0b00, 0b01, 0b11)
    assert d.to_doc()["feasible"] == [[], [0], [0, 1]]


@pytest.mark.parametrize("k, count", [(0, 1), (1, 3), (2, 15)])
def test_delta_counts(k, count):
    assert len(enumerate_deltas(k)) == count


def test_nonsaturated_count():
    assert sum(not is_saturated(d) for d in enumerate_deltas(2)) == 3


def test_perspective_and_dmp_counts():
    assert len(enumerate_perspectives(1)) == 3
    assert len(ONE_ELEMENT_PERSPECTIVES) == 3
    assert len(enumerate_dmps(1)) == 5
    assert len(enumerate_dmps(2)) == 38


def test_delta_enumeration_cap():
    with pytest.raises(SizeLimitError):
        enumerate_deltas(5)


def test_upper_and_lower_matroids():
    d = FeasibleFamily.validated(2, [0b00, 0b01, 0b11])
    assert d.upper == COLOOP.direct_sum(COLOOP)
    assert d.lower == LOOP.direct_sum(LOOP)
    assert d.sigma2 == 2
    assert matroid_as_delta(U12).upper == matroid_as_delta(U12).lower == U12


def test_minors_of_one_element_delta():
    assert N_ELEMENT.restrict(0) == EMPTY_DELTA
    assert N_ELEMENT.contract(1) == EMPTY_DELTA
    assert N_ELEMENT.twist(1) == N_ELEMENT


def test_grothendieck_relation_for_deltas():
    pres = grothendieck_relations(DELTAS)
    assert pres.generators == ["c", "l", "n"]
    assert pres.relations == [(("c", "l"), ("n", "n"))]
    assert "relation: c*l = n*n" in pres.render()


def test_grothendieck_relation_for_dmps():
    pres = grothendieck_relations(DMPS)
    assert (("ccl", "cll"), ("cnl", "cnl")) in pres.relations


def test_bounds_do_not_commute_with_minors():
    d = FeasibleFamily.validated(2, [0b00, 0b01, 0b11])
    assert bounds_minor_check(d) is not None
    assert bounds_minor_check(matroid_as_delta(U12)) is None


def test_nonsaturated_delta_has_no_perspective():
    with pytest.raises(AlgebraDomainError):
        delta_to_perspective(FeasibleFamily.validated(2, [0b00, 0b11]))


def test_bollobas_riordan_of_normal_element():
    # both feasible sets contribute a half power
    r = bollobas_riordan(N_ELEMENT)
    assert r == bollobas_riordan_direct(N_ELEMENT)
    assert len(r.terms) == 2
    assert {m.render() for m in r.terms} == {"p^(1/2)", "q^(1/2)"}


@pytest.mark.parametrize("k", range(4))
def test_delta_identities(k):
    for d in delta_classes(k):
        assert bollobas_riordan(d) == bollobas_riordan_direct(d)
        assert discrepancy_check(d) is None
        assert saturated_roundtrip_check(d) is None
        assert br_convolution_check(d) is None
        assert delta_prefactor_check(d) is None


def test_random_delta_identities(rng):
    for _ in range(5):
        d = random_delta(rng, rng.randint(0, 4))
        assert d.exchange_failure() is None
        assert bollobas_riordan(d) == bollobas_riordan_direct(d)
        assert delta_prefactor_check(d) is None


def test_matroid_collapse():
    for k in range(4):
        for m in matroid_classes(k):
            assert matroid_collapse_check(m) is None


@pytest.mark.parametrize("k", range(3))
def test_perspective_identities(k):
    for p in enumerate_perspectives(k):
        assert las_vergnas(p) == las_vergnas_direct(p)
        assert tardos_check(p) is None
        assert lv_convolution_check(p) is None
        assert matper_prefactor_check(p) is None


def test_random_perspectives(rng):
    for _ in range(4):
        p = random_perspective(rng, 3)
        assert tardos_check(p) is None
        assert matper_prefactor_check(p) is None


def test_perspective_validation():
    with pytest.raises(StructureError):
        Perspective.validated(LOOP, COLOOP)
    assert Perspective.validated(COLOOP, LOOP).n == 1
    assert perspective_to_delta(Perspective(COLOOP, LOOP)) == N_ELEMENT
    assert perspective_to_delta(Perspective(RankTable.uniform(2, 2), RankTable.uniform(0, 2))).n == 2


@pytest.mark.parametrize("k", range(3))
def test_dmp_identities(k):
    for t in enumerate_dmps(k):
        assert krushkal(t) == krushkal_direct(t)
        assert krushkal_prefactor_check(t) is None
        assert functoriality_check(t) is None


def test_random_dmps(rng):
    for _ in range(4):
        t = random_dmp(rng, 3)
        assert krushkal(t) == krushkal_direct(t)
        assert functoriality_check(t) is None
