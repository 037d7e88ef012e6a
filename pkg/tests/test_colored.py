import pytest

from unitutte_core.characters import SCALARS, delcon_check, grothendieck_relations, verify_norm_candidate
from unitutte_core.colored import (
    BRCoefficients,
    ColoredMatroid,
    br_criterion,
    br_relations_check,
    color_axis,
    colored_signature,
    colored_system,
    colored_tutte,
    coloop,
    embedding_candidate,
    from_norms,
    monochrome_check,
    multivariate_check,
    u12,
    u13,
)
from unitutte_core.errors import StructureError
from unitutte_core.matroid import U12, matroid_classes
from unitutte_core.variables import var

RG = ("g", "r")


def test_colors_must_match_ground_set():
    with pytest.raises(StructureError):
        ColoredMatroid(U12, ("r",))


def test_colored_tutte_values():
    sig = colored_signature(RG)
    x, y = var(sig, "x"), var(sig, "y")
    ar, ag = var(sig, color_axis("r")), var(sig, color_axis("g"))
    assert colored_tutte(u12("r", "g")) == (x - 1) + ar + ag + ar * ag * (y - 1)
    one = colored_signature(["r"])
    assert colored_tutte(coloop("r")) == var(one, "x") - 1 + var(one, color_axis("r"))


def test_minors_carry_colors():
    m = u13(("r", "g", "b"))
    assert m.restrict(0b101).colors == ("r", "b")
    assert m.contract(0b010).colors == ("r", "b")
    assert m.palette == ("b", "g", "r")


def test_monochrome_and_multivariate():
    for k in range(4):
        for m in matroid_classes(k):
            assert monochrome_check(m) is None
            assert multivariate_check(m) is None


def test_colored_delcon():
    system = colored_system(RG)
    spec = system.universal_spec()
    for x in system.enumerate(2):
        assert delcon_check(system, x, spec) is None


def test_embedding_candidate_is_a_norm():
    system = colored_system(RG)
    mapping, sig = embedding_candidate(RG)
    assert sorted(mapping) == ["c_g", "c_r", "l_g", "l_r"]
    assert verify_norm_candidate(system, mapping, sig) is None


def test_colored_grothendieck_generators():
    pres = grothendieck_relations(colored_system(RG))
    assert pres.generators == ["c_g", "c_r", "l_g", "l_r"]


def test_norm_coefficients_satisfy_relations():
    assert br_criterion(from_norms(RG)) is None
    assert br_relations_check(from_norms(RG), max_size=3) is None


def test_first_relation_failure():
    ones = {"r": 1, "g": 1}
    co = BRCoefficients(SCALARS, {"r": 1, "g": 2}, ones, ones, ones)
    assert br_criterion(co).startswith("first")
    w = br_relations_check(co, max_size=3)
    assert w is not None
    assert w.detail.startswith("first")


def test_second_relation_failure():
    u, v = {"r": 1, "g": 2}, {"r": 1, "g": 1}
    co = BRCoefficients(SCALARS, u, v, u, v)
    assert br_criterion(co).startswith("second")
    # the two-element structures alone do not see it
    assert br_relations_check(co, max_size=2) is None
    w = br_relations_check(co, max_size=3)
    assert w is not None
    assert w.detail.startswith("second")
