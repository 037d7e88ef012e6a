import pytest

from unitutte_core.algebra import MonoidSig
from unitutte_core.arithmetic import ARITHMETIC
from unitutte_core.characters import (
    axioms_check,
    convolution_check,
    delcon_check,
    delcon_evaluate,
    exp_star_check,
    grothendieck_relations,
    homogeneity_check,
    inverse_norm_check,
    iterated_convolution_check,
    norm_law_check,
    recurrence_welldef_check,
    tutte_character,
)
from unitutte_core.colored import colored_system
from unitutte_core.config import settings
from unitutte_core.delta import DELTAS, DMPS, PERSPECTIVES
from unitutte_core.errors import UnsupportedSystemError
from unitutte_core.graph import GRAPHS
from unitutte_core.matroid import MATROIDS, U12, RankTable, enumerate_matroids, matroid_classes
from unitutte_core.minors import SETS, MinorsSystem
from unitutte_core.polysub import SUBMODULAR
from unitutte_core.relative import RELATIVES
from unitutte_core.variables import var

U012 = MonoidSig(["u0", "u1", "u2"])


def _set_norm(name: str):
    return lambda x: U012.raw({name: x})


def _matroid_norm(sig: MonoidSig, u: str, v: str):
    return lambda m: sig.raw({u: m.rank, v: m.corank})


@pytest.mark.parametrize("n", range(6))
def test_universal_set_character_is_binomial(n):
    spec = SETS.universal_spec()
    u1, u2 = var(spec.sig, "u1"), var(spec.sig, "u2")
    assert tutte_character(SETS, n, spec) == (u1 + u2) ** n
    assert delcon_evaluate(SETS, n, spec) == (u1 + u2) ** n


@pytest.mark.parametrize("n", range(5))
def test_set_convolution_and_inverse_norm(n):
    assert inverse_norm_check(SETS, n, _set_norm("u0"), U012) is None
    w = convolution_check(
        SETS, n, U012, _set_norm("u0"), None, _set_norm("u1"), None, _set_norm("u2")
    )
    assert w is None


def test_iterated_convolution_on_matroids():
    sig = MonoidSig([f"{a}{i}" for a in "uv" for i in range(4)])
    norms = [_matroid_norm(sig, f"u{i}", f"v{i}") for i in range(4)]
    for m in matroid_classes(3):
        assert iterated_convolution_check(MATROIDS, m, sig, norms, [None] * 3) is None


def test_norm_law_and_axioms(matroid_zoo):
    sig = MATROIDS.universal_signature()
    norm = lambda m: MATROIDS.universal_norm(m, "1")  # noqa: E731
    for m in matroid_zoo:
        assert norm_law_check(MATROIDS, m, norm, sig) is None
        assert homogeneity_check(MATROIDS, m) is None
        for a in range(1 << m.n):
            b = m.ground & ~a
            assert axioms_check(MATROIDS, m, a, b & (b - 1) if b else 0) is None


def test_delcon_matches_subset_expansion(matroid_zoo):
    spec = MATROIDS.universal_spec()
    for m in matroid_zoo:
        assert delcon_check(MATROIDS, m, spec) is None


def test_minors_system_contract_is_enforced():
    class GroundOnly(MinorsSystem[int]):
        def ground_size(self, x: int) -> int:
            return x

    with pytest.raises(TypeError):
        GroundOnly()


PALETTE = ("g", "r")

ENGINE_SYSTEMS = {
    "matroid": MATROIDS,
    "graph": GRAPHS,
    "delta": DELTAS,
    "perspective": PERSPECTIVES,
    "dmp": DMPS,
    "relative": RELATIVES,
    "submodular": SUBMODULAR,
    "colored": colored_system(PALETTE),
    "arithmetic": ARITHMETIC,
}


def _engine_spec(system: MinorsSystem, x):
    if system is RELATIVES:
        return RELATIVES.character_spec(x)[0]
    return system.universal_spec()


@pytest.mark.parametrize("name", sorted(ENGINE_SYSTEMS))
def test_delcon_matches_subset_expansion_per_family(name, rng):
    system = ENGINE_SYSTEMS[name]
    for _ in range(200):
        x = system.random(rng, rng.randint(0, 8))
        assert delcon_check(system, x, _engine_spec(system, x)) is None


def test_thread_count_does_not_change_values(monkeypatch):
    spec = MATROIDS.universal_spec()
    m = RankTable.uniform(2, 4)
    monkeypatch.setattr(settings, "threads", 1)
    serial = tutte_character(MATROIDS, m, spec)
    monkeypatch.setattr(settings, "threads", 4)
    threaded = tutte_character(MATROIDS, m, spec)
    assert serial == threaded
    assert serial.render() == threaded.render()


@pytest.mark.parametrize("n", range(6))
def test_exp_star_recovers_norm(n):
    sig = MATROIDS.universal_signature()
    norm = lambda m: MATROIDS.universal_norm(m, "1")  # noqa: E731
    for m in enumerate_matroids(n):
        assert exp_star_check(MATROIDS, m, norm, sig) is None


def test_recurrence_with_norm_coefficients_is_well_defined():
    sig = MonoidSig(["U1", "V1", "U2", "V2"])
    c1 = lambda m: var(sig, "U1") if m.rank else var(sig, "V1")  # noqa: E731
    c2 = lambda m: var(sig, "U2") if m.rank else var(sig, "V2")  # noqa: E731
    assert recurrence_welldef_check(MATROIDS, c1, c2, sig, 3) is None


def test_grothendieck_matroids_have_no_relations():
    pres = grothendieck_relations(MATROIDS)
    assert pres.generators == ["c", "l"]
    assert pres.relations == []
    assert pres.render() == "generators: c, l\nrelations: none"


def test_grothendieck_declines_infinite_systems():
    for system in (RELATIVES, SUBMODULAR):
        with pytest.raises(UnsupportedSystemError):
            grothendieck_relations(system)


def test_grothendieck_is_label_invariant():
    first = (U12.restrict(1), U12.contract(1))
    second = (U12.restrict(2), U12.contract(2))
    names = lambda pair: sorted(MATROIDS.generator_name(x) for x in pair)  # noqa: E731
    assert names(first) == names(second)
