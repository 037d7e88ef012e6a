import pytest

from unitutte_core.errors import AlgebraDomainError, SizeLimitError, StructureError
from unitutte_core.matroid import (
    COLOOP,
    EMPTY,
    LOOP,
    MATROIDS,
    U12,
    RankTable,
    bihomogeneity_check,
    canonical_form,
    circuits,
    connected_components,
    corank_nullity,
    duality_check,
    enumerate_matroids,
    is_isomorphic,
    iterated_check,
    iterated_tutte_check,
    krs_check,
    kung_check,
    matroid_classes,
    matroid_convolutions,
    multiplicativity_check,
    multivariate_tutte,
    random_matroid,
    signflip_check,
    tutte,
    universal_prefactor_check,
    universal_tutte,
)
from unitutte_core.variables import XY, var

x, y = var(XY, "x"), var(XY, "y")


def test_rank_table_validation():
    with pytest.raises(StructureError):
        RankTable.validated(1, (0, 2))
    with pytest.raises(StructureError):
        RankTable.validated(2, (0, 1, 1, 0))
    with pytest.raises(StructureError):
        RankTable(2, (0, 1, 1))
    with pytest.raises(StructureError):
        RankTable.from_bases(4, [[0, 1], [2, 3], [0]])
    assert RankTable.from_bases(2, [[0], [1]]) == U12


def test_from_doc_accepts_rank_or_bases():
    by_rank = RankTable.from_doc({"type": "matroid", "n": 2, "rank": [0, 1, 1, 1]})
    by_bases = RankTable.from_doc({"type": "matroid", "n": 2, "bases": [[0], [1]]})
    assert by_rank == by_bases == U12
    with pytest.raises(ValueError):
        RankTable.from_doc({"type": "matroid", "n": 2})


def test_minors_of_uniform():
    u24 = RankTable.uniform(2, 4)
    assert u24.restrict(0b0111) == RankTable.uniform(2, 3)
    assert u24.contract(0b0001) == RankTable.uniform(1, 3)
    assert u24.delete(0b1000) == RankTable.uniform(2, 3)
    assert u24.dual() == u24
    assert RankTable.uniform(1, 3).dual() == RankTable.uniform(2, 3)
    with pytest.raises(AlgebraDomainError):
        U12.restrict(0b100)


def test_structure_queries():
    m = U12.direct_sum(COLOOP).direct_sum(LOOP)
    assert m.is_coloop(2) and m.is_loop(3)
    assert circuits(m) == [0b0011, 0b1000]
    assert connected_components(m) == [[0, 1], [2], [3]]
    assert is_isomorphic(m, LOOP.direct_sum(COLOOP).direct_sum(U12))


@pytest.mark.parametrize("n, count", [(0, 1), (1, 2), (2, 4), (3, 8), (4, 17)])
def test_class_counts(n, count):
    assert len(matroid_classes(n)) == count


@pytest.mark.parametrize("n, count", [(0, 1), (1, 2), (2, 5), (3, 16), (4, 68)])
def test_labeled_counts(n, count):
    assert len(enumerate_matroids(n)) == count


def test_enumeration_cap():
    with pytest.raises(SizeLimitError):
        enumerate_matroids(6)


def test_canonical_form_is_relabeling_invariant(rng):
    for _ in range(10):
        m = random_matroid(rng, 4)
        perm = tuple(rng.sample(range(4), 4))
        assert canonical_form(m.relabel(perm)) == canonical_form(m)


def test_random_matroids_are_valid(rng):
    for n in range(6):
        m = random_matroid(rng, n)
        assert m.n == n
        RankTable.validated(m.n, m.rk)


@pytest.mark.parametrize(
    "m, expected",
    [
        (EMPTY, lambda: 1),
        (COLOOP, lambda: x),
        (LOOP, lambda: y),
        (U12, lambda: x + y),
        (RankTable.uniform(1, 3), lambda: x + y + y * y),
        (RankTable.uniform(2, 3), lambda: x * x + x + y),
        (RankTable.uniform(2, 4), lambda: x * x + 2 * x + 2 * y + y * y),
    ],
)
def test_tutte_values(m, expected):
    assert tutte(m) == expected()


def test_tutte_modes():
    assert corank_nullity(U12) == x + y + 2
    assert tutte(U12, "corank-nullity") == corank_nullity(U12)
    assert tutte(U12).render() == "1*x^1 + 1*y^1"
    mv = multivariate_tutte(U12)
    assert mv.specialize({"alpha0": 1, "alpha1": 1}, XY) == x + y
    with pytest.raises(ValueError):
        tutte(U12, "bogus")


def test_universal_coloop_and_loop():
    sig = MATROIDS.universal_signature()
    u1, v1, u2, v2 = (var(sig, n) for n in ("u1", "v1", "u2", "v2"))
    assert universal_tutte(COLOOP) == u1 + u2
    assert universal_tutte(LOOP) == v1 + v2
    assert universal_tutte(U12) == u1 * v1 + 2 * u1 * v2 + u2 * v2


def test_identities_on_all_small_matroids():
    for k in range(5):
        for m in matroid_classes(k):
            assert universal_prefactor_check(m) is None
            assert duality_check(m) is None
            assert bihomogeneity_check(m) is None
            assert kung_check(m) is None
            assert krs_check(m) is None
            assert signflip_check(m) is None


def test_iterated_convolution():
    for k in range(4):
        for m in matroid_classes(k):
            assert iterated_check(m, levels=3) is None


@pytest.mark.parametrize("levels", [1, 2, 3])
def test_iterated_tutte_flag_sum(levels):
    for k in range(5):
        for m in matroid_classes(k):
            assert iterated_tutte_check(m, levels) is None


def test_iterated_tutte_on_u23():
    assert iterated_tutte_check(RankTable.uniform(2, 3), levels=3) is None
    assert matroid_convolutions(RankTable.uniform(2, 3), "iterated", levels=3) is None


def test_iterated_tutte_levels():
    assert iterated_tutte_check(COLOOP, levels=2) is None
    with pytest.raises(ValueError):
        iterated_tutte_check(COLOOP, levels=0)


def test_identities_on_random_matroids(rng):
    for _ in range(100):
        m = random_matroid(rng, rng.randint(0, 6))
        assert duality_check(m) is None
        assert kung_check(m) is None
        assert krs_check(m) is None
        assert signflip_check(m) is None
        assert iterated_check(m, levels=3) is None


def test_multiplicativity(rng):
    for _ in range(5):
        m1, m2 = random_matroid(rng, 2), random_matroid(rng, 3)
        assert multiplicativity_check(m1, m2) is None
