import pytest

from unitutte_core.errors import StructureError
from unitutte_core.graph import (
    AB,
    EDGE,
    LOOP_EDGE,
    Q,
    TRIANGLE,
    EdgeGraph,
    chromatic,
    chromatic_convolution_check,
    dichromatic,
    dichromatic_recurrence_check,
    enumerate_graphs,
    graph_tutte,
    isolated,
    matroid_compatibility_check,
    random_graph,
    to_matroid,
)
from unitutte_core.matroid import RankTable, tutte
from unitutte_core.variables import XY, var

a, b = var(AB, "a"), var(AB, "b")
q = var(Q, "q")


def test_endpoints_are_checked():
    with pytest.raises(StructureError):
        EdgeGraph(2, ((0, 2),))


def test_contraction_keeps_vertex_count_right():
    g = TRIANGLE.contract(0b001)
    assert g.vertices == 2
    assert g.edges == ((0, 1), (0, 1))
    assert LOOP_EDGE.contract(1) == isolated(1)


def test_dichromatic_values():
    assert dichromatic(EDGE) == a * a + a
    assert dichromatic(EDGE).render() == "1*a^2 + 1*a^1"
    assert dichromatic(LOOP_EDGE) == a + a * b
    assert dichromatic(isolated(3)) == a ** 3


def test_chromatic_values():
    assert chromatic(TRIANGLE) == q ** 3 - 3 * q ** 2 + 2 * q
    assert chromatic(EDGE) == q * q - q
    assert chromatic(LOOP_EDGE) == 0
    assert chromatic(isolated(2)) == q * q


def test_graph_tutte_matches_cycle_matroid():
    x, y = var(XY, "x"), var(XY, "y")
    assert graph_tutte(TRIANGLE) == x * x + x + y
    assert to_matroid(TRIANGLE) == RankTable.uniform(2, 3)
    for g in enumerate_graphs(3):
        assert graph_tutte(g) == tutte(to_matroid(g))


def test_enumerate_graphs_counts():
    # six vertex pairs (loops included) on three vertices
    assert len(enumerate_graphs(1)) == 6
    assert len(enumerate_graphs(2)) == 21


@pytest.mark.parametrize("k", range(4))
def test_graph_identities(k):
    for g in enumerate_graphs(k):
        assert dichromatic_recurrence_check(g) is None
        assert matroid_compatibility_check(g) is None
        assert chromatic_convolution_check(g) is None


def test_random_graph_identities(rng):
    for _ in range(10):
        g = random_graph(rng, rng.randint(0, 4))
        assert dichromatic_recurrence_check(g) is None
        assert chromatic_convolution_check(g) is None
