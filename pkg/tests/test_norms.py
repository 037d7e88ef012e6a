import pytest

from unitutte_core.algebra import MRPoly
from unitutte_core.delta import DELTA_CLASSES, DELTAS
from unitutte_core.errors import UnsupportedSystemError
from unitutte_core.norms import NormCandidate, describe_monoid, norm_candidate, system_named


@pytest.mark.parametrize("name", ["set", "mat", "gra", "matper", "delta", "dmp", "col", "amat"])
def test_monomial_norms_extend(name):
    assert norm_candidate(name).verify() is None


def test_wrong_delta_norm_is_caught():
    mono = lambda **e: MRPoly.mono(DELTA_CLASSES.monomial(**e))  # noqa: E731
    mapping = {"c": mono(u=1), "l": mono(v=1), "n": mono(u=1)}
    w = NormCandidate(DELTAS, DELTA_CLASSES, mapping).verify()
    assert w is not None
    assert w.identity == "norm-candidate"


def test_no_candidate_for_unknown_system():
    with pytest.raises(UnsupportedSystemError):
        norm_candidate("rel")
    with pytest.raises(UnsupportedSystemError):
        system_named("hypergraph")


def test_system_lookup():
    assert system_named("mat").NAME == "mat"
    assert system_named("col", ("r", "g")).palette == ("g", "r")


@pytest.mark.parametrize("name", ["sf", "amat", "rel"])
def test_infinite_systems_print_builtin_monoid(name):
    assert describe_monoid(system_named(name)).startswith("enumeration unsupported")


def test_delta_monoid_description():
    assert describe_monoid(system_named("delta")) == "generators: c, l, n\nrelation: c*l = n*n"
