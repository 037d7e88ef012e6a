import json

import pytest

from tutte_cli.registry import load
from unitutte_core.arithmetic import AbelianPresentation
from unitutte_core.delta import Perspective, dmp_of_perspective
from unitutte_core.matroid import U12, RankTable
from unitutte_core.schemas import parse_input

U12_BASES = {"type": "matroid", "n": 2, "bases": [[0], [1]]}
LOOPS2 = {"type": "matroid", "n": 2, "rank": [0, 0, 0, 0]}

DOCS = {
    "matroid-bases": U12_BASES,
    "matroid-rank": {"type": "matroid", "n": 3, "rank": [0, 1, 1, 1, 1, 1, 1, 1]},
    "graph": {"type": "graph", "vertices": 3, "edges": [[0, 1], [1, 2], [2, 2]]},
    "delta": {"type": "delta", "n": 2, "feasible": [[], [0], [0, 1]]},
    "perspective": {"type": "perspective", "M": U12_BASES, "Mprime": LOOPS2},
    "dmp": dmp_of_perspective(Perspective(U12, RankTable.loops(2))).to_doc(),
    "relative": {"type": "relative", "matroid": U12_BASES, "zero_set": [1]},
    "submodular": {"type": "submodular", "n": 2, "rank": [0, 2, 1, 2]},
    "polymatroid": {"type": "submodular", "n": 1, "rank": [0, 2], "polymatroid": True},
    "colored": {"type": "colored", "matroid": U12_BASES, "colors": ["r", "g"]},
    "arithmetic": {
        "type": "arithmetic",
        "matroid": {"type": "matroid", "n": 1, "rank": [0, 1]},
        "multiplicity": [1, 2],
    },
    "arithmetic-presentation": {"type": "arithmetic_presentation", "free_rank": 1, "columns": [[2]]},
}


@pytest.mark.parametrize("name", sorted(DOCS))
def test_structure_survives_serialization(name):
    family, x = load(parse_input(DOCS[name]))
    doc = x.to_doc()
    again_family, again = load(parse_input(json.dumps(doc)))
    assert again_family is family
    assert again == x
    assert again.to_doc() == doc


@pytest.mark.parametrize("name", sorted(DOCS))
def test_documents_survive_dump_and_parse(name):
    parsed = parse_input(json.dumps(DOCS[name]))
    assert parse_input(parsed.model_dump(exclude_none=True)) == parsed


def test_presentation_round_trip():
    p = AbelianPresentation.from_doc(parse_input(DOCS["arithmetic-presentation"]))
    assert AbelianPresentation.from_doc(parse_input(p.to_doc())) == p


def test_set_document():
    parsed = parse_input({"type": "set", "n": 4})
    assert parse_input(parsed.model_dump_json()) == parsed


def test_matroid_document_needs_one_encoding():
    with pytest.raises(ValueError):
        parse_input({"type": "matroid", "n": 2, "rank": [0, 1, 1, 1], "bases": [[0]]})
    with pytest.raises(ValueError):
        parse_input({"type": "matroid", "n": 2, "rank": [0, 1, 1]})
