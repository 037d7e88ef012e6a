from __future__ import annotations

from typing import Annotated, Any, Literal, Union

from pydantic import BaseModel, Field, TypeAdapter, model_validator


# --- Structures ---

class SetDoc(BaseModel):
    type: Literal["set"] = "set"
    n: int = Field(ge=0)


class MatroidDoc(BaseModel):
    type: Literal["matroid"] = "matroid"
    n: int = Field(ge=0)
    rank: list[int] | None = None
    bases: list[list[int]] | None = None

    @model_validator(mode="after")
    def _one_encoding(self) -> MatroidDoc:
        if (self.rank is None) == (self.bases is None):
            raise ValueError("give exactly one of 'rank' or 'bases'")
        if self.rank is not None and len(self.rank) != 1 << self.n:
            raise ValueError(f"rank table needs {1 << self.n} entries, got {len(self.rank)}")
        return self


class GraphDoc(BaseModel):
    type: Literal["graph"] = "graph"
    vertices: int = Field(ge=0)
    edges: list[tuple[int, int]] = Field(default_factory=list)


class DeltaDoc(BaseModel):
    type: Literal["delta"] = "delta"
    n: int = Field(ge=0)
    feasible: list[list[int]]


class PerspectiveDoc(BaseModel):
    type: Literal["perspective"] = "perspective"
    M: MatroidDoc
    Mprime: MatroidDoc


class DMPDoc(BaseModel):
    type: Literal["dmp"] = "dmp"
    M: MatroidDoc
    D: DeltaDoc
    Mprime: MatroidDoc


class RelativeDoc(BaseModel):
    type: Literal["relative"] = "relative"
    matroid: MatroidDoc
    zero_set: list[int] = Field(default_factory=list)


class SubmodularDoc(BaseModel):
    type: Literal["submodular"] = "submodular"
    n: int = Field(ge=0)
    rank: list[int]
    polymatroid: bool = False

    @model_validator(mode="after")
    def _table_size(self) -> SubmodularDoc:
        if len(self.rank) != 1 << self.n:
            raise ValueError(f"rank table needs {1 << self.n} entries, got {len(self.rank)}")
        return self


class ColoredDoc(BaseModel):
    type: Literal["colored"] = "colored"
    matroid: MatroidDoc
    colors: list[str]


class ArithmeticDoc(BaseModel):
    type: Literal["arithmetic"] = "arithmetic"
    matroid: MatroidDoc
    multiplicity: list[int]


class PresentationDoc(BaseModel):
    type: Literal["arithmetic_presentation"] = "arithmetic_presentation"
    free_rank: int = Field(ge=0)
    torsion: list[int] = Field(default_factory=list)
    columns: list[list[int]] = Field(default_factory=list)


InputDoc = Annotated[
    Union[
        SetDoc,
        MatroidDoc,
        GraphDoc,
        DeltaDoc,
        PerspectiveDoc,
        DMPDoc,
        RelativeDoc,
        SubmodularDoc,
        ColoredDoc,
        ArithmeticDoc,
        PresentationDoc,
    ],
    Field(discriminator="type"),
]

input_adapter: TypeAdapter = TypeAdapter(InputDoc)


def parse_input(raw: str | bytes | dict) -> BaseModel:
    if isinstance(raw, dict):
        return input_adapter.validate_python(raw)
    return input_adapter.validate_json(raw)


# --- Results ---

class Witness(BaseModel):
    """Replayable record of a failed identity."""

    identity: str
    structure: dict[str, Any]
    subsets: list[int] = Field(default_factory=list)
    elements: list[int] = Field(default_factory=list)
    left: str = ""
    right: str = ""
    detail: str = ""


class TermOut(BaseModel):
    coeff: str
    monomial: dict[str, Any]


class PolyOut(BaseModel):
    invariant: str
    text: str
    terms: list[TermOut]
    legend: dict[str, Any] | None = None


class VerifyReport(BaseModel):
    identity: str
    instances: int
    passed: bool
    witness: Witness | None = None
    counts: dict[str, int] | None = None
