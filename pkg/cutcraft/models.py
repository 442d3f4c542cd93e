import json
from datetime import datetime
from enum import Enum
from typing import Optional

from pydantic import BaseModel
from sqlmodel import Field, SQLModel


class Problem(str, Enum):
    CMC = "cmc"
    MMC = "mmc"
    CMC_ST = "cmc-st"
    MMC_ST = "mmc-st"

    @property
    def anchored(self) -> bool:
        return self in (Problem.CMC_ST, Problem.MMC_ST)

    @property
    def minimal(self) -> bool:
        return self in (Problem.MMC, Problem.MMC_ST)


class Algorithm(str, Enum):
    AUTO = "auto"
    ORACLE = "oracle"
    TWDP = "twdp"
    RANK = "rank"
    CUTCOUNT = "cutcount"
    TWINCOVER = "twincover"
    CLIQUEWIDTH = "cliquewidth"
    WINWIN = "winwin"


def _shift(values, delta):
    return None if values is None else [v + delta for v in values]


class SolveReport(BaseModel):
    """Outcome of one solver run. Vertex ids are 0-based here and 1-based on disk."""

    problem: Problem
    algorithm: Algorithm
    n: int
    m: int
    optimum: Optional[int]  # None: no feasible cut exists
    witness: Optional[list[int]] = None
    anchors: Optional[list[int]] = None
    seed: Optional[int] = None
    repeats: Optional[int] = None
    elapsed_ms: Optional[float] = None
    peak_cells: Optional[int] = None

    def to_document(self, timings: bool = True) -> str:
        data = self.model_dump(mode="json")
        data["witness"] = _shift(self.witness, 1)
        data["anchors"] = _shift(self.anchors, 1)
        if not timings:
            data.pop("elapsed_ms")
        return json.dumps(data, indent=2) + "\n"

    @classmethod
    def from_document(cls, text: str) -> "SolveReport":
        data = json.loads(text)
        data["witness"] = _shift(data.get("witness"), -1)
        data["anchors"] = _shift(data.get("anchors"), -1)
        return cls.model_validate(data)


class DecisionReport(BaseModel):
    problem: Problem
    k: int
    answer: bool
    route: str
    witness: Optional[list[int]] = None
    seed: Optional[int] = None

    def to_document(self) -> str:
        data = self.model_dump(mode="json")
        data["answer"] = "yes" if self.answer else "no"
        data["witness"] = _shift(self.witness, 1)
        return json.dumps(data, indent=2) + "\n"


class BenchRecord(SQLModel, table=True):
    id: Optional[int] = Field(default=None, primary_key=True)
    run_id: str = Field(index=True)
    instance: str = Field(index=True)
    params: str  # generator parameters in JSON format
    problem: str
    algorithm: str = Field(index=True)
    seed: Optional[int] = None
    status: str = "ok"  # ok | timeout | budget | error
    optimum: Optional[int] = None
    oracle: Optional[int] = None
    agrees: Optional[bool] = None
    elapsed_ms: Optional[float] = None
    peak_cells: Optional[int] = None
    created_at: datetime = Field(default_factory=datetime.utcnow)
