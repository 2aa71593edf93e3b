"""Pydantic request/response schemas of the HTTP service.

Every command the CLI exposes is a POST endpoint taking one of these
request models; responses wrap the rendered primary output (the exact
bytes the CLI prints) together with the experiment manifest that replays
it.
"""

from __future__ import annotations

from typing import List, Literal, Optional

from pydantic import BaseModel, Field, field_validator

Variety = Literal["abelian", "free", "nilpotent2", "metabelian", "lamplighter"]
Format = Literal["json", "csv"]


class Manifest(BaseModel):
    command: str
    config: dict
    version: str
    output_digest: str


class RunResponse(BaseModel):
    output: str
    manifest: Manifest


class GroupRequest(BaseModel):
    variety: Variety
    d: int = Field(ge=1, le=6)
    m: Optional[int] = None

    @field_validator("m")
    @classmethod
    def _m_valid(cls, v):
        if v is not None and (v < 0 or v == 1):
            raise ValueError("lamp modulus must be 0 or >= 2")
        return v


class EvalRequest(GroupRequest):
    word: str
    format: Format = "json"


class EqRequest(GroupRequest):
    word1: str
    word2: str
    format: Format = "json"


class MulRequest(GroupRequest):
    words: List[str]
    format: Format = "json"


class InvRequest(GroupRequest):
    word: str
    format: Format = "json"


class MinlenRequest(BaseModel):
    d: int = Field(ge=1, le=6)
    word: str
    budget: Optional[int] = Field(default=None, ge=0)
    format: Format = "json"


class WalkRequest(GroupRequest):
    Ns: List[int]
    samples: int = Field(ge=1)
    seed: int
    exact_budget: int = 8
    threads: int = Field(default=1, ge=1)
    format: Format = "csv"


class GrowthRequest(GroupRequest):
    n_max: int = Field(ge=1)
    max_elements: int = 5_000_000
    format: Format = "csv"


class EntropyRequest(GroupRequest):
    n_max: int = Field(ge=1)
    budget: int = 20_000_000
    format: Format = "csv"


class InequalityRequest(GroupRequest):
    seed: int
    entropy_n: int = Field(ge=1)
    growth_n: int = Field(ge=1)
    drift_n: int = Field(ge=1)
    drift_samples: int = Field(ge=2)
    format: Format = "json"


class StableFlowRequest(BaseModel):
    d: int = Field(ge=1, le=4)
    N: int = Field(ge=2)
    seeds: int = Field(ge=1)
    window: int = Field(default=5, ge=0)
    seed: int
    threads: int = Field(default=1, ge=1)
    format: Format = "csv"


class GreenRequest(BaseModel):
    d: int = Field(ge=3, le=5)
    points: List[List[int]]
    tol: float = 1e-3
    format: Format = "csv"


class EdgeModel(BaseModel):
    base: List[int]
    axis: int = Field(ge=1)


class ExpectedFlowRequest(BaseModel):
    d: int = Field(ge=3, le=5)
    edges: List[EdgeModel]
    tol: float = 1e-3
    format: Format = "csv"


class RecurrenceRequest(BaseModel):
    d: int = Field(ge=1, le=4)
    checkpoints: List[int]
    seeds: int = Field(ge=1)
    seed: int
    format: Format = "csv"


class FinalConfigRequest(BaseModel):
    d: int = Field(ge=1, le=4)
    m: int = 0
    Ns: List[int]
    window: int = Field(default=5, ge=0)
    seeds: int = Field(ge=1)
    seed: int
    threads: int = Field(default=1, ge=1)
    format: Format = "csv"

    @field_validator("m")
    @classmethod
    def _m_valid(cls, v):
        if v < 0 or v == 1:
            raise ValueError("lamp modulus must be 0 or >= 2")
        return v
