"""Pydantic request models for the service endpoints.

Responses are plain JSON documents assembled by the core package (the
same dicts the CLI prints), so only the request side is modeled here.
"""

from typing import Optional

from pydantic import BaseModel, Field


class BottRequest(BaseModel):
    weight: Optional[list[int]] = None
    rank: Optional[int] = None
    flag: Optional[list[int]] = None
    block_weight: Optional[list[int]] = None


class OmegaRequest(BaseModel):
    flag: list[int]
    degree: int


class HodgeRequest(BaseModel):
    flag: list[int]


class TensorSource(BaseModel):
    """Where a curvature tensor comes from: an inline document or a builtin
    constructor string like "grassmannian:4,2" or "griffiths_sample:3,2,1"."""

    tensor: Optional[dict] = None
    builtin: Optional[str] = None


class BknRequest(TensorSource):
    p: Optional[int] = None
    q: Optional[int] = None
    check: str = "spectrum"  # "spectrum" | "nakano_pointwise" | "ks_top_degree"
    k: int = 0
    tol: float = 1e-9
    samples: int = Field(default=500, ge=1)
    seed: int = 0


class PositivityRequest(TensorSource):
    check: str = "ks"  # "ks" | "nakano"
    k: int = 0
    s: int = 1
    samples: int = Field(default=500, ge=1)
    tol: float = 1e-9
    seed: int = 0


class VanishRequest(BaseModel):
    expr: str
    n: Optional[int] = None
    p: int
    q: int
    conjectural: bool = False
    flag: Optional[list[int]] = None
    block_weight: Optional[list[int]] = None
    weight_u: Optional[list[int]] = None


class SharpnessRequest(BaseModel):
    dims: list[int]
    twists: list[int]


class CrosscheckRequest(BaseModel):
    n: int = Field(ge=1, le=6)
    trials: int = Field(default=100, ge=1)
    seed: int = 0
