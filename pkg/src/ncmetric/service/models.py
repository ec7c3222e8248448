"""Pydantic request/response models of the distance service.

Infinite distances cannot ride in JSON floats, so responses carry
``value = null`` plus an ``infinite`` flag; matrices additionally ship a
0/1 mask.  Metric entries and four-point lengths accept the string "inf".
"""

from __future__ import annotations

from typing import Any, Literal

from pydantic import BaseModel, Field


class DistanceRequest(BaseModel):
    document: dict[str, Any]
    state_a: str
    state_b: str
    method: Literal["auto", "oracle", "closed-form"] = "auto"
    tol: float | None = None
    seed: int = 0
    witness: bool = False


class DistanceResponse(BaseModel):
    value: float | None
    infinite: bool
    method: str
    converged: bool = True
    witness: list[Any] | None = None


class MatrixRequest(BaseModel):
    document: dict[str, Any]
    method: Literal["auto", "oracle", "closed-form"] = "auto"
    tol: float | None = None
    seed: int = 0
    parallel: int = 1


class MatrixResponse(BaseModel):
    states: list[str]
    values: list[list[float | None]]
    infinite_mask: list[list[int]]


class Invert3Request(BaseModel):
    a: float = Field(gt=0)
    b: float = Field(gt=0)
    c: float = Field(gt=0)


class Invert3Response(BaseModel):
    couplings: list[float]
    deleted_links: list[str]


class RealizeRequest(BaseModel):
    metric: list[list[float | str]]


class RealizeResponse(BaseModel):
    document: dict[str, Any]


class SmConfig(BaseModel):
    up: list[float]
    down: list[float]
    lepton: list[float]
    ckm: list[list[Any]] | None = None


class SmRequest(BaseModel):
    config: SmConfig
    h1: list[float] = Field(min_length=2, max_length=2)
    h2: list[float] = Field(min_length=2, max_length=2)
    verify: bool = False


class SmResponse(BaseModel):
    gtt: float
    distance: float | None
    infinite: bool
    residual: float | None = None
    warnings: list[str] = []


class GraphRequest(BaseModel):
    document: dict[str, Any]


class GraphResponse(BaseModel):
    n: int
    edges: list[list[float]]  # [i, j, length]
    geodesics: list[list[float | None]]
    infinite_mask: list[list[int]]


class ErrorDetail(BaseModel):
    code: str
    message: str
