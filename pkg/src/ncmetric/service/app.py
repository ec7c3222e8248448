"""FastAPI service exposing the distance computations."""

from __future__ import annotations

import math
import warnings

import numpy as np
from fastapi import FastAPI, HTTPException

from .. import commutative, standardmodel
from ..dispatch import DispatchError, resolve_distance
from ..document import DocumentError, parse_triple_document, triple_to_document
from ..linalg import operator_norm
from ..oracle import DimensionCapError, OracleOptions
from ..triple import PureState
from .models import (
    DistanceRequest,
    DistanceResponse,
    GraphRequest,
    GraphResponse,
    Invert3Request,
    Invert3Response,
    MatrixRequest,
    MatrixResponse,
    RealizeRequest,
    RealizeResponse,
    SmRequest,
    SmResponse,
)

app = FastAPI(title="ncmetric", description="Spectral distances on finite geometries")


def _fail(status: int, code: str, message: str):
    raise HTTPException(status_code=status, detail={"code": code, "message": message})


def _parse(document: dict):
    try:
        return parse_triple_document(document)
    except DocumentError as exc:
        _fail(400, "parse-error", str(exc))


def _options(tol: float | None, seed: int) -> OracleOptions:
    kwargs = {"seed": seed}
    if tol is not None:
        kwargs["rel_tol"] = tol
    return OracleOptions(**kwargs)


def _witness_payload(witness) -> list | None:
    if witness is None:
        return None
    out = []
    for w in witness:
        if isinstance(w, np.ndarray):
            out.append([[float(z.real), float(z.imag)] for z in w.reshape(-1)])
        else:
            z = complex(w)
            out.append([z.real, z.imag])
    return out


@app.get("/health")
def health() -> dict:
    return {"status": "ok"}


@app.post("/distance", response_model=DistanceResponse)
def distance(req: DistanceRequest) -> DistanceResponse:
    triple, states = _parse(req.document)
    for name in (req.state_a, req.state_b):
        if name not in states:
            _fail(404, "unknown-state", f"state {name!r} is not declared in the document")
    try:
        value, method = resolve_distance(
            triple, states[req.state_a], states[req.state_b], method=req.method,
            opts=_options(req.tol, req.seed),
        )
    except DispatchError as exc:
        _fail(400, "no-closed-form", str(exc))
    except DimensionCapError as exc:
        _fail(400, "dimension-cap", str(exc))
    return DistanceResponse(
        value=None if value.is_infinite else value.value,
        infinite=value.is_infinite,
        method=method,
        converged=value.converged,
        witness=_witness_payload(value.witness) if req.witness else None,
    )


@app.post("/matrix", response_model=MatrixResponse)
def matrix(req: MatrixRequest) -> MatrixResponse:
    triple, states = _parse(req.document)
    if not states:
        _fail(404, "unknown-state", "the document declares no states")
    names = list(states)
    opts = _options(req.tol, req.seed)
    n = len(names)
    values: list[list[float | None]] = [[0.0] * n for _ in range(n)]
    mask = [[0] * n for _ in range(n)]
    pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]

    def solve(pair):
        i, j = pair
        d, _ = resolve_distance(triple, states[names[i]], states[names[j]],
                                method=req.method, opts=opts)
        return i, j, d

    try:
        if req.parallel > 1:
            from concurrent.futures import ThreadPoolExecutor

            with ThreadPoolExecutor(max_workers=req.parallel) as ex:
                results = list(ex.map(solve, pairs))
        else:
            results = [solve(p) for p in pairs]
    except DispatchError as exc:
        _fail(400, "no-closed-form", str(exc))
    except DimensionCapError as exc:
        _fail(400, "dimension-cap", str(exc))
    for i, j, d in results:
        if d.is_infinite:
            values[i][j] = values[j][i] = None
            mask[i][j] = mask[j][i] = 1
        else:
            values[i][j] = values[j][i] = d.value
    return MatrixResponse(states=names, values=values, infinite_mask=mask)


@app.post("/invert3", response_model=Invert3Response)
def invert3(req: Invert3Request) -> Invert3Response:
    try:
        couplings = commutative.three_point_inverse(req.a, req.b, req.c)
    except commutative.SquaredTriangleError as exc:
        _fail(422, "squared-triangle-violation", exc.violated)
    except commutative.CommutativeError as exc:
        _fail(422, "invalid-input", str(exc))
    names = ["D12", "D13", "D23"]
    deleted = [name for name, c in zip(names, couplings) if c == 0.0]
    return Invert3Response(couplings=list(couplings), deleted_links=deleted)


def _metric_from_payload(rows: list[list[float | str]]) -> np.ndarray:
    def entry(v):
        if isinstance(v, str):
            if v.strip().lower() in ("inf", "+inf", "infinity"):
                return math.inf
            return float(v)
        return float(v)

    return np.array([[entry(v) for v in row] for row in rows])


@app.post("/realize", response_model=RealizeResponse)
def realize(req: RealizeRequest) -> RealizeResponse:
    try:
        metric = _metric_from_payload(req.metric)
    except ValueError as exc:
        _fail(400, "parse-error", f"metric: {exc}")
    try:
        triple = commutative.metric_to_triple(metric)
    except commutative.TriangleError as exc:
        _fail(422, "triangle-violation", str(exc))
    except commutative.CommutativeError as exc:
        _fail(422, "invalid-metric", str(exc))
    states = {f"p{i}": PureState(i) for i in range(metric.shape[0])}
    return RealizeResponse(document=triple_to_document(triple, states))


@app.post("/sm", response_model=SmResponse)
def sm(req: SmRequest) -> SmResponse:
    try:
        masses = standardmodel.FermionMasses(
            req.config.up, req.config.down, req.config.lepton,
            ckm=_ckm_from_payload(req.config.ckm),
        )
        higgs = standardmodel.HiggsDoublet(complex(*req.h1), complex(*req.h2))
    except standardmodel.StandardModelError as exc:
        _fail(422, "invalid-config", str(exc))
    notes: list[str] = []
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        gtt = standardmodel.sm_gtt(higgs, masses)
    notes += [str(w.message) for w in caught]
    distance_value = standardmodel.sm_fiber_distance(higgs, masses) if gtt > 0 else None
    residual = None
    if req.verify:
        direct = operator_norm(standardmodel.higgs_times_mass(higgs, masses)) ** 2
        residual = abs(direct - gtt) / max(1.0, abs(direct))
    infinite = gtt == 0.0
    return SmResponse(
        gtt=gtt,
        distance=None if infinite else 1.0 / math.sqrt(gtt),
        infinite=infinite,
        residual=residual,
        warnings=notes,
    )


def _ckm_from_payload(rows):
    if rows is None:
        return None
    out = []
    for row in rows:
        out.append([complex(v[0], v[1]) if isinstance(v, list) else complex(v) for v in row])
    return np.array(out)


@app.post("/graph", response_model=GraphResponse)
def graph(req: GraphRequest) -> GraphResponse:
    triple, _ = _parse(req.document)
    d = np.asarray(triple.dirac)
    if np.max(np.abs(d.imag)) > 0.0:
        _fail(422, "not-commutative", "graph extraction needs a real Dirac operator")
    try:
        g = commutative.graph_from_dirac(d.real)
    except commutative.CommutativeError as exc:
        _fail(422, "not-commutative", str(exc))
    n = g.n
    geo: list[list[float | None]] = [[0.0] * n for _ in range(n)]
    mask = [[0] * n for _ in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            length = commutative.geodesic_length(g, i, j)
            if length.is_infinite:
                geo[i][j] = geo[j][i] = None
                mask[i][j] = mask[j][i] = 1
            else:
                geo[i][j] = geo[j][i] = length.value
    return GraphResponse(
        n=n,
        edges=[[float(i), float(j), float(w)] for i, j, w in g.edges],
        geodesics=geo,
        infinite_mask=mask,
    )
