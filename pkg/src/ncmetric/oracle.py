"""Numeric evaluation of the spectral distance as a convex program.

The distance between two states is

    sup { (tau1 - tau2)(a) : a = a*, ||[D, pi(a)]|| <= 1 },

a dual-norm evaluation: a linear functional maximized over the unit ball
of N(v) = ||sum_k v_k i[D, B_k]|| in the coordinates v of the self-adjoint
basis modulo the commutant kernel.  After the exact kernel test rules out
infinite distances, the ball is approximated from outside by supporting
half-spaces |u* M(v) u| <= 1 (one per eigenvector u encountered), each LP
relaxation giving an upper bound and each rescaled iterate a feasible
lower bound; the loop stops when the sandwich closes to the requested
relative tolerance.  A short seeded local polish keeps the lower bound
sharp on the rare instances where the LP stalls.
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np
from scipy.optimize import linprog, minimize

from .triple import (
    DistanceValue,
    KernelVerdict,
    PureState,
    SpectralTriple,
    TripleCalculus,
    commutant_kernel_test,
    coords_from_basis_vector,
    state_functional,
    triple_calculus,
    validate_state,
)

DEFAULT_DIM_CAP = 256
DIM_CAP_ENV = "NCMETRIC_DIM_CAP"


class OracleError(RuntimeError):
    pass


class DimensionCapError(OracleError):
    """Total Hilbert dimension exceeds the configured cap."""


@dataclass(frozen=True)
class OracleOptions:
    rel_tol: float = 1e-6
    max_iters: int = 600
    restarts: int = 8
    seed: int = 0
    dim_cap: int | None = None

    def __post_init__(self):
        if self.rel_tol <= 0:
            raise ValueError("rel_tol must be positive")
        if self.restarts < 1:
            raise ValueError("restarts must be >= 1")

    @property
    def effective_dim_cap(self) -> int:
        if self.dim_cap is not None:
            return self.dim_cap
        env = os.environ.get(DIM_CAP_ENV)
        return int(env) if env else DEFAULT_DIM_CAP


def _quotient_generators(calc: TripleCalculus) -> list[np.ndarray]:
    """Hermitian matrices M_j = i[D, pi(B Q e_j)] on the kernel complement."""
    comms = np.stack(calc.commutators)
    gens = []
    for j in range(calc.complement.shape[1]):
        gens.append(1j * np.tensordot(calc.complement[:, j], comms, axes=1))
    return gens


def _norm_and_top_vector(mats: np.ndarray, v: np.ndarray) -> tuple[float, np.ndarray]:
    m = np.tensordot(v, mats, axes=1)
    w, u = np.linalg.eigh(m)
    i = int(np.argmax(np.abs(w)))
    return float(abs(w[i])), u[:, i]


def _cut_row(mats: np.ndarray, u: np.ndarray) -> np.ndarray:
    return np.real(np.einsum("i,kij,j->k", u.conj(), mats, u))


def _dual_norm_max(
    c: np.ndarray, gen_list: list[np.ndarray], opts: OracleOptions
) -> tuple[float, np.ndarray, bool]:
    """max c.v over ||M(v)|| <= 1 by cutting planes; returns value, v, converged."""
    q = len(c)
    mats = np.stack(gen_list)
    dim = mats.shape[1]
    # ||M(v)||_F >= smin ||v|| gives a box that always bounds the LP
    stack = np.stack([m.reshape(-1) for m in gen_list], axis=1)
    sv = np.linalg.svd(np.vstack([stack.real, stack.imag]), compute_uv=False)
    smin = sv[-1]
    if smin <= 0:
        raise OracleError("quotient norm is degenerate; kernel split failed")
    radius = 2.0 * np.sqrt(dim) / smin

    rows: list[np.ndarray] = []
    seeds = [c] + [e for e in np.eye(q)]
    for v0 in seeds:
        nv, u = _norm_and_top_vector(mats, v0)
        if nv > 0:
            rows.append(_cut_row(mats, u))

    best = 0.0
    best_v: np.ndarray | None = None
    upper = np.inf
    converged = False
    for _ in range(opts.max_iters):
        a_ub = np.vstack(rows + [-r for r in rows])
        res = linprog(
            -c,
            A_ub=a_ub,
            b_ub=np.ones(a_ub.shape[0]),
            bounds=[(-radius, radius)] * q,
            method="highs",
        )
        if not res.success:
            break
        v = res.x
        upper = float(-res.fun)
        nv, u = _norm_and_top_vector(mats, v)
        if nv > 1e-14:
            cand = float(c @ v) / nv
            if cand > best:
                best, best_v = cand, v / nv
        if nv <= 1.0 + 1e-12:
            best, best_v = upper, v
            converged = True
            break
        if upper - best <= opts.rel_tol * max(best, 1e-30):
            converged = True
            break
        # cut at a point pulled toward the incumbent: tangent planes near
        # the boundary shave the LP polytope much faster than cuts at the
        # (far outside) LP vertex itself
        if best_v is not None:
            v_cut = best_v + 0.6 * (v - best_v)
            _, u = _norm_and_top_vector(mats, v_cut)
        rows.append(_cut_row(mats, u))

    if not converged:
        # The LP stalled; polish the homogeneous ratio from the incumbent
        # and seeded random restarts.  Only the lower bound can improve.
        rng = np.random.default_rng(opts.seed)
        starts = [best_v if best_v is not None else c]
        for _ in range(opts.restarts - 1):
            starts.append(rng.normal(size=q))

        def negative_ratio(v):
            nv, _ = _norm_and_top_vector(mats, v)
            if nv <= 1e-14:
                return 0.0
            return -float(c @ v) / nv

        for v0 in starts:
            r = minimize(negative_ratio, v0, method="Nelder-Mead",
                         options={"xatol": 1e-10, "fatol": 1e-12, "maxiter": 200 * q})
            val = -r.fun
            if val > best:
                nv, _ = _norm_and_top_vector(mats, r.x)
                best, best_v = val, r.x / nv
        if upper - best <= opts.rel_tol * max(best, 1e-30):
            converged = True
    return best, best_v, converged


def distance_numeric(
    triple: SpectralTriple,
    s1: PureState,
    s2: PureState,
    opts: OracleOptions | None = None,
    calc: TripleCalculus | None = None,
) -> DistanceValue:
    """Spectral distance between two pure states of one finite triple.

    Runs the exact commutant-kernel test first (+inf short-circuit), then
    evaluates the supremum on the quotient coordinates.  The witness is the
    optimizing self-adjoint element, block coordinates scaled to a
    commutator of norm exactly 1.
    """
    opts = opts or OracleOptions()
    validate_state(triple, s1)
    validate_state(triple, s2)
    if triple.dim > opts.effective_dim_cap:
        raise DimensionCapError(
            f"Hilbert dimension {triple.dim} exceeds cap {opts.effective_dim_cap}"
        )
    if calc is None:
        calc = triple_calculus(triple)
    if commutant_kernel_test(triple, s1, s2, calc=calc) is KernelVerdict.INFINITE:
        return DistanceValue(np.inf)
    cfull = state_functional(calc, s1, s2)
    c = calc.complement.T @ cfull
    if np.linalg.norm(c) == 0.0:
        return DistanceValue(0.0)
    gens = _quotient_generators(calc)
    value, v, converged = _dual_norm_max(c, gens, opts)
    if v is None:
        return DistanceValue(0.0, converged=False)
    witness = coords_from_basis_vector(calc, calc.complement @ v)
    return DistanceValue(float(value), witness=witness, converged=converged)


def distance_matrix(
    triple: SpectralTriple,
    states: list[PureState],
    opts: OracleOptions | None = None,
    parallel: int = 1,
) -> list[list[DistanceValue]]:
    """All pairwise distances; each pair computed once, diagonal zero."""
    if len(states) < 2:
        raise OracleError("distance_matrix needs at least two states")
    opts = opts or OracleOptions()
    calc = triple_calculus(triple)
    n = len(states)
    out: list[list[DistanceValue | None]] = [[None] * n for _ in range(n)]
    for i in range(n):
        out[i][i] = DistanceValue(0.0)
    pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]

    def run(pair):
        i, j = pair
        return i, j, distance_numeric(triple, states[i], states[j], opts=opts, calc=calc)

    if parallel > 1:
        with ThreadPoolExecutor(max_workers=parallel) as ex:
            results = list(ex.map(run, pairs))
    else:
        results = [run(p) for p in pairs]
    for i, j, d in results:
        out[i][j] = d
        out[j][i] = d
    return out  # type: ignore[return-value]
