"""Products of spectral triples, state-pair reduction, scalar fluctuations,
and the warped two-sheet geodesic.

The product Dirac operator is D_E (x) I_I + Gamma_E (x) D_I, which needs a
grading on the external factor.  Distances along either factor reduce to
the factor triples; a pair of direct-sum internal states whose support sum
commutes with D reduces to a two-point geometry with coupling ||M||, M the
off-diagonal Dirac block between the supports.  A scalar fluctuation
replaces the internal Dirac by D_I + H, making ||M(x)|| a function on the
base; the induced two-sheet metric g_tt(s) dt^2 + ds^2 on [0,1] x [0, L]
is handled by a conserved-quantity shooting method with a layered
shortest-path fallback that also captures detour-through-cheap-fiber
paths.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .linalg import commutator, hermitian, operator_norm
from .oracle import OracleOptions, distance_numeric
from .triple import (
    BlockKind,
    DistanceValue,
    FiniteAlgebra,
    PureState,
    RepresentationSlot,
    SlotMode,
    SpectralTriple,
    represent,
    represented_selfadjoint_basis,
)


class ProductError(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class ProductTriple:
    external: SpectralTriple
    internal: SpectralTriple
    assembled: SpectralTriple


def _require_commutative_external(external: SpectralTriple) -> None:
    ok = all(b.kind in (BlockKind.COMPLEX_LINE, BlockKind.REAL_LINE) for b in external.algebra.blocks)
    ok = ok and len(external.slots) == len(external.algebra.blocks)
    ok = ok and all(
        s.block_index == i and s.mode is SlotMode.SCALAR and s.multiplicity == 1
        for i, s in enumerate(external.slots)
    )
    if not ok:
        raise ProductError(
            "the external factor must be a commutative n-point triple "
            "(one scalar slot per line block, in block order)"
        )


def tensor_product_triple(external: SpectralTriple, internal: SpectralTriple) -> ProductTriple:
    """Assemble T_E (x) T_I with Dirac D_E (x) I + Gamma_E (x) D_I.

    The external factor must carry a grading and be a commutative n-point
    triple; product pure states are then exactly the pairs of factor pure
    states, labelled by assembled block index e * len(internal blocks) + b.
    """
    if external.grading is None:
        raise ProductError("the external factor needs a grading")
    _require_commutative_external(external)
    ne = external.dim
    blocks = []
    slots = []
    for e in range(ne):
        for s in internal.slots:
            slots.append(
                RepresentationSlot(
                    e * len(internal.algebra) + s.block_index, s.mode, s.multiplicity
                )
            )
        blocks.extend(internal.algebra.blocks)
    de = np.asarray(external.dirac)
    gamma = np.diagonal(np.asarray(external.grading))
    dirac = np.kron(de, np.eye(internal.dim)) + np.kron(np.diag(gamma), internal.dirac)
    assembled = SpectralTriple(FiniteAlgebra(blocks), slots, hermitian(dirac))
    return ProductTriple(external, internal, assembled)


def product_state(product: ProductTriple, external_point: int, internal_state: PureState) -> PureState:
    """The assembled pure state tau_e (x) tau_I."""
    ne = external_point
    if not 0 <= ne < product.external.dim:
        raise ProductError("external point out of range")
    block = ne * len(product.internal.algebra) + internal_state.block_index
    return PureState(block, vector=internal_state.vector)


@dataclass(frozen=True)
class FactorReport:
    """Comparison of assembled distances against factor distances."""

    mode: str
    pairs: tuple[tuple[float, float], ...]  # (assembled, factor) per comparison
    max_deviation: float


def factor_distance_check(
    product: ProductTriple,
    mode: str,
    internal_states: list[PureState],
    opts: OracleOptions | None = None,
) -> FactorReport:
    """Check the factor-distance theorem numerically on given state pairs.

    mode "internal": fix the external point, compare assembled distances of
    (e, tau), (e, tau') against the internal triple.  mode "external": fix
    the internal state and compare across external points against the
    external triple.
    """
    opts = opts or OracleOptions()
    pairs = []
    if mode == "internal":
        for ti in range(len(internal_states)):
            for tj in range(ti + 1, len(internal_states)):
                want = distance_numeric(product.internal, internal_states[ti], internal_states[tj], opts=opts)
                got = distance_numeric(
                    product.assembled,
                    product_state(product, 0, internal_states[ti]),
                    product_state(product, 0, internal_states[tj]),
                    opts=opts,
                )
                pairs.append((got.value, want.value))
    elif mode == "external":
        for e in range(product.external.dim):
            for e2 in range(e + 1, product.external.dim):
                want = distance_numeric(product.external, PureState(e), PureState(e2), opts=opts)
                got = distance_numeric(
                    product.assembled,
                    product_state(product, e, internal_states[0]),
                    product_state(product, e2, internal_states[0]),
                    opts=opts,
                )
                pairs.append((got.value, want.value))
    else:
        raise ProductError("mode must be 'internal' or 'external'")
    devs = [
        abs(g - w) for g, w in pairs
        if not (math.isinf(g) and math.isinf(w))
    ]
    finite_pairs = [(g, w) for g, w in pairs]
    maxdev = max(devs) if devs else 0.0
    for g, w in pairs:
        if math.isinf(g) != math.isinf(w):
            maxdev = math.inf
    return FactorReport(mode, tuple(finite_pairs), maxdev)


def _state_support_coords(triple: SpectralTriple, state: PureState) -> list:
    coords = []
    for i, b in enumerate(triple.algebra.blocks):
        if b.kind is BlockKind.MATRIX:
            z = np.zeros((b.size, b.size), dtype=complex)
            if i == state.block_index:
                v = state.vector
                z = np.outer(v, np.conj(v))
            coords.append(z)
        elif b.kind is BlockKind.QUATERNIONS:
            q = 1.0 if i == state.block_index else 0.0
            coords.append(np.eye(2, dtype=complex) * q)
        else:
            coords.append(1.0 if i == state.block_index else 0.0)
    return coords


def reduce_pair(
    triple: SpectralTriple,
    s1: PureState,
    s2: PureState,
    tol: float = 1e-10,
) -> tuple[float, DistanceValue]:
    """Reduce a direct-sum state pair to the two-point geometry.

    Requires the two state supports to be orthogonal projectors in the
    represented algebra whose sum commutes with D.  Returns (||M||, 1/||M||)
    with M the off-diagonal block of D between the support subspaces;
    ||M|| = 0 gives +inf.
    """
    p1 = represent(triple, _state_support_coords(triple, s1))
    p2 = represent(triple, _state_support_coords(triple, s2))
    if operator_norm(p1 @ p2) > tol:
        raise ProductError("states are not in direct sum (supports not orthogonal)")
    e = p1 + p2
    residual = operator_norm(commutator(triple.dirac, e))
    if residual > tol * max(1.0, operator_norm(triple.dirac)):
        raise ProductError(
            f"support sum does not commute with D (residual norm {residual:.3e})"
        )

    def range_basis(p: np.ndarray) -> np.ndarray:
        w, v = np.linalg.eigh(hermitian(p))
        return v[:, w > 0.5]

    b1 = range_basis(p1)
    b2 = range_basis(p2)
    m = b1.conj().T @ triple.dirac @ b2
    nrm = operator_norm(m) if m.size else 0.0
    if nrm <= tol:
        return 0.0, DistanceValue(np.inf)
    return float(nrm), DistanceValue(1.0 / nrm)


def pythagoras_cross(d_external: float, d_internal: float) -> float:
    """Hypotenuse composition for orthogonal factor directions."""
    if math.isinf(d_external) or math.isinf(d_internal):
        raise ProductError("pythagoras_cross needs finite legs")
    return math.hypot(d_external, d_internal)


def fluctuate(internal: SpectralTriple, h: np.ndarray) -> SpectralTriple:
    """Replace the internal Dirac by D_I + H (H self-adjoint)."""
    h = hermitian(h)
    if h.shape != internal.dirac.shape:
        raise ProductError(
            f"fluctuation shape {h.shape} does not match Dirac {internal.dirac.shape}"
        )
    return SpectralTriple(
        internal.algebra, internal.slots, internal.dirac + h,
        grading=internal.grading, real_form=internal.real_form,
    )


def one_form_residual(triple: SpectralTriple, h: np.ndarray) -> float:
    """Least-squares residual of H against span{pi(a) [D, pi(b)]}.

    A certified scalar fluctuation lies in the one-form module; the
    membership check is a dense least squares over the self-adjoint basis
    products (complex coefficients, so the full complex span is tested).
    """
    h = hermitian(h)
    basis = represented_selfadjoint_basis(triple)
    cols = []
    for a in basis:
        for b in basis:
            cols.append((a @ commutator(triple.dirac, b)).reshape(-1))
    a_mat = np.stack(cols, axis=1)
    rhs = h.reshape(-1)
    coeffs = np.linalg.lstsq(a_mat, rhs, rcond=None)[0]
    return float(np.linalg.norm(rhs - a_mat @ coeffs))


@dataclass(frozen=True)
class ScalarFluctuation:
    """A sampled scalar field x -> H(x) of internal perturbations."""

    samples: tuple[tuple[float, np.ndarray], ...]

    def __init__(self, samples):
        canon = []
        for x, h in samples:
            canon.append((float(x), hermitian(h)))
        object.__setattr__(self, "samples", tuple(canon))

    def fiber_distances(
        self,
        internal: SpectralTriple,
        s1: PureState,
        s2: PureState,
        opts: OracleOptions | None = None,
    ) -> list[tuple[float, DistanceValue]]:
        """Per-sample distances of the fluctuated internal triples."""
        out = []
        for x, h in self.samples:
            d = distance_numeric(fluctuate(internal, h), s1, s2, opts=opts)
            out.append((x, d))
        return out


# ---------------------------------------------------------------------------
# warped geodesics on [0, 1] x [0, L]


class WarpError(ValueError):
    pass


def _gup_interp(gtt_samples: np.ndarray, length: float):
    """Linear interpolant of the g^tt samples on [0, L]."""
    g = np.asarray(gtt_samples, dtype=float)
    if g.ndim != 1 or g.size < 1:
        raise WarpError("gtt must be a 1-D array of samples")
    if np.any(g <= 0.0) or not np.all(np.isfinite(g)):
        raise WarpError("gtt samples must satisfy gtt > 0")
    if g.size == 1:
        return lambda s: np.full_like(np.asarray(s, dtype=float), g[0])
    xs = np.linspace(0.0, length, g.size)
    return lambda s: np.interp(s, xs, g)


def _shooting_length(gup, x: float, y: float) -> float | None:
    """Monotone-sweep geodesic length via the conserved crossing constant.

    Along a geodesic dt/dtau = K g^tt(s) is constant, so the time budget
    int dt = 1 pins K by bisection (the map K -> int dt is monotone).
    Returns None when even the limiting K cannot spend the full budget on
    a monotone sweep of [x, y] (the detour regime).
    """
    lo, hi = min(x, y), max(x, y)
    ss = np.linspace(lo, hi, 4001)
    gs = gup(ss)  # g^tt along the sweep
    kmax = 1.0 / math.sqrt(float(np.max(gs)))

    def crossing_time(k: float) -> float:
        inte = k * gs / np.sqrt(np.maximum(1.0 - k * k * gs, 1e-300))
        return float(np.trapezoid(inte, ss))

    k_lo, k_hi = 0.0, kmax * (1.0 - 1e-12)
    if crossing_time(k_hi) < 1.0:
        return None
    for _ in range(100):
        mid = (k_lo + k_hi) / 2.0
        if crossing_time(mid) < 1.0:
            k_lo = mid
        else:
            k_hi = mid
        if k_hi - k_lo <= 1e-6 * kmax:
            break
    k = (k_lo + k_hi) / 2.0
    dtau = 1.0 / np.sqrt(np.maximum(1.0 - k * k * gs, 1e-300))
    return float(np.trapezoid(dtau, ss))


def _segment_costs(gup, s0: np.ndarray, s1: np.ndarray, dt: float) -> np.ndarray:
    """Exact-quadrature cost of straight segments (dt, s0 -> s1)."""
    lam = np.linspace(0.0, 1.0, 33)
    pts = s0[..., None] + lam * (s1 - s0)[..., None]
    gtt = 1.0 / gup(pts)
    ds = (s1 - s0)[..., None]
    integrand = np.sqrt(gtt * dt * dt + ds * ds)
    return np.trapezoid(integrand, lam, axis=-1)


def _polyline_length(gup, vertices: np.ndarray) -> float:
    dt = 1.0 / (len(vertices) - 1)
    return float(np.sum(_segment_costs(gup, vertices[:-1], vertices[1:], dt)))


def _layered_initial_path(gup, length: float, x: float, y: float, levels: int, grid: int) -> np.ndarray:
    """Coarse optimal polyline via layered min-plus dynamic programming."""
    ss = np.unique(np.concatenate([
        np.linspace(0.0, length, grid),
        np.linspace(min(x, y), max(x, y), max(grid // 2, 2)),
        [x, y],
    ]))
    n = ss.size
    dt = 1.0 / levels
    seg = _segment_costs(gup, np.repeat(ss, n), np.tile(ss, n), dt).reshape(n, n)
    cost = np.full(n, np.inf)
    cost[int(np.searchsorted(ss, x))] = 0.0
    back = np.zeros((levels, n), dtype=int)
    for lvl in range(levels):
        total = cost[:, None] + seg
        back[lvl] = np.argmin(total, axis=0)
        cost = np.min(total, axis=0)
    idx = int(np.searchsorted(ss, y))
    path = [idx]
    for lvl in range(levels - 1, -1, -1):
        idx = int(back[lvl, idx])
        path.append(idx)
    return ss[np.array(path[::-1])]


def _refined_length(gup, length: float, x: float, y: float, levels: int = 48, grid: int = 257) -> float:
    """Layered DP initialization followed by continuous polyline descent."""
    from scipy.optimize import minimize

    init = _layered_initial_path(gup, length, x, y, levels, grid)

    def objective(inner: np.ndarray) -> float:
        v = np.concatenate([[x], np.clip(inner, 0.0, length), [y]])
        return _polyline_length(gup, v)

    res = minimize(objective, init[1:-1], method="L-BFGS-B",
                   bounds=[(0.0, length)] * (len(init) - 2),
                   options={"maxiter": 500, "ftol": 1e-14, "gtol": 1e-12})
    return float(min(res.fun, _polyline_length(gup, init)))


def warped_geodesic(gtt, x: float, y: float, length: float | None = None) -> float:
    """Geodesic length between (t=0, x) and (t=1, y) in g_tt(s) dt^2 + ds^2.

    ``gtt`` holds uniformly spaced samples of the inverse fiber metric
    g^tt on [0, L]; the fiber cost of a pure hop is 1/sqrt(g^tt).  x = y
    is the straight fiber hop.  Otherwise the conserved-quantity shooting
    method handles the monotone-sweep regime and a layered shortest path
    with continuous polyline refinement covers detours through
    cheap-fiber regions; the smaller of the two wins.
    """
    if length is None:
        length = 1.0
    if not (0.0 <= x <= length and 0.0 <= y <= length):
        raise WarpError("endpoints must lie in [0, L]")
    gup = _gup_interp(np.asarray(gtt, dtype=float), length)
    if x == y:
        return 1.0 / math.sqrt(float(gup(np.array([x]))[0]))
    candidates = [_refined_length(gup, length, x, y)]
    shot = _shooting_length(gup, x, y)
    if shot is not None:
        candidates.append(shot)
    return min(candidates)
