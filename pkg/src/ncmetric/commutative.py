"""Distances on finite commutative spaces C^n.

The Dirac operator of a commutative n-point space is a real symmetric
matrix with zero diagonal; it doubles as the incidence matrix of a
weighted graph whose edge lengths are 1/|D_ij|, and the graph geodesic
upper-bounds every spectral distance.  This module holds the closed
forms (two-point, regular, three-point, the four-point special case),
the star-delta inversion of the three-point formula, the full four-point
elimination pipeline, and the metric-realization construction that turns
any finite metric into a spectral triple.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.sparse.csgraph import dijkstra
import scipy.sparse as sp

from .linalg import hermitian
from .oracle import OracleOptions, distance_numeric
from .polynomials import BivariatePolynomial, PolynomialError, RealPolynomial, dis_in_variable
from .triple import (
    DistanceValue,
    FiniteAlgebra,
    PureState,
    RepresentationSlot,
    SlotMode,
    SpectralTriple,
    complex_line,
)

FEASIBILITY_TOL = 1e-6  # |n - 2| acceptance for stationarity candidates


class CommutativeError(ValueError):
    pass


class SquaredTriangleError(CommutativeError):
    """Squared triangle inequality violated; names the failing inequality."""

    def __init__(self, violated: str):
        super().__init__(f"squared triangle inequality violated: {violated}")
        self.violated = violated


class TriangleError(CommutativeError):
    """Ordinary triangle inequality violated in a metric input."""

    def __init__(self, i: int, j: int, k: int):
        super().__init__(f"triangle inequality violated: d({i},{j}) > d({i},{k}) + d({k},{j})")
        self.triple_indices = (i, j, k)


# ---------------------------------------------------------------------------
# graphs and triples


@dataclass(frozen=True)
class DiracGraph:
    n: int
    edges: tuple[tuple[int, int, float], ...]  # (i, j, length), i < j


def _check_commutative_dirac(d: np.ndarray) -> np.ndarray:
    d = np.asarray(d, dtype=float)
    if d.ndim != 2 or d.shape[0] != d.shape[1]:
        raise CommutativeError("Dirac operator must be a square real matrix")
    if np.max(np.abs(d - d.T)) > 1e-12 * max(1.0, np.max(np.abs(d))):
        raise CommutativeError("Dirac operator must be symmetric")
    if np.max(np.abs(np.diagonal(d))) > 0.0:
        raise CommutativeError("Dirac operator of a commutative space must have zero diagonal")
    return (d + d.T) / 2.0


def graph_from_dirac(d: np.ndarray) -> DiracGraph:
    """Weighted graph of a commutative Dirac operator; edge length 1/|D_ij|."""
    d = _check_commutative_dirac(d)
    n = d.shape[0]
    edges = []
    for i in range(n):
        for j in range(i + 1, n):
            if d[i, j] != 0.0:
                edges.append((i, j, 1.0 / abs(d[i, j])))
    return DiracGraph(n, tuple(edges))


def geodesic_length(g: DiracGraph, i: int, j: int) -> DistanceValue:
    """Shortest-path length in the Dirac graph; +inf iff disconnected."""
    if not (0 <= i < g.n and 0 <= j < g.n):
        raise CommutativeError("vertex index out of range")
    if i == j:
        return DistanceValue(0.0)
    w = np.zeros((g.n, g.n))
    for (a, b, length) in g.edges:
        w[a, b] = w[b, a] = length
    dist = dijkstra(sp.csr_matrix(w), directed=False, indices=i)
    v = float(dist[j])
    return DistanceValue(v) if np.isfinite(v) else DistanceValue(np.inf)


def commutative_triple(d: np.ndarray) -> SpectralTriple:
    """The n-point triple: C^n represented diagonally with Dirac d."""
    d = _check_commutative_dirac(d)
    n = d.shape[0]
    algebra = FiniteAlgebra([complex_line() for _ in range(n)])
    slots = [RepresentationSlot(k, SlotMode.SCALAR) for k in range(n)]
    return SpectralTriple(algebra, slots, hermitian(d))


def point_state(i: int) -> PureState:
    return PureState(i)


# ---------------------------------------------------------------------------
# closed forms


def regular_distance(n: int, k: float, cut: bool = False) -> float:
    """Distance in the regular n-point space with constant coupling k.

    Every pair sits at (1/|k|) sqrt(2/n); if the direct link between the
    pair is cut (and only that link), at (1/|k|) sqrt(2/(n-2)).
    """
    if k == 0.0:
        raise CommutativeError("regular space needs a nonzero coupling")
    if cut:
        if n < 3:
            raise CommutativeError("the cut-link formula needs n >= 3")
        return math.sqrt(2.0 / (n - 2)) / abs(k)
    if n < 2:
        raise CommutativeError("a regular space needs n >= 2")
    return math.sqrt(2.0 / n) / abs(k)


def regular_triple(n: int, k: float, cut: bool = False) -> SpectralTriple:
    d = k * (np.ones((n, n)) - np.eye(n))
    if cut:
        d[0, 1] = d[1, 0] = 0.0
    return commutative_triple(d)


def three_point_distance(d12: float, d13: float, d23: float) -> DistanceValue:
    """d(1,2) of the three-point space with couplings D_12, D_13, D_23."""
    side = d13 * d13 + d23 * d23
    if side == 0.0:
        # no third-point path; pure two-point reduction
        return DistanceValue(1.0 / abs(d12)) if d12 != 0.0 else DistanceValue(np.inf)
    den = d12 * d12 * d13 * d13 + d12 * d12 * d23 * d23 + d23 * d23 * d13 * d13
    if den == 0.0:
        return DistanceValue(np.inf)
    return DistanceValue(math.sqrt(side / den))


def three_point_inverse(a: float, b: float, c: float) -> tuple[float, float, float]:
    """Couplings (D12, D13, D23) of a three-point space realizing distances (a, b, c).

    Valid whenever the squared triangle inequalities hold; an equality case
    produces a zero coupling (deleted link).  Inverts the closed form via
    the star-delta resistance identities.
    """
    if min(a, b, c) <= 0.0:
        raise CommutativeError("distances must be strictly positive")
    checks = [
        (b * b + c * c - a * a, "b^2 + c^2 >= a^2"),
        (a * a + c * c - b * b, "a^2 + c^2 >= b^2"),
        (a * a + b * b - c * c, "a^2 + b^2 >= c^2"),
    ]
    scale = max(a, b, c) ** 2
    for value, name in checks:
        if value < -1e-12 * scale:
            raise SquaredTriangleError(name)
    den = (a + b + c) * (-a + b + c) * (a - b + c) * (a + b - c)
    if den <= 0.0:
        # positive inputs satisfying the squared inequalities force den > 0
        raise SquaredTriangleError("degenerate side lengths")

    def coupling(num: float) -> float:
        return math.sqrt(2.0 * max(num, 0.0) / den)

    return (coupling(checks[0][0]), coupling(checks[1][0]), coupling(checks[2][0]))


# ---------------------------------------------------------------------------
# four-point spaces

_PAIR_ORDER = ((0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3))


@dataclass(frozen=True)
class FourPointCoeffs:
    """Link lengths d_i = 1/D_ij in the fixed order 12, 13, 14, 23, 24, 34.

    +inf encodes a deleted link; the pipeline works throughout with the
    couplings 1/d_i, so the infinite-length limit is exact.
    """

    d1: float
    d2: float
    d3: float
    d4: float
    d5: float
    d6: float

    def __post_init__(self):
        for name in ("d1", "d2", "d3", "d4", "d5", "d6"):
            v = getattr(self, name)
            if not (v > 0.0):
                raise CommutativeError(f"{name} must be positive (or +inf)")

    def couplings(self) -> np.ndarray:
        return np.array([0.0 if math.isinf(getattr(self, f"d{i}")) else 1.0 / getattr(self, f"d{i}")
                         for i in range(1, 7)])

    def dirac(self) -> np.ndarray:
        d = np.zeros((4, 4))
        for (i, j), u in zip(_PAIR_ORDER, self.couplings()):
            d[i, j] = d[j, i] = u
        return d


def four_point_triple(coeffs: FourPointCoeffs) -> SpectralTriple:
    return commutative_triple(coeffs.dirac())


def n_alpha_beta(r, coeffs: FourPointCoeffs) -> tuple[float, float, float, float]:
    """The scalar functions (alpha, beta, n, f) of the four-point analysis.

    ||[D, a]||^2 = n(r_a)/2 for a with coordinate differences r_a = (x, y, z),
    and f = alpha - beta^2 - 1 is the boundary polynomial the elimination
    pipeline works on.
    """
    x, y, z = (float(t) for t in r)
    u1, u2, u3, u4, u5, u6 = coeffs.couplings()
    alpha = (u1 * x) ** 2 + (u2 * y) ** 2 + (u3 * z) ** 2 \
        + (u4 * (x - y)) ** 2 + (u5 * (x - z)) ** 2 + (u6 * (y - z)) ** 2
    beta = u1 * u6 * x * (y - z) + u3 * u4 * z * (x - y) + u2 * u5 * y * (z - x)
    n = alpha + math.sqrt(max(alpha * alpha - 4.0 * beta * beta, 0.0))
    f = alpha - beta * beta - 1.0
    return alpha, beta, n, f


def effective_potential(coeffs: FourPointCoeffs) -> BivariatePolynomial:
    """The effective potential V_eff(x, y), quartic in y.

    Obtained by eliminating z from f = A z^2 + B z + C as (B^2 - 4AC)/4.
    Building it directly from the couplings keeps deleted links exact: the
    infinite-length limit is taken analytically, never by large-number
    substitution.
    """
    u1, u2, u3, u4, u5, u6 = coeffs.couplings()

    def mul(a, b):
        out = np.zeros((a.shape[0] + b.shape[0] - 1, a.shape[1] + b.shape[1] - 1))
        for i in range(a.shape[0]):
            for j in range(a.shape[1]):
                if a[i, j] != 0.0:
                    out[i : i + b.shape[0], j : j + b.shape[1]] += a[i, j] * b
        return out

    def add(*terms):
        n = max(t.shape[0] for t in terms)
        m = max(t.shape[1] for t in terms)
        out = np.zeros((n, m))
        for t in terms:
            out[: t.shape[0], : t.shape[1]] += t
        return out

    X = np.array([[0.0], [1.0]])
    Y = np.array([[0.0, 1.0]])
    one = np.array([[1.0]])

    beta1 = add((u3 * u4 - u1 * u6) * X, (u2 * u5 - u3 * u4) * Y)
    beta0 = (u1 * u6 - u2 * u5) * mul(X, Y)
    a = add((u3 * u3 + u5 * u5 + u6 * u6) * one, -mul(beta1, beta1))
    b = add(-2 * u5 * u5 * X, -2 * u6 * u6 * Y, -2 * mul(beta0, beta1))
    xmy = add(X, -Y)
    c = add(
        (u1 * u1 + u5 * u5) * mul(X, X),
        (u2 * u2 + u6 * u6) * mul(Y, Y),
        u4 * u4 * mul(xmy, xmy),
        -mul(beta0, beta0),
        -one,
    )
    v = add(mul(b, b) / 4.0, -mul(a, c))
    return BivariatePolynomial(v)


def _min_section_norm(coeffs: FourPointCoeffs, axis: int, value: float) -> tuple[float, np.ndarray]:
    """Minimize n(r) over the plane r[axis] = value; convex, certified.

    n(r)/2 is the squared spectral norm of the affine Hermitian family
    i[D, diag(0, r)], so Kelley cuts |u* K(w) u| give global lower bounds
    and the eigenvalue at the iterate gives upper bounds.
    """
    from scipy.optimize import linprog

    d = FourPointCoeffs.dirac(coeffs)
    kmats = []
    for j in range(3):
        e = np.zeros((4, 4))
        e[j + 1, j + 1] = 1.0
        kmats.append(1j * (d @ e - e @ d))
    kmats = np.stack(kmats)
    m0 = value * kmats[axis]
    free = [j for j in range(3) if j != axis]
    mats = kmats[free]

    box = 10.0 * (1.0 + abs(value)) + 10.0
    # decision threshold: callers only need min <= 2 + tol, i.e. norm^2 <= 1 + tol/2
    accept = math.sqrt(1.0 + FEASIBILITY_TOL / 2.0)
    cuts: list[tuple[float, np.ndarray]] = []
    w = np.zeros(2)
    best = np.inf
    best_w = w.copy()
    for _ in range(120):
        k = m0 + np.tensordot(w, mats, axes=1)
        eig, vec = np.linalg.eigh(k)
        idx = int(np.argmax(np.abs(eig)))
        nv = float(abs(eig[idx]))
        if nv < best:
            best, best_w = nv, w.copy()
        if best <= accept:
            break  # already attainable; the exact minimum is not needed
        u = vec[:, idx]
        c = float(np.real(u.conj() @ m0 @ u))
        g = np.real(np.einsum("i,kij,j->k", u.conj(), mats, u))
        cuts.append((c, g))
        a_ub = []
        b_ub = []
        for cc, gg in cuts:
            a_ub.append(np.concatenate([gg, [-1.0]]))
            b_ub.append(-cc)
            a_ub.append(np.concatenate([-gg, [-1.0]]))
            b_ub.append(cc)
        res = linprog(
            np.array([0.0, 0.0, 1.0]),
            A_ub=np.array(a_ub),
            b_ub=np.array(b_ub),
            bounds=[(-box, box), (-box, box), (0.0, None)],
            method="highs",
        )
        if not res.success:
            break
        lower = float(res.fun)
        w = res.x[:2]
        if lower > accept or best - lower <= 1e-10 * max(best, 1.0):
            break  # certified unattainable, or sandwich closed
    r = np.zeros(3)
    r[axis] = value
    r[free] = best_w
    _, _, nval, _ = n_alpha_beta(r, coeffs)
    return nval, r


def _stationary_values(coeffs: FourPointCoeffs, axis: int) -> list[tuple[float, np.ndarray]]:
    """Feasible candidates maximizing coordinate ``axis`` (0 = x, 1 = y).

    Candidate values are the positive real roots of the eliminated
    discriminant; a value survives when the convex section minimum of n
    over the remaining coordinates is 2 within 1e-6 (the supremum sits on
    the boundary n = 2, so the largest surviving root is the distance).
    """
    veff = effective_potential(coeffs)
    var = "y" if axis == 0 else "x"
    try:
        j = dis_in_variable(veff, var)
    except PolynomialError:
        return []
    if j.degree < 1:
        return []
    roots = np.roots((j.coeffs / np.max(np.abs(j.coeffs)))[::-1])
    values = sorted(
        {
            round(float(r.real), 10)
            for r in roots
            if abs(r.imag) <= 1e-3 * max(1.0, abs(r)) and r.real > 1e-10
        },
        reverse=True,
    )
    out: list[tuple[float, np.ndarray]] = []
    for val in values:
        nval, point = _min_section_norm(coeffs, axis, val)
        if nval <= 2.0 + FEASIBILITY_TOL:
            out.append((val, point))
    return out


@dataclass(frozen=True)
class FourPointSpecial:
    """Closed-form distances of the cyclic space (links 13 and 24 deleted)."""

    d12: float
    d13: float
    branch12: str
    branch13: str


def four_point_special(d1: float, d3: float, d4: float, d6: float) -> FourPointSpecial:
    """Distances d(1,2) and d(1,3) of the four-point cycle 1-2-3-4-1.

    Link lengths: d1 = 12, d4 = 23, d6 = 34, d3 = 41 (links 13 and 24 are
    deleted; all couplings positive).  The candidate values are the
    published closed forms; the supremum among them is selected by the
    criterion the case analysis was derived from: a value v is attainable
    iff the convex section of the commutator ball at v is nonempty, i.e.
    min n = 2 within 1e-6 there.
    """
    for name, v in (("d1", d1), ("d3", d3), ("d4", d4), ("d6", d6)):
        if not (v > 0.0 and math.isfinite(v)):
            raise CommutativeError(f"{name} must be positive and finite")
    coeffs = FourPointCoeffs(d1, math.inf, d3, d4, math.inf, d6)

    # d(1,2): the direct link against interior and boundary extrema
    cands12: list[tuple[str, float]] = [("direct", d1)]
    if abs(d1 * d6 - d3 * d4) <= 1e-9 * max(d1 * d6, d3 * d4):
        cands12.append((
            "balanced",
            d1 * (d3 * d3 + d1 * d6)
            / (math.sqrt(d1 * d1 + d3 * d3) * math.sqrt(d3 * d3 + d6 * d6)),
        ))
    else:
        cands12.append((
            "interior",
            d1 * math.sqrt((d3 * d3 + d6 * d6) * (d4 * d4 + d6 * d6)) / abs(d3 * d4 - d1 * d6),
        ))
    cands12.append(("max-sum", d1 * (d3 + d4) / math.hypot(d3 + d4, d1 - d6)))
    cands12.append(("max-diff", d1 * abs(d3 - d4) / math.hypot(d3 - d4, d1 + d6)))
    d12, br12 = _select_candidate(coeffs, axis=0, candidates=cands12)

    # d(1,3): the two corner hypotenuses against the mixed extrema
    cands13 = [
        ("corner-4", math.hypot(d3, d6)),
        ("corner-2", math.hypot(d1, d4)),
        ("max-sum", (d1 * d3 + d4 * d6) / math.hypot(d3 + d4, d1 - d6)),
        ("max-diff", (d1 * d3 + d4 * d6) / math.hypot(d3 - d4, d1 + d6)),
    ]
    d13, br13 = _select_candidate(coeffs, axis=1, candidates=cands13)
    return FourPointSpecial(d12, d13, br12, br13)


def _select_candidate(
    coeffs: FourPointCoeffs, axis: int, candidates: list[tuple[str, float]]
) -> tuple[float, str]:
    """Largest closed-form candidate whose section of the norm ball is nonempty."""
    for label, value in sorted(candidates, key=lambda t: -t[1]):
        if value <= 0.0:
            continue
        nval, _ = _min_section_norm(coeffs, axis, value)
        if nval <= 2.0 + FEASIBILITY_TOL:
            return value, label
    raise CommutativeError("no attainable candidate; degenerate configuration")


@dataclass(frozen=True)
class FourPointResult:
    """Outcome of the general four-point pipeline for the pair (1,2).

    The elimination pipeline is a structured candidate generator; the
    numeric oracle stays authoritative, so ``distance`` always carries the
    cross-checked value and ``agreed`` records whether the polynomial
    candidate matched it.
    """

    distance: DistanceValue
    pipeline_value: float | None
    oracle_value: float
    discriminant: RealPolynomial
    candidates: tuple[float, ...]
    agreed: bool
    note: str


def four_point_general(
    coeffs: FourPointCoeffs,
    opts: OracleOptions | None = None,
    cross_check_tol: float = 1e-3,
) -> FourPointResult:
    """d(1,2) of a general four-point space via the discriminant pipeline.

    Builds V_eff, takes J = Dis(V_eff, y), recovers (y, z) partners for
    each positive real root x*, keeps those with n = 2, and returns the
    largest.  The result is flagged CROSS-CHECK REQUIRED and compared with
    the oracle, which wins any disagreement (the general case admits no
    solution by radicals, so the pipeline certifies rather than replaces
    the numeric value).
    """
    opts = opts or OracleOptions()
    veff = effective_potential(coeffs)
    j = dis_in_variable(veff, "y")
    triple = four_point_triple(coeffs)
    oracle = distance_numeric(triple, PureState(0), PureState(1), opts=opts)
    feasible = _stationary_values(coeffs, axis=0)
    if not feasible:
        return FourPointResult(
            distance=oracle,
            pipeline_value=None,
            oracle_value=oracle.value,
            discriminant=j,
            candidates=(),
            agreed=False,
            note="CROSS-CHECK REQUIRED: no feasible pipeline candidate; oracle value used",
        )
    pipeline_value = feasible[0][0]
    agreed = (
        np.isfinite(oracle.value)
        and abs(pipeline_value - oracle.value) <= cross_check_tol * max(1.0, oracle.value)
    )
    note = "CROSS-CHECK REQUIRED: pipeline vs oracle " + ("agreed" if agreed else "DISAGREED; oracle value used")
    value = DistanceValue(oracle.value, witness=oracle.witness, converged=oracle.converged)
    return FourPointResult(
        distance=value,
        pipeline_value=pipeline_value,
        oracle_value=oracle.value,
        discriminant=j,
        candidates=tuple(v for v, _ in feasible),
        agreed=bool(agreed),
        note=note,
    )


# ---------------------------------------------------------------------------
# metric realization


def _validate_metric(dist: np.ndarray) -> np.ndarray:
    d = np.asarray(dist, dtype=float)
    if d.ndim != 2 or d.shape[0] != d.shape[1]:
        raise CommutativeError("metric must be a square matrix")
    n = d.shape[0]
    if np.max(np.abs(np.diagonal(d))) > 0.0:
        raise CommutativeError("metric diagonal must be zero")
    finite = np.isfinite(d)
    if not np.array_equal(d, d.T) and np.max(np.abs(np.where(finite & finite.T, d - d.T, 0.0))) > 1e-12 * max(1.0, np.max(d[finite])):
        raise CommutativeError("metric must be symmetric")
    if not np.array_equal(finite, finite.T):
        raise CommutativeError("metric must be symmetric (including infinite entries)")
    for i in range(n):
        for j in range(n):
            if i == j:
                continue
            if not (d[i, j] > 0.0):
                raise CommutativeError(f"off-diagonal entries must be positive, d({i},{j}) is not")
    for i in range(n):
        for j in range(n):
            for k in range(n):
                if i == j or k in (i, j):
                    continue
                bound = d[i, k] + d[k, j]
                if np.isfinite(bound) and d[i, j] > bound * (1 + 1e-12) + 1e-12:
                    raise TriangleError(i, j, k)
    return d


def metric_to_triple(dist: np.ndarray) -> SpectralTriple:
    """A spectral triple on C^n whose distances reproduce a given metric.

    One three-dimensional slot per pair (i, j): the algebra acts as
    diag(a_i, a_j, a_j) and the Dirac block has off-diagonal entries
    1/d_ij (zero for infinite entries), so the commutator norm is exactly
    sup |a_i - a_j| / d_ij.  The canonical state of point i is
    PureState(i).
    """
    d = _validate_metric(dist)
    n = d.shape[0]
    if n < 2:
        raise CommutativeError("a metric space needs at least two points")
    algebra = FiniteAlgebra([complex_line() for _ in range(n)])
    slots: list[RepresentationSlot] = []
    pairs = [(i, j) for j in range(1, n) for i in range(j)]
    dim = 3 * len(pairs)
    dirac = np.zeros((dim, dim))
    for p, (i, j) in enumerate(pairs):
        slots.append(RepresentationSlot(i, SlotMode.SCALAR, 1))
        slots.append(RepresentationSlot(j, SlotMode.SCALAR, 2))
        u = 0.0 if math.isinf(d[i, j]) else 1.0 / d[i, j]
        base = 3 * p
        dirac[base, base + 1] = dirac[base + 1, base] = u
        dirac[base + 1, base + 2] = dirac[base + 2, base + 1] = u
    return SpectralTriple(algebra, slots, hermitian(dirac))
