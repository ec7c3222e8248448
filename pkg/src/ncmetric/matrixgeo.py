"""Closed-form metrics for matrix geometries.

One-point space M_2(C) on C^2: pure states are the sphere S^2 through the
Hopf projection, the Dirac eigenbasis fixes a z-axis, points at different
altitude are infinitely far apart, and equal-altitude pairs sit at the
scaled euclidean distance of their circle.

Two-point space M_n(C) (+) C on C^{n+1}: the Dirac operator is the
off-diagonal vector m; the state of C touches only the first basis state
(at 1/||m||), and two matrix states are at finite distance iff their
components 2..n agree up to one common phase.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .linalg import hermitian
from .triple import (
    DistanceValue,
    FiniteAlgebra,
    PureState,
    RepresentationSlot,
    SlotMode,
    SpectralTriple,
    TripleError,
    complex_line,
    matrix_block,
)

ALTITUDE_TOL = 1e-10
PHASE_TOL = 1e-10


class MatrixGeometryError(ValueError):
    pass


@dataclass(frozen=True)
class SpherePoint:
    x: float
    y: float
    z: float

    def __post_init__(self):
        r = self.x * self.x + self.y * self.y + self.z * self.z
        if abs(r - 1.0) > 1e-12:
            raise MatrixGeometryError(f"point is off the unit sphere by {abs(r - 1):.2e}")


def hopf(xi) -> SpherePoint:
    """Hopf projection of a unit vector in C^2 onto S^2; phase invariant."""
    v = np.asarray(xi, dtype=complex).reshape(-1)
    if v.shape[0] != 2:
        raise MatrixGeometryError("hopf needs a vector in C^2")
    nrm = np.linalg.norm(v)
    if nrm == 0.0:
        raise MatrixGeometryError("hopf needs a nonzero vector")
    v = v / nrm
    cross = v[0] * np.conj(v[1])
    return SpherePoint(2.0 * float(cross.real), 2.0 * float(cross.imag),
                       float(abs(v[0]) ** 2 - abs(v[1]) ** 2))


def one_point_triple(d: np.ndarray) -> SpectralTriple:
    """M_n(C) acting irreducibly on C^n with Dirac d (an algebra element)."""
    d = hermitian(d)
    n = d.shape[0]
    algebra = FiniteAlgebra([matrix_block(n)])
    return SpectralTriple(algebra, [RepresentationSlot(0, SlotMode.FUNDAMENTAL)], d)


def matrix_state(xi, block: int = 0) -> PureState:
    return PureState(block, vector=np.asarray(xi, dtype=complex))


def m2_distance(xi, zeta, d1: float, d2: float) -> DistanceValue:
    """Distance between pure states of (M_2(C), C^2, diag(d1, d2)).

    State vectors are given in the orientation induced by the Dirac
    eigenbasis.  Equal states are at 0; different altitudes are infinitely
    far; otherwise d = 2 sqrt(1 - |<xi, zeta>|^2) / |d1 - d2|.
    """
    a = np.asarray(xi, dtype=complex).reshape(-1)
    b = np.asarray(zeta, dtype=complex).reshape(-1)
    if a.shape != (2,) or b.shape != (2,):
        raise MatrixGeometryError("m2_distance needs two vectors in C^2")
    a = a / np.linalg.norm(a)
    b = b / np.linalg.norm(b)
    overlap = abs(np.vdot(a, b))
    if overlap >= 1.0 - 1e-14:
        return DistanceValue(0.0)
    za = float(abs(a[0]) ** 2 - abs(a[1]) ** 2)
    zb = float(abs(b[0]) ** 2 - abs(b[1]) ** 2)
    if abs(za - zb) > ALTITUDE_TOL:
        return DistanceValue(np.inf)
    if d1 == d2:
        return DistanceValue(np.inf)
    return DistanceValue(2.0 * math.sqrt(max(1.0 - overlap * overlap, 0.0)) / abs(d1 - d2))


def two_point_space_triple(m) -> SpectralTriple:
    """The triple of M_n(C) (+) C on C^{n+1} with off-diagonal Dirac vector m."""
    m = np.asarray(m, dtype=complex).reshape(-1)
    n = m.shape[0]
    if n < 1 or np.linalg.norm(m) == 0.0:
        raise MatrixGeometryError("Dirac vector m must be nonzero")
    algebra = FiniteAlgebra([matrix_block(n), complex_line()])
    slots = [RepresentationSlot(0, SlotMode.FUNDAMENTAL), RepresentationSlot(1, SlotMode.SCALAR)]
    dirac = np.zeros((n + 1, n + 1), dtype=complex)
    dirac[:n, n] = m
    dirac[n, :n] = np.conj(m)
    return SpectralTriple(algebra, slots, hermitian(dirac))


def _orienting_unitary(m: np.ndarray) -> np.ndarray:
    """Unitary v with v m = ||m|| e_1."""
    n = m.shape[0]
    nrm = np.linalg.norm(m)
    q, _ = np.linalg.qr(np.column_stack([m, np.eye(n, dtype=complex)]))
    v = q.conj().T
    w = v @ m
    v[0] *= nrm / w[0]  # unit-modulus phase fix
    return v


def two_point_distance(m, s1: PureState, s2: PureState) -> DistanceValue:
    """Closed-form distance in M_n(C) (+) C with Dirac vector m.

    The states are interpreted in the orientation induced by the Dirac
    operator; internally m is rotated to ||m|| e_1 and matrix-state vectors
    are transformed along.
    """
    m = np.asarray(m, dtype=complex).reshape(-1)
    n = m.shape[0]
    nrm = float(np.linalg.norm(m))
    if nrm == 0.0:
        raise MatrixGeometryError("Dirac vector m must be nonzero")
    v = _orienting_unitary(m)

    def oriented(s: PureState) -> np.ndarray | None:
        if s.block_index == 1:
            return None
        if s.vector is None or s.vector.shape[0] != n:
            raise TripleError(f"matrix-block state needs a vector of length {n}")
        return v @ s.vector

    a = oriented(s1)
    b = oriented(s2)
    if a is None and b is None:
        return DistanceValue(0.0)
    if a is None or b is None:
        xi = a if a is not None else b
        # omega_c is at distance 1/||m|| of omega_{e_1} and infinitely far
        # from every other matrix state
        if abs(abs(xi[0]) - 1.0) <= PHASE_TOL:
            return DistanceValue(1.0 / nrm)
        return DistanceValue(np.inf)
    overlap = abs(np.vdot(a, b))
    if overlap >= 1.0 - 1e-14:
        return DistanceValue(0.0)
    # finite iff the tails agree up to a single common phase
    ta, tb = a[1:], b[1:]
    na, nb = np.linalg.norm(ta), np.linalg.norm(tb)
    if abs(na - nb) > PHASE_TOL:
        return DistanceValue(np.inf)
    if na > PHASE_TOL and abs(abs(np.vdot(ta, tb)) - na * nb) > PHASE_TOL:
        return DistanceValue(np.inf)
    return DistanceValue(2.0 * math.sqrt(max(1.0 - overlap * overlap, 0.0)) / nrm)
