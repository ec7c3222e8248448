"""The standard-model internal geometry: mass sector and Higgs-as-metric.

The internal algebra is H (+) C (+) M_3(C) acting on the 30N-dimensional
fermion space (N generations of particles and antiparticles).  With the
gauge field switched off, a scalar fluctuation multiplies the mass matrix
by the Higgs quaternion Phi = 1 + h, and the extra metric component of
the induced two-sheet model is g^tt = ||Phi M||^2 =
(|1+h1|^2 + |h2|^2) m_t^2 whenever the top quark is the heaviest fermion.
States touching the color algebra M_3(C) are at infinite distance from
everything, which the exact kernel test confirms on the assembled triple.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from .linalg import hermitian, operator_norm
from .triple import (
    DistanceValue,
    FiniteAlgebra,
    KernelVerdict,
    PureState,
    RepresentationSlot,
    SlotMode,
    SpectralTriple,
    commutant_kernel_test,
    complex_line,
    triple_calculus,
    matrix_block,
    quaternion,
    quaternions,
)

CKM_TOL = 1e-10


class StandardModelError(ValueError):
    pass


class MassOrderingWarning(UserWarning):
    """The closed-form g^tt assumed the top mass dominates; it does not."""


@dataclass(frozen=True, eq=False)
class FermionMasses:
    """Quark and lepton masses per generation plus the CKM matrix."""

    up: tuple[float, ...]
    down: tuple[float, ...]
    lepton: tuple[float, ...]
    ckm: np.ndarray

    def __init__(self, up, down, lepton, ckm=None):
        up = tuple(float(v) for v in up)
        down = tuple(float(v) for v in down)
        lepton = tuple(float(v) for v in lepton)
        n = len(up)
        if not (len(down) == len(lepton) == n and n >= 1):
            raise StandardModelError("mass lists must share one length per generation")
        if min(up + down + lepton) <= 0.0:
            raise StandardModelError("all masses must be positive")
        if ckm is None:
            ckm = np.eye(n, dtype=complex)
        ckm = np.asarray(ckm, dtype=complex)
        if ckm.shape != (n, n) or operator_norm(ckm @ ckm.conj().T - np.eye(n)) > CKM_TOL:
            raise StandardModelError("ckm must be unitary within 1e-10")
        object.__setattr__(self, "up", up)
        object.__setattr__(self, "down", down)
        object.__setattr__(self, "lepton", lepton)
        object.__setattr__(self, "ckm", ckm)

    @property
    def generations(self) -> int:
        return len(self.up)

    @property
    def m_top(self) -> float:
        return max(self.up)

    @property
    def m_tau(self) -> float:
        return max(self.lepton)


@dataclass(frozen=True)
class HiggsDoublet:
    h1: complex
    h2: complex

    def __post_init__(self):
        if not (np.isfinite(complex(self.h1)) and np.isfinite(complex(self.h2))):
            raise StandardModelError("Higgs components must be finite")

    def modulus_factor(self) -> float:
        return abs(1.0 + complex(self.h1)) ** 2 + abs(complex(self.h2)) ** 2

    def quaternion_phi(self) -> np.ndarray:
        """Phi = 1 + h as a 2x2 quaternion matrix."""
        h1, h2 = complex(self.h1), complex(self.h2)
        return quaternion(1.0 + h1.real, h1.imag, -h2.real, h2.imag)


def build_mass_matrix(masses: FermionMasses) -> np.ndarray:
    """The 8N x 7N fermionic mass matrix.

    Rows: left-handed doublets (quarks doublet x generation x color, then
    leptons doublet x generation); columns: right-handed singlets (u-type,
    d-type with CKM, charged leptons).  Up-type couples the upper doublet
    component, down-type and leptons the lower one.
    """
    n = masses.generations
    mu = np.diag(masses.up).astype(complex)
    md = masses.ckm @ np.diag(masses.down).astype(complex)
    me = np.diag(masses.lepton).astype(complex)
    m = np.zeros((8 * n, 7 * n), dtype=complex)
    quark_left = np.zeros((6 * n, 6 * n), dtype=complex)
    e11 = np.zeros((2, 2)); e11[0, 0] = 1.0
    e22 = np.zeros((2, 2)); e22[1, 1] = 1.0
    quark = np.kron(e11, np.kron(mu, np.eye(3))) + np.kron(e22, np.kron(md, np.eye(3)))
    m[: 6 * n, : 6 * n] = quark
    # leptons: e2 (x) M_e couples the lower doublet row to e_R
    m[6 * n + n : 8 * n, 6 * n :] = me
    return m


def higgs_times_mass(h: HiggsDoublet, masses: FermionMasses) -> np.ndarray:
    """The fluctuated mass block Phi M on the left-handed space."""
    n = masses.generations
    q = h.quaternion_phi()
    phi = np.zeros((8 * n, 8 * n), dtype=complex)
    phi[: 6 * n, : 6 * n] = np.kron(q, np.eye(3 * n))
    phi[6 * n :, 6 * n :] = np.kron(q, np.eye(n))
    return phi @ build_mass_matrix(masses)


def sm_gtt(h: HiggsDoublet, masses: FermionMasses) -> float:
    """The extra metric component g^tt = (|1+h1|^2 + |h2|^2) m_t^2.

    The closed form holds when the top quark is the heaviest fermion; if
    another fermion outweighs it the direct norm ||Phi M||^2 is returned
    with a warning instead.
    """
    heaviest = max(masses.up + masses.down + masses.lepton)
    if heaviest > masses.m_top:
        warnings.warn(
            "the top quark is not the heaviest fermion; returning direct ||Phi M||^2",
            MassOrderingWarning,
        )
        return operator_norm(higgs_times_mass(h, masses)) ** 2
    return h.modulus_factor() * masses.m_top**2


def sm_fiber_distance(h: HiggsDoublet, masses: FermionMasses) -> DistanceValue:
    """Distance between the two sheets: 1/sqrt(g^tt); +inf on a Higgs zero."""
    gtt = sm_gtt(h, masses)
    if gtt == 0.0:
        return DistanceValue(np.inf)
    return DistanceValue(1.0 / math.sqrt(gtt))


def sm_internal_triple(masses: FermionMasses, h: HiggsDoublet | None = None) -> SpectralTriple:
    """The internal triple of the standard model with a scalar fluctuation.

    The algebra H (+) C (+) M_3(C) is represented on the 30N-dimensional
    particle + antiparticle space; the Dirac operator is the fluctuated
    mass block Phi M between left- and right-handed particles (the part
    that feeds every commutator; the conjugate antiparticle blocks commute
    with the representation and are dropped).
    """
    n = masses.generations
    algebra = FiniteAlgebra([quaternions(), complex_line(), matrix_block(3)])
    slots = [
        # left-handed particles: quark doublets, then lepton doublets
        RepresentationSlot(0, SlotMode.QUATERNION_2X2, 3 * n),
        RepresentationSlot(0, SlotMode.QUATERNION_2X2, n),
        # right-handed particles: u_R (b), d_R (conj b), e_R (conj b)
        RepresentationSlot(1, SlotMode.SCALAR, 3 * n),
        RepresentationSlot(1, SlotMode.SCALAR_CONJUGATE, 3 * n),
        RepresentationSlot(1, SlotMode.SCALAR_CONJUGATE, n),
        # antiparticles: color acts on quarks, conj b on leptons
        RepresentationSlot(2, SlotMode.FUNDAMENTAL, 2 * n),
        RepresentationSlot(1, SlotMode.SCALAR_CONJUGATE, 2 * n),
        RepresentationSlot(2, SlotMode.FUNDAMENTAL, 2 * n),
        RepresentationSlot(1, SlotMode.SCALAR_CONJUGATE, n),
    ]
    dim = 30 * n
    dirac = np.zeros((dim, dim), dtype=complex)
    block = higgs_times_mass(h or HiggsDoublet(0.0, 0.0), masses)
    dirac[: 8 * n, 8 * n : 15 * n] = block
    dirac[8 * n : 15 * n, : 8 * n] = block.conj().T
    return SpectralTriple(algebra, slots, hermitian(dirac))


def omega_h_state() -> PureState:
    return PureState(0)


def omega_c_state() -> PureState:
    return PureState(1)


def color_state(vector) -> PureState:
    return PureState(2, vector=np.asarray(vector, dtype=complex))


@dataclass(frozen=True)
class SectorReport:
    """Kernel-test verdicts for the state pairs of the internal triple."""

    verdicts: tuple[tuple[str, KernelVerdict], ...]

    def verdict(self, name: str) -> KernelVerdict:
        for k, v in self.verdicts:
            if k == name:
                return v
        raise KeyError(name)

    @property
    def color_isolated(self) -> bool:
        return all(
            v is KernelVerdict.INFINITE
            for k, v in self.verdicts
            if "color" in k
        )


def sm_infinite_sector_check(masses: FermionMasses, h: HiggsDoublet | None = None) -> SectorReport:
    """Confirm that color states are isolated and (omega_h, omega_c) is not.

    Builds the reduced internal triple (one generation is enough for the
    kernel structure) and runs the exact commutant kernel test on every
    pair involving a pure state of M_3(C), plus the two-sheet pair itself.
    """
    triple = sm_internal_triple(masses, h=h)
    calc = triple_calculus(triple)
    wh, wc = omega_h_state(), omega_c_state()
    colors = [color_state(np.eye(3)[k]) for k in range(3)]
    entries: list[tuple[str, KernelVerdict]] = []
    entries.append(("omega_h/omega_c", commutant_kernel_test(triple, wh, wc, calc=calc)))
    for k, cs in enumerate(colors):
        entries.append((f"omega_h/color_e{k + 1}", commutant_kernel_test(triple, wh, cs, calc=calc)))
        entries.append((f"omega_c/color_e{k + 1}", commutant_kernel_test(triple, wc, cs, calc=calc)))
    mixed = color_state(np.array([1.0, 1.0, 1.0]) / math.sqrt(3.0))
    entries.append(("omega_h/color_mixed", commutant_kernel_test(triple, wh, mixed, calc=calc)))
    entries.append(("omega_c/color_mixed", commutant_kernel_test(triple, wc, mixed, calc=calc)))
    return SectorReport(tuple(entries))
