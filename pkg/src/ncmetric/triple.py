"""Finite spectral triples: algebras, representations, pure states, Dirac operators.

A finite algebra is an ordered direct sum of simple blocks (R, C, H, or
M_n(C)).  A representation is a list of slots, each acting one block on a
chunk of the Hilbert space with a multiplicity; the represented element is
the block-diagonal matrix assembled slot by slot.  On top of this the
module provides the exact linear-algebra test for infinite distances: the
distance between two states is infinite exactly when the state difference
does not vanish on the commutant kernel {a = a* : [D, pi(a)] = 0}.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from .linalg import as_complex_matrix, commutator, hermitian, operator_norm

GRADING_TOL = 1e-10
KERNEL_REL_TOL = 1e-10
STATE_NORM_TOL = 1e-12


class TripleError(ValueError):
    """Raised when triple data violates a structural invariant."""


class BlockKind(str, enum.Enum):
    REAL_LINE = "real_line"
    COMPLEX_LINE = "complex_line"
    QUATERNIONS = "quaternions"
    MATRIX = "matrix"


class SlotMode(str, enum.Enum):
    FUNDAMENTAL = "fundamental"
    CONJUGATE = "conjugate"
    SCALAR = "scalar"
    SCALAR_CONJUGATE = "scalar_conjugate"
    QUATERNION_2X2 = "quaternion_2x2"


_LINE_KINDS = (BlockKind.REAL_LINE, BlockKind.COMPLEX_LINE)


@dataclass(frozen=True)
class AlgebraBlock:
    kind: BlockKind
    size: int = 1
    field_kind: str = "complex"

    def __post_init__(self):
        if self.size < 1:
            raise TripleError("block size must be >= 1")
        if self.kind is not BlockKind.MATRIX and self.size != 1:
            raise TripleError(f"{self.kind.value} blocks have size 1")
        if self.kind is BlockKind.MATRIX and self.field_kind != "complex":
            raise TripleError("only complex matrix blocks are supported")

    @property
    def action_dim(self) -> int:
        """Dimension the block acts on in its defining representation."""
        if self.kind is BlockKind.MATRIX:
            return self.size
        if self.kind is BlockKind.QUATERNIONS:
            return 2
        return 1

    def selfadjoint_dim(self) -> int:
        """Real dimension of the self-adjoint part of the block."""
        if self.kind is BlockKind.MATRIX:
            return self.size * self.size
        return 1  # R, Re(C), and Re(H) are one-dimensional


def real_line() -> AlgebraBlock:
    return AlgebraBlock(BlockKind.REAL_LINE, field_kind="real")


def complex_line() -> AlgebraBlock:
    return AlgebraBlock(BlockKind.COMPLEX_LINE)


def quaternions() -> AlgebraBlock:
    return AlgebraBlock(BlockKind.QUATERNIONS, field_kind="quaternion")


def matrix_block(n: int) -> AlgebraBlock:
    return AlgebraBlock(BlockKind.MATRIX, size=n)


@dataclass(frozen=True)
class FiniteAlgebra:
    blocks: tuple[AlgebraBlock, ...]

    def __init__(self, blocks):
        blocks = tuple(blocks)
        if not blocks:
            raise TripleError("algebra needs at least one block")
        object.__setattr__(self, "blocks", blocks)

    def __len__(self) -> int:
        return len(self.blocks)


_MODE_FOR_KIND = {
    BlockKind.MATRIX: (SlotMode.FUNDAMENTAL, SlotMode.CONJUGATE),
    BlockKind.QUATERNIONS: (SlotMode.QUATERNION_2X2,),
    BlockKind.COMPLEX_LINE: (SlotMode.SCALAR, SlotMode.SCALAR_CONJUGATE),
    BlockKind.REAL_LINE: (SlotMode.SCALAR,),
}


@dataclass(frozen=True)
class RepresentationSlot:
    block_index: int
    mode: SlotMode
    multiplicity: int = 1

    def __post_init__(self):
        if self.multiplicity < 1:
            raise TripleError("slot multiplicity must be >= 1")


def quaternion(alpha: float, beta: float = 0.0, gamma: float = 0.0, delta: float = 0.0) -> np.ndarray:
    """2x2 complex matrix of the quaternion alpha + beta i + gamma j + delta k."""
    x = complex(alpha, beta)
    y = complex(gamma, delta)
    return np.array([[x, -np.conj(y)], [y, np.conj(x)]])


def _is_quaternion_matrix(q: np.ndarray, tol: float = 1e-10) -> bool:
    if q.shape != (2, 2):
        return False
    scale = max(1.0, float(np.max(np.abs(q))))
    return (
        abs(q[1, 1] - np.conj(q[0, 0])) <= tol * scale
        and abs(q[0, 1] + np.conj(q[1, 0])) <= tol * scale
    )


@dataclass(frozen=True, eq=False)
class SpectralTriple:
    algebra: FiniteAlgebra
    slots: tuple[RepresentationSlot, ...]
    dirac: np.ndarray
    grading: np.ndarray | None = None
    real_form: bool | None = None

    def __init__(self, algebra, slots, dirac, grading=None, real_form=None):
        slots = tuple(slots)
        if not slots:
            raise TripleError("representation needs at least one slot")
        for s in slots:
            if not 0 <= s.block_index < len(algebra):
                raise TripleError(f"slot refers to missing block {s.block_index}")
            block = algebra.blocks[s.block_index]
            if s.mode not in _MODE_FOR_KIND[block.kind]:
                raise TripleError(f"mode {s.mode.value} incompatible with {block.kind.value}")
        dirac = hermitian(dirac)
        dim = sum(algebra.blocks[s.block_index].action_dim * s.multiplicity for s in slots)
        if dirac.shape[0] != dim:
            raise TripleError(f"Dirac dimension {dirac.shape[0]} != total slot dimension {dim}")
        if grading is not None:
            grading = np.asarray(grading, dtype=float)
            if grading.ndim == 1:
                grading = np.diag(grading)
            off_diagonal = grading - np.diag(np.diagonal(grading))
            if (
                grading.shape != dirac.shape
                or np.max(np.abs(off_diagonal)) > GRADING_TOL
                or np.max(np.abs(np.abs(np.diagonal(grading)) - 1.0)) > GRADING_TOL
            ):
                raise TripleError("grading must be a diagonal +/-1 matrix of the Dirac dimension")
            if operator_norm(grading @ dirac + dirac @ grading) > GRADING_TOL * max(1.0, operator_norm(dirac)):
                raise TripleError("grading must anticommute with the Dirac operator")
        if real_form is None:
            real_form = any(
                s.mode in (SlotMode.CONJUGATE, SlotMode.SCALAR_CONJUGATE) for s in slots
            )
        object.__setattr__(self, "algebra", algebra)
        object.__setattr__(self, "slots", slots)
        object.__setattr__(self, "dirac", dirac)
        object.__setattr__(self, "grading", grading)
        object.__setattr__(self, "real_form", bool(real_form))
        if grading is not None:
            for mat in represented_selfadjoint_basis(self):
                if operator_norm(commutator(grading, mat)) > GRADING_TOL * max(1.0, operator_norm(mat)):
                    raise TripleError("grading must commute with the represented algebra")

    @property
    def dim(self) -> int:
        return self.dirac.shape[0]


@dataclass(frozen=True, eq=False)
class PureState:
    """A pure state of one algebra block.

    Matrix blocks carry a unit vector (up to phase); the line and
    quaternion blocks have a single canonical state and carry none.
    """

    block_index: int
    vector: np.ndarray | None = None

    def __init__(self, block_index: int, vector=None):
        object.__setattr__(self, "block_index", int(block_index))
        if vector is not None:
            v = np.asarray(vector, dtype=complex).reshape(-1)
            nrm = np.linalg.norm(v)
            if abs(nrm - 1.0) > STATE_NORM_TOL:
                if nrm == 0.0:
                    raise TripleError("state vector must be nonzero")
                v = v / nrm
            vector = v
        object.__setattr__(self, "vector", vector)


@dataclass(frozen=True, eq=False)
class DistanceValue:
    """A non-negative extended real, optionally with the optimizing element."""

    value: float
    witness: list | None = None
    converged: bool = True

    def __post_init__(self):
        if self.value < 0:
            raise TripleError("distances are non-negative")
        if np.isinf(self.value) and self.witness is not None:
            raise TripleError("infinite distances carry no witness")

    @property
    def is_infinite(self) -> bool:
        return bool(np.isinf(self.value))


class KernelVerdict(str, enum.Enum):
    FINITE_POSSIBLE = "FinitePossible"
    INFINITE = "Infinite"


def _block_coord_shape(block: AlgebraBlock, coord) -> np.ndarray | complex | float:
    """Validate one block's coordinate and return it in canonical form."""
    if block.kind is BlockKind.MATRIX:
        m = as_complex_matrix(coord)
        if m.shape != (block.size, block.size):
            raise TripleError(f"matrix block coordinate must be {block.size}x{block.size}")
        return m
    if block.kind is BlockKind.QUATERNIONS:
        q = np.asarray(coord)
        if q.shape == (4,):
            return quaternion(*[float(t) for t in q])
        q = as_complex_matrix(coord)
        if not _is_quaternion_matrix(q):
            raise TripleError("quaternion coordinate must be [[x,-conj(y)],[y,conj(x)]] or 4 reals")
        return q
    if block.kind is BlockKind.COMPLEX_LINE:
        return complex(coord)
    return float(np.real(coord))


def represent(triple: SpectralTriple, coords) -> np.ndarray:
    """Assemble the block-diagonal matrix pi(a) from block-wise coordinates.

    ``coords`` is one entry per algebra block: an (n, n) array for matrix
    blocks, a scalar for line blocks, a 2x2 quaternion matrix (or 4 reals)
    for quaternion blocks.
    """
    if len(coords) != len(triple.algebra):
        raise TripleError(f"expected {len(triple.algebra)} block coordinates, got {len(coords)}")
    canon = [_block_coord_shape(b, c) for b, c in zip(triple.algebra.blocks, coords)]
    out = np.zeros((triple.dim, triple.dim), dtype=complex)
    pos = 0
    for slot in triple.slots:
        block = triple.algebra.blocks[slot.block_index]
        c = canon[slot.block_index]
        if slot.mode is SlotMode.FUNDAMENTAL:
            action = c
        elif slot.mode is SlotMode.CONJUGATE:
            action = np.conj(c)
        elif slot.mode is SlotMode.QUATERNION_2X2:
            action = c
        elif slot.mode is SlotMode.SCALAR:
            action = np.array([[c]], dtype=complex)
        else:  # scalar_conjugate
            action = np.array([[np.conj(c)]], dtype=complex)
        action = np.atleast_2d(action)
        blockmat = np.kron(action, np.eye(slot.multiplicity))
        d = block.action_dim * slot.multiplicity
        out[pos : pos + d, pos : pos + d] = blockmat
        pos += d
    return out


def identity_coords(triple: SpectralTriple) -> list:
    out = []
    for b in triple.algebra.blocks:
        if b.kind is BlockKind.MATRIX:
            out.append(np.eye(b.size, dtype=complex))
        elif b.kind is BlockKind.QUATERNIONS:
            out.append(quaternion(1.0))
        elif b.kind is BlockKind.COMPLEX_LINE:
            out.append(1.0 + 0.0j)
        else:
            out.append(1.0)
    return out


def evaluate_state(triple: SpectralTriple, state: PureState, coords) -> float | complex:
    """Apply a pure state to block-wise coordinates.

    Matrix block: <xi, a xi>.  Complex line: the real part (the canonical
    state of C in the real-algebra convention; identical to the identity
    state on self-adjoint elements).  Quaternions: the half-trace.  Real
    line: the value itself.
    """
    block = triple.algebra.blocks[state.block_index]
    c = _block_coord_shape(block, coords[state.block_index])
    if block.kind is BlockKind.MATRIX:
        if state.vector is None:
            raise TripleError("matrix-block states need a vector")
        v = state.vector
        if v.shape[0] != block.size:
            raise TripleError(f"state vector length {v.shape[0]} != block size {block.size}")
        return complex(np.vdot(v, c @ v))
    if block.kind is BlockKind.QUATERNIONS:
        return float(np.real(np.trace(c)) / 2.0)
    if block.kind is BlockKind.COMPLEX_LINE:
        return float(np.real(c))
    return float(np.real(c))


def validate_state(triple: SpectralTriple, state: PureState) -> None:
    if not 0 <= state.block_index < len(triple.algebra):
        raise TripleError(f"state refers to missing block {state.block_index}")
    block = triple.algebra.blocks[state.block_index]
    if block.kind is BlockKind.MATRIX:
        if state.vector is None or state.vector.shape[0] != block.size:
            raise TripleError(f"matrix-block state needs a unit vector of length {block.size}")
    elif state.vector is not None:
        raise TripleError(f"{block.kind.value} states carry no vector")


def selfadjoint_basis_coords(triple: SpectralTriple) -> list[list]:
    """Real-linear basis of the self-adjoint part, as block coordinates."""
    out: list[list] = []
    nblocks = len(triple.algebra)

    def zero_coords():
        coords = []
        for b in triple.algebra.blocks:
            if b.kind is BlockKind.MATRIX:
                coords.append(np.zeros((b.size, b.size), dtype=complex))
            elif b.kind is BlockKind.QUATERNIONS:
                coords.append(quaternion(0.0))
            elif b.kind is BlockKind.COMPLEX_LINE:
                coords.append(0.0 + 0.0j)
            else:
                coords.append(0.0)
        return coords

    for bi in range(nblocks):
        b = triple.algebra.blocks[bi]
        if b.kind is BlockKind.MATRIX:
            n = b.size
            for i in range(n):
                coords = zero_coords()
                m = np.zeros((n, n), dtype=complex)
                m[i, i] = 1.0
                coords[bi] = m
                out.append(coords)
            for i in range(n):
                for j in range(i + 1, n):
                    coords = zero_coords()
                    m = np.zeros((n, n), dtype=complex)
                    m[i, j] = m[j, i] = 1.0 / np.sqrt(2.0)
                    coords[bi] = m
                    out.append(coords)
                    coords = zero_coords()
                    m = np.zeros((n, n), dtype=complex)
                    m[i, j] = -1j / np.sqrt(2.0)
                    m[j, i] = 1j / np.sqrt(2.0)
                    coords[bi] = m
                    out.append(coords)
        else:
            # self-adjoint parts of R, C, H are the reals
            coords = zero_coords()
            coords[bi] = quaternion(1.0) if b.kind is BlockKind.QUATERNIONS else 1.0
            out.append(coords)
    return out


def represented_selfadjoint_basis(triple: SpectralTriple) -> list[np.ndarray]:
    return [represent(triple, c) for c in selfadjoint_basis_coords(triple)]


@dataclass
class TripleCalculus:
    """Precomputed commutator data shared by the kernel test and the oracle."""

    triple: SpectralTriple
    basis_coords: list[list]
    basis_mats: list[np.ndarray]
    commutators: list[np.ndarray]
    kernel: np.ndarray  # (m, k) orthonormal kernel directions
    complement: np.ndarray  # (m, q) orthonormal complement of the kernel
    smallest_active_sv: float

    @property
    def quotient_dim(self) -> int:
        return self.complement.shape[1]


def triple_calculus(triple: SpectralTriple) -> TripleCalculus:
    """SVD of the real-linear map a -> [D, pi(a)] on the self-adjoint basis."""
    coords = selfadjoint_basis_coords(triple)
    mats = [represent(triple, c) for c in coords]
    comms = [commutator(triple.dirac, m) for m in mats]
    stack = np.stack([c.reshape(-1) for c in comms], axis=1)
    a = np.vstack([stack.real, stack.imag])
    _, sv, vt = np.linalg.svd(a, full_matrices=True)
    smax = sv[0] if sv.size else 0.0
    rank = int(np.sum(sv > KERNEL_REL_TOL * smax)) if smax > 0 else 0
    kernel = vt[rank:].T
    complement = vt[:rank].T
    smin = float(sv[rank - 1]) if rank else 0.0
    return TripleCalculus(triple, coords, mats, comms, kernel, complement, smin)


def state_functional(calc: TripleCalculus, s1: PureState, s2: PureState) -> np.ndarray:
    """(tau1 - tau2) evaluated on the self-adjoint basis; a real vector."""
    t = calc.triple
    vals = []
    for coords in calc.basis_coords:
        v1 = evaluate_state(t, s1, coords)
        v2 = evaluate_state(t, s2, coords)
        vals.append(float(np.real(v1)) - float(np.real(v2)))
    return np.array(vals)


def commutant_kernel_test(
    triple: SpectralTriple,
    s1: PureState,
    s2: PureState,
    calc: TripleCalculus | None = None,
    tol: float = KERNEL_REL_TOL,
) -> KernelVerdict:
    """Exact finiteness test for the spectral distance.

    Computes the nullspace of a -> [D, pi(a)] on the self-adjoint part; if
    the state difference is nonzero on it, the distance is infinite.  In
    finite dimension the converse holds as well: FinitePossible implies the
    supremum is actually finite.
    """
    if calc is None:
        calc = triple_calculus(triple)
    c = state_functional(calc, s1, s2)
    if calc.kernel.shape[1]:
        if np.max(np.abs(calc.kernel.T @ c)) > tol:
            return KernelVerdict.INFINITE
    return KernelVerdict.FINITE_POSSIBLE


def coords_from_basis_vector(calc: TripleCalculus, weights: np.ndarray) -> list:
    """Recombine self-adjoint basis coordinates with real weights."""
    out = None
    for w, coords in zip(weights, calc.basis_coords):
        if out is None:
            out = [np.asarray(c) * w if isinstance(c, np.ndarray) else type(c)(c * w) for c in coords]
        else:
            for i, c in enumerate(coords):
                if isinstance(c, np.ndarray):
                    out[i] = out[i] + np.asarray(c) * w
                else:
                    out[i] = out[i] + type(c)(c * w)
    return out
