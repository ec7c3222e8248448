import numpy as np
import pytest

from ncmetric.triple import (
    FiniteAlgebra,
    KernelVerdict,
    PureState,
    RepresentationSlot,
    SlotMode,
    SpectralTriple,
    TripleError,
    commutant_kernel_test,
    complex_line,
    evaluate_state,
    identity_coords,
    matrix_block,
    quaternion,
    quaternions,
    represent,
    represented_selfadjoint_basis,
    selfadjoint_basis_coords,
    validate_state,
)

from conftest import random_unit_vector


def two_point_triple(k=1.0):
    alg = FiniteAlgebra([complex_line(), complex_line()])
    slots = [RepresentationSlot(0, SlotMode.SCALAR), RepresentationSlot(1, SlotMode.SCALAR)]
    return SpectralTriple(alg, slots, np.array([[0, k], [k, 0]], dtype=complex))


def m2_plus_c_triple(m=(1.0, 0.0)):
    alg = FiniteAlgebra([matrix_block(2), complex_line()])
    slots = [RepresentationSlot(0, SlotMode.FUNDAMENTAL), RepresentationSlot(1, SlotMode.SCALAR)]
    d = np.zeros((3, 3), dtype=complex)
    d[:2, 2] = m
    d[2, :2] = np.conj(m)
    return SpectralTriple(alg, slots, d)


def m2_triple(d1=0.0, d2=1.0):
    alg = FiniteAlgebra([matrix_block(2)])
    return SpectralTriple(alg, [RepresentationSlot(0, SlotMode.FUNDAMENTAL)], np.diag([d1, d2]))


def test_represent_block_diagonal():
    t = m2_plus_c_triple()
    x = np.array([[1, 2], [3, 4]], dtype=complex)
    y = 5.0 + 1.0j
    out = represent(t, [x, y])
    assert out.shape == (3, 3)
    assert np.allclose(out[:2, :2], x)
    assert out[2, 2] == y
    assert np.allclose(out[:2, 2], 0) and np.allclose(out[2, :2], 0)


def test_represent_identity():
    t = m2_plus_c_triple()
    assert np.allclose(represent(t, identity_coords(t)), np.eye(3))


def test_represent_quaternion_matrix_form():
    alg = FiniteAlgebra([quaternions()])
    t = SpectralTriple(alg, [RepresentationSlot(0, SlotMode.QUATERNION_2X2)], np.zeros((2, 2)))
    a, b, g, d = 1.0, 2.0, 3.0, 4.0
    q = quaternion(a, b, g, d)
    assert q[0, 0] == complex(a, b)
    assert q[1, 0] == complex(g, d)
    assert q[0, 1] == -np.conj(q[1, 0])
    assert q[1, 1] == np.conj(q[0, 0])
    out = represent(t, [(a, b, g, d)])
    assert np.allclose(out, q)


def test_represent_conjugate_mode():
    alg = FiniteAlgebra([complex_line()])
    t = SpectralTriple(alg, [RepresentationSlot(0, SlotMode.SCALAR_CONJUGATE, 2)], np.zeros((2, 2)))
    out = represent(t, [1.0 + 2.0j])
    assert np.allclose(out, (1.0 - 2.0j) * np.eye(2))


def test_represent_is_homomorphism(rng):
    # multiplicative and unital on random coordinate pairs
    alg = FiniteAlgebra([matrix_block(2), complex_line(), quaternions()])
    slots = [
        RepresentationSlot(0, SlotMode.FUNDAMENTAL),
        RepresentationSlot(0, SlotMode.CONJUGATE),
        RepresentationSlot(1, SlotMode.SCALAR, 2),
        RepresentationSlot(2, SlotMode.QUATERNION_2X2),
    ]
    t = SpectralTriple(alg, slots, np.zeros((8, 8)))

    def rand_coords():
        m = rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2))
        b = complex(rng.normal(), rng.normal())
        q = quaternion(*rng.normal(size=4))
        return [m, b, q]

    def mul(c1, c2):
        return [c1[0] @ c2[0], c1[1] * c2[1], c1[2] @ c2[2]]

    for _ in range(100):
        c1, c2 = rand_coords(), rand_coords()
        lhs = represent(t, mul(c1, c2))
        rhs = represent(t, c1) @ represent(t, c2)
        assert np.max(np.abs(lhs - rhs)) <= 1e-10 * max(1.0, np.max(np.abs(rhs)))


def test_evaluate_state_matrix_block():
    t = m2_triple()
    s = PureState(0, vector=[1.0, 0.0])
    assert evaluate_state(t, s, [np.diag([3.0, 7.0])]) == pytest.approx(3.0)


def test_evaluate_state_quaternion_half_trace():
    alg = FiniteAlgebra([quaternions()])
    t = SpectralTriple(alg, [RepresentationSlot(0, SlotMode.QUATERNION_2X2)], np.zeros((2, 2)))
    q = quaternion(2.5, -1.0, 0.3, 4.0)
    assert evaluate_state(t, PureState(0), [q]) == pytest.approx(2.5)


def test_evaluate_state_complex_real_part():
    t = two_point_triple()
    assert evaluate_state(t, PureState(0), [2.0 + 5.0j, 0.0]) == pytest.approx(2.0)


def test_states_are_normalized_functionals(rng):
    # tau(1) = 1 and tau is real on self-adjoint coordinates
    t = m2_plus_c_triple()
    xi = random_unit_vector(rng, 2)
    for s in (PureState(0, vector=xi), PureState(1)):
        assert evaluate_state(t, s, identity_coords(t)) == pytest.approx(1.0)
    for coords in selfadjoint_basis_coords(t):
        v = evaluate_state(t, PureState(0, vector=xi), coords)
        assert abs(np.imag(v)) <= 1e-12


def test_selfadjoint_basis_sizes():
    t2 = two_point_triple()
    assert len(selfadjoint_basis_coords(t2)) == 2
    mats = represented_selfadjoint_basis(t2)
    assert np.allclose(mats[0], np.diag([1.0, 0.0]))
    assert np.allclose(mats[1], np.diag([0.0, 1.0]))

    tm = m2_triple()
    assert len(selfadjoint_basis_coords(tm)) == 4

    alg = FiniteAlgebra([quaternions()])
    tq = SpectralTriple(alg, [RepresentationSlot(0, SlotMode.QUATERNION_2X2)], np.zeros((2, 2)))
    basis = represented_selfadjoint_basis(tq)
    assert len(basis) == 1
    assert np.allclose(basis[0], np.eye(2))


def test_kernel_test_different_moduli_infinite(rng):
    # diagonal Dirac with distinct entries isolates states whose component
    # moduli differ
    t = m2_triple(0.0, 1.0)
    xi = np.array([1.0, 1.0]) / np.sqrt(2)
    zeta = np.array([np.sqrt(0.2), np.sqrt(0.8)])
    verdict = commutant_kernel_test(t, PureState(0, vector=xi), PureState(0, vector=zeta))
    assert verdict is KernelVerdict.INFINITE


def test_kernel_test_eigenstate_isolated(rng):
    t = m2_triple(0.3, 1.7)
    eig = PureState(0, vector=[1.0, 0.0])
    other = PureState(0, vector=random_unit_vector(rng, 2))
    if abs(abs(other.vector[0]) - 1.0) < 1e-3:
        other = PureState(0, vector=np.array([0.6, 0.8]))
    assert commutant_kernel_test(t, eig, other) is KernelVerdict.INFINITE


def test_kernel_test_two_point_finite():
    t = two_point_triple(1.0)
    assert commutant_kernel_test(t, PureState(0), PureState(1)) is KernelVerdict.FINITE_POSSIBLE


def test_kernel_test_symmetric(rng):
    t = m2_triple(0.0, 1.0)
    z = rng.uniform(-0.8, 0.8)
    r1, r2 = np.sqrt((1 + z) / 2), np.sqrt((1 - z) / 2)
    s1 = PureState(0, vector=[r1, r2])
    s2 = PureState(0, vector=[r1, r2 * np.exp(0.7j)])
    assert commutant_kernel_test(t, s1, s2) is commutant_kernel_test(t, s2, s1)


def test_grading_validation():
    alg = FiniteAlgebra([complex_line(), complex_line()])
    slots = [RepresentationSlot(0, SlotMode.SCALAR), RepresentationSlot(1, SlotMode.SCALAR)]
    d = np.array([[0, 1.0], [1.0, 0]])
    t = SpectralTriple(alg, slots, d, grading=[1.0, -1.0])
    g = t.grading
    assert np.allclose(g @ g, np.eye(2))
    for mat in represented_selfadjoint_basis(t):
        assert np.allclose(g @ mat, mat @ g)
    with pytest.raises(TripleError):
        SpectralTriple(alg, slots, d, grading=[1.0, 1.0])  # commutes with D
    with pytest.raises(TripleError):
        SpectralTriple(alg, slots, d, grading=[1.0, -2.0])


def test_real_form_autodetected():
    alg = FiniteAlgebra([complex_line()])
    t1 = SpectralTriple(alg, [RepresentationSlot(0, SlotMode.SCALAR)], np.zeros((1, 1)))
    t2 = SpectralTriple(alg, [RepresentationSlot(0, SlotMode.SCALAR_CONJUGATE)], np.zeros((1, 1)))
    assert t1.real_form is False
    assert t2.real_form is True


def test_state_validation():
    t = m2_plus_c_triple()
    with pytest.raises(TripleError):
        validate_state(t, PureState(0))  # matrix state needs a vector
    with pytest.raises(TripleError):
        validate_state(t, PureState(1, vector=[1.0]))  # line states carry none
    with pytest.raises(TripleError):
        validate_state(t, PureState(5, vector=[1.0, 0.0]))


def test_dirac_dimension_mismatch():
    alg = FiniteAlgebra([complex_line()])
    with pytest.raises(TripleError):
        SpectralTriple(alg, [RepresentationSlot(0, SlotMode.SCALAR)], np.zeros((2, 2)))


def test_mode_compatibility():
    alg = FiniteAlgebra([complex_line()])
    with pytest.raises(TripleError):
        SpectralTriple(alg, [RepresentationSlot(0, SlotMode.FUNDAMENTAL)], np.zeros((1, 1)))
