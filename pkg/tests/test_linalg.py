import numpy as np
import pytest

from ncmetric.linalg import (
    MatrixError,
    as_complex_matrix,
    commutator,
    hermitian,
    hermitian_eigenvalues,
    operator_norm,
    random_unitary,
)

from conftest import random_symmetric_dirac


def test_eigenvalues_diagonal():
    assert np.allclose(hermitian_eigenvalues(np.diag([1.0, 2.0])), [1.0, 2.0])


def test_eigenvalues_pauli_x():
    assert np.allclose(hermitian_eigenvalues(np.array([[0, 1], [1, 0]])), [-1.0, 1.0])


def test_eigenvalues_three_point_commutator():
    # i[D, a] for the all-ones three-point Dirac and a = diag(0, x, y) has
    # spectrum {0, +/-lambda} with lambda^2 = (x-y)^2 + x^2 + y^2
    x, y = 0.7, -0.4
    d = np.ones((3, 3)) - np.eye(3)
    a = np.diag([0.0, x, y]).astype(complex)
    ev = hermitian_eigenvalues(1j * commutator(d.astype(complex), a))
    lam = np.sqrt((x - y) ** 2 + x**2 + y**2)
    assert np.allclose(sorted(ev), [-lam, 0.0, lam], atol=1e-12)


def test_eigenvalue_trace_consistency(rng):
    for n in (2, 5, 9):
        h = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
        h = (h + h.conj().T) / 2
        ev = hermitian_eigenvalues(h)
        assert len(ev) == n
        scale = 1e-10 * n * max(1.0, np.max(np.abs(h)))
        assert abs(ev.sum() - np.trace(h).real) <= scale


def test_operator_norm_zero_and_diagonal():
    assert operator_norm(np.zeros((3, 3))) == 0.0
    assert operator_norm(np.diag([1.0, -3.0])) == pytest.approx(3.0)


def test_operator_norm_two_point_commutator():
    # ||[D, a]|| = |k| |a1 - a2| on the two-point space
    k, a1, a2 = 1.7, 0.3, -1.1
    d = np.array([[0, k], [k, 0]], dtype=complex)
    a = np.diag([a1, a2]).astype(complex)
    assert operator_norm(commutator(d, a)) == pytest.approx(abs(k) * abs(a1 - a2))


def test_commutator_identity_and_diagonal():
    d = np.array([[0, 1], [1, 0]], dtype=complex)
    assert np.allclose(commutator(d, np.eye(2)), 0.0)
    x, y = 2.0, 5.0
    c = commutator(d, np.diag([x, y]).astype(complex))
    assert np.allclose(c, np.array([[0, y - x], [x - y, 0]]))


def test_commutator_anti_hermitian(rng):
    for _ in range(20):
        n = rng.integers(2, 6)
        d = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
        d = (d + d.conj().T) / 2
        a = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
        a = (a + a.conj().T) / 2
        c = commutator(d, a)
        assert np.max(np.abs(c + c.conj().T)) <= 1e-12 * max(1.0, np.max(np.abs(c)))


def test_commutator_shape_mismatch():
    with pytest.raises(MatrixError):
        commutator(np.eye(2), np.eye(3))


def test_unitary_invariance(rng):
    for _ in range(20):
        n = rng.integers(2, 7)
        m = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
        u = random_unitary(n, rng)
        assert operator_norm(u @ m @ u.conj().T) == pytest.approx(operator_norm(m), abs=1e-10)


def test_submultiplicativity(rng):
    for _ in range(20):
        n = rng.integers(2, 7)
        m = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
        p = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
        assert operator_norm(m @ p) <= operator_norm(m) * operator_norm(p) + 1e-10


def test_antisymmetric_spectrum_pairs(rng):
    # i[D, a] with real D and real diagonal a is i * (real antisymmetric):
    # eigenvalues come in +/- pairs
    for _ in range(10):
        n = int(rng.integers(3, 7))
        d = random_symmetric_dirac(rng, n)
        a = np.diag(rng.normal(size=n)).astype(complex)
        ev = hermitian_eigenvalues(1j * commutator(d.astype(complex), a))
        assert np.allclose(np.sort(ev), np.sort(-ev), atol=1e-10)


def test_hermitian_symmetrizes_noise():
    h = np.array([[1.0, 1e-14 + 1j * 1e-14], [0.0, 2.0]])
    out = hermitian(h)
    assert np.allclose(out, out.conj().T)


def test_hermitian_rejects_asymmetry():
    with pytest.raises(MatrixError):
        hermitian(np.array([[0.0, 1.0], [0.5, 0.0]]))


def test_finite_entries_required():
    with pytest.raises(MatrixError):
        as_complex_matrix(np.array([[np.nan, 0], [0, 0]]))
    with pytest.raises(MatrixError):
        as_complex_matrix(np.array([[np.inf, 0], [0, 0]]))
