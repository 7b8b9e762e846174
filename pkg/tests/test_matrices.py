import numpy as np
import pytest

from skewsep import (
    QuantumState,
    ValidationError,
    eigendecompose,
    embed,
    extreme_eigenvalues,
    kron,
    partial_trace,
)
from skewsep.observables import PAULI_X, PAULI_Y, PAULI_Z

I2 = np.eye(2, dtype=complex)


def test_kron_identities():
    assert np.array_equal(kron(I2, I2), np.eye(4))
    assert np.allclose(kron(PAULI_Z, I2), np.diag([1, 1, -1, -1]))


def test_kron_flips_both_qubits():
    # sx x sx acting on |00> must give |11>; expand the 4x4 by hand
    ket00 = np.array([1, 0, 0, 0], dtype=complex)
    out = kron(PAULI_X, PAULI_X) @ ket00
    assert np.allclose(out, [0, 0, 0, 1])


def test_embed_places_operator_at_site():
    assert np.allclose(embed(PAULI_Z, 1, (2, 2)), np.kron(I2, PAULI_Z))
    assert np.allclose(embed(I2, 0, (2, 2)), np.eye(4))
    # sx on site 0 maps |00> -> |10>
    ket00 = np.array([1, 0, 0, 0], dtype=complex)
    assert np.allclose(embed(PAULI_X, 0, (2, 2)) @ ket00, [0, 0, 1, 0])


def test_embed_rejects_wrong_dimension():
    with pytest.raises(ValidationError):
        embed(np.eye(3), 0, (2, 2))


def test_partial_trace_product_and_bell():
    ket00 = np.array([1, 0, 0, 0], dtype=complex)
    state = QuantumState.from_ket(ket00, (2, 2))
    reduced = partial_trace(state, [0])
    assert np.allclose(reduced.rho, [[1, 0], [0, 0]])

    bell = QuantumState.from_ket(np.array([1, 0, 0, 1]) / np.sqrt(2), (2, 2))
    assert np.allclose(partial_trace(bell, [0]).rho, I2 / 2, atol=1e-12)

    rng = np.random.default_rng(7)
    a = rng.standard_normal((2, 2)) + 1j * rng.standard_normal((2, 2))
    b = rng.standard_normal((3, 3)) + 1j * rng.standard_normal((3, 3))
    rho_a = a @ a.conj().T
    rho_a /= np.trace(rho_a).real
    rho_b = b @ b.conj().T
    rho_b /= np.trace(rho_b).real
    joint = QuantumState.from_matrix(np.kron(rho_a, rho_b), (2, 3))
    assert np.abs(partial_trace(joint, [0]).rho - rho_a).max() < 1e-12
    assert np.abs(partial_trace(joint, [1]).rho - rho_b).max() < 1e-12


def test_partial_trace_composition_consistent():
    rng = np.random.default_rng(11)
    for _ in range(10):
        dims = tuple(int(d) for d in rng.integers(2, 4, size=4))
        dim = int(np.prod(dims))
        g = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
        rho = g @ g.conj().T
        rho /= np.trace(rho).real
        state = QuantumState.from_matrix(rho, dims)
        # tracing out site 3 then site 2 equals tracing out both at once
        direct = partial_trace(state, [0, 1])
        stepped = partial_trace(partial_trace(state, [0, 1, 2]), [0, 1])
        assert np.abs(direct.rho - stepped.rho).max() < 1e-12
        assert abs(np.trace(direct.rho).real - 1.0) < 1e-10


def test_partial_trace_rejects_empty_subset():
    state = QuantumState.from_ket(np.array([1, 0, 0, 0]), (2, 2))
    with pytest.raises(ValueError):
        partial_trace(state, [])


def test_eigendecompose_paulis():
    w, v = eigendecompose(PAULI_Z)
    assert np.allclose(w, [1, -1])
    w, v = eigendecompose(PAULI_X)
    assert np.allclose(w, [1, -1])
    plus = v[:, 0]
    assert abs(abs(plus @ np.array([1, 1]) / np.sqrt(2)) - 1) < 1e-12

    w, _ = eigendecompose(np.diag([0.9, 0.1]).astype(complex))
    assert np.allclose(w, [0.9, 0.1])


def test_eigendecompose_reconstructs():
    rng = np.random.default_rng(3)
    for dim in (2, 5, 9):
        a = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
        h = (a + a.conj().T) / 2
        w, v = eigendecompose(h)
        assert np.abs(v @ np.diag(w) @ v.conj().T - h).max() < 1e-9
        assert np.all(np.diff(w) <= 1e-12)


def test_eigendecompose_rejects_non_hermitian():
    with pytest.raises(ValidationError):
        eigendecompose(np.array([[0, 1], [0, 0]], dtype=complex))


def test_extreme_eigenvalues():
    assert extreme_eigenvalues(PAULI_Z) == (-1.0, 1.0)
    lo, hi = extreme_eigenvalues(PAULI_X + PAULI_Y)
    # 2x2 closed form: eigenvalues +-sqrt(2)
    assert abs(lo + np.sqrt(2)) < 1e-12
    assert abs(hi - np.sqrt(2)) < 1e-12
    assert extreme_eigenvalues(np.zeros((3, 3))) == (0.0, 0.0)


def test_state_validation():
    with pytest.raises(ValidationError):
        QuantumState.from_matrix(np.eye(4) / 2, (2, 2))  # trace 2
    with pytest.raises(ValidationError):
        QuantumState.from_matrix(np.diag([1.5, -0.5]).astype(complex))  # not PSD
    with pytest.raises(ValidationError):
        QuantumState.from_matrix(np.eye(4) / 4, (2, 3))  # dims mismatch
    bad = np.array([[0.5, 0.5], [0.4, 0.5]], dtype=complex)  # not Hermitian
    with pytest.raises(ValidationError):
        QuantumState.from_matrix(bad)


def test_eigenvalue_clamping_keeps_zero_exact():
    # noise-level values on both sides of zero clamp to exactly zero ...
    rho = np.diag([1.0 + 5e-11 - 5e-13, -5e-11, 5e-13, 0.0]).astype(complex)
    state = QuantumState.from_matrix(rho, (2, 2))
    assert state.eigenvalues[0] > 0.999
    assert np.all(state.eigenvalues[1:] == 0.0)
    # ... with no renormalization of the leading eigenvalue
    assert abs(state.eigenvalues.sum() - (1.0 + 5e-11 - 5e-13)) < 1e-15
    # a genuine small eigenvalue above the noise floor survives
    kept = QuantumState.from_matrix(np.diag([1.0 - 5e-9, 5e-9, 0, 0]).astype(complex), (2, 2))
    assert abs(kept.eigenvalues[1] - 5e-9) < 1e-15


def test_state_spectrum_is_descending_and_orthonormal():
    rng = np.random.default_rng(5)
    g = rng.standard_normal((8, 8)) + 1j * rng.standard_normal((8, 8))
    rho = g @ g.conj().T
    rho /= np.trace(rho).real
    state = QuantumState.from_matrix(rho, (2, 2, 2))
    assert np.all(np.diff(state.eigenvalues) <= 1e-12)
    gram = state.eigenvectors.conj().T @ state.eigenvectors
    assert np.abs(gram - np.eye(8)).max() < 1e-9
    recon = state.eigenvectors @ np.diag(state.eigenvalues) @ state.eigenvectors.conj().T
    assert np.abs(recon - state.rho).max() < 1e-9
