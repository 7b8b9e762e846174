import numpy as np
import pytest

from skewsep import (
    NEG_INF,
    QuantumState,
    aligned_padded_basis,
    build_weighted,
    collective_pauli_spec,
    collective_set,
    embed,
    gellmann_basis,
    padded_basis,
    site_operator_range,
    skew_information,
    weighted_spec,
)
from skewsep.observables import PAULI_X, PAULI_Y, PAULI_Z

SQ2 = np.sqrt(2)


def gram_defect(ops):
    n = len(ops)
    gram = np.array([[np.trace(a.conj().T @ b).real for b in ops] for a in ops])
    return np.abs(gram - np.eye(n)).max()


def test_gellmann_qubit_order():
    ops = gellmann_basis(2)
    assert len(ops) == 4
    assert np.allclose(ops[0], PAULI_Z / SQ2)
    assert np.allclose(ops[1], np.eye(2) / SQ2)
    assert np.allclose(ops[2], PAULI_X / SQ2)
    assert np.allclose(ops[3], PAULI_Y / SQ2)


def test_gellmann_orthonormal():
    for d in (2, 3, 4, 5):
        ops = gellmann_basis(d)
        assert len(ops) == d * d
        assert gram_defect(ops) < 1e-12
        # exactly one member proportional to the identity, coefficient 1/sqrt(d)
        identity_members = [
            op for op in ops if np.allclose(op, op[0, 0] * np.eye(d), atol=1e-14)
        ]
        assert len(identity_members) == 1
        assert abs(identity_members[0][0, 0] - 1 / np.sqrt(d)) < 1e-14


def test_gellmann_rejects_small_dim():
    with pytest.raises(ValueError):
        gellmann_basis(1)


def count_zero(ops):
    return sum(1 for op in ops if not op.any())


def test_padded_basis():
    basis = padded_basis(2, 3)
    assert basis.padded_count == 9
    assert len(basis.operators) == 9
    assert count_zero(basis.operators) == 5
    for a, b in zip(basis.operators[:4], gellmann_basis(2)):
        assert np.array_equal(a, b)

    same = padded_basis(3, 3)
    assert count_zero(same.operators) == 0
    for a, b in zip(same.operators, gellmann_basis(3)):
        assert np.array_equal(a, b)

    assert count_zero(padded_basis(2, 2).operators) == 0
    with pytest.raises(ValueError):
        padded_basis(3, 2)


def test_aligned_basis_layout():
    # homogeneous dims: identical to the tail padding
    for a, b in zip(aligned_padded_basis(2, 2).operators, padded_basis(2, 2).operators):
        assert np.array_equal(a, b)

    fam = aligned_padded_basis(2, 3).operators
    assert len(fam) == 9
    assert count_zero(fam) == 5
    # identity member sits at index d-1
    assert np.allclose(fam[2], np.eye(2) / SQ2)
    # qutrit family keeps the identity at the same slot
    fam3 = aligned_padded_basis(3, 3).operators
    assert np.allclose(fam3[2], np.eye(3) / np.sqrt(3))
    # same nonzero multiset as the tail layout
    tail_nonzero = [op.tobytes() for op in padded_basis(2, 3).operators if op.any()]
    aligned_nonzero = [op.tobytes() for op in fam if op.any()]
    assert sorted(tail_nonzero) == sorted(aligned_nonzero)


def test_aligned_basis_identities():
    for di in (2, 3):
        for d in (2, 3, 4):
            if di > d:
                continue
            fam = aligned_padded_basis(di, d).operators
            square_sum = sum(h @ h for h in fam)
            assert np.abs(square_sum - di * np.eye(di)).max() < 1e-12
    for di in (2, 3):
        for dj in (2, 3):
            for d in (2, 3, 4):
                if d < max(di, dj):
                    continue
                fi = aligned_padded_basis(di, d).operators
                fj = aligned_padded_basis(dj, d).operators
                cross = sum(np.kron(a, b) for a, b in zip(fi, fj))
                assert np.linalg.eigvalsh(cross)[-1] <= 1.0 + 1e-12


def test_collective_set_qubits():
    ops = collective_set((2, 2))
    assert len(ops) == 4
    expected = (np.kron(PAULI_Z, np.eye(2)) + np.kron(np.eye(2), PAULI_Z)) / SQ2
    assert np.allclose(ops[0].op, expected)
    # the identity-family member is a scalar with zero variance in any state
    assert np.allclose(ops[1].op, 2 / SQ2 * np.eye(4))

    single = collective_set((2, 2), gamma=[1])
    for c, g in zip(single, padded_basis(2, 2).operators):
        assert np.allclose(c.op, g)


def test_collective_set_matches_embedding_sum():
    dims = (2, 3, 2)
    gamma = (0, 2)
    ops = collective_set(dims, gamma)
    d = max(dims)
    assert len(ops) == d * d
    sub_dims = (2, 2)
    fams = [aligned_padded_basis(2, d).operators] * 2
    for u, c in enumerate(ops):
        direct = sum(embed(fams[j][u], j, sub_dims) for j in range(2))
        assert np.abs(c.op - direct).max() < 1e-12
        assert c.support == gamma


def test_collective_set_rejects_empty_gamma():
    with pytest.raises(ValueError):
        collective_set((2, 2), gamma=[])


def test_build_weighted_pauli_sum():
    spec = collective_pauli_spec(6, (0.0, 0.0, 1.0))
    total = build_weighted(spec)
    direct = sum(embed(PAULI_Z, i, (2,) * 6) for i in range(6))
    assert np.abs(total.op - direct).max() < 1e-12

    one = build_weighted(collective_pauli_spec(1, (0.2, 0.0, 0.5)))
    assert np.allclose(one.op, 0.2 * PAULI_X + 0.5 * PAULI_Z)

    zero = build_weighted(collective_pauli_spec(3, (0.0, 0.0, 0.0)))
    assert not zero.op.any()


def test_site_operator_range():
    assert site_operator_range(collective_pauli_spec(4)) == (-1.0, 1.0)

    mixed_scale = weighted_spec(
        [(1.0,), (2.0,)], [(PAULI_Z,), (PAULI_Z,)]
    )
    assert site_operator_range(mixed_scale) == (-2.0, 2.0)

    xy = collective_pauli_spec(2, (1.0, 1.0, 0.0))
    lo, hi = site_operator_range(xy)
    assert abs(lo + SQ2) < 1e-12 and abs(hi - SQ2) < 1e-12


def test_weighted_spec_validation():
    with pytest.raises(ValueError):
        weighted_spec([(1.0, 0.5)], [(PAULI_Z,)])  # length mismatch
    with pytest.raises(Exception):
        weighted_spec([(1.0,)], [(np.array([[0, 1], [0, 0]]),)])  # not Hermitian


def test_index_rotation_invariance():
    # a common orthogonal rotation of the collective index leaves the sum alone
    rng = np.random.default_rng(29)
    for dims in ((2, 2), (2, 3), (3, 3), (2, 2, 2)):
        dim = int(np.prod(dims))
        g = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
        rho = g @ g.conj().T
        rho /= np.trace(rho).real
        state = QuantumState.from_matrix(rho, dims)
        base = [c.op for c in collective_set(dims)]
        d2 = len(base)
        for s in (0.0, -1.0, NEG_INF):
            reference = sum(skew_information(state, op, s) for op in base)
            o, _ = np.linalg.qr(rng.standard_normal((d2, d2)))
            rotated = [sum(o[u, v] * base[v] for v in range(d2)) for u in range(d2)]
            value = sum(skew_information(state, op, s) for op in rotated)
            assert abs(value - reference) < 1e-9
