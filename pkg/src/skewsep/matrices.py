"""Dense Hermitian linear algebra for small multipartite systems.

Operators are plain complex ndarrays.  Density matrices are wrapped in
:class:`QuantumState`, which validates Hermiticity, unit trace and
positivity once at construction and caches the spectral decomposition so
spectral sums downstream never re-diagonalize.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import reduce
from typing import Iterable, Sequence

import numpy as np

HERMITIAN_ATOL = 1e-10
TRACE_ATOL = 1e-10
EIGENVALUE_FLOOR = -1e-10
# eigenvalues below this are diagonalization noise around an exact zero;
# sqrt-like pair means amplify them (sqrt(1e-16) = 1e-8), so they are
# clamped to exactly zero, keeping the zero branch of the pair mean exact
EIGENVALUE_CLAMP = 1e-12
SPECTRUM_SUM_ATOL = 1e-9
ORTHONORMALITY_ATOL = 1e-9


class ValidationError(ValueError):
    """Numerical validation failure (non-Hermitian input, bad spectrum, ...)."""


def _frozen(a: np.ndarray) -> np.ndarray:
    out = np.array(a, dtype=complex, copy=True)
    out.setflags(write=False)
    return out


def as_operator(a) -> np.ndarray:
    a = np.asarray(a, dtype=complex)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValidationError(f"operator must be a square matrix, got shape {a.shape}")
    return a


def hermiticity_defect(a: np.ndarray) -> float:
    return float(np.abs(a - a.conj().T).max())


def require_hermitian(a, atol: float = HERMITIAN_ATOL) -> np.ndarray:
    a = as_operator(a)
    defect = hermiticity_defect(a)
    if defect > atol:
        raise ValidationError(f"matrix is not Hermitian within {atol:g} (defect {defect:.3e})")
    return a


def identity(d: int) -> np.ndarray:
    return np.eye(int(d), dtype=complex)


def kron(a, b) -> np.ndarray:
    """Tensor product of two operators."""
    return np.kron(as_operator(a), as_operator(b))


def embed(op, site: int, dims: Sequence[int]) -> np.ndarray:
    """Embed a single-site operator into the product space ``I x .. x op x .. x I``."""
    dims = tuple(int(d) for d in dims)
    op = as_operator(op)
    if site < 0 or site >= len(dims):
        raise ValueError(f"site {site} out of range for {len(dims)} sites")
    if op.shape[0] != dims[site]:
        raise ValidationError(
            f"operator dimension {op.shape[0]} does not match site dimension {dims[site]}"
        )
    factors = [op if i == site else np.eye(d, dtype=complex) for i, d in enumerate(dims)]
    return reduce(np.kron, factors)


def eigendecompose(op) -> tuple[np.ndarray, np.ndarray]:
    """Eigenvalues (descending) and matching orthonormal eigenvector columns."""
    op = require_hermitian(op)
    w, v = np.linalg.eigh(op)
    return w[::-1].copy(), v[:, ::-1].copy()


def extreme_eigenvalues(op) -> tuple[float, float]:
    """``(lambda_min, lambda_max)`` of a Hermitian operator."""
    op = require_hermitian(op)
    w = np.linalg.eigvalsh(op)
    return float(w[0]), float(w[-1])


@dataclass(frozen=True)
class QuantumState:
    """Validated density matrix with per-site dimensions and cached spectrum.

    ``eigenvalues`` are sorted descending with sub-noise values clamped to
    exactly zero; ``eigenvectors`` holds the matching orthonormal columns.
    """

    dims: tuple[int, ...]
    rho: np.ndarray
    eigenvalues: np.ndarray
    eigenvectors: np.ndarray

    @property
    def dim(self) -> int:
        return self.rho.shape[0]

    @property
    def n_sites(self) -> int:
        return len(self.dims)

    @classmethod
    def from_matrix(cls, rho, dims: Sequence[int] | None = None) -> "QuantumState":
        rho = as_operator(rho)
        if dims is None:
            dims = (rho.shape[0],)
        dims = tuple(int(d) for d in dims)
        if any(d < 1 for d in dims):
            raise ValueError(f"site dimensions must be positive, got {dims}")
        if math.prod(dims) != rho.shape[0]:
            raise ValidationError(
                f"product of dims {dims} does not match matrix dimension {rho.shape[0]}"
            )
        require_hermitian(rho)
        tr = complex(np.trace(rho))
        if abs(tr - 1.0) > TRACE_ATOL:
            raise ValidationError(f"trace must be 1 within {TRACE_ATOL:g}, got {tr:.12g}")

        w, v = np.linalg.eigh(rho)
        w = w[::-1].copy()
        v = v[:, ::-1].copy()
        if w[-1] < EIGENVALUE_FLOOR:
            raise ValidationError(
                f"matrix is not positive semidefinite (eigenvalue {w[-1]:.3e})"
            )
        # clamp round-off around zero to exactly zero; no renormalization
        w[w < EIGENVALUE_CLAMP] = 0.0
        if abs(float(w.sum()) - 1.0) > SPECTRUM_SUM_ATOL:
            raise ValidationError("clamped spectrum does not sum to 1")
        gram_defect = float(np.abs(v.conj().T @ v - np.eye(rho.shape[0])).max())
        if gram_defect > ORTHONORMALITY_ATOL:
            raise ValidationError(f"eigenvectors not orthonormal (defect {gram_defect:.3e})")

        w_frozen = np.array(w, dtype=float, copy=True)
        w_frozen.setflags(write=False)
        v_frozen = _frozen(v)
        return cls(dims=dims, rho=_frozen(rho), eigenvalues=w_frozen, eigenvectors=v_frozen)

    @classmethod
    def from_ket(cls, ket, dims: Sequence[int] | None = None) -> "QuantumState":
        ket = np.asarray(ket, dtype=complex).reshape(-1)
        norm = float(np.linalg.norm(ket))
        if norm < 1e-12:
            raise ValidationError("cannot build a state from the zero vector")
        ket = ket / norm
        return cls.from_matrix(np.outer(ket, ket.conj()), dims)


def partial_trace(state: QuantumState, keep: Iterable[int]) -> QuantumState:
    """Reduced state on the ``keep`` sites (ascending original order)."""
    keep = sorted({int(i) for i in keep})
    if not keep:
        raise ValueError("keep must be a nonempty subset of sites")
    n = state.n_sites
    if keep[0] < 0 or keep[-1] >= n:
        raise ValueError(f"keep sites {keep} out of range for {n} sites")

    dims = state.dims
    tensor = state.rho.reshape(dims + dims)
    keep_set = set(keep)
    row = list(range(n))
    col = [i + n if i in keep_set else i for i in range(n)]
    out = [i for i in keep] + [i + n for i in keep]
    reduced = np.einsum(tensor, row + col, out)
    dk = math.prod(dims[i] for i in keep)
    return QuantumState.from_matrix(reduced.reshape(dk, dk), tuple(dims[i] for i in keep))
