"""Orthonormal local observable bases and collective operators.

Each site of dimension ``d_i`` carries an orthonormal Hermitian basis of
``d_i^2`` operators (normalized generalized Gell-Mann family).  When sites
have different dimensions the families are padded with zero operators to a
common count ``d^2`` (``d`` the largest site dimension), and one collective
operator per index sums the per-site members, each embedded with
identities elsewhere.

Two paddings are provided: ``padded_basis`` appends zeros at the tail;
``aligned_padded_basis`` interleaves zeros so that the diagonal, identity,
symmetric and antisymmetric families land at the same indices on every
site.  The aligned layout is what makes the cross-site operator inequality
``sum_u H_i^u x H_j^u <= I`` hold; collective operators therefore use it.
For homogeneous dimensions the two layouts are identical.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .matrices import (
    ValidationError,
    as_operator,
    embed,
    extreme_eigenvalues,
    require_hermitian,
    _frozen,
)

PAULI_X = _frozen(np.array([[0, 1], [1, 0]], dtype=complex))
PAULI_Y = _frozen(np.array([[0, -1j], [1j, 0]], dtype=complex))
PAULI_Z = _frozen(np.array([[1, 0], [0, -1]], dtype=complex))


def gellmann_basis(d: int) -> list[np.ndarray]:
    """Orthonormal Hermitian basis of dimension ``d``: ``d - 1`` traceless
    diagonal members, the normalized identity, then the symmetric and
    antisymmetric off-diagonal pairs."""
    d = int(d)
    if d < 2:
        raise ValueError(f"basis dimension must be >= 2, got {d}")
    ops: list[np.ndarray] = []
    for l in range(d - 1):
        diag = np.zeros(d)
        diag[: l + 1] = 1.0
        diag[l + 1] = -(l + 1)
        ops.append(np.diag(diag).astype(complex) / math.sqrt((l + 1) * (l + 2)))
    ops.append(np.eye(d, dtype=complex) / math.sqrt(d))
    for n in range(1, d):
        for m in range(n):
            sym = np.zeros((d, d), dtype=complex)
            sym[m, n] = sym[n, m] = 1.0 / math.sqrt(2)
            ops.append(sym)
    for n in range(1, d):
        for m in range(n):
            asym = np.zeros((d, d), dtype=complex)
            asym[m, n] = -1j / math.sqrt(2)
            asym[n, m] = 1j / math.sqrt(2)
            ops.append(asym)
    return [_frozen(op) for op in ops]


@dataclass(frozen=True)
class LocalBasis:
    """A site's observable family padded with zero operators to ``d^2`` members."""

    site_dim: int
    padded_count: int
    operators: tuple[np.ndarray, ...]

    @property
    def native_count(self) -> int:
        return self.site_dim * self.site_dim


def _check_pad(site_dim: int, d: int) -> tuple[int, int]:
    site_dim = int(site_dim)
    d = int(d)
    if site_dim < 2:
        raise ValueError(f"site dimension must be >= 2, got {site_dim}")
    if site_dim > d:
        raise ValueError(f"site dimension {site_dim} exceeds padding dimension {d}")
    return site_dim, d


def padded_basis(site_dim: int, d: int) -> LocalBasis:
    """Native basis followed by ``d^2 - site_dim^2`` zero operators."""
    site_dim, d = _check_pad(site_dim, d)
    zero = _frozen(np.zeros((site_dim, site_dim), dtype=complex))
    ops = gellmann_basis(site_dim) + [zero] * (d * d - site_dim * site_dim)
    return LocalBasis(site_dim=site_dim, padded_count=d * d, operators=tuple(ops))


def aligned_padded_basis(site_dim: int, d: int) -> LocalBasis:
    """Zero padding interleaved so operator families align across sites.

    Layout (0-based): diagonal members at ``0 .. site_dim - 2``, zeros up
    to ``d - 2``, the normalized identity at ``d - 1``, the symmetric pairs
    at ``d + n(n-1)/2 + m`` for ``m < n < site_dim`` with zeros filling the
    rest of the symmetric zone, and the antisymmetric pairs likewise after
    index ``d + d(d-1)/2 - 1``.
    """
    site_dim, d = _check_pad(site_dim, d)
    native = gellmann_basis(site_dim)
    zero = _frozen(np.zeros((site_dim, site_dim), dtype=complex))
    ops: list[np.ndarray] = [zero] * (d * d)
    for l in range(site_dim - 1):
        ops[l] = native[l]
    ops[d - 1] = native[site_dim - 1]
    idx = site_dim
    for n in range(1, site_dim):
        for m in range(n):
            ops[d + n * (n - 1) // 2 + m] = native[idx]
            idx += 1
    base = d + d * (d - 1) // 2
    for n in range(1, site_dim):
        for m in range(n):
            ops[base + n * (n - 1) // 2 + m] = native[idx]
            idx += 1
    return LocalBasis(site_dim=site_dim, padded_count=d * d, operators=tuple(ops))


@dataclass(frozen=True)
class CollectiveObservable:
    """Sum of single-site embeddings over a support subset."""

    support: tuple[int, ...]
    op: np.ndarray
    label: str


def collective_set(
    dims: Sequence[int],
    gamma: Sequence[int] | None = None,
    layout: str = "aligned",
) -> list[CollectiveObservable]:
    """The ``d^2`` collective operators on the subsystem ``gamma``.

    ``d = max(dims)`` is taken over the *full* dimension sequence, so a
    subsystem of a larger system pads against the global maximum.
    """
    dims = tuple(int(x) for x in dims)
    if gamma is None:
        gamma = tuple(range(len(dims)))
    else:
        gamma = tuple(sorted({int(i) for i in gamma}))
    if not gamma:
        raise ValueError("gamma must be a nonempty site subset")
    if gamma[0] < 0 or gamma[-1] >= len(dims):
        raise ValueError(f"gamma {gamma} out of range for {len(dims)} sites")
    if layout == "aligned":
        builder = aligned_padded_basis
    elif layout == "tail":
        builder = padded_basis
    else:
        raise ValueError(f"unknown padding layout {layout!r}")

    d = max(dims)
    sub_dims = tuple(dims[i] for i in gamma)
    bases = [builder(dims[i], d) for i in gamma]
    out = []
    for u in range(d * d):
        op = sum(embed(bases[j].operators[u], j, sub_dims) for j in range(len(gamma)))
        out.append(CollectiveObservable(support=gamma, op=_frozen(op), label=f"u{u}"))
    return out


@dataclass(frozen=True)
class WeightedObservableSpec:
    """Per site: a real weight vector and a matching list of observables."""

    weights: tuple[tuple[float, ...], ...]
    operators: tuple[tuple[np.ndarray, ...], ...]

    @property
    def n_sites(self) -> int:
        return len(self.weights)

    @property
    def dims(self) -> tuple[int, ...]:
        return tuple(ops[0].shape[0] for ops in self.operators)

    def site_terms(self) -> list[np.ndarray]:
        """The combined single-site operators ``c_i . X_i``."""
        terms = []
        for cs, ops in zip(self.weights, self.operators):
            terms.append(sum(c * op for c, op in zip(cs, ops)))
        return terms


def weighted_spec(weights, operators) -> WeightedObservableSpec:
    """Validate and freeze a per-site weighted observable specification."""
    if len(weights) != len(operators) or not weights:
        raise ValueError("weights and operators must list the same nonzero number of sites")
    w_out = []
    o_out = []
    for site, (cs, ops) in enumerate(zip(weights, operators)):
        cs = tuple(float(c) for c in cs)
        ops = tuple(ops)
        if len(cs) != len(ops) or not cs:
            raise ValueError(f"site {site}: weight and observable counts differ or are empty")
        dim = as_operator(ops[0]).shape[0]
        checked = []
        for op in ops:
            op = require_hermitian(op)
            if op.shape[0] != dim:
                raise ValidationError(f"site {site}: observables have mixed dimensions")
            checked.append(_frozen(op))
        w_out.append(cs)
        o_out.append(tuple(checked))
    return WeightedObservableSpec(weights=tuple(w_out), operators=tuple(o_out))


def collective_pauli_spec(n_sites: int, coeffs=(0.0, 0.0, 1.0)) -> WeightedObservableSpec:
    """Homogeneous qubit spec with per-site observables ``(sx, sy, sz)``."""
    n_sites = int(n_sites)
    if n_sites < 1:
        raise ValueError("need at least one site")
    coeffs = tuple(float(c) for c in coeffs)
    if len(coeffs) != 3:
        raise ValueError("coeffs must have three entries")
    return weighted_spec(
        [coeffs] * n_sites, [(PAULI_X, PAULI_Y, PAULI_Z)] * n_sites
    )


def build_weighted(spec: WeightedObservableSpec) -> CollectiveObservable:
    """Assemble the full-system operator ``sum_i embed(c_i . X_i)``."""
    dims = spec.dims
    terms = spec.site_terms()
    op = sum(embed(t, i, dims) for i, t in enumerate(terms))
    return CollectiveObservable(
        support=tuple(range(len(dims))), op=_frozen(op), label="weighted"
    )


def site_operator_range(spec: WeightedObservableSpec) -> tuple[float, float]:
    """Smallest and largest single-site eigenvalue over all ``c_i . X_i``."""
    lo = math.inf
    hi = -math.inf
    for term in spec.site_terms():
        a, b = extreme_eigenvalues(term)
        lo = min(lo, a)
        hi = max(hi, b)
    return lo, hi
