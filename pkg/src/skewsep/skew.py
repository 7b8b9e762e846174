"""Power-mean uncertainty measures of an observable in a mixed state.

The family is indexed by an order parameter ``s <= 0`` (``-inf`` allowed).
For eigenvalue pairs ``(a, b)`` of the state, the pair weight is the power
mean ``((a^s + b^s) / 2)^(1/s)``, with limits ``sqrt(a*b)`` at ``s = 0``
and ``min(a, b)`` at ``s = -inf``, and exactly ``0`` whenever ``a`` or
``b`` is ``0``.  The measure itself is

    sum_{l != l'} (lam_l - mean_s(lam_l, lam_l')) |<psi_l| X |psi_l'>|^2

which is nonnegative, decreasing in ``s``, convex in the state, additive
over product states, and equals the variance on pure states.
"""

from __future__ import annotations

import math

import numpy as np

from .matrices import QuantumState, require_hermitian

NEG_INF = float("-inf")

# pair terms with |<psi_l|X|psi_l'>|^2 below this are round-off noise
MATRIX_ELEMENT_GUARD = 1e-24

_LOG2 = math.log(2.0)


def validate_order(s) -> float:
    """Return ``s`` as a float, rejecting ``s > 0`` and NaN."""
    s = float(s)
    if math.isnan(s) or s > 0.0:
        raise ValueError(f"order parameter must be <= 0 or -inf, got {s}")
    return s


def power_mean(s, a: float, b: float) -> float:
    """Power mean of two nonnegative numbers at order ``s``; 0 if either is 0."""
    s = validate_order(s)
    a = float(a)
    b = float(b)
    if a < 0.0 or b < 0.0:
        raise ValueError(f"power mean arguments must be nonnegative, got ({a}, {b})")
    if a == 0.0 or b == 0.0:
        return 0.0
    if a == b:
        return a
    if s == NEG_INF:
        return min(a, b)
    if s == 0.0:
        return math.sqrt(a * b)
    # factor out the smaller argument and stay in log space: a^s for a << 1
    # and strongly negative s overflows the naive formula
    lo, hi = (a, b) if a < b else (b, a)
    ratio_pow = math.exp(s * (math.log(hi) - math.log(lo)))
    return math.exp(math.log(lo) + (math.log1p(ratio_pow) - _LOG2) / s)


def _pair_means(s: float, lam: np.ndarray) -> np.ndarray:
    """Matrix of power means over all eigenvalue pairs."""
    a = lam[:, None]
    b = lam[None, :]
    if s == NEG_INF:
        return np.minimum(a, b)
    if s == 0.0:
        return np.sqrt(a * b)
    lo = np.minimum(a, b)
    hi = np.maximum(a, b)
    out = np.zeros_like(lo)
    pos = lo > 0.0
    log_lo = np.log(lo[pos])
    ratio_pow = np.exp(s * (np.log(hi[pos]) - log_lo))
    out[pos] = np.exp(log_lo + (np.log1p(ratio_pow) - _LOG2) / s)
    return out


def skew_information(state: QuantumState, x, s) -> float:
    """Order-``s`` uncertainty of observable ``x`` in ``state``."""
    s = validate_order(s)
    x = require_hermitian(x)
    if x.shape[0] != state.dim:
        raise ValueError(
            f"observable dimension {x.shape[0]} does not match state dimension {state.dim}"
        )
    lam = state.eigenvalues
    m = state.eigenvectors.conj().T @ x @ state.eigenvectors
    weight = (m * m.conj()).real
    coeff = lam[:, None] - _pair_means(s, lam)
    np.fill_diagonal(coeff, 0.0)  # l == l' contributes exactly zero
    keep = weight >= MATRIX_ELEMENT_GUARD
    return float((coeff * weight)[keep].sum())


def variance(state: QuantumState, x) -> float:
    """``Tr(rho X^2) - (Tr rho X)^2``."""
    x = require_hermitian(x)
    if x.shape[0] != state.dim:
        raise ValueError(
            f"observable dimension {x.shape[0]} does not match state dimension {state.dim}"
        )
    second = float(np.real(np.trace(state.rho @ x @ x)))
    first = float(np.real(np.trace(state.rho @ x)))
    return second - first * first
