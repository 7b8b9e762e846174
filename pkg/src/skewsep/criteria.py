"""Closed-form bounds and the two detection criteria.

Criterion 1 sums the skew information of all collective basis operators
over the full system and compares against a closed-form constant that any
k-separable (or k-producible) state must respect.  Criterion 2 does the
same for a single weighted collective observable, with a bound built from
the extreme single-site eigenvalues.  A violation certifies
k-nonseparability, respectively (k+1)-partite entanglement.

Certification caveat: the convexity argument behind criterion 1 requires
the pair mean to be an operator mean, which holds exactly for orders
``s`` in ``[-1, 0]``.  Beyond that range separable mixtures exceeding the
criterion-1 constant exist (``selftest.criterion1_gap_witness``), so
criterion-1 verdicts at ``s < -1`` reproduce published threshold numbers
but are not separability certificates.  No such gap is known for
criterion 2, which survives adversarial search at every order.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .matrices import QuantumState
from .observables import (
    CollectiveObservable,
    WeightedObservableSpec,
    build_weighted,
    collective_set,
    site_operator_range,
)
from .skew import NEG_INF, skew_information, validate_order

# margins below this are round-off, not detection
VIOLATION_MARGIN = 1e-9


class Mode(str, Enum):
    SEPARABLE = "separable"
    PRODUCIBLE = "producible"


def check_mode_k(mode: Mode, k: int, n_sites: int) -> int:
    k = int(k)
    if mode is Mode.SEPARABLE:
        if not 2 <= k <= n_sites:
            raise ValueError(f"separable mode needs 2 <= k <= {n_sites}, got k={k}")
    elif mode is Mode.PRODUCIBLE:
        if not 1 <= k <= n_sites - 1:
            raise ValueError(f"producible mode needs 1 <= k <= {n_sites - 1}, got k={k}")
    else:
        raise ValueError(f"unknown mode {mode!r}")
    return k


def bound_gamma(n_gamma: int, d: int) -> float:
    """Upper bound on the collective skew-information sum of one subsystem."""
    n_gamma = int(n_gamma)
    d = int(d)
    if n_gamma < 1:
        raise ValueError(f"subsystem size must be >= 1, got {n_gamma}")
    if d < 2:
        raise ValueError(f"local dimension must be >= 2, got {d}")
    if n_gamma == 1:
        return float(d - 1)
    return n_gamma * n_gamma * (1.0 - 1.0 / d) + n_gamma * (d - 1.0)


def bound_S(n_sites: int, k: int, d: int) -> float:
    """Bound for k-separable states (criterion 1)."""
    n_sites = int(n_sites)
    k = check_mode_k(Mode.SEPARABLE, k, n_sites)
    d = int(d)
    if k == n_sites:
        return n_sites * (d - 1.0)
    block = n_sites - k + 1
    return block * block * (1.0 - 1.0 / d) + n_sites * (d - 1.0)


def bound_P(n_sites: int, k: int, d: int) -> float:
    """Bound for k-producible states (criterion 1); branch on N = q*k + t."""
    n_sites = int(n_sites)
    k = check_mode_k(Mode.PRODUCIBLE, k, n_sites)
    d = int(d)
    if k == 1:
        return n_sites * (d - 1.0)
    q, t = divmod(n_sites, k)
    if t == 0:
        quad = n_sites * k
    elif t == 1:
        quad = q * k * k
    else:
        quad = q * k * k + t * t
    return quad * (1.0 - 1.0 / d) + n_sites * (d - 1.0)


@dataclass(frozen=True)
class CriterionReport:
    """Evaluated left-hand side, bound and verdict for one detection query."""

    criterion: str
    k: int
    mode: Mode
    s: float
    lhs: float
    bound: float
    margin: float
    violated: bool
    interpretation: str
    state_spec: str

    def to_dict(self) -> dict:
        return {
            "criterion": self.criterion,
            "k": self.k,
            "mode": self.mode.value,
            "s": "-inf" if self.s == NEG_INF else sig12(self.s),
            "lhs": sig12(self.lhs),
            "bound": sig12(self.bound),
            "margin": sig12(self.margin),
            "violated": self.violated,
            "interpretation": self.interpretation,
            "state_spec": self.state_spec,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict())


def sig12(x: float) -> float:
    """Round to 12 significant digits for serialized output."""
    return float(f"{float(x):.12g}")


def _interpretation(mode: Mode, k: int, n_sites: int, violated: bool) -> str:
    if not violated:
        return "not detected"
    if mode is Mode.SEPARABLE:
        text = f"{k}-nonseparable"
        if k == 2:
            text += "; genuinely multipartite entangled"
    else:
        text = f"contains {k + 1}-partite entanglement"
        if k == n_sites - 1:
            text += "; genuinely multipartite entangled"
    return text


def _report(criterion, k, mode, s, lhs, bound, n_sites, state_spec) -> CriterionReport:
    margin = lhs - bound
    violated = margin > VIOLATION_MARGIN
    return CriterionReport(
        criterion=criterion,
        k=k,
        mode=mode,
        s=s,
        lhs=lhs,
        bound=bound,
        margin=margin,
        violated=violated,
        interpretation=_interpretation(mode, k, n_sites, violated),
        state_spec=state_spec,
    )


def _as_operator_list(operators) -> list[np.ndarray]:
    out = []
    for op in operators:
        out.append(op.op if isinstance(op, CollectiveObservable) else op)
    return out


def prop1_lhs(state: QuantumState, s, operators=None) -> float:
    """Skew-information sum over the full-system collective operators.

    ``operators`` may carry a prebuilt collective set to amortize across a
    parameter scan; it must match ``collective_set(state.dims)``.
    """
    s = validate_order(s)
    if operators is None:
        operators = collective_set(state.dims)
    ops = _as_operator_list(operators)
    return float(sum(skew_information(state, op, s) for op in ops))


def prop1_evaluate(
    state: QuantumState,
    s,
    mode: Mode,
    k: int,
    state_spec: str = "",
    operators=None,
) -> CriterionReport:
    s = validate_order(s)
    mode = Mode(mode)
    n = state.n_sites
    k = check_mode_k(mode, k, n)
    d = max(state.dims)
    bound = bound_S(n, k, d) if mode is Mode.SEPARABLE else bound_P(n, k, d)
    lhs = prop1_lhs(state, s, operators)
    return _report("prop1", k, mode, s, lhs, bound, n, state_spec)


def prop2_lhs(state: QuantumState, spec: WeightedObservableSpec, s) -> float:
    """Skew information of the weighted collective observable."""
    s = validate_order(s)
    if spec.dims != state.dims:
        raise ValueError(f"spec dims {spec.dims} do not match state dims {state.dims}")
    return skew_information(state, build_weighted(spec).op, s)


def prop2_bound(n_sites: int, k: int, mode: Mode, spec: WeightedObservableSpec) -> float:
    """Coefficient times squared single-site spectral width."""
    mode = Mode(mode)
    n_sites = int(n_sites)
    k = check_mode_k(mode, k, n_sites)
    lo, hi = site_operator_range(spec)
    width = hi - lo
    if mode is Mode.SEPARABLE:
        block = n_sites - k + 1
        coefficient = (block * block + k - 1) / 4.0
    else:
        q, t = divmod(n_sites, k)
        coefficient = (q * k * k + t * t) / 4.0
    return coefficient * width * width


def prop2_evaluate(
    state: QuantumState,
    spec: WeightedObservableSpec,
    s,
    mode: Mode,
    k: int,
    state_spec: str = "",
) -> CriterionReport:
    s = validate_order(s)
    mode = Mode(mode)
    n = state.n_sites
    k = check_mode_k(mode, k, n)
    bound = prop2_bound(n, k, mode, spec)
    lhs = prop2_lhs(state, spec, s)
    return _report("prop2", k, mode, s, lhs, bound, n, state_spec)
