"""Programmatic invariant suite behind the ``selftest`` CLI subcommand.

Each check returns a list of failure descriptions (empty means pass), so
the suite is reusable from tests.  Checks are seeded and deterministic.
"""

from __future__ import annotations

import math
import time

import numpy as np

from .criteria import (
    Mode,
    bound_P,
    bound_S,
    bound_gamma,
    prop1_evaluate,
    prop1_lhs,
    prop2_bound,
    prop2_evaluate,
    prop2_lhs,
)
from .matrices import QuantumState, embed, eigendecompose, partial_trace
from .observables import (
    aligned_padded_basis,
    collective_pauli_spec,
    collective_set,
    gellmann_basis,
    weighted_spec,
)
from .scan import DICKE_NOISE_TEMPLATE, make_prop1_lhs, threshold_scan
from .skew import NEG_INF, skew_information, variance
from .states import (
    dicke,
    ghz,
    haar_ket,
    random_k_producible,
    random_k_separable,
)

S_GRID = (0.0, -0.5, -1.0, -2.0, -8.0, NEG_INF)
# the pair mean is an operator mean exactly for orders in [-1, 0]; the
# convexity that makes criterion-1 verdicts sound holds only there (see
# check_criterion1_order_domain for the witness beyond it)
CONVEX_S_GRID = (0.0, -0.5, -1.0)
DEFAULT_SEED = 20260808


def _random_dims(rng, max_sites=6, max_dim=3, dim_cap=216) -> tuple[int, ...]:
    while True:
        n = int(rng.integers(2, max_sites + 1))
        dims = tuple(int(d) for d in rng.integers(2, max_dim + 1, size=n))
        if math.prod(dims) <= dim_cap:
            return dims


def _random_state(rng, dims) -> QuantumState:
    dim = math.prod(dims)
    g = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    rho = g @ g.conj().T
    rho /= np.trace(rho).real
    return QuantumState.from_matrix(rho, dims)


def _random_hermitian(rng, dim) -> np.ndarray:
    a = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    return (a + a.conj().T) / 2.0


def _random_weighted_spec(rng, dims):
    weights = []
    operators = []
    for d in dims:
        m = int(rng.integers(1, 4))
        weights.append(tuple(float(c) for c in rng.standard_normal(m)))
        operators.append(tuple(_random_hermitian(rng, d) for _ in range(m)))
    return weighted_spec(weights, operators)


def check_core_linalg(count=15, seed=DEFAULT_SEED) -> list[str]:
    rng = np.random.default_rng(seed)
    failures = []
    for trial in range(count):
        dims = _random_dims(rng, max_sites=4, dim_cap=54)
        state = _random_state(rng, dims)
        # composed partial traces agree with the one-shot reduction
        if len(dims) >= 3:
            keep = [0, 1]
            direct = partial_trace(state, keep)
            stepwise = state
            for site in range(len(dims) - 1, 1, -1):
                stepwise = partial_trace(stepwise, [i for i in range(stepwise.n_sites) if i != site])
            defect = float(np.abs(direct.rho - stepwise.rho).max())
            if defect > 1e-12:
                failures.append(f"trial {trial}: composed partial trace defect {defect:.3e}")
        h = _random_hermitian(rng, math.prod(dims))
        w, v = eigendecompose(h)
        recon = float(np.abs(v @ np.diag(w) @ v.conj().T - h).max())
        if recon > 1e-9:
            failures.append(f"trial {trial}: eigendecomposition reconstruction {recon:.3e}")
        if not np.all(np.diff(w) <= 1e-12):
            failures.append(f"trial {trial}: eigenvalues not sorted descending")
    return failures


def check_basis_families() -> list[str]:
    failures = []
    for d in (2, 3, 4):
        basis = gellmann_basis(d)
        if len(basis) != d * d:
            failures.append(f"d={d}: expected {d * d} members")
        gram = np.array([[np.trace(a @ b).real for b in basis] for a in basis])
        defect = float(np.abs(gram - np.eye(d * d)).max())
        if defect > 1e-12:
            failures.append(f"d={d}: orthonormality defect {defect:.3e}")
    for di in (2, 3):
        for d in (2, 3, 4):
            if di > d:
                continue
            fam = aligned_padded_basis(di, d).operators
            square_sum = sum(h @ h for h in fam)
            defect = float(np.abs(square_sum - di * np.eye(di)).max())
            if defect > 1e-12:
                failures.append(f"(di={di}, d={d}): sum of squares defect {defect:.3e}")
    for di in (2, 3):
        for dj in (2, 3):
            for d in (2, 3, 4):
                if d < max(di, dj):
                    continue
                fam_i = aligned_padded_basis(di, d).operators
                fam_j = aligned_padded_basis(dj, d).operators
                cross = sum(np.kron(a, b) for a, b in zip(fam_i, fam_j))
                top = float(np.linalg.eigvalsh(cross)[-1])
                if top > 1.0 + 1e-12:
                    failures.append(f"(di={di}, dj={dj}, d={d}): cross top {top:.12f} > 1")
    return failures


def check_skew_properties(count=200, seed=DEFAULT_SEED) -> list[str]:
    rng = np.random.default_rng(seed)
    failures = []
    for trial in range(count):
        dim = int(rng.integers(2, 7))
        state = _random_state(rng, (dim,))
        x = _random_hermitian(rng, dim)
        values = [skew_information(state, x, s) for s in S_GRID]
        var = variance(state, x)
        # s grid is descending, so values must be nondecreasing
        for a, b in zip(values, values[1:]):
            if a > b + 1e-10:
                failures.append(f"trial {trial}: monotonicity broken ({a:.12g} > {b:.12g})")
        if values[-1] > var + 1e-10:
            failures.append(f"trial {trial}: I at -inf exceeds variance")
        if min(values) < -1e-12:
            failures.append(f"trial {trial}: negative skew information {min(values):.3e}")

        ket = haar_ket(rng, dim)
        pure = QuantumState.from_ket(ket)
        pure_var = variance(pure, x)
        for s in S_GRID:
            if abs(skew_information(pure, x, s) - pure_var) > 1e-9:
                failures.append(f"trial {trial}: pure state value differs from variance at s={s}")

        other = _random_state(rng, (dim,))
        weight = float(rng.uniform(0.05, 0.95))
        mixed = QuantumState.from_matrix(
            weight * state.rho + (1 - weight) * other.rho, state.dims
        )
        for s in CONVEX_S_GRID:
            lhs = skew_information(mixed, x, s)
            rhs = weight * skew_information(state, x, s) + (1 - weight) * skew_information(
                other, x, s
            )
            if lhs > rhs + 1e-9:
                failures.append(f"trial {trial}: convexity broken at s={s}")

        dims = tuple(int(d) for d in rng.integers(2, 4, size=int(rng.integers(2, 4))))
        parts = [_random_state(rng, (d,)) for d in dims]
        locals_ = [_random_hermitian(rng, d) for d in dims]
        joint_rho = parts[0].rho
        for part in parts[1:]:
            joint_rho = np.kron(joint_rho, part.rho)
        joint = QuantumState.from_matrix(joint_rho, dims)
        total_x = sum(embed(op, i, dims) for i, op in enumerate(locals_))
        for s in (0.0, -2.0, NEG_INF):
            joint_value = skew_information(joint, total_x, s)
            site_sum = sum(
                skew_information(part, op, s) for part, op in zip(parts, locals_)
            )
            if abs(joint_value - site_sum) > 1e-9:
                failures.append(f"trial {trial}: additivity broken at s={s}")
    return failures


def _collective_from_families(dims, families):
    count = len(families[0])
    return [
        sum(embed(families[i][u], i, dims) for i in range(len(dims)))
        for u in range(count)
    ]


def check_collective_invariance(rotations=50, seed=DEFAULT_SEED) -> list[str]:
    rng = np.random.default_rng(seed)
    failures = []
    for trial in range(rotations):
        dims = _random_dims(rng, max_sites=3, dim_cap=27)
        state = _random_state(rng, dims)
        base = [c.op for c in collective_set(dims)]
        d2 = len(base)
        s = S_GRID[int(rng.integers(0, len(S_GRID)))]
        reference = sum(skew_information(state, op, s) for op in base)

        # invariance under a common orthogonal rotation of the collective index
        o, _ = np.linalg.qr(rng.standard_normal((d2, d2)))
        rotated = [sum(o[u, v] * base[v] for v in range(d2)) for u in range(d2)]
        drift = abs(sum(skew_information(state, op, s) for op in rotated) - reference)
        if drift > 1e-9:
            failures.append(f"trial {trial}: index-rotation drift {drift:.3e}")

        # per-site rotations leave product states invariant (additivity)
        parts = [_random_state(rng, (d,)) for d in dims]
        rho = parts[0].rho
        for part in parts[1:]:
            rho = np.kron(rho, part.rho)
        product_state = QuantumState.from_matrix(rho, dims)
        d = max(dims)
        families = []
        for dd in dims:
            native = gellmann_basis(dd)
            oi, _ = np.linalg.qr(rng.standard_normal((dd * dd, dd * dd)))
            rotated_native = [
                sum(oi[u, v] * native[v] for v in range(dd * dd)) for u in range(dd * dd)
            ]
            zero = np.zeros((dd, dd), dtype=complex)
            families.append(rotated_native + [zero] * (d * d - dd * dd))
        site_rotated = _collective_from_families(dims, families)
        before = sum(skew_information(product_state, c.op, s) for c in collective_set(dims))
        after = sum(skew_information(product_state, op, s) for op in site_rotated)
        if abs(after - before) > 1e-9:
            failures.append(f"trial {trial}: product-state site-rotation drift {abs(after - before):.3e}")

        # a single-site subsystem of a correlated state is also basis-free
        site = int(rng.integers(0, len(dims)))
        reduced = partial_trace(state, [site])
        dd = dims[site]
        native = gellmann_basis(dd)
        oi, _ = np.linalg.qr(rng.standard_normal((dd * dd, dd * dd)))
        rotated_native = [
            sum(oi[u, v] * native[v] for v in range(dd * dd)) for u in range(dd * dd)
        ]
        base_sum = sum(skew_information(reduced, op, s) for op in native)
        rotated_sum = sum(skew_information(reduced, op, s) for op in rotated_native)
        if abs(rotated_sum - base_sum) > 1e-9:
            failures.append(f"trial {trial}: single-site rotation drift {abs(rotated_sum - base_sum):.3e}")
    return failures


def check_subsystem_bound(states=10, seed=DEFAULT_SEED) -> list[str]:
    rng = np.random.default_rng(seed)
    failures = []
    for trial in range(states):
        dims = tuple(int(d) for d in rng.integers(2, 4, size=4))
        state = _random_state(rng, dims)
        d = max(dims)
        for mask in range(1, 2 ** len(dims)):
            gamma = [i for i in range(len(dims)) if mask >> i & 1]
            reduced = partial_trace(state, gamma)
            ops = collective_set(dims, gamma)
            bound = bound_gamma(len(gamma), d)
            for s in (0.0, -1.0, NEG_INF):
                total = sum(skew_information(reduced, c.op, s) for c in ops)
                if total > bound + 1e-9:
                    failures.append(
                        f"trial {trial} gamma={gamma} s={s}: {total:.12g} > {bound:.12g}"
                    )
    return failures


def check_bound_hierarchy() -> list[str]:
    failures = []
    for n in range(2, 9):
        for d in (2, 3, 4):
            s_values = [bound_S(n, k, d) for k in range(2, n + 1)]
            if any(a < b - 1e-12 for a, b in zip(s_values, s_values[1:])):
                failures.append(f"N={n} d={d}: separable bound not non-increasing")
            p_values = [bound_P(n, k, d) for k in range(1, n)]
            if any(a > b + 1e-12 for a, b in zip(p_values, p_values[1:])):
                failures.append(f"N={n} d={d}: producible bound not non-decreasing")
            if abs(bound_S(n, n, d) - bound_P(n, 1, d)) > 1e-12:
                failures.append(f"N={n} d={d}: endpoint bounds differ")
            if abs(bound_S(n, n, d) - n * (d - 1)) > 1e-12:
                failures.append(f"N={n} d={d}: fully-separable bound wrong")
    return failures


def check_spot_values() -> list[str]:
    failures = []
    dicke6 = dicke(6, 3)
    ghz6 = ghz(6)
    ops = collective_set((2,) * 6)
    for s in (0.0, -1.0, NEG_INF):
        for name, state in (("dicke", dicke6), ("ghz", ghz6)):
            value = prop1_lhs(state, s, operators=ops)
            if abs(value - 24.0) > 1e-9:
                failures.append(f"{name} prop1 lhs at s={s}: {value:.12g} != 24")
    spec = collective_pauli_spec(6)
    for s in S_GRID:
        value = prop2_lhs(ghz6, spec, s)
        if abs(value - 36.0) > 1e-9:
            failures.append(f"ghz prop2 lhs at s={s}: {value:.12g} != 36")
    expected_bounds = (
        (Mode.SEPARABLE, 2, 26.0),
        (Mode.PRODUCIBLE, 3, 18.0),
        (Mode.PRODUCIBLE, 5, 26.0),
    )
    for mode, k, expected in expected_bounds:
        value = prop2_bound(6, k, mode, spec)
        if abs(value - expected) > 1e-12:
            failures.append(f"prop2 bound {mode.value} k={k}: {value:.12g} != {expected}")
        report = prop2_evaluate(ghz6, spec, NEG_INF, mode, k)
        if not report.violated:
            failures.append(f"ghz prop2 {mode.value} k={k}: expected a violation")
    return failures


def check_detection_monotonicity(seed=DEFAULT_SEED) -> list[str]:
    failures = []
    ops = collective_set((2,) * 6)
    dicke6 = dicke(6, 3)
    white = np.eye(64, dtype=complex) / 64
    for p in (0.3, 0.55, 0.8):
        state = QuantumState.from_matrix(p * dicke6.rho + (1 - p) * white, (2,) * 6)
        for mode, k in ((Mode.SEPARABLE, 2), (Mode.SEPARABLE, 4), (Mode.PRODUCIBLE, 3)):
            verdicts = [
                prop1_evaluate(state, s, mode, k, operators=ops).violated for s in S_GRID
            ]
            # S_GRID is descending: a violation at larger s must persist below
            for a, b in zip(verdicts, verdicts[1:]):
                if a and not b:
                    failures.append(f"p={p} {mode.value} k={k}: violation lost at smaller s")
    return failures


def fuzz_soundness(mode: Mode, count=1000, seed=DEFAULT_SEED, dim_cap=216) -> list[str]:
    """Random provably-k-separable/producible states must never violate.

    Criterion-1 draws stay on the order range where its verdict is sound
    (mixtures genuinely violate it beyond, see
    :func:`check_criterion1_order_domain`); criterion 2 is exercised over
    the full order grid.
    """
    rng = np.random.default_rng(seed)
    failures = []
    ops_cache: dict[tuple[int, ...], list] = {}
    for trial in range(count):
        dims = _random_dims(rng, dim_cap=dim_cap)
        n = len(dims)
        if mode is Mode.SEPARABLE:
            k = int(rng.integers(2, n + 1))
            state = random_k_separable(n, dims, k, terms=int(rng.integers(1, 5)),
                                       seed=int(rng.integers(0, 2**32)))
        else:
            k = int(rng.integers(1, n))
            state = random_k_producible(n, dims, k, terms=int(rng.integers(1, 5)),
                                        seed=int(rng.integers(0, 2**32)))
        s1 = CONVEX_S_GRID[int(rng.integers(0, len(CONVEX_S_GRID)))]
        s2 = S_GRID[int(rng.integers(0, len(S_GRID)))]
        if dims not in ops_cache:
            ops_cache[dims] = collective_set(dims)
        report1 = prop1_evaluate(state, s1, mode, k, operators=ops_cache[dims])
        if report1.margin > 1e-9:
            failures.append(
                f"trial {trial}: prop1 {mode.value} k={k} dims={dims} s={s1} "
                f"margin {report1.margin:.3e}"
            )
        spec = _random_weighted_spec(rng, dims)
        report2 = prop2_evaluate(state, spec, s2, mode, k)
        if report2.margin > 1e-9:
            failures.append(
                f"trial {trial}: prop2 {mode.value} k={k} dims={dims} s={s2} "
                f"margin {report2.margin:.3e}"
            )
    return failures


def criterion1_gap_witness() -> QuantumState:
    """Fully separable two-qubit state whose collective sum exceeds the
    fully-separable bound at strongly negative order.

    An equal mixture of ``|u>|0>`` and ``|1>|-u>`` with ``u`` tilted by
    ``arccos(3 - 2*sqrt(2))`` from the z axis reaches ``8 - 4*sqrt(2)``
    at order ``-inf``, above the bound ``N(d-1) = 2``; criterion-1
    verdicts are therefore only certificates for orders in ``[-1, 0]``.
    """
    theta = math.acos(3.0 - 2.0 * math.sqrt(2.0))
    up = np.array([math.cos(theta / 2), math.sin(theta / 2)], dtype=complex)
    down = np.array([math.sin(theta / 2), -math.cos(theta / 2)], dtype=complex)
    zero = np.array([1.0, 0.0], dtype=complex)
    one = np.array([0.0, 1.0], dtype=complex)
    k1 = np.kron(up, zero)
    k2 = np.kron(one, down)
    rho = 0.5 * np.outer(k1, k1.conj()) + 0.5 * np.outer(k2, k2.conj())
    return QuantumState.from_matrix(rho, (2, 2))


def check_criterion1_order_domain() -> list[str]:
    """The gap witness violates at order -inf but respects orders in [-1, 0]."""
    failures = []
    state = criterion1_gap_witness()
    ops = collective_set((2, 2))
    expected = 8.0 - 4.0 * math.sqrt(2.0)
    value = prop1_lhs(state, NEG_INF, operators=ops)
    if abs(value - expected) > 1e-9:
        failures.append(f"witness value {value:.12g} != 8 - 4 sqrt(2)")
    if value <= bound_S(2, 2, 2) + 1e-9:
        failures.append("witness no longer exceeds the fully-separable bound")
    for s in CONVEX_S_GRID:
        safe = prop1_lhs(state, s, operators=ops)
        if safe > bound_S(2, 2, 2) + 1e-9:
            failures.append(f"witness violates at s={s}, inside the sound range")
    return failures


def check_threshold_spot() -> list[str]:
    failures = []
    lhs = make_prop1_lhs(DICKE_NOISE_TEMPLATE, NEG_INF)
    result = threshold_scan(
        lhs, bound_S(6, 6, 2), coarse_step=0.01, tol=1e-6,
        criterion="prop1", mode=Mode.SEPARABLE, k=6,
    )
    if not result.found or abs(result.p_star - 0.25) > 5e-4:
        failures.append(f"k=6 separable threshold off: {result.p_star}")
    return failures


def run_selftest(seed=DEFAULT_SEED, fuzz_count=1000, quick=False, log=print) -> bool:
    """Run the complete invariant suite; print one PASS/FAIL line per check."""
    if quick:
        fuzz_count = min(fuzz_count, 120)
    prop_count = 50 if quick else 200
    rotations = 10 if quick else 50
    bound_states = 4 if quick else 10

    checks = [
        ("core-linalg", lambda: check_core_linalg(seed=seed)),
        ("basis-families", check_basis_families),
        ("skew-properties", lambda: check_skew_properties(prop_count, seed=seed)),
        ("collective-invariance", lambda: check_collective_invariance(rotations, seed=seed)),
        ("subsystem-bound", lambda: check_subsystem_bound(bound_states, seed=seed)),
        ("bound-hierarchy", check_bound_hierarchy),
        ("spot-values", check_spot_values),
        ("detection-monotonicity", lambda: check_detection_monotonicity(seed=seed)),
        ("criterion1-order-domain", check_criterion1_order_domain),
        ("soundness-separable", lambda: fuzz_soundness(Mode.SEPARABLE, fuzz_count, seed=seed)),
        ("soundness-producible", lambda: fuzz_soundness(Mode.PRODUCIBLE, fuzz_count, seed=seed + 1)),
        ("threshold-spot", check_threshold_spot),
    ]

    started = time.perf_counter()
    all_ok = True
    for index, (name, runner) in enumerate(checks, start=1):
        t0 = time.perf_counter()
        failures = runner()
        elapsed = time.perf_counter() - t0
        status = "PASS" if not failures else "FAIL"
        all_ok &= not failures
        log(f"[{index:2d}/{len(checks)}] {name:<24s} {status}  ({elapsed:.1f} s)")
        for failure in failures[:5]:
            log(f"      {failure}")
        if len(failures) > 5:
            log(f"      ... and {len(failures) - 5} more")
    total = time.perf_counter() - started
    log(f"selftest: {'PASS' if all_ok else 'FAIL'} ({total:.1f} s)")
    return all_ok
