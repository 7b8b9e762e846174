import math

import numpy as np
import pytest

from skewsep import (
    StateSpecError,
    compile_family,
    dicke,
    evaluate_state_spec,
    ghz,
    ghz_phase,
    noisy_mix,
    parse_state_spec,
    product_bits,
    random_k_producible,
    random_k_separable,
    white,
)
from skewsep.states import eval_weight, spec_variables


def ket_of(state):
    assert state.eigenvalues[0] > 1 - 1e-12
    ket = state.eigenvectors[:, 0]
    # fix the arbitrary global phase: first nonzero amplitude positive real
    pivot = ket[np.flatnonzero(np.abs(ket) > 1e-12)[0]]
    return ket * (abs(pivot) / pivot)


def test_dicke_amplitudes():
    d63 = dicke(6, 3)
    ket = ket_of(d63)
    nonzero = np.flatnonzero(np.abs(ket) > 1e-12)
    assert len(nonzero) == 20
    assert np.allclose(np.abs(ket[nonzero]), 1 / math.sqrt(20))
    assert all(bin(i).count("1") == 3 for i in nonzero)

    d21 = ket_of(dicke(2, 1))
    assert np.allclose(np.abs(d21), [0, 1 / math.sqrt(2), 1 / math.sqrt(2), 0])

    ground = ket_of(dicke(4, 0))
    assert abs(abs(ground[0]) - 1) < 1e-12

    with pytest.raises(ValueError):
        dicke(4, 5)


def test_ghz_amplitudes_and_overlap():
    g = ket_of(ghz(6))
    assert abs(g[0] - 1 / math.sqrt(2)) < 1e-12
    gt = ket_of(ghz_phase(6))
    # global phase fixed by the |0...0> amplitude; |1...1| amplitude is -i/sqrt(2)
    gt = gt * (1 / math.sqrt(2)) / gt[0]
    assert abs(gt[-1] - (-1j / math.sqrt(2))) < 1e-12
    overlap = abs(np.vdot(g, gt))
    assert abs(overlap - 1 / math.sqrt(2)) < 1e-12
    with pytest.raises(ValueError):
        ghz(1)


def test_white_and_product():
    w = white(3, 2)
    assert np.allclose(w.rho, np.eye(8) / 8)
    p = product_bits("0101")
    assert abs(p.rho[0b0101, 0b0101] - 1.0) < 1e-12
    with pytest.raises(ValueError):
        product_bits("01a")


def test_parser_roundtrip_and_whitespace():
    node = parse_state_spec(" mix( 0.8 : dicke(N=6, m=3), 0.2 : white(N=6, d=2) ) ")
    state = evaluate_state_spec(node)
    direct = 0.8 * dicke(6, 3).rho + 0.2 * np.eye(64) / 64
    assert np.abs(state.rho - direct).max() < 1e-12

    leaf = evaluate_state_spec("ghz(N=4)")
    assert leaf.dims == (2, 2, 2, 2)


def test_parser_nested_mixture():
    state = evaluate_state_spec(
        "mix(0.5: mix(0.4: ghz(N=2), 0.6: white(N=2,d=2)), 0.5: product(bits=01))"
    )
    direct = 0.5 * (0.4 * ghz(2).rho + 0.6 * np.eye(4) / 4) + 0.5 * product_bits("01").rho
    assert np.abs(state.rho - direct).max() < 1e-12


def test_parser_errors():
    for bad in (
        "mix(0.8: dicke(N=6,m=3))",  # weights sum to 0.8
        "mix(0.5: ghz(N=2), 0.5: ghz(N=3))",  # dim mismatch
        "unknown(N=2)",
        "dicke(N=6)",  # missing arg
        "dicke(N=6,m=3,x=1)",  # extra arg
        "mix(0.5: ghz(N=2), 0.5: ghz(N=2)) trailing",
        "mix(p: ghz(N=2), 1-p: white(N=2,d=2))",  # unbound variable
    ):
        with pytest.raises(StateSpecError):
            evaluate_state_spec(bad)


def test_weight_expressions():
    assert eval_weight("0.25") == 0.25
    assert eval_weight("1-p", {"p": 0.3}) == 0.7
    assert abs(eval_weight("1-p-q", {"p": 0.3, "q": 0.2}) - 0.5) < 1e-15
    assert eval_weight("0.5*p", {"p": 0.4}) == 0.2
    node = parse_state_spec("mix(p: ghz(N=2), 1-p: white(N=2,d=2))")
    assert spec_variables(node) == {"p"}


def test_noisy_mix_endpoints():
    flat = noisy_mix("mix(0: dicke(N=6,m=3), 1: white(N=6,d=2))")
    assert np.abs(flat.rho - np.eye(64) / 64).max() < 1e-12
    pure = noisy_mix("mix(1: dicke(N=6,m=3), 0: white(N=6,d=2))")
    assert pure.eigenvalues[0] > 1 - 1e-12


def test_ghz_pair_mixture_spectrum():
    # rank-2 mixture of two non-orthogonal pure states: eigenvalues from the
    # 2x2 overlap structure, (1 +- |<G|Gt>|)/2 with overlap 1/sqrt(2)
    state = evaluate_state_spec("mix(0.5: ghz(N=6), 0.5: ghzphase(N=6))")
    lam = state.eigenvalues
    expected_hi = (1 + 1 / math.sqrt(2)) / 2
    expected_lo = (1 - 1 / math.sqrt(2)) / 2
    assert abs(lam[0] - expected_hi) < 1e-12
    assert abs(lam[1] - expected_lo) < 1e-12
    assert np.all(lam[2:] == 0.0)


def test_compile_family_matches_eval():
    family = compile_family("mix(p: dicke(N=6,m=3), 1-p: white(N=6,d=2))", ("p",))
    for p in (0.0, 0.33, 1.0):
        fast = family(p)
        slow = evaluate_state_spec(
            "mix(p: dicke(N=6,m=3), 1-p: white(N=6,d=2))", {"p": p}
        )
        assert np.abs(fast.rho - slow.rho).max() < 1e-12


def test_random_generators_deterministic_and_valid():
    a = random_k_separable(4, (2, 2, 2, 2), 2, terms=3, seed=5)
    b = random_k_separable(4, (2, 2, 2, 2), 2, terms=3, seed=5)
    assert np.array_equal(a.rho, b.rho)
    c = random_k_separable(4, (2, 2, 2, 2), 2, terms=3, seed=6)
    assert not np.allclose(a.rho, c.rho)

    mixed_dims = random_k_producible(3, (2, 3, 2), 2, terms=4, seed=9)
    assert mixed_dims.dims == (2, 3, 2)
    assert abs(float(np.trace(mixed_dims.rho).real) - 1.0) < 1e-10

    # a single bipartition term is a pure state
    pure = random_k_separable(3, (2, 2, 2), 2, terms=1, seed=11)
    assert pure.eigenvalues[0] > 1 - 1e-12


def test_random_generator_rejects_bad_k():
    with pytest.raises(ValueError):
        random_k_separable(3, (2, 2, 2), 1, seed=0)
    with pytest.raises(ValueError):
        random_k_producible(3, (2, 2, 2), 3, seed=0)


def test_fully_separable_partition_is_product():
    # k = N forces singleton blocks; with one term the state is a pure product,
    # so every single-site reduction is pure as well
    from skewsep import partial_trace

    state = random_k_separable(4, (2, 2, 2, 2), 4, terms=1, seed=3)
    for site in range(4):
        reduced = partial_trace(state, [site])
        assert reduced.eigenvalues[0] > 1 - 1e-10
