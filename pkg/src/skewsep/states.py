"""State factories, the state-expression grammar, and seeded random
generators of provably k-separable / k-producible states.

Grammar (whitespace-insensitive)::

    spec  := leaf | mix
    leaf  := dicke(N=6,m=3) | ghz(N=6) | ghzphase(N=6)
           | white(N=6,d=2) | product(bits=0101)
    mix   := mix(w: spec, w: spec, ...)

Mixture weights are decimals; inside scan templates they may also be
linear expressions in the scan variables, e.g. ``p``, ``1-p``, ``1-p-q``.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from functools import reduce
from typing import Mapping, Sequence

import numpy as np

from .matrices import QuantumState

WEIGHT_SUM_ATOL = 1e-12
WEIGHT_FLOOR = -1e-9


class StateSpecError(ValueError):
    """Malformed state-expression string."""


def dicke(n_qubits: int, m_excited: int) -> QuantumState:
    """Equal superposition of all ``n``-qubit kets with ``m`` ones."""
    n = int(n_qubits)
    m = int(m_excited)
    if n < 1:
        raise ValueError(f"need at least one qubit, got {n}")
    if not 0 <= m <= n:
        raise ValueError(f"excitation count must satisfy 0 <= m <= {n}, got {m}")
    ket = np.zeros(2**n, dtype=complex)
    amp = 1.0 / math.sqrt(math.comb(n, m))
    for idx in range(2**n):
        if idx.bit_count() == m:
            ket[idx] = amp
    return QuantumState.from_ket(ket, (2,) * n)


def ghz(n_qubits: int) -> QuantumState:
    """``(|0...0> + |1...1>) / sqrt(2)``."""
    n = int(n_qubits)
    if n < 2:
        raise ValueError(f"need at least two qubits, got {n}")
    ket = np.zeros(2**n, dtype=complex)
    ket[0] = ket[-1] = 1.0 / math.sqrt(2)
    return QuantumState.from_ket(ket, (2,) * n)


def ghz_phase(n_qubits: int) -> QuantumState:
    """``(|0...0> - i |1...1>) / sqrt(2)``."""
    n = int(n_qubits)
    if n < 2:
        raise ValueError(f"need at least two qubits, got {n}")
    ket = np.zeros(2**n, dtype=complex)
    ket[0] = 1.0 / math.sqrt(2)
    ket[-1] = -1j / math.sqrt(2)
    return QuantumState.from_ket(ket, (2,) * n)


def white(n_sites: int, d: int = 2) -> QuantumState:
    """Maximally mixed state on ``n`` sites of local dimension ``d``."""
    n = int(n_sites)
    d = int(d)
    if n < 1 or d < 2:
        raise ValueError(f"invalid white-noise shape n={n}, d={d}")
    dim = d**n
    return QuantumState.from_matrix(np.eye(dim, dtype=complex) / dim, (d,) * n)


def product_bits(bits: str) -> QuantumState:
    """Computational product state ``|b_1 ... b_n>`` from a 0/1 string."""
    bits = str(bits)
    if not bits or any(b not in "01" for b in bits):
        raise ValueError(f"bits must be a nonempty 0/1 string, got {bits!r}")
    n = len(bits)
    ket = np.zeros(2**n, dtype=complex)
    ket[int(bits, 2)] = 1.0
    return QuantumState.from_ket(ket, (2,) * n)


# --------------------------------------------------------------------
# state-expression grammar


@dataclass(frozen=True)
class StateLeaf:
    name: str
    args: tuple[tuple[str, object], ...]


@dataclass(frozen=True)
class StateMix:
    parts: tuple[tuple[str, object], ...]  # (weight expression, child node)


_IDENT = re.compile(r"[a-zA-Z_][a-zA-Z0-9_]*")
_WEIGHT_TERM = re.compile(r"([0-9]*\.?[0-9]+(?:[eE][+-]?[0-9]+)?)(?:\*([a-zA-Z]\w*))?|([a-zA-Z]\w*)")


def parse_state_spec(text: str):
    """Parse a state expression into a leaf/mix tree."""
    compact = "".join(str(text).split())
    if not compact:
        raise StateSpecError("empty state expression")
    node, pos = _parse_node(compact, 0)
    if pos != len(compact):
        raise StateSpecError(f"trailing input at position {pos}: {compact[pos:]!r}")
    return node


def _parse_node(src: str, pos: int):
    m = _IDENT.match(src, pos)
    if not m:
        raise StateSpecError(f"expected a name at position {pos} in {src!r}")
    name = m.group(0).lower()
    pos = m.end()
    if pos >= len(src) or src[pos] != "(":
        raise StateSpecError(f"expected '(' after {name!r}")
    pos += 1
    if name == "mix":
        return _parse_mix(src, pos)
    return _parse_leaf(name, src, pos)


def _parse_leaf(name: str, src: str, pos: int):
    args = []
    if pos < len(src) and src[pos] == ")":
        return StateLeaf(name=name, args=()), pos + 1
    while True:
        m = _IDENT.match(src, pos)
        if not m:
            raise StateSpecError(f"expected an argument name at position {pos}")
        key = m.group(0)
        pos = m.end()
        if pos >= len(src) or src[pos] != "=":
            raise StateSpecError(f"expected '=' after argument {key!r}")
        pos += 1
        end = pos
        while end < len(src) and src[end] not in ",)":
            end += 1
        raw = src[pos:end]
        if not raw:
            raise StateSpecError(f"missing value for argument {key!r}")
        args.append((key, raw))
        pos = end
        if pos >= len(src):
            raise StateSpecError("unterminated argument list")
        if src[pos] == ")":
            return StateLeaf(name=name, args=tuple(args)), pos + 1
        pos += 1  # skip ','


def _parse_mix(src: str, pos: int):
    parts = []
    while True:
        colon = src.find(":", pos)
        if colon < 0:
            raise StateSpecError("mixture part must look like 'weight: spec'")
        weight = src[pos:colon]
        if not weight:
            raise StateSpecError("empty mixture weight")
        child, pos = _parse_node(src, colon + 1)
        parts.append((weight, child))
        if pos >= len(src):
            raise StateSpecError("unterminated mixture")
        if src[pos] == ")":
            if not parts:
                raise StateSpecError("empty mixture")
            return StateMix(parts=tuple(parts)), pos + 1
        if src[pos] != ",":
            raise StateSpecError(f"expected ',' or ')' at position {pos}")
        pos += 1


def eval_weight(expr: str, variables: Mapping[str, float] | None = None) -> float:
    """Evaluate a linear weight expression such as ``0.3``, ``p`` or ``1-p-q``."""
    variables = variables or {}
    total = 0.0
    pos = 0
    sign = 1.0
    expr = str(expr)
    while pos < len(expr):
        ch = expr[pos]
        if ch == "+":
            sign = 1.0
            pos += 1
            continue
        if ch == "-":
            sign = -1.0
            pos += 1
            continue
        m = _WEIGHT_TERM.match(expr, pos)
        if not m or m.start() != pos:
            raise StateSpecError(f"bad weight expression {expr!r}")
        number, times_var, bare_var = m.groups()
        if bare_var is not None:
            if bare_var not in variables:
                raise StateSpecError(f"unbound variable {bare_var!r} in weight {expr!r}")
            term = float(variables[bare_var])
        else:
            term = float(number)
            if times_var is not None:
                if times_var not in variables:
                    raise StateSpecError(f"unbound variable {times_var!r} in weight {expr!r}")
                term *= float(variables[times_var])
        total += sign * term
        sign = 1.0
        pos = m.end()
    return total


def spec_variables(node) -> set[str]:
    """Names of free scan variables appearing in mixture weights."""
    out: set[str] = set()
    if isinstance(node, StateMix):
        for weight, child in node.parts:
            for m in _WEIGHT_TERM.finditer(weight):
                var = m.group(2) or m.group(3)
                if var:
                    out.add(var)
            out |= spec_variables(child)
    return out


_LEAF_ARGS = {
    "dicke": {"N", "m"},
    "ghz": {"N"},
    "ghzphase": {"N"},
    "white": {"N", "d"},
    "product": {"bits"},
}


def _build_leaf(leaf: StateLeaf) -> QuantumState:
    if leaf.name not in _LEAF_ARGS:
        raise StateSpecError(f"unknown state family {leaf.name!r}")
    args = dict(leaf.args)
    expected = _LEAF_ARGS[leaf.name]
    if set(args) != expected:
        raise StateSpecError(
            f"{leaf.name} expects arguments {sorted(expected)}, got {sorted(args)}"
        )
    try:
        if leaf.name == "dicke":
            return dicke(int(args["N"]), int(args["m"]))
        if leaf.name == "ghz":
            return ghz(int(args["N"]))
        if leaf.name == "ghzphase":
            return ghz_phase(int(args["N"]))
        if leaf.name == "white":
            return white(int(args["N"]), int(args["d"]))
        return product_bits(args["bits"])
    except StateSpecError:
        raise
    except ValueError as exc:
        raise StateSpecError(str(exc)) from exc


def evaluate_state_spec(
    spec, variables: Mapping[str, float] | None = None
) -> QuantumState:
    """Build the state described by an expression string or parsed tree."""
    node = parse_state_spec(spec) if isinstance(spec, str) else spec
    if isinstance(node, StateLeaf):
        return _build_leaf(node)
    if not isinstance(node, StateMix):
        raise StateSpecError(f"not a state expression: {node!r}")

    weights = [eval_weight(w, variables) for w, _ in node.parts]
    children = [evaluate_state_spec(child, variables) for _, child in node.parts]
    dims = children[0].dims
    for child in children[1:]:
        if child.dims != dims:
            raise StateSpecError(
                f"mixture components have different dims: {dims} vs {child.dims}"
            )
    cleaned = []
    for w in weights:
        if w < WEIGHT_FLOOR:
            raise StateSpecError(f"mixture weight {w!r} is negative")
        cleaned.append(max(w, 0.0))
    if abs(sum(cleaned) - 1.0) > WEIGHT_SUM_ATOL:
        raise StateSpecError(f"mixture weights sum to {sum(cleaned)!r}, expected 1")
    rho = sum(w * child.rho for w, child in zip(cleaned, children))
    return QuantumState.from_matrix(rho, dims)


def noisy_mix(spec, variables: Mapping[str, float] | None = None) -> QuantumState:
    """Alias of :func:`evaluate_state_spec` for mixture expressions."""
    return evaluate_state_spec(spec, variables)


def compile_family(spec, variable_names: Sequence[str]):
    """Compile a template with free weight variables into a fast family.

    Leaf states are built once; the returned callable only re-mixes their
    density matrices, e.g. ``family(p)`` or ``family(p, q)``.
    """
    node = parse_state_spec(spec) if isinstance(spec, str) else spec
    variable_names = tuple(variable_names)
    free = spec_variables(node)
    unknown = free - set(variable_names)
    if unknown:
        raise StateSpecError(f"unbound variables {sorted(unknown)} in template")

    flat: list[tuple[tuple[str, ...], QuantumState]] = []

    def _flatten(n, weight_path):
        if isinstance(n, StateLeaf):
            flat.append((weight_path, _build_leaf(n)))
            return
        for w, child in n.parts:
            _flatten(child, weight_path + (w,))

    _flatten(node, ())
    dims = flat[0][1].dims
    for _, child in flat[1:]:
        if child.dims != dims:
            raise StateSpecError("mixture components have different dims")
    rhos = [child.rho for _, child in flat]
    paths = [path for path, _ in flat]

    def family(*values: float) -> QuantumState:
        if len(values) != len(variable_names):
            raise ValueError(f"family expects {len(variable_names)} values")
        bound = dict(zip(variable_names, (float(v) for v in values)))
        weights = []
        for path in paths:
            w = 1.0
            for expr in path:
                w *= eval_weight(expr, bound)
            weights.append(w)
        for w in weights:
            if w < WEIGHT_FLOOR:
                raise StateSpecError(f"mixture weight {w!r} is negative")
        weights = [max(w, 0.0) for w in weights]
        if abs(sum(weights) - 1.0) > WEIGHT_SUM_ATOL:
            raise StateSpecError(f"mixture weights sum to {sum(weights)!r}, expected 1")
        rho = sum(w * r for w, r in zip(weights, rhos))
        return QuantumState.from_matrix(rho, dims)

    return family


# --------------------------------------------------------------------
# seeded random generators


def haar_ket(rng: np.random.Generator, dim: int) -> np.ndarray:
    """Haar-random pure state vector from normalized Gaussian amplitudes."""
    ket = rng.standard_normal(dim) + 1j * rng.standard_normal(dim)
    return ket / np.linalg.norm(ket)


def random_density(rng: np.random.Generator, dim: int, rank: int | None = None) -> QuantumState:
    """Random full- or fixed-rank mixed state ``G G^dag / Tr``."""
    rank = dim if rank is None else int(rank)
    g = rng.standard_normal((dim, rank)) + 1j * rng.standard_normal((dim, rank))
    rho = g @ g.conj().T
    rho /= np.trace(rho).real
    return QuantumState.from_matrix(rho)


def _partition_exact(rng: np.random.Generator, n: int, k: int) -> list[list[int]]:
    """Uniformly shuffled sites cut into exactly k nonempty blocks."""
    order = [int(i) for i in rng.permutation(n)]
    if k == 1:
        return [order]
    cuts = sorted(int(c) for c in rng.choice(np.arange(1, n), size=k - 1, replace=False))
    bounds = [0] + cuts + [n]
    return [order[a:b] for a, b in zip(bounds[:-1], bounds[1:])]


def _partition_max_block(rng: np.random.Generator, n: int, k: int) -> list[list[int]]:
    """Shuffled sites cut greedily into blocks of size at most k."""
    order = [int(i) for i in rng.permutation(n)]
    blocks = []
    i = 0
    while i < n:
        size = int(rng.integers(1, min(k, n - i) + 1))
        blocks.append(order[i : i + size])
        i += size
    return blocks


def _partitioned_pure_ket(
    rng: np.random.Generator, dims: Sequence[int], blocks: Sequence[Sequence[int]]
) -> np.ndarray:
    """Haar-random pure state on each block, reassembled in site order."""
    n = len(dims)
    kets = [haar_ket(rng, math.prod(dims[i] for i in block)) for block in blocks]
    full = reduce(np.kron, kets)
    perm = [site for block in blocks for site in block]
    tensor = full.reshape([dims[p] for p in perm])
    axes = [perm.index(j) for j in range(n)]
    return np.transpose(tensor, axes=axes).reshape(-1)


def _random_partitioned_mixture(rng, dims, k, terms, partitioner) -> QuantumState:
    dims = tuple(int(d) for d in dims)
    n = len(dims)
    terms = int(terms)
    if terms < 1:
        raise ValueError(f"need at least one mixture term, got {terms}")
    dim = math.prod(dims)
    rho = np.zeros((dim, dim), dtype=complex)
    weights = rng.dirichlet(np.ones(terms))
    for w in weights:
        ket = _partitioned_pure_ket(rng, dims, partitioner(rng, n, k))
        rho += w * np.outer(ket, ket.conj())
    return QuantumState.from_matrix(rho, dims)


def random_k_separable(
    n_sites: int, dims: Sequence[int], k: int, terms: int = 4, seed: int = 0
) -> QuantumState:
    """Convex mixture of pure states, each factoring across exactly k blocks."""
    dims = tuple(int(d) for d in dims)
    n = int(n_sites)
    if n != len(dims):
        raise ValueError(f"n_sites {n} does not match dims {dims}")
    if not 2 <= int(k) <= n:
        raise ValueError(f"separable generator needs 2 <= k <= {n}, got {k}")
    rng = np.random.default_rng(seed)
    return _random_partitioned_mixture(rng, dims, int(k), terms, _partition_exact)


def random_k_producible(
    n_sites: int, dims: Sequence[int], k: int, terms: int = 4, seed: int = 0
) -> QuantumState:
    """Convex mixture of pure states whose factors involve at most k sites."""
    dims = tuple(int(d) for d in dims)
    n = int(n_sites)
    if n != len(dims):
        raise ValueError(f"n_sites {n} does not match dims {dims}")
    if not 1 <= int(k) <= n - 1:
        raise ValueError(f"producible generator needs 1 <= k <= {n - 1}, got {k}")
    rng = np.random.default_rng(seed)
    return _random_partitioned_mixture(rng, dims, int(k), terms, _partition_max_block)
