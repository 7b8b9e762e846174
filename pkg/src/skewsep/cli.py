"""Command-line interface.

Exit codes: 0 success; 1 when ``detect --expect-violation`` finds no
violation; 2 usage error (bad flags, malformed state expression); 3
numerical validation failure.
"""

from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from .criteria import Mode, prop1_evaluate, prop2_evaluate, sig12
from .matrices import ValidationError
from .observables import aligned_padded_basis, collective_pauli_spec, gellmann_basis
from .scan import (
    DEFAULT_REGION_CONFIGS,
    DICKE_NOISE_TEMPLATE,
    GHZ_NOISE_TEMPLATE,
    CriterionConfig,
    family_threshold,
    parse_config,
    region_scan,
    region_to_csv,
    table_producible,
    table_separable,
)
from .selftest import DEFAULT_SEED, run_selftest
from .states import StateSpecError, evaluate_state_spec
from .skew import validate_order


def _emit(text: str, out_path: str | None) -> None:
    if out_path:
        with open(out_path, "w", newline="") as handle:
            handle.write(text)
    else:
        sys.stdout.write(text if text.endswith("\n") else text + "\n")


def _parse_weights(text: str) -> tuple[float, ...]:
    try:
        weights = tuple(float(x) for x in text.split(","))
    except ValueError as exc:
        raise ValueError(f"bad --weights value {text!r}") from exc
    if len(weights) != 3:
        raise ValueError("--weights expects three comma-separated numbers")
    return weights


def _add_common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--s", type=float, default=float("-inf"),
                        help="order parameter, a float <= 0 or -inf (default: -inf)")
    parser.add_argument("--k", type=int, default=2, help="partition parameter k")
    parser.add_argument("--mode", choices=[m.value for m in Mode], default="separable")
    parser.add_argument("--criterion", choices=["prop1", "prop2"], default="prop1")
    parser.add_argument("--out", default=None, help="write output to this path")


def _cmd_detect(args) -> int:
    validate_order(args.s)
    state = evaluate_state_spec(args.state)
    mode = Mode(args.mode)
    if args.criterion == "prop1":
        report = prop1_evaluate(state, args.s, mode, args.k, state_spec=args.state)
    else:
        if any(d != 2 for d in state.dims):
            raise ValueError("prop2 via the CLI uses Pauli observables and needs qubit sites")
        spec = collective_pauli_spec(state.n_sites, _parse_weights(args.weights))
        report = prop2_evaluate(state, spec, args.s, mode, args.k, state_spec=args.state)
    _emit(report.to_json(), args.out)
    if args.expect_violation and not report.violated:
        return 1
    return 0


def _cmd_scan(args) -> int:
    validate_order(args.s)
    config = CriterionConfig(args.criterion, Mode(args.mode), args.k)
    result = family_threshold(
        config, template=args.state, s=args.s,
        coarse_step=args.coarse_step, tol=args.tol,
        pauli_weights=_parse_weights(args.weights),
    )
    _emit(result.to_json(), args.out)
    return 0


def _cmd_region(args) -> int:
    validate_order(args.s)
    configs = (
        DEFAULT_REGION_CONFIGS
        if args.configs is None
        else tuple(parse_config(c) for c in args.configs.split(","))
    )
    grid = region_scan(step=args.step, configs=configs, s=args.s, template=args.state)
    _emit(region_to_csv(grid), args.out)
    return 0


def _cmd_table(args, builder) -> int:
    rows = builder(
        flag_tol=args.tol, coarse_step=args.coarse_step, tol=args.bisect_tol
    )
    if args.format == "json":
        text = json.dumps({"rows": [r.to_dict() for r in rows]}, indent=2)
    else:
        lines = ["k,mode,computed,reference,alt_reference,abs_diff,flagged"]
        for r in rows:
            d = r.to_dict()
            computed = "" if d["computed"] is None else f"{d['computed']:.12g}"
            diff = "" if d["abs_diff"] is None else f"{d['abs_diff']:.12g}"
            lines.append(
                f"{d['k']},{d['mode']},{computed},{d['reference']:.12g},"
                f"{d['alt_reference']:.12g},{diff},{int(d['flagged'])}"
            )
        text = "\n".join(lines) + "\n"
    _emit(text, args.out)
    for r in rows:
        if r.flagged:
            computed = "n/a" if r.computed is None else sig12(r.computed)
            print(
                f"note: k={r.k} ({r.mode.value}) computed {computed} "
                f"differs from stored reference {r.reference}",
                file=sys.stderr,
            )
    return 0


def _cmd_bases(args) -> int:
    d = args.dim
    pad = args.pad if args.pad is not None else d
    basis = gellmann_basis(d)
    gram = np.array([[np.trace(a @ b).real for b in basis] for a in basis])
    ortho_defect = float(np.abs(gram - np.eye(d * d)).max())
    fam = aligned_padded_basis(d, pad).operators
    square_defect = float(np.abs(sum(h @ h for h in fam) - d * np.eye(d)).max())
    cross = sum(np.kron(a, b) for a, b in zip(fam, fam))
    cross_top = float(np.linalg.eigvalsh(cross)[-1])
    payload = {
        "dim": d,
        "pad": pad,
        "member_count": pad * pad,
        "native_count": d * d,
        "orthonormality_defect": sig12(ortho_defect),
        "square_sum_defect": sig12(square_defect),
        "cross_top_eigenvalue": sig12(cross_top),
    }
    ok = ortho_defect <= 1e-12 and square_defect <= 1e-12 and cross_top <= 1.0 + 1e-12
    payload["check"] = "pass" if ok else "fail"
    _emit(json.dumps(payload, indent=2), args.out)
    if args.check and not ok:
        return 3
    return 0


def _cmd_selftest(args) -> int:
    ok = run_selftest(seed=args.seed, fuzz_count=args.fuzz, quick=args.quick)
    return 0 if ok else 3


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="skewsep",
        description="Detect k-nonseparability and k-partite entanglement of "
        "small multipartite states via skew-information criteria.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("detect", help="evaluate one criterion on one state")
    p.add_argument("--state", required=True, help="state expression, e.g. "
                   '"mix(0.8: dicke(N=6,m=3), 0.2: white(N=6,d=2))"')
    _add_common(p)
    p.add_argument("--weights", default="0,0,1",
                   help="prop2 per-site Pauli weights cx,cy,cz (default 0,0,1)")
    p.add_argument("--expect-violation", action="store_true",
                   help="exit 1 if the criterion is not violated")
    p.set_defaults(func=_cmd_detect)

    p = sub.add_parser("scan", help="locate a 1-D violation threshold")
    p.add_argument("--state", default=DICKE_NOISE_TEMPLATE,
                   help="family template with free variable p")
    _add_common(p)
    p.add_argument("--weights", default="0,0,1")
    p.add_argument("--coarse-step", type=float, default=1e-3)
    p.add_argument("--tol", type=float, default=1e-6)
    p.set_defaults(func=_cmd_scan)

    p = sub.add_parser("region", help="2-D detection-region grid as CSV")
    p.add_argument("--state", default=GHZ_NOISE_TEMPLATE,
                   help="family template with free variables p and q")
    p.add_argument("--step", type=float, default=0.01)
    p.add_argument("--s", type=float, default=float("-inf"))
    p.add_argument("--configs", default=None,
                   help="comma list like prop2:separable:3,prop2:producible:2")
    p.add_argument("--out", default=None)
    p.set_defaults(func=_cmd_region)

    p = sub.add_parser("table1", help="k-nonseparability thresholds vs stored reference")
    p.add_argument("--tol", type=float, default=5e-4, help="reference comparison tolerance")
    p.add_argument("--coarse-step", type=float, default=1e-3)
    p.add_argument("--bisect-tol", type=float, default=1e-6)
    p.add_argument("--format", choices=["json", "csv"], default="json")
    p.add_argument("--out", default=None)
    p.set_defaults(func=lambda args: _cmd_table(args, table_separable))

    p = sub.add_parser("table2", help="k-partite-entanglement thresholds vs stored reference")
    p.add_argument("--tol", type=float, default=5e-4)
    p.add_argument("--coarse-step", type=float, default=1e-3)
    p.add_argument("--bisect-tol", type=float, default=1e-6)
    p.add_argument("--format", choices=["json", "csv"], default="json")
    p.add_argument("--out", default=None)
    p.set_defaults(func=lambda args: _cmd_table(args, table_producible))

    p = sub.add_parser("bases", help="inspect and check a local observable basis")
    p.add_argument("--dim", type=int, required=True)
    p.add_argument("--pad", type=int, default=None,
                   help="pad the family to this larger dimension")
    p.add_argument("--check", action="store_true", help="exit nonzero on defects")
    p.add_argument("--out", default=None)
    p.set_defaults(func=_cmd_bases)

    p = sub.add_parser("selftest", help="run the full invariant suite")
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)
    p.add_argument("--fuzz", type=int, default=1000, help="random states per soundness mode")
    p.add_argument("--quick", action="store_true", help="reduced counts")
    p.set_defaults(func=_cmd_selftest)

    return parser


def _fold_order_flag(argv: list[str]) -> list[str]:
    """Rewrite ``--s -inf`` to ``--s=-inf``; argparse reads ``-inf`` as a flag."""
    out = []
    i = 0
    while i < len(argv):
        if argv[i] == "--s" and i + 1 < len(argv):
            out.append(f"--s={argv[i + 1]}")
            i += 2
        else:
            out.append(argv[i])
            i += 1
    return out


def main(argv=None) -> int:
    parser = build_parser()
    if argv is None:
        argv = sys.argv[1:]
    try:
        args = parser.parse_args(_fold_order_flag(list(argv)))
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except StateSpecError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except ValidationError as exc:
        print(f"validation error: {exc}", file=sys.stderr)
        return 3
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


cli_main = main


if __name__ == "__main__":
    raise SystemExit(main())
