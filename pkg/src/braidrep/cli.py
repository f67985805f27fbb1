"""Command-line entry point: ``braidrep check-elliptic | check-degeneration | export``.

Exit codes: 0 when every check has its expected outcome, 1 on any failure,
2 on usage errors.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from pathlib import Path

from . import elliptic, rea, slnjets
from .blocks import BlockOp
from .linalg import SparseMat, evaluate
from .storage import atomic_write
from .uqsl2 import ribbon_scalar, spow

CONVENTIONS = {
    "coproduct": "Delta(E) = E(x)1 + K(x)E, Delta(F) = F(x)K^-1 + 1(x)F, Delta(K) = K(x)K",
    "R_matrix": "s^(H(x)H) sum_n s^(n(n-1)) (s^2-s^-2)^n/[n]! F^n (x) E^n, q = s^2",
    "braiding": "sigma = tau o R",
    "ribbon": "theta_m = s^(m(m+2)) on V_m",
    "layer_storage": "V_m* (x) V_m, f-slot major",
    "product": "mu_F o R_13 R_23 (cocycle twist of matrix-coefficient product)",
    "Y_1": "double braiding of slot 1 with the adjacent f-slot of the algebra",
    "sl_N_R_rescaling": "sigma = u^-1 Rhat, Hecke roots u^(N-1), -u^(-N-1), t = u^N",
    "DAHA_parameters": "(q_D, t_D) = (s, s^2)",
}


# ---------------------------------------------------------------------------
# Output helpers


def dump_json(obj) -> str:
    return json.dumps(obj, indent=1, sort_keys=True) + "\n"


def block_op_json(op: BlockOp, name: str) -> dict:
    return {
        "name": name,
        "K": op.K,
        "x_degree": op.degree,
        "window": op.window,
        "blocks": {f"{mo},{mi}": op.blocks[(mo, mi)].to_json_obj() for mo, mi in sorted(op.blocks)},
    }


def _eval_block_op(op: BlockOp, point: Fraction) -> BlockOp:
    return BlockOp(op.K, {k: evaluate(v, point) for k, v in op.blocks.items()}, op.degree, op.window)


def _basis_json(W: elliptic.InvariantBasis) -> dict:
    layers = {}
    for m in range(W.K + 1):
        vecs = W.vectors.get(m, [])
        if vecs:
            layers[str(m)] = SparseMat.from_columns(vecs, elliptic.ambient_dim(W.n, m)).to_json_obj()
    return {"n": W.n, "K": W.K, "dim": W.dim, "layer_sizes": list(W.layer_sizes), "layers": layers}


def _format_report(title: str, results, extra: dict) -> tuple[str, dict]:
    lines = [title, "conventions:"]
    lines += [f"  {k}: {v}" for k, v in sorted(CONVENTIONS.items())]
    for k, v in extra.items():
        lines.append(f"{k}: {v}")
    lines += [r.line() for r in results]
    ok = all(r.ok for r in results)
    lines.append("RESULT: " + ("ALL PASS" if ok else "FAILURES"))
    obj = {"title": title, "conventions": CONVENTIONS, "measured": {k: str(v) for k, v in extra.items()},
           "checks": [r.to_json_obj() for r in results], "ok": ok}
    return "\n".join(lines) + "\n", obj


def _emit(args, stem: str, text: str, obj: dict) -> None:
    sys.stdout.write(text)
    if args.out:
        out = Path(args.out)
        atomic_write(out / f"{stem}.txt", text)
        atomic_write(out / f"{stem}.json", dump_json(obj))


def _parse_eval(text: str | None):
    if text is None:
        return None
    var, _, val = text.partition("=")
    if var.strip() != "s" or not val:
        raise argparse.ArgumentTypeError("--eval expects s=<rational>")
    return Fraction(val.strip())


# ---------------------------------------------------------------------------
# Commands


def export_operators(n: int, K: int, out: Path, point=None) -> list[Path]:
    """Write the invariant basis and every T_i, X_i, X_i^-1, Y_i on W."""
    ops = elliptic.EllipticOperators(n, K)
    written = []

    def put(name: str, text: str):
        path = out / name
        atomic_write(path, text)
        written.append(path)

    put(f"basis_n{n}_K{K}.json", dump_json(_basis_json(ops.W)))
    if ops.W.dim == 0:
        return written
    tag = None if point is None else str(point).replace("/", "over")
    named = {}
    for i in range(1, n):
        named[f"T{i}"] = ops.T(i)
    for i in range(1, n + 1):
        named[f"X{i}"] = ops.X(i)
        named[f"X{i}_inv"] = ops.X_inv(i)
        named[f"Y{i}"] = ops.Y(i)
    for name, op in named.items():
        put(f"{name}_n{n}_K{K}.json", dump_json(block_op_json(op, name)))
        if point is not None:
            put(f"{name}_n{n}_K{K}_s={tag}.json", dump_json(block_op_json(_eval_block_op(op, point), name)))
    return written


def cmd_check_elliptic(args) -> int:
    n, K = args.n, args.K
    results = list(elliptic.check_elliptic(n, K, mode=args.mode))
    extra = {}
    if n % 2 == 0:
        sc = elliptic.check_scalars(n, K, mode=args.mode)
        results += sc.results
        if sc.c_V is not None:
            extra["c_V (Ytilde = c_V^n)"] = sc.c_V
            extra["theta_1"] = ribbon_scalar(1)
        results += elliptic.check_daha(n, K, mode=args.mode)
        results += elliptic.check_daha(n, K, spow(1), spow(4), mode=args.mode, expect_fail=True)
        extra["W layer sizes"] = list(elliptic.invariants(n, K).layer_sizes)
    text, obj = _format_report(f"elliptic relations n={n} K={K} mode={args.mode}", results, extra)
    _emit(args, f"elliptic_n{n}_K{K}", text, obj)
    if args.export:
        if not args.out:
            raise SystemExit("--export needs --out")
        export_operators(n, K, Path(args.out), _parse_eval(args.eval))
    return 0 if obj["ok"] else 1


def cmd_check_degeneration(args) -> int:
    k = None if args.k is None else Fraction(args.k)
    rep = slnjets.check_degeneration(args.N, args.n, k, args.jet_order)
    extra = dict(rep.constants)
    extra["reference k"] = "k" if k is None else k
    text, obj = _format_report(f"degeneration N={args.N} n={args.n} k={extra['reference k']} "
                               f"jet order {args.jet_order}", rep.results, extra)
    _emit(args, f"degeneration_N{args.N}_n{args.n}", text, obj)
    return 0 if obj["ok"] else 1


def cmd_export(args) -> int:
    if not args.out:
        raise SystemExit("export needs --out")
    paths = export_operators(args.n, args.K, Path(args.out), _parse_eval(args.eval))
    for p in paths:
        print(p)
    return 0


# ---------------------------------------------------------------------------
# Parser


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="braidrep", description="Elliptic braid group and DAHA checks over Q(s).")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("--out", help="directory for report and export files")
        sp.add_argument("--mode", choices=["exact", "probabilistic-then-exact"], default="exact")

    e = sub.add_parser("check-elliptic", help="elliptic braid relations, scalar identities, DAHA quotient")
    e.add_argument("--n", type=int, default=2)
    e.add_argument("--K", type=int, default=4)
    e.add_argument("--export", action="store_true", help="also write every operator matrix")
    e.add_argument("--eval", help="with --export, also write matrices evaluated at s=<rational>")
    common(e)
    e.set_defaults(func=cmd_check_elliptic)

    d = sub.add_parser("check-degeneration", help="sl_N Hecke relation and the h -> 0 degeneration")
    d.add_argument("--N", type=int, default=2)
    d.add_argument("--n", type=int, default=2)
    d.add_argument("--k", help="rational value of k (default: symbolic)")
    d.add_argument("--jet-order", type=int, default=3)
    common(d)
    d.set_defaults(func=cmd_check_degeneration)

    x = sub.add_parser("export", help="write the invariant basis and operator matrices as JSON")
    x.add_argument("--n", type=int, default=2)
    x.add_argument("--K", type=int, default=2)
    x.add_argument("--eval", help="also write matrices evaluated at s=<rational>")
    common(x)
    x.set_defaults(func=cmd_export)
    return p


def validate(parser: argparse.ArgumentParser, args) -> None:
    if getattr(args, "n", 1) < 1:
        parser.error("--n must be >= 1")
    if getattr(args, "K", 0) < 0:
        parser.error("--K must be >= 0")
    if args.command == "check-degeneration":
        if args.N < 2:
            parser.error("--N must be >= 2")
        if args.jet_order < 2:
            parser.error("--jet-order must be >= 2")
        if args.k is not None:
            try:
                Fraction(args.k)
            except ValueError:
                parser.error("--k must be a rational number")
    if getattr(args, "eval", None) is not None:
        try:
            _parse_eval(args.eval)
        except (argparse.ArgumentTypeError, ValueError, ZeroDivisionError):
            parser.error("--eval expects s=<rational>")


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    validate(parser, args)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
