"""Command-line interface: ``bures-geom <command> [options]``.

Exit codes: 0 success, 1 verification failure, 2 usage or domain error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from dataclasses import dataclass, field
from fractions import Fraction

from . import measures as ms
from . import metrics, verify
from .exact import ExactValue
from .montecarlo import MCConfig, default_workers, sample_state
from .states import load_state, uhlmann_embed

EXIT_OK, EXIT_FAILED, EXIT_USAGE = 0, 1, 2

DISTANCES = {
    "trace": metrics.trace_distance,
    "hs": metrics.hs_distance,
    "bures": metrics.bures_distance,
    "angle": metrics.bures_angle,
    "fs": metrics.fubini_study,
}


def format_float(x: float) -> str:
    """Shortest round-trip representation; integral values print without '.0'."""
    x = float(x)
    if x.is_integer() and abs(x) < 1e16:
        return str(int(x))
    return repr(x)


@dataclass
class OutputRecord:
    command: str
    params: dict
    exact: str | None = None
    value: float | None = None
    std_error: float | None = None
    seed: int | None = None
    extra: dict = field(default_factory=dict)

    @classmethod
    def from_exact(cls, command: str, params: dict, v: ExactValue) -> "OutputRecord":
        return cls(command, params, exact=v.to_string() if v.is_exact else None, value=float(v))

    def as_dict(self) -> dict:
        out = {"command": self.command, **self.params}
        for key in ("exact", "value", "std_error", "seed"):
            val = getattr(self, key)
            if val is not None:
                out[key] = val
        out.update(self.extra)
        return out

    def render(self, fmt: str, exact: bool = False) -> str:
        if fmt == "json":
            return json.dumps(self.as_dict())
        if fmt == "csv":
            row = {k: (format_float(v) if isinstance(v, float) else v) for k, v in self.as_dict().items()}
            return _csv([row])
        if exact and self.exact is not None:
            return self.exact
        if self.value is not None:
            return format_float(self.value)
        return " ".join(format_float(v) for v in self.extra.values())


def _csv(rows: list[dict]) -> str:
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=list(rows[0]), lineterminator="\n")
    writer.writeheader()
    writer.writerows(rows)
    return buf.getvalue().rstrip("\n")


def _number(text: str) -> Fraction:
    """Parse '2', '1.5' or '3/2' exactly."""
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a number: {text!r}")


def _plain(x: Fraction) -> int | float:
    return int(x) if x.denominator == 1 else float(x)


def cmd_constants(args) -> int:
    params = ms.EnsembleParams(args.n, args.alpha, args.beta)
    v = ms.generalized_constant(params)
    rec = OutputRecord.from_exact("constants", {"n": args.n, "alpha": _plain(args.alpha), "beta": _plain(args.beta)}, v)
    print(rec.render(args.format, args.exact))
    return EXIT_OK


def _volume_row(n: int, k: int, beta: Fraction) -> dict:
    v = ms.submanifold_volume(n, k, beta)
    d = ms.dim_submanifold(n, k, beta)
    return {"N": n, "k": k, "d_k": str(d), "exact": v.to_string() if v.is_exact else "", "float": format_float(float(v))}


def cmd_volume(args) -> int:
    if args.table_max is not None:
        if args.table_max < 1:
            raise ms.DomainError("--table-max must be >= 1")
        ms._check_beta(args.beta, False)
        rows = [_volume_row(n, k, args.beta) for n in range(1, args.table_max + 1) for k in range(n)]
        if args.format == "json":
            print(json.dumps(rows))
        else:
            print(_csv(rows))
        return EXIT_OK
    if args.n is None:
        raise ms.DomainError("volume needs --n or --table-max")
    v = ms.submanifold_volume(args.n, args.rank_defect, args.beta)
    params = {"n": args.n, "beta": _plain(args.beta), "rank_defect": args.rank_defect}
    print(OutputRecord.from_exact("volume", params, v).render(args.format, args.exact))
    return EXIT_OK


def cmd_distance(args) -> int:
    a, b = load_state(args.a), load_state(args.b)
    value = DISTANCES[args.metric](a, b)
    rec = OutputRecord("distance", {"metric": args.metric}, value=value)
    print(rec.render(args.format))
    return EXIT_OK


def cmd_sample(args) -> int:
    if args.count < 1:
        raise ms.DomainError("--count must be >= 1")
    ms._check_beta(args.beta, False)
    cfg = MCConfig(samples=args.count, seed=args.seed, workers=args.workers)
    result = sample_state(args.n, int(args.beta), cfg)
    with open(args.out, "w") as fh:
        for rho in result.states:
            fh.write(json.dumps(rho.to_json()) + "\n")
    manifest = {
        "seed": args.seed,
        "n": args.n,
        "beta": int(args.beta),
        "count": args.count,
        "acceptance_rate": result.chain.acceptance_rate,
        "gelman_rubin": result.chain.gelman_rubin,
    }
    with open(f"{args.out}.manifest.json", "w") as fh:
        json.dump(manifest, fh, indent=2)
    rec = OutputRecord("sample", {"n": args.n, "beta": int(args.beta), "count": args.count, "out": args.out}, seed=args.seed,
                       extra={"acceptance_rate": manifest["acceptance_rate"], "gelman_rubin": manifest["gelman_rubin"]})
    if args.format == "text":
        print(f"wrote {args.count} states to {args.out} (acceptance {manifest['acceptance_rate']:.3f}, "
              f"R-hat {manifest['gelman_rubin']:.4f})")
    else:
        print(rec.render(args.format))
    return EXIT_OK


def cmd_verify(args) -> int:
    checks = verify.run(args.test, args.n, int(args.beta), args.samples, args.seed)
    ok = all(c.passed for c in checks)
    if args.format == "json":
        print(json.dumps({"test": args.test, "passed": ok, "checks": [c.__dict__ for c in checks]}))
    elif args.format == "csv":
        print(_csv([{"name": c.name, "band": c.band, "observed": format_float(c.observed), "passed": c.passed} for c in checks]))
    else:
        for c in checks:
            print(c.line())
        print(f"{args.test}: {'all checks passed' if ok else 'FAILED'}")
    return EXIT_OK if ok else EXIT_FAILED


def cmd_embed(args) -> int:
    p = uhlmann_embed(load_state(args.state))
    rec = OutputRecord("embed", {}, extra=p._asdict())
    print(rec.render(args.format))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("text", "json", "csv"), default="text")

    parser = argparse.ArgumentParser(prog="bures-geom", description="Bures geometry of mixed quantum states.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("constants", parents=[common], help="normalization constant C_N(alpha, beta)")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--alpha", type=_number, default=Fraction(1))
    p.add_argument("--beta", type=_number, default=Fraction(2))
    p.add_argument("--exact", action="store_true", help="print the exact form when available")
    p.set_defaults(func=cmd_constants)

    p = sub.add_parser("volume", parents=[common], help="Bures volume of the states of rank N-k")
    p.add_argument("--n", type=int)
    p.add_argument("--beta", type=_number, default=Fraction(2))
    p.add_argument("--rank-defect", type=int, default=0)
    p.add_argument("--table-max", type=int, help="emit a table for all 0 <= k < N <= M")
    p.add_argument("--exact", action="store_true")
    p.set_defaults(func=cmd_volume)

    p = sub.add_parser("distance", parents=[common], help="distance between two state files")
    p.add_argument("--metric", choices=tuple(DISTANCES), required=True)
    p.add_argument("--a", required=True)
    p.add_argument("--b", required=True)
    p.set_defaults(func=cmd_distance)

    p = sub.add_parser("sample", parents=[common], help="draw states from the Bures measure")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--beta", type=_number, default=Fraction(2))
    p.add_argument("--count", type=int, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True)
    p.add_argument("--workers", type=int, default=None)
    p.set_defaults(func=cmd_sample)

    p = sub.add_parser("verify", parents=[common], help="run a verification suite")
    p.add_argument("--test", choices=verify.TESTS, required=True)
    p.add_argument("--n", type=int, default=2)
    p.add_argument("--beta", type=_number, default=Fraction(2))
    p.add_argument("--samples", type=int)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("embed", parents=[common], help="Uhlmann hemisphere coordinates of a qubit")
    p.add_argument("--state", required=True)
    p.set_defaults(func=cmd_embed)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    if getattr(args, "workers", 0) is None:
        args.workers = default_workers()
    try:
        return args.func(args)
    except (ValueError, OSError, KeyError) as exc:
        # ValidationError, DomainError and JSON decode errors are all ValueErrors
        print(f"bures-geom: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
