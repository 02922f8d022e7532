"""Command-line front end.

Exit codes: 0 success, 1 failed verification, 2 domain/precondition or cost
error, 3 precision exhaustion, 64 usage error. Reports go to stdout as text
(default), JSON (--json), or CSV (--csv); diagnostics go to stderr.

Configuration: a key=value file at $XDG_CONFIG_HOME/pschen/config (default
~/.config/pschen/config) supplies defaults; the PSCHEN_CACHE environment
variable overrides the configured cache_dir; the --cache-dir flag overrides
both. Recognized keys: cache_dir, default_tol, base_precision,
max_precision, escalation_factor, output.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
import time
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

from . import __version__, acceptance
from .arith import heath_brown_max_residual, spf_table, twin_singular_series
from .chen_bracket import chen_bracket
from .errors import (
    ConvergenceError,
    CostError,
    DomainError,
    PrecisionExhaustionError,
)
from .exponent_pairs import eph_pair, iterate_a
from .levels import PAIR_PRESETS, LevelQuery, solve_level
from .ps_empirical import (
    PSContext,
    bv_discrepancy,
    chen_counts,
    chen_thresholds,
    count_near_diagonal,
    exp_sum_progression,
    lemma_bound,
    pi_gamma,
)
from .sieve_functions import big_f, small_f

_OUTPUT_FORMATS = ("text", "json", "csv")


@dataclass
class RunConfig:
    """Effective configuration for one CLI invocation."""

    cache_dir: Path
    default_tol: float = 1e-9
    base_precision: int = 96
    max_precision: int = 4096
    escalation_factor: int = 4
    output: str = "text"

    def __post_init__(self):
        self.cache_dir = Path(self.cache_dir)
        if not 0 < self.default_tol <= 1e-3:
            raise DomainError(
                f"default_tol must lie in (0, 1e-3], got {self.default_tol}"
            )
        if self.output not in _OUTPUT_FORMATS:
            raise DomainError(f"output must be one of {_OUTPUT_FORMATS}")

    def ps_context(self, gamma: Fraction) -> PSContext:
        return PSContext(
            gamma,
            base_precision=self.base_precision,
            max_precision=self.max_precision,
            escalation_factor=self.escalation_factor,
        )


def _config_path() -> Path:
    base = os.environ.get("XDG_CONFIG_HOME")
    root = Path(base) if base else Path.home() / ".config"
    return root / "pschen" / "config"


def load_run_config() -> RunConfig:
    """Config file, overridden by PSCHEN_CACHE, overridden later by flags."""
    raw: dict[str, str] = {}
    path = _config_path()
    if path.is_file():
        for lineno, line in enumerate(path.read_text().splitlines(), start=1):
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            key, sep, value = line.partition("=")
            if not sep:
                raise DomainError(f"{path}:{lineno}: expected key=value, got {line!r}")
            raw[key.strip()] = value.strip()
    unknown = set(raw) - {
        "cache_dir",
        "default_tol",
        "base_precision",
        "max_precision",
        "escalation_factor",
        "output",
    }
    if unknown:
        raise DomainError(f"{path}: unknown config keys {sorted(unknown)}")
    cache_dir = os.environ.get("PSCHEN_CACHE") or raw.get("cache_dir")
    if cache_dir is None:
        cache_dir = Path.home() / ".cache" / "pschen"
    try:
        return RunConfig(
            cache_dir=Path(cache_dir),
            default_tol=float(raw.get("default_tol", 1e-9)),
            base_precision=int(raw.get("base_precision", 96)),
            max_precision=int(raw.get("max_precision", 4096)),
            escalation_factor=int(raw.get("escalation_factor", 4)),
            output=raw.get("output", "text"),
        )
    except ValueError as exc:
        raise DomainError(f"{path}: {exc}") from exc


@dataclass
class Report:
    """What a subcommand produced, before formatting."""

    command: str
    inputs: dict
    results: dict
    rows: list[dict] | None = None
    text: list[str] = field(default_factory=list)
    csv_exclude: tuple[str, ...] = ()
    exit_code: int = 0


def _fraction(text: str, name: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise DomainError(f"{name} must be a rational number, got {text!r}") from exc


def _pair_preset(name: str):
    try:
        return PAIR_PRESETS[name]
    except KeyError:
        raise DomainError(
            f"unknown exponent-pair preset {name!r}; choose from "
            f"{sorted(PAIR_PRESETS)}"
        ) from None


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # usage errors exit 64, not argparse's 2
        self.print_usage(sys.stderr)
        sys.stderr.write(f"{self.prog}: error: {message}\n")
        raise SystemExit(64)


def _cmd_pairs(args, cfg: RunConfig) -> Report:
    if args.eph is not None:
        pair = eph_pair(_fraction(args.eph, "--eph"))
        inputs = {"preset": "eph", "epsilon": args.eph}
    else:
        pair = iterate_a(args.iterate)
        inputs = {"iterate": args.iterate}
    results = {
        "kappa": str(pair.kappa),
        "ell": str(pair.ell),
        "kappa_decimal": float(pair.kappa),
        "ell_decimal": float(pair.ell),
    }
    text = [
        f"{pair.kappa} {pair.ell}",
        f"decimal: {float(pair.kappa):.12g} {float(pair.ell):.12g}",
    ]
    return Report("pairs", inputs, results, text=text)


def _cmd_level(args, cfg: RunConfig) -> Report:
    gamma = _fraction(args.gamma, "--gamma")
    eta = _fraction(args.eta, "--eta")
    epsilon = _fraction(args.epsilon, "--epsilon")
    names = args.pairs.split(",")
    if len(names) == 1:
        names = names * 2
    if len(names) != 2:
        raise DomainError(f"--pairs takes one or two preset names, got {args.pairs!r}")
    query = LevelQuery(
        gamma=gamma,
        eta=eta,
        epsilon=epsilon,
        pair_typeI=_pair_preset(names[0]),
        pair_typeII=_pair_preset(names[1]),
    )
    res = solve_level(query)
    inputs = {
        "gamma": str(gamma),
        "eta": str(eta),
        "epsilon": str(epsilon),
        "pair_typeI": names[0],
        "pair_typeII": names[1],
    }
    results = {
        "xi": res.xi,
        "binding_constraint": res.binding_constraint,
        "feasible": res.feasible,
    }
    return Report("level", inputs, results)


def _cmd_sievefn(args, cfg: RunConfig) -> Report:
    tol = args.tol if args.tol is not None else cfg.default_tol
    fn = big_f if args.kind == "F" else small_f
    val = fn(args.s, tol)
    inputs = {"kind": args.kind, "s": args.s, "tol": tol}
    results = {
        "value": val.value,
        "branch": val.branch,
        "quad_error": val.quad_error,
    }
    return Report("sievefn", inputs, results)


def _cmd_bracket(args, cfg: RunConfig) -> Report:
    tol = args.tol if args.tol is not None else cfg.default_tol
    br = chen_bracket(args.xi, tol)
    inputs = {"xi": args.xi, "tol": tol}
    results = {
        "term_S": br.term_S,
        "term_S1": br.term_S1,
        "term_S2": br.term_S2,
        "term_S3": br.term_S3,
        "total": br.total,
        "quad_error": br.quad_error,
    }
    return Report("bracket", inputs, results)


def _cmd_ps_count(args, cfg: RunConfig) -> Report:
    gamma = _fraction(args.gamma, "--gamma")
    ctx = cfg.ps_context(gamma)
    count, asym = pi_gamma(args.x, ctx)
    inputs = {"x": args.x, "gamma": str(gamma)}
    results = {"count": count, "asymptotic": asym, "ratio": count / asym}
    return Report("ps-count", inputs, results)


def _cmd_bv(args, cfg: RunConfig) -> Report:
    gamma = _fraction(args.gamma, "--gamma")
    ctx = cfg.ps_context(gamma)
    rep = bv_discrepancy(args.x, gamma, args.D, args.l, args.A, ctx=ctx)
    rows = [
        {
            "d": int(r.d),
            "count": int(r.count),
            "expected": float(r.expected),
            "abs_dev": float(r.abs_dev),
        }
        for r in rep.rows
    ]
    inputs = {"x": args.x, "gamma": str(gamma), "D": args.D, "l": args.l, "A": args.A}
    results = {
        "total_abs_dev": rep.total_abs_dev,
        "normalized": rep.normalized,
    }
    return Report("bv", inputs, results, rows=rows)


def _cmd_chen_weights(args, cfg: RunConfig) -> Report:
    gamma = _fraction(args.gamma, "--gamma")
    ctx = cfg.ps_context(gamma)
    cache = args.cache_dir if args.cache_dir is not None else cfg.cache_dir
    table = spf_table(args.x, cache)
    counts = chen_counts(args.x, gamma, ctx=ctx, table=table)
    z1, z2 = chen_thresholds(args.x, ctx=ctx)
    inputs = {"x": args.x, "gamma": str(gamma)}
    results = {
        "z1": z1,
        "z2": z2,
        "S": counts.S,
        "S1": counts.S1,
        "S2": counts.S2,
        "S3": counts.S3,
        "weighted": counts.weighted,
    }
    return Report("chen-weights", inputs, results)


def _cmd_expsum(args, cfg: RunConfig) -> Report:
    gamma = _fraction(args.gamma, "--gamma")
    pair = _pair_preset(args.pair)
    magnitude, n_terms = exp_sum_progression(
        args.X, args.X1, args.d, args.l, args.h, gamma, term_cap=args.term_cap
    )
    bound = lemma_bound(args.X, args.d, args.h, gamma, pair)
    inputs = {
        "X": args.X,
        "X1": args.X1,
        "d": args.d,
        "l": args.l,
        "h": args.h,
        "gamma": str(gamma),
        "pair": args.pair,
        "term_cap": args.term_cap,
    }
    results = {
        "magnitude": magnitude,
        "n_terms": n_terms,
        "lemma_bound": bound,
        "ratio": magnitude / bound if bound > 0 else float("inf"),
    }
    return Report("expsum", inputs, results)


def _cmd_ndiag(args, cfg: RunConfig) -> Report:
    count = count_near_diagonal(
        args.J, args.N, args.alpha, args.delta, pair_cap=args.pair_cap
    )
    inputs = {
        "J": args.J,
        "N": args.N,
        "alpha": args.alpha,
        "delta": args.delta,
        "pair_cap": args.pair_cap,
    }
    return Report("ndiag", inputs, {"count": count})


def _cmd_identity_check(args, cfg: RunConfig) -> Report:
    cache = args.cache_dir if args.cache_dir is not None else cfg.cache_dir
    table = spf_table(args.n_max, cache)
    residual, argmax_n = heath_brown_max_residual(args.n_max, args.cap, table=table)
    inputs = {"n_max": args.n_max, "cap": args.cap}
    results = {"max_residual": residual, "argmax_n": argmax_n}
    return Report("identity-check", inputs, results)


def _cmd_twin_constant(args, cfg: RunConfig) -> Report:
    res = twin_singular_series(args.prime_bound)
    inputs = {"prime_bound": args.prime_bound}
    results = {"value": res.value, "tail_bound": res.tail_bound}
    return Report("twin-constant", inputs, results)


def _cmd_verify_all(args, cfg: RunConfig) -> Report:
    outcomes = acceptance.verify_all(quick=args.quick)
    rows = [
        {
            "name": r.name,
            "passed": r.passed,
            "detail": r.detail,
            "runtime": round(r.runtime, 3),
        }
        for r in outcomes
    ]
    n_pass = sum(r.passed for r in outcomes)
    text = [
        f"{'PASS' if r.passed else 'FAIL'} {r.name} ({r.runtime:.2f}s): {r.detail}"
        for r in outcomes
    ]
    text.append(f"{n_pass}/{len(outcomes)} criteria passed")
    results = {"passed": n_pass, "failed": len(outcomes) - n_pass, "quick": args.quick}
    return Report(
        "verify-all",
        {"quick": args.quick},
        results,
        rows=rows,
        text=text,
        csv_exclude=("runtime",),  # keep CSV byte-identical across runs
        exit_code=0 if n_pass == len(outcomes) else 1,
    )


def build_parser() -> _Parser:
    common = argparse.ArgumentParser(add_help=False)
    fmt = common.add_mutually_exclusive_group()
    fmt.add_argument("--json", action="store_true", help="emit a JSON report")
    fmt.add_argument("--csv", action="store_true", help="emit CSV rows")
    common.add_argument(
        "--cache-dir", type=Path, default=None, help="override the table cache location"
    )

    parser = _Parser(prog="pschen", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"pschen {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, metavar="command")

    p = sub.add_parser("pairs", parents=[common], help="exponent pairs via the A-process")
    g = p.add_mutually_exclusive_group()
    g.add_argument("--iterate", type=int, default=0, metavar="N", help="A-process iterations from (1/2,1/2)")
    g.add_argument("--eph", metavar="EPS", help="the (eps, 1/2+eps) pair instead")
    p.set_defaults(handler=_cmd_pairs)

    p = sub.add_parser("level", parents=[common], help="solve for the distribution level xi")
    p.add_argument("--gamma", required=True, help="sequence exponent, rational or decimal")
    p.add_argument("--eta", default="0", help="separation parameter (default 0)")
    p.add_argument("--epsilon", default="0", help="slack subtracted from the supremum")
    p.add_argument("--pairs", default="a36,a3", help="typeI,typeII presets from {a36,a3,eph}")
    p.set_defaults(handler=_cmd_level)

    p = sub.add_parser("sievefn", parents=[common], help="linear-sieve functions F and f")
    p.add_argument("--kind", choices=("F", "f"), required=True)
    p.add_argument("--s", type=float, required=True)
    p.add_argument("--tol", type=float, default=None, help="quadrature tolerance")
    p.set_defaults(handler=_cmd_sievefn)

    p = sub.add_parser("bracket", parents=[common], help="weighted-sieve bracket S - S1 - S2 - S3")
    p.add_argument("--xi", type=float, required=True)
    p.add_argument("--tol", type=float, default=None, help="total quadrature budget")
    p.set_defaults(handler=_cmd_bracket)

    p = sub.add_parser("ps-count", parents=[common], help="count PS primes up to x")
    p.add_argument("--gamma", required=True)
    p.add_argument("--x", type=int, required=True)
    p.set_defaults(handler=_cmd_ps_count)

    p = sub.add_parser("bv", parents=[common], help="progression discrepancy of PS primes")
    p.add_argument("--gamma", required=True)
    p.add_argument("--x", type=int, required=True)
    p.add_argument("--D", type=int, required=True, help="largest modulus")
    p.add_argument("--l", type=int, required=True, help="residue class")
    p.add_argument("--A", type=float, default=1.0, help="log-power normalization")
    p.set_defaults(handler=_cmd_bv)

    p = sub.add_parser("chen-weights", parents=[common], help="weighted-sieve counts S, S1, S2, S3")
    p.add_argument("--gamma", required=True)
    p.add_argument("--x", type=int, required=True)
    p.set_defaults(handler=_cmd_chen_weights)

    p = sub.add_parser("expsum", parents=[common], help="exponential sum over a progression")
    p.add_argument("--X", type=int, required=True)
    p.add_argument("--X1", type=int, required=True)
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--l", type=int, required=True)
    p.add_argument("--h", type=int, required=True)
    p.add_argument("--gamma", required=True)
    p.add_argument("--pair", default="a3", help="exponent-pair preset for the bound")
    p.add_argument("--term-cap", type=int, default=2_000_000)
    p.set_defaults(handler=_cmd_expsum)

    p = sub.add_parser("ndiag", parents=[common], help="near-diagonal quadruple count")
    p.add_argument("--J", type=int, required=True)
    p.add_argument("--N", type=int, required=True)
    p.add_argument("--alpha", type=float, required=True)
    p.add_argument("--delta", type=float, required=True)
    p.add_argument("--pair-cap", type=int, default=1 << 22)
    p.set_defaults(handler=_cmd_ndiag)

    p = sub.add_parser("identity-check", parents=[common], help="three-fold identity residual scan")
    p.add_argument("--n-max", type=int, default=10_000)
    p.add_argument("--cap", type=int, default=None, help="smooth cutoff (>= ceil(n_max^(1/3)))")
    p.set_defaults(handler=_cmd_identity_check)

    p = sub.add_parser("twin-constant", parents=[common], help="twin singular series partial product")
    p.add_argument("--prime-bound", type=int, default=100_000_000)
    p.set_defaults(handler=_cmd_twin_constant)

    p = sub.add_parser("verify-all", parents=[common], help="run the acceptance criteria")
    p.add_argument("--quick", action="store_true", help="skip the slow scans")
    p.set_defaults(handler=_cmd_verify_all)

    return parser


def _emit_text(report: Report) -> None:
    if report.text:
        for line in report.text:
            print(line)
    else:
        for key, value in report.results.items():
            print(f"{key} = {value}")
        if report.rows:
            cols = list(report.rows[0])
            print("  ".join(cols))
            for row in report.rows:
                print("  ".join(str(row[c]) for c in cols))


def _emit_json(report: Report, runtime: float) -> None:
    doc = {
        "artifact_version": __version__,
        "command": report.command,
        "inputs": report.inputs,
        "results": report.results,
        "runtime_seconds": round(runtime, 6),
    }
    if report.rows is not None:
        doc["rows"] = report.rows
    print(json.dumps(doc, indent=2, sort_keys=True))


def _emit_csv(report: Report) -> None:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    if report.rows is not None:
        cols = [c for c in report.rows[0] if c not in report.csv_exclude]
        writer.writerow(cols)
        for row in report.rows:
            writer.writerow([row[c] for c in cols])
    else:
        cols = list(report.results)
        writer.writerow(cols)
        writer.writerow([report.results[c] for c in cols])
    sys.stdout.write(buf.getvalue())


def main(argv: list[str] | None = None) -> int:
    try:
        cfg = load_run_config()
        parser = build_parser()
        args = parser.parse_args(argv)
        start = time.perf_counter()
        report = args.handler(args, cfg)
        runtime = time.perf_counter() - start
    except (DomainError, CostError, ConvergenceError) as exc:
        print(f"pschen: error: {exc}", file=sys.stderr)
        return 2
    except PrecisionExhaustionError as exc:
        print(f"pschen: precision exhausted: {exc}", file=sys.stderr)
        return 3
    fmt = "json" if args.json else "csv" if args.csv else cfg.output
    if fmt == "json":
        _emit_json(report, runtime)
    elif fmt == "csv":
        _emit_csv(report)
    else:
        _emit_text(report)
    return report.exit_code


if __name__ == "__main__":
    raise SystemExit(main())
