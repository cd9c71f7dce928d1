"""Command-line interface: compute, verify, search, simulate, export."""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
from importlib import resources

import numpy as np

from . import bfn, catalog, theorems
from .bfn import level_weights, walsh_transform
from .dist import EvenProductDistribution, TripleDistribution
from .errors import GswfError, ValidationError
from .rationality import Gswf, w_formula, w_monte_carlo, w_oracle
from .search import ClassFilter, extremal_w, random_search
from .theorems import CHECKS, run_all, suite_passed

def _thread_cap() -> int:
    """Upper cap on workers from GSWF_THREADS; execution is vectorized and
    never uses more than this many (currently one)."""
    raw = os.environ.get("GSWF_THREADS", "1")
    try:
        cap = int(raw)
    except ValueError as exc:
        raise ValidationError(f"GSWF_THREADS must be an integer, got {raw!r}") from exc
    if cap < 1:
        raise ValidationError(f"GSWF_THREADS must be >= 1, got {cap}")
    return cap


def load_schema() -> dict:
    """The JSON schema all CLI JSON reports validate against."""
    text = resources.files("gswf.schemas").joinpath("report.schema.json").read_text()
    return json.loads(text)


def _json_text(payload) -> str:
    return json.dumps(payload, sort_keys=True, indent=2) + "\n"


def _write_output(text: str, out: str | None, append: bool = False) -> None:
    if out is None:
        sys.stdout.write(text)
        return
    with open(out, "a" if append else "w", encoding="utf-8") as handle:
        handle.write(text)


def _add_dist_flags(parser: argparse.ArgumentParser) -> None:
    group = parser.add_argument_group("distribution")
    group.add_argument("--uniform", action="store_true", help="alpha=beta=gamma=1/6")
    group.add_argument("--alpha", type=float)
    group.add_argument("--beta", type=float)
    group.add_argument("--gamma", type=float)
    group.add_argument(
        "--triples",
        type=str,
        help="six probabilities p110,p011,p101,p001,p100,p010 "
        "(general distributions run the oracle or Monte Carlo paths only)",
    )


def _parse_dist(args) -> tuple[object, bool]:
    """Returns (distribution, is_even_family). Defaults to uniform."""
    chosen = [
        bool(args.uniform),
        args.alpha is not None or args.beta is not None or args.gamma is not None,
        args.triples is not None,
    ]
    if sum(chosen) > 1:
        raise ValidationError("choose one of --uniform, --alpha/--beta/--gamma, --triples")
    if args.triples is not None:
        parts = [float(x) for x in args.triples.split(",")]
        if len(parts) != 6:
            raise ValidationError("--triples needs exactly six comma-separated values")
        t = TripleDistribution(np.asarray(parts))
        return t, False
    if chosen[1]:
        if None in (args.alpha, args.beta, args.gamma):
            raise ValidationError("--alpha, --beta and --gamma must be given together")
        return EvenProductDistribution(args.alpha, args.beta, args.gamma), True
    return EvenProductDistribution.uniform(), True


def _add_function_flags(parser: argparse.ArgumentParser) -> None:
    group = parser.add_argument_group("functions")
    group.add_argument("--preset", choices=catalog.PRESET_NAMES)
    group.add_argument("--n", type=int, help="voter count (required with --preset)")
    group.add_argument("--voter", type=int, default=1, help="voter index for dictator presets")
    group.add_argument("--q", type=float, help="threshold fraction for threshold_instability")
    group.add_argument("--f", type=str, help="choice function for the first pair")
    group.add_argument("--g", type=str, help="choice function for the second pair")
    group.add_argument("--h", type=str, help="choice function for the third pair")


def _parse_gswf(args) -> tuple[Gswf, str | None]:
    if args.preset:
        if args.n is None:
            raise ValidationError("--preset requires --n")
        return (
            catalog.preset_gswf(args.preset, args.n, voter=args.voter, q=args.q),
            args.preset,
        )
    if not (args.f and args.g and args.h):
        raise ValidationError("give either --preset --n or all of --f, --g, --h")
    fs = tuple(catalog.parse_function_spec(s) for s in (args.f, args.g, args.h))
    return Gswf(*fs), None


def _dist_dict(dist) -> dict:
    if isinstance(dist, EvenProductDistribution):
        return dist.as_dict()
    return dist.as_dict()


def _pretty_wresult(res) -> str:
    lines = [f"method {res.method}: W = {res.w:.9f}"]
    lines.append(f"  base (independent outcome term) = {res.base:.9f}")
    if res.cross_terms is not None:
        for label, term, delta in zip(
            ("(f,g)", "(g,h)", "(h,f)"), res.cross_terms, res.deltas
        ):
            lines.append(f"  {label} delta={delta:+.6f}: {term:+.9f}")
    if res.method == "monte_carlo":
        lines.append(f"  samples={res.samples} seed={res.seed} stderr={res.stderr:.3e}")
    return "\n".join(lines)


# --------------------------------------------------------------------------
# subcommands
# --------------------------------------------------------------------------


def _cmd_spectrum(args) -> int:
    f = catalog.parse_function_spec(args.function)
    spec = walsh_transform(f)
    include = args.full_coeffs or f.n <= 6
    payload = {
        "kind": "spectrum_report",
        "function": {"n": f.n, "hex": f.hex},
        "expectation": bfn.expectation(f),
        "level_weights": [float(x) for x in level_weights(spec)],
        "predicates": {
            "balanced": bfn.is_balanced(f),
            "monotone": bfn.is_monotone(f),
            "self_dual": bfn.is_self_dual(f),
            "cyclic_invariant": bfn.is_cyclic_invariant(f),
        },
        "coefficients": [float(x) for x in spec.coeffs] if include else None,
    }
    if args.format == "pretty":
        text = [f"function n={f.n} hex={f.hex}  E[f]={payload['expectation']:.6f}"]
        text.append(
            "predicates: "
            + ", ".join(k for k, v in payload["predicates"].items() if v)
        )
        text.append("level weights: " + ", ".join(f"{x:.6f}" for x in payload["level_weights"]))
        _write_output("\n".join(text) + "\n", args.out)
    else:
        _write_output(_json_text(payload), args.out)
    return 0


def _run_methods(gswf, dist, even, args) -> list:
    method = args.method
    if not even and method in ("formula", "both"):
        raise ValidationError(
            "the closed form only applies to even product distributions; "
            "use --method oracle or monte-carlo with --triples"
        )
    results = []
    if method in ("formula", "both"):
        results.append(w_formula(gswf, dist))
    if method in ("oracle", "both"):
        results.append(w_oracle(gswf, dist))
    if method == "monte-carlo":
        if args.samples is None or args.seed is None:
            raise ValidationError("monte-carlo needs --samples and --seed")
        results.append(w_monte_carlo(gswf, dist, args.samples, args.seed))
    return results


def _cmd_rationality(args) -> int:
    gswf, preset = _parse_gswf(args)
    dist, even = _parse_dist(args)
    results = _run_methods(gswf, dist, even, args)
    payload = {
        "kind": "rationality_report",
        "n": gswf.n,
        "functions": {"f": gswf.f.hex, "g": gswf.g.hex, "h": gswf.h.hex},
        "distribution": _dist_dict(dist),
        "preset": preset,
        "reference_bound": 0.471**gswf.n if preset == "and_dual_majority" else None,
        "results": [r.to_json_dict() for r in results],
    }
    if args.format == "pretty":
        head = [f"n = {gswf.n}  f={gswf.f.hex} g={gswf.g.hex} h={gswf.h.hex}"]
        if preset:
            head.append(f"preset: {preset}")
        if payload["reference_bound"] is not None:
            head.append(f"decay envelope 0.471^n = {payload['reference_bound']:.6e}")
        body = [_pretty_wresult(r) for r in results]
        _write_output("\n".join(head + body) + "\n", args.out)
    else:
        _write_output(_json_text(payload), args.out)
    return 0


def _cmd_simulate(args) -> int:
    args.method = "monte-carlo"
    return _cmd_rationality(args)


def _cmd_verify(args) -> int:
    names = None
    if not args.all:
        if not args.check:
            raise ValidationError("give --all or at least one --check NAME")
        names = args.check
    reports = run_all(seed=args.seed, names=names)
    payload = {
        "kind": "verify_report",
        "seed": args.seed,
        "all_passed": suite_passed(reports),
        "reports": [r.to_json_dict() for r in reports],
    }
    if args.format == "pretty":
        lines = []
        for r in reports:
            tag = "PASS" if r.passed else "FAIL"
            extra = " (inverted)" if r.inverted else ""
            lines.append(
                f"{tag:4} {r.name:<40} margin={r.margin:+.3e} tol={r.tolerance:.0e}{extra}"
            )
        lines.append("all passed" if payload["all_passed"] else "FAILURES present")
        _write_output("\n".join(lines) + "\n", args.out)
    else:
        _write_output(_json_text(payload), args.out)
    return 0 if payload["all_passed"] else 1


def _cmd_search(args) -> int:
    dist, even = _parse_dist(args)
    if not even:
        raise ValidationError("search evaluates the closed form; use an even product distribution")
    filters = tuple(
        ClassFilter.parse(text) for text in (args.class_f, args.class_g, args.class_h)
    )
    if args.mode == "exhaustive":
        result = extremal_w(
            args.n,
            *filters,
            dist,
            args.objective,
            exclude_dictator_triples=args.exclude_dictators,
        )
    else:
        if args.trials is None or args.seed is None:
            raise ValidationError("random mode needs --trials and --seed")
        result = random_search(args.n, filters, dist, args.objective, args.trials, args.seed)
    payload = {"kind": "search_result", **result.to_json_dict()}
    text = json.dumps(payload, sort_keys=True) + "\n"  # JSON lines for scans
    _write_output(text, args.out, append=True)
    return 0


def _cmd_catalog(args) -> int:
    if args.action != "list":
        raise ValidationError(f"unknown catalog action {args.action!r}")
    payload = {
        "kind": "catalog_listing",
        "families": [
            {"name": "dictator", "spec": "dict:<n>:<voter>", "parameters": ["n", "voter"]},
            {"name": "majority", "spec": "maj:<n>", "parameters": ["n (odd)"]},
            {"name": "and", "spec": "and:<n>", "parameters": ["n"]},
            {"name": "or", "spec": "or:<n>", "parameters": ["n"]},
            {"name": "threshold", "spec": "thr:<n>:<k>", "parameters": ["n", "k in 0..n+1"]},
            {"name": "parity", "spec": "parity:<n>", "parameters": ["n"]},
            {"name": "tribes", "spec": "tribes:<n>:<size>", "parameters": ["n", "tribe size"]},
            {"name": "constant", "spec": "const:<n>:<bit>", "parameters": ["n", "bit"]},
            {"name": "hex table", "spec": "hex:<n>:<digits>", "parameters": ["n", "packed table"]},
        ],
        "presets": [
            {"name": "condorcet", "parameters": ["n (odd)"]},
            {"name": "dictator_triple", "parameters": ["n", "voter"]},
            {"name": "split_dictators", "parameters": ["n >= 3"]},
            {"name": "and_dual_majority", "parameters": ["n (odd)"]},
            {"name": "threshold_instability", "parameters": ["n (odd)", "q in (0, 1/2)"]},
            {"name": "alpha_half_extremal", "parameters": ["n >= 2"]},
        ],
    }
    if args.format == "pretty":
        lines = ["families:"]
        lines += [f"  {f['spec']:<22} params: {', '.join(f['parameters'])}" for f in payload["families"]]
        lines.append("presets:")
        lines += [f"  {p['name']:<22} params: {', '.join(p['parameters'])}" for p in payload["presets"]]
        _write_output("\n".join(lines) + "\n", args.out)
    else:
        _write_output(_json_text(payload), args.out)
    return 0


def _parse_n_list(text: str) -> list[int]:
    if not text:
        raise ValidationError("empty n list")
    if ":" in text:
        parts = text.split(":")
        if len(parts) not in (2, 3):
            raise ValidationError("range syntax is start:stop[:step]")
        start, stop = int(parts[0]), int(parts[1])
        step = int(parts[2]) if len(parts) == 3 else 1
        values = list(range(start, stop + 1, step))
    else:
        values = [int(x) for x in text.split(",") if x]
    if not values:
        raise ValidationError("empty n list")
    return values


def _cmd_curve(args) -> int:
    n_list = _parse_n_list(args.n_list)
    buffer = io.StringIO()
    writer = csv.writer(buffer)
    if args.check == "majority-stability":
        rho = args.rho
        if rho is None:
            raise ValidationError("majority-stability needs --rho")
        writer.writerow(["n", "rho", "value", "reference", "abs_err"])
        reference = math.asin(rho) / (2.0 * math.pi)
        for n in n_list:
            value = theorems.majority_self_correlation(n, rho)
            writer.writerow([n, rho, repr(value), repr(reference), repr(abs(value - reference))])
    elif args.check == "instability":
        q = args.q
        if q is None:
            raise ValidationError("instability needs --q")
        writer.writerow(["n", "q", "w", "eta", "ratio"])
        d = EvenProductDistribution.uniform()
        for n in n_list:
            gswf = catalog.preset_gswf("threshold_instability", n, q=q)
            w = w_formula(gswf, d).w
            e = catalog.eta(n, q)
            writer.writerow([n, q, repr(w), repr(e), repr(w / e)])
    else:
        raise ValidationError(f"unknown curve {args.check!r}")
    _write_output(buffer.getvalue(), args.out)
    return 0


# --------------------------------------------------------------------------
# parser assembly
# --------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="gswf",
        description="Spectral analysis of three-alternative voting rules: "
        "irrational-outcome probability, bound verification, extremal search.",
        epilog="GSWF_THREADS caps the worker count (execution is vectorized; "
        "results are identical for any cap).",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    common_out = {"default": None, "help": "write output to this path instead of stdout"}

    p = sub.add_parser("spectrum", help="transform one function and report its structure")
    p.add_argument("--function", required=True, help="function spec, e.g. maj:3 or hex:3:e8")
    p.add_argument("--full-coeffs", action="store_true")
    p.add_argument("--format", choices=("json", "pretty"), default="json")
    p.add_argument("--out", **common_out)
    p.set_defaults(func=_cmd_spectrum)

    p = sub.add_parser("rationality", help="probability of an irrational outcome")
    _add_function_flags(p)
    _add_dist_flags(p)
    p.add_argument(
        "--method",
        choices=("formula", "oracle", "monte-carlo", "both"),
        default="both",
        help="both = closed form and exhaustive enumeration",
    )
    p.add_argument("--samples", type=int)
    p.add_argument("--seed", type=int)
    p.add_argument("--format", choices=("json", "pretty"), default="json")
    p.add_argument("--out", **common_out)
    p.set_defaults(func=_cmd_rationality)

    p = sub.add_parser("simulate", help="Monte Carlo estimate of the irrationality probability")
    _add_function_flags(p)
    _add_dist_flags(p)
    p.add_argument("--samples", type=int, required=True)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--format", choices=("json", "pretty"), default="json")
    p.add_argument("--out", **common_out)
    p.set_defaults(func=_cmd_simulate)

    p = sub.add_parser("verify", help="run the bound-verification battery")
    p.add_argument("--all", action="store_true")
    p.add_argument(
        "--check",
        action="append",
        choices=sorted(CHECKS),
        help="run one named check (repeatable)",
    )
    p.add_argument("--seed", type=int, default=7)
    p.add_argument("--format", choices=("json", "pretty"), default="json")
    p.add_argument("--out", **common_out)
    p.set_defaults(func=_cmd_verify)

    p = sub.add_parser("search", help="extremal search over function classes")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--class-f", required=True, help="e.g. balanced,monotone")
    p.add_argument("--class-g", required=True)
    p.add_argument("--class-h", required=True)
    p.add_argument("--objective", choices=("min_w", "max_w"), required=True)
    p.add_argument("--mode", choices=("exhaustive", "random"), default="exhaustive")
    p.add_argument("--trials", type=int)
    p.add_argument("--seed", type=int)
    p.add_argument("--exclude-dictators", action="store_true",
                   help="skip the always-rational dictator-type triples")
    _add_dist_flags(p)
    p.add_argument("--out", help="append one JSON line per run to this path")
    p.set_defaults(func=_cmd_search)

    p = sub.add_parser("catalog", help="list families and presets")
    p.add_argument("action", choices=("list",))
    p.add_argument("--format", choices=("json", "pretty"), default="json")
    p.add_argument("--out", **common_out)
    p.set_defaults(func=_cmd_catalog)

    p = sub.add_parser("curve", help="emit CSV curves for the asymptotic claims")
    p.add_argument("--check", choices=("majority-stability", "instability"), required=True)
    p.add_argument("--rho", type=float)
    p.add_argument("--q", type=float)
    p.add_argument("--n-list", required=True, help="comma list or start:stop[:step]")
    p.add_argument("--out", **common_out)
    p.set_defaults(func=_cmd_curve)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        _thread_cap()
        return args.func(args)
    except GswfError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    raise SystemExit(main())
