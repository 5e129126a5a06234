"""Command-line front end: every analysis as a reproducible, scriptable command.

Commands emit data on stdout (JSON by default, CSV via --format csv) and
diagnostics on stderr.  Exit codes: 0 success, 2 usage/domain error,
3 numerical/precision failure.  All commands are deterministic given their
flags (including --seed); repeated runs are byte-identical.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
from fractions import Fraction

from .coeffs import (
    CoefficientTable,
    coeff_alpha_zero,
    coeff_direct,
    coeff_table_recursive,
)
from .conv_analysis import (
    GrowthClass,
    ProbabilityEstimate,
    SequenceSpec,
    TailRule,
    angle_fold,
    classify_pair,
    classify_sequence,
    const_sequence,
    fj_sequence,
    geom_sequence,
    infinite_conv_coeff,
    normalize_sequence,
    unbounded_probability_mc,
)
from .errors import DomainError, PrecisionError
from .rng import DEFAULT_SEED
from .series import AlphaParam, LogMode, PowerMode, product_coeff_stream, radial_asymptotic


def _emit_json(obj) -> str:
    return json.dumps(obj, indent=2, allow_nan=False) + "\n"


def _fmt(v: float) -> str:
    return f"{v:.17g}"


def _parse_alpha_list(text: str, low_open: bool = True) -> list[float]:
    try:
        values = [float(tok) for tok in text.split(",") if tok.strip()]
    except ValueError as exc:
        raise ValueError(f"could not parse parameter list {text!r}: {exc}") from None
    if not values:
        raise ValueError("empty parameter list")
    for v in values:
        if not math.isfinite(v) or v > 1.0 or v < 0.0 or (low_open and v == 0.0):
            lo = "(0, 1]" if low_open else "[0, 1]"
            raise DomainError(f"parameters must lie in {lo}, got {v!r}")
    return values


# ---------------------------------------------------------------------------
# sequence-spec grammar (shared by --spec file and inline form)
#
#   one parameter per line:   modulus            e.g.  0.9
#                             modulus@phase      e.g.  0.9@1.5707963267948966
#   or a final rule line:     const:x | fj:j | geom:base,ratio
#
# Inline strings may separate entries with ';' (always) or ',' (only when no
# rule is present, since geom rules contain a comma themselves).


def parse_sequence_spec(text: str) -> SequenceSpec:
    raw = text.strip()
    if not raw:
        raise ValueError("empty sequence spec")
    if "\n" in raw:
        tokens = raw.splitlines()
    elif ";" in raw:
        tokens = raw.split(";")
    elif ":" not in raw:
        tokens = raw.split(",")
    else:
        tokens = [raw]
    lines = [t.strip() for t in tokens]
    lines = [t for t in lines if t and not t.startswith("#")]
    if not lines:
        raise ValueError("sequence spec has no entries")

    head: list[AlphaParam] = []
    tail: TailRule | None = None
    for i, line in enumerate(lines):
        if ":" in line:
            if i != len(lines) - 1:
                raise ValueError("a rule line must be the last line of the spec")
            kind, _, arg = line.partition(":")
            kind = kind.strip().lower()
            try:
                if kind == "const":
                    tail = const_sequence(float(arg)).tail
                elif kind == "fj":
                    tail = fj_sequence(int(arg)).tail
                elif kind == "geom":
                    base_s, _, ratio_s = arg.partition(",")
                    tail = geom_sequence(float(base_s), float(ratio_s)).tail
                else:
                    raise ValueError(f"unknown rule {kind!r}")
            except ValueError:
                raise
            except Exception as exc:  # int()/float() failures on the args
                raise ValueError(f"malformed rule line {line!r}: {exc}") from None
        else:
            mod_s, at, phase_s = line.partition("@")
            try:
                modulus = float(mod_s)
                phase = float(phase_s) if at else 0.0
            except ValueError:
                raise ValueError(f"malformed parameter line {line!r}") from None
            head.append(AlphaParam(modulus, phase))
    return SequenceSpec(head=tuple(head), tail=tail)


# ---------------------------------------------------------------------------
# commands


def cmd_coeffs(args) -> str:
    alpha = args.alpha
    if not math.isfinite(alpha) or not 0.0 <= alpha <= 1.0:
        raise DomainError(f"--alpha must lie in [0, 1], got {alpha!r}")
    if args.n < 1:
        raise ValueError(f"--n must be >= 1, got {args.n}")
    if alpha == 0.0:
        if args.method == "direct":
            raise DomainError("the direct sum is defined for alpha in (0, 1)")
        table = coeff_alpha_zero(args.n)
    elif args.method == "recursive":
        table = coeff_table_recursive(alpha, args.n)
    else:
        values = [0.0, 1.0]
        values += [coeff_direct(alpha, k) for k in range(2, args.n + 1)]
        table = CoefficientTable(alpha=alpha, values=values[: args.n + 1], method="direct")
    if args.format == "csv":
        return table.to_csv()
    return _emit_json(table.json_dict())


def _growth_csv(growth: GrowthClass) -> str:
    exp = "" if growth.exponent is None else _fmt(growth.exponent)
    const = "" if growth.constant is None else _fmt(growth.constant)
    return f"kind,exponent,constant\n{growth.kind},{exp},{const}\n"


def cmd_classify(args) -> str:
    values = _parse_alpha_list(args.alphas)
    if len(values) < 2:
        raise ValueError("need at least two parameters to classify")
    if len(values) == 2:
        growth = classify_pair(values[0], values[1])
    else:
        growth = angle_fold(values)
    if args.format == "csv":
        return _growth_csv(growth)
    return _emit_json(growth.json_dict())


def cmd_asymptotic(args) -> str:
    values = _parse_alpha_list(args.alphas)
    growth = classify_sequence(SequenceSpec.from_moduli(values))
    if growth.kind == "Bounded":
        raise DomainError(
            "the convolution is bounded; no radial growth mode applies"
        )
    wanted = args.mode
    actual = "log" if growth.kind == "Logarithmic" else "power"
    if wanted != "auto" and wanted != actual:
        raise DomainError(
            f"--mode {wanted} does not match the classified {actual} regime; "
            "use --mode auto or the matching mode"
        )
    if actual == "power":
        mode = PowerMode(gamma=growth.exponent)
    else:
        mode = LogMode()
    estimate = radial_asymptotic(product_coeff_stream(values), mode)
    theory = growth.constant
    if args.format == "csv":
        lines = [
            f"# mode={actual}" + (f" gamma={_fmt(mode.gamma)}" if actual == "power" else ""),
            f"# limit={_fmt(estimate.extrapolated_limit)}",
            f"# theory={_fmt(theory)}",
            "r,scaled_value",
        ]
        lines += [f"{_fmt(r)},{_fmt(v)}" for r, v in estimate.grid]
        return "\n".join(lines) + "\n"
    return _emit_json(
        {
            "mode": estimate.mode_json(),
            "limit": estimate.extrapolated_limit,
            "theory": theory,
            "growth": growth.json_dict(),
            "grid": [[r, v] for r, v in estimate.grid],
        }
    )


def cmd_probability(args) -> str:
    if args.n < 1:
        raise ValueError(f"--n must be >= 1, got {args.n}")
    if args.n > 20:
        raise DomainError("exact reference guarded to n <= 20")
    if args.n == 1:
        # every vector trivially satisfies the single condition sum >= 0
        est = ProbabilityEstimate(
            n=1,
            exact=Fraction(1),
            mc_estimate=1.0,
            mc_stderr=0.0,
            samples=args.samples,
            seed=args.seed,
            stage_count=args.samples,
            final_count=args.samples,
        )
    else:
        est = unbounded_probability_mc(args.n, args.samples, seed=args.seed)
    if args.format == "csv":
        e = est.json_dict()
        return (
            "n,exact,estimate,stderr,samples,seed\n"
            f"{e['n']},{e['exact']},{_fmt(e['estimate'])},{_fmt(e['stderr'])},"
            f"{e['samples']},{e['seed']}\n"
        )
    return _emit_json(est.json_dict())


def cmd_infconv(args) -> str:
    if os.path.exists(args.spec):
        with open(args.spec, "r", encoding="utf-8") as fh:
            text = fh.read()
    else:
        text = args.spec
    seq = parse_sequence_spec(text)
    if args.kmax < 1:
        raise ValueError(f"--kmax must be >= 1, got {args.kmax}")
    norm_seq, lam, degenerate = normalize_sequence(seq)
    coeffs = [infinite_conv_coeff(seq, k, tol=args.tol) for k in range(1, args.kmax + 1)]
    if degenerate:
        growth = GrowthClass("Identity")
    else:
        moduli = SequenceSpec(
            head=tuple(AlphaParam(p.modulus) for p in seq.head), tail=seq.tail
        )
        growth = classify_sequence(moduli)
    if args.format == "csv":
        lines = [
            f"# lambda_re={_fmt(lam.real)} lambda_im={_fmt(lam.imag)}",
            f"# degenerate={str(degenerate).lower()}",
            f"# growth={growth.kind}",
            "k,re,im",
        ]
        lines += [f"{k + 1},{_fmt(c.real)},{_fmt(c.imag)}" for k, c in enumerate(coeffs)]
        return "\n".join(lines) + "\n"
    return _emit_json(
        {
            "lambda": {"re": lam.real, "im": lam.imag},
            "degenerate": degenerate,
            "coefficients": [
                {"k": k + 1, "re": c.real, "im": c.imag} for k, c in enumerate(coeffs)
            ],
            "growth": growth.json_dict(),
        }
    )


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="twogon",
        description="Coefficients, convolutions, and boundary growth of 2-gon disk mappings.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_format(p):
        p.add_argument("--format", choices=("json", "csv"), default="json")

    p = sub.add_parser("coeffs", help="Taylor coefficient table of one 2-gon map")
    p.add_argument("--alpha", type=float, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--method", choices=("recursive", "direct"), default="recursive")
    add_format(p)
    p.set_defaults(func=cmd_coeffs)

    p = sub.add_parser("classify", help="growth class of a convolution (pair or angle fold)")
    p.add_argument("--alphas", required=True, help="comma-separated values in (0, 1]")
    add_format(p)
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("asymptotic", help="radial boundary limit along the dyadic schedule")
    p.add_argument("--alphas", required=True, help="comma-separated values in (0, 1]")
    p.add_argument("--mode", choices=("auto", "power", "log"), default="auto")
    add_format(p)
    p.set_defaults(func=cmd_asymptotic)

    p = sub.add_parser("probability", help="exact and Monte Carlo unboundedness probability")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--samples", type=int, default=1_000_000)
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)
    add_format(p)
    p.set_defaults(func=cmd_probability)

    p = sub.add_parser("infconv", help="coefficients and growth of an infinite convolution")
    p.add_argument("--spec", required=True, help="file path or inline sequence spec")
    p.add_argument("--kmax", type=int, default=10)
    p.add_argument("--tol", type=float, default=1e-13)
    add_format(p)
    p.set_defaults(func=cmd_infconv)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        out = args.func(args)
    except PrecisionError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except (DomainError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    sys.stdout.write(out)
    return 0


if __name__ == "__main__":
    sys.exit(main())
