"""Batch command-line front end.

Exit codes: 0 success, 1 verification failure, 2 usage or input error,
3 refusal by the cost guard.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from fractions import Fraction
from math import comb
from pathlib import Path

from .combinatorics import Partition, is_partition
from .cumulants import mixed_moment_limit, moments_from_spec
from .dunkl import MultivariatePoly, finite_mixed_moment
from .ensembles import hermite_log_bgf, hermite_spec, monte_carlo_moments, theta_from_beta
from .series import CumulantSpec, parse_rational
from .suites import SUITES, run_suite

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_BUDGET = 0, 1, 2, 3
DEFAULT_BUDGET = 10 ** 6


class UsageError(Exception):
    pass


class BudgetError(Exception):
    pass


def fmt_rational(x) -> str:
    x = Fraction(x)
    return f"{x.numerator}/{x.denominator}"


def _rational(text: str) -> Fraction:
    try:
        value = parse_rational(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise argparse.ArgumentTypeError(f"not a rational: {text!r}") from exc
    return value


def _int_list(text: str) -> tuple[int, ...]:
    try:
        values = tuple(int(x) for x in text.split(",") if x.strip())
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"not a comma-separated integer list: {text!r}") from exc
    if not values:
        raise argparse.ArgumentTypeError("list must be nonempty")
    return values


def _partition(text: str) -> Partition:
    lam = _int_list(text)
    if not is_partition(lam):
        raise argparse.ArgumentTypeError(f"{text!r} is not a partition (positive, nonincreasing)")
    return lam


def _n_range(text: str) -> tuple[int, int]:
    try:
        lo, hi = (int(x) for x in text.split(".."))
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"expected LO..HI, got {text!r}") from exc
    if lo < 1 or hi < lo:
        raise argparse.ArgumentTypeError(f"need 1 <= LO <= HI, got {text!r}")
    return lo, hi


def _positive_int(text: str) -> int:
    try:
        value = int(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from exc
    if value < 1:
        raise argparse.ArgumentTypeError("must be positive")
    return value


# ---------------------------------------------------------------------------
# input files


def load_spec(source: str, theta: Fraction | None) -> CumulantSpec:
    if source == "hermite":
        if theta is None:
            raise UsageError("--theta is required with the builtin hermite spec")
        return hermite_spec(theta)
    try:
        spec = CumulantSpec.loads(Path(source).read_text())
    except OSError as exc:
        raise UsageError(f"cannot read spec {source}: {exc}") from exc
    except (ValueError, KeyError, TypeError, ZeroDivisionError) as exc:
        raise UsageError(f"malformed spec {source}: {exc}") from exc
    if theta is not None and theta != spec.theta:
        raise UsageError(f"--theta {theta} disagrees with the cumulant file's theta {spec.theta}")
    return spec


def load_poly_coefficients(source: str) -> dict[Partition, Fraction]:
    """{"coefficients": [{"partition": [2], "value": "1/2"}, ...]}: F_N = N * sum value * M_nu."""
    try:
        data = json.loads(Path(source).read_text())
    except OSError as exc:
        raise UsageError(f"cannot read {source}: {exc}") from exc
    except ValueError as exc:
        raise UsageError(f"malformed JSON in {source}: {exc}") from exc
    try:
        out = {}
        for entry in data["coefficients"]:
            nu = tuple(entry["partition"])
            if not nu or not all(isinstance(x, int) for x in nu) or not is_partition(nu):
                raise ValueError(f"bad partition {entry['partition']}")
            out[nu] = parse_rational(entry["value"])
    except (KeyError, TypeError, ValueError, ZeroDivisionError) as exc:
        raise UsageError(f"malformed coefficient file {source}: {exc}") from exc
    return out


def spec_from_coefficients(coeffs: dict[Partition, Fraction], theta: Fraction) -> CumulantSpec:
    """Limit data of F_N = N * sum a_nu M_nu: c_nu = |nu| a_nu / l(nu)."""
    return CumulantSpec(theta, {nu: Fraction(sum(nu), len(nu)) * a for nu, a in coeffs.items()})


def converge_cost(lam: Partition, lo: int, hi: int) -> int:
    k, m = sum(lam), len(lam)
    return sum(N ** m * comb(N + k, k) for N in range(lo, hi + 1))


# ---------------------------------------------------------------------------
# commands


def _write_rows(header, rows, out: str | None) -> None:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    text = buf.getvalue()
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def cmd_moments(args) -> int:
    spec = load_spec(args.spec, args.theta)
    moments = moments_from_spec(spec, args.max_order)
    _write_rows(["k", "m_k"], [(k, fmt_rational(m)) for k, m in enumerate(moments, 1)], args.out)
    return EXIT_OK


def cmd_converge(args) -> int:
    if args.theta is None:
        raise UsageError("--theta is required")
    lam = args.lam
    lo, hi = args.n_range if args.n_range else (args.n, args.n) if args.n else (None, None)
    if lo is None:
        raise UsageError("give --n or --n-range")
    cost = converge_cost(lam, lo, hi)
    if cost > args.budget:
        raise BudgetError(
            f"estimated cost {cost} for lambda={','.join(map(str, lam))}, N={lo}..{hi} "
            f"exceeds budget {args.budget}; raise --budget or shrink the range"
        )
    if args.spec == "hermite":
        spec = hermite_spec(args.theta)
        make_F = lambda N: hermite_log_bgf(N, args.theta)  # noqa: E731
    else:
        coeffs = load_poly_coefficients(args.spec)
        spec = spec_from_coefficients(coeffs, args.theta)
        make_F = lambda N: MultivariatePoly.from_symmetric(  # noqa: E731
            {nu: N * a for nu, a in coeffs.items() if len(nu) <= N}, N
        )
    limit = mixed_moment_limit(spec, lam)
    rows = []
    for N in range(lo, hi + 1):
        value = finite_mixed_moment(make_F(N), lam, args.theta)
        rows.append((N, fmt_rational(value), fmt_rational(limit), f"{float(abs(value - limit)):.12g}"))
    _write_rows(["N", "value", "limit", "gap"], rows, args.out)
    return EXIT_OK


def cmd_verify(args) -> int:
    results = run_suite(args.suite, args.seed, args.inject_fault)
    lines = []
    for r in results:
        if r.passed:
            lines.append(f"PASS {args.suite}.{r.name}")
        else:
            lines.append(f"FAIL {args.suite}.{r.name}: {r.counterexample}")
    failed = sum(not r.passed for r in results)
    lines.append(f"{len(results) - failed}/{len(results)} checks passed")
    text = "\n".join(lines) + "\n"
    if args.out:
        Path(args.out).write_text(text)
    sys.stdout.write(text)
    return EXIT_FAIL if failed else EXIT_OK


def cmd_sample(args) -> int:
    if args.trials < 2:
        raise UsageError("--trials must be at least 2")
    if args.beta <= 0:
        raise UsageError("--beta must be positive")
    if args.n is None:
        raise UsageError("--n is required")
    if min(args.orders) < 1:
        raise UsageError("--orders must be positive")
    result = monte_carlo_moments(args.n, float(args.beta), args.trials, args.orders, args.seed)
    limits = moments_from_spec(hermite_spec(theta_from_beta(args.beta)), max(args.orders))
    rows = [
        (e.order, repr(e.mean), repr(e.stderr), e.trials, args.n, fmt_rational(args.beta),
         args.seed, fmt_rational(limits[e.order - 1]))
        for e in result.estimates
    ]
    _write_rows(["order", "mean", "stderr", "trials", "N", "beta", "seed", "limit"], rows, args.out)
    if result.failures:
        print(f"{result.failures} of {args.trials} trials failed in the eigensolver", file=sys.stderr)
    return EXIT_OK


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="dunkl-lln",
        description="Exact LLN moments from cumulant data, finite-N Dunkl oracles and beta-Hermite sampling.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("moments", help="limit moments m_1..m_K from a cumulant spec")
    p.add_argument("--spec", required=True, help="spec JSON path, or 'hermite'")
    p.add_argument("--theta", type=_rational)
    p.add_argument("--max-order", type=_positive_int, required=True)
    p.add_argument("--out")
    p.set_defaults(func=cmd_moments)

    p = sub.add_parser("converge", help="finite-N mixed moments against their limit")
    p.add_argument("--spec", required=True, help="'hermite', or a JSON file of coefficients of F_N / N")
    p.add_argument("--theta", type=_rational)
    p.add_argument("--lambda", dest="lam", type=_partition, required=True)
    p.add_argument("--n", type=_positive_int)
    p.add_argument("--n-range", type=_n_range)
    p.add_argument("--budget", type=_positive_int, default=DEFAULT_BUDGET)
    p.add_argument("--out")
    p.set_defaults(func=cmd_converge)

    p = sub.add_parser("verify", help="run a named property suite")
    p.add_argument("--suite", choices=SUITES, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out")
    p.add_argument("--inject-fault", choices=["binomial"], help=argparse.SUPPRESS)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("sample", help="Monte Carlo p_k statistics of the beta-Hermite ensemble")
    p.add_argument("--n", type=_positive_int)
    p.add_argument("--beta", type=_rational, default=Fraction(2))
    p.add_argument("--trials", type=int, default=500)
    p.add_argument("--orders", type=_int_list, default=(2, 4))
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out")
    p.set_defaults(func=cmd_sample)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except BudgetError as exc:
        print(f"refused: {exc}", file=sys.stderr)
        return EXIT_BUDGET


if __name__ == "__main__":
    sys.exit(main())
