"""Command-line front end.

Exit codes: 0 success, 1 verification failure, 2 usage or input error,
3 golden-file mismatch. Data goes to stdout, diagnostics to stderr.
"""

from __future__ import annotations

import csv
import json
import sys
from fractions import Fraction
from typing import Optional

import click

from toehold import beta_forms, model
from toehold.bounds.audit import ALL_CLAIMS, ClaimId, audit_range
from toehold.exact import DomainError, parse_rational, to_decimal
from toehold.model import Strategy
from toehold.simulator import SimConfig, empirical_vs_exact, run_trials
from toehold.sweep import header as sweep_header
from toehold.sweep import sweep_row

EXIT_FAILURE = 1
EXIT_USAGE = 2
EXIT_GOLDEN_MISMATCH = 3

BETA_X_GRID = (Fraction(0), Fraction(1, 7), Fraction(2, 5), Fraction(1, 2), Fraction(9, 10), Fraction(1))


def parse_range(text: str) -> tuple[int, int]:
    lo, sep, hi = text.partition("..")
    try:
        a, b = int(lo), int(hi if sep else lo)
    except ValueError:
        raise click.BadParameter(f"expected A..B, got {text!r}") from None
    if a < 1 or a > b:
        raise click.BadParameter(f"need 1 <= A <= B, got {text!r}")
    return a, b


def _emit(line: str) -> None:
    sys.stdout.write(line + "\n")


@click.group()
def main() -> None:
    """Exact equilibria, identity checks, bound audits and simulations for the toehold game."""


@main.command()
@click.option("--n", "n_single", type=int, help="Single n.")
@click.option("--n-range", "n_range", help="Inclusive range A..B.")
@click.option("--format", "fmt", type=click.Choice(["json", "csv"]), default="json", show_default=True)
@click.option("--digits", type=int, default=6, show_default=True, help="Decimal places in CSV output.")
def params(n_single: Optional[int], n_range: Optional[str], fmt: str, digits: int) -> None:
    """Equilibrium parameters for each n."""
    if (n_single is None) == (n_range is None):
        raise click.UsageError("give exactly one of --n or --n-range")
    if n_single is not None:
        if n_single < 1:
            raise click.BadParameter("n must be >= 1", param_hint="--n")
        lo = hi = n_single
    else:
        lo, hi = parse_range(n_range)
    if fmt == "csv" and digits < 1:
        raise click.BadParameter("digits must be >= 1", param_hint="--digits")
    if fmt == "json":
        for n in range(lo, hi + 1):
            _emit(json.dumps(model.model_point(n).to_json_dict()))
        return
    writer = csv.writer(sys.stdout, lineterminator="\n")
    writer.writerow(["n", "sigma", "x0", "p0", "x1", "p1", "profit", "p1_minus_p0", "x1_minus_x0"])
    for n in range(lo, hi + 1):
        writer.writerow(csv_row(model.model_point(n), digits))


def csv_row(point: model.ModelPoint, digits: int) -> list[str]:
    values = [
        point.sigma,
        point.price_no_toehold,
        point.takeover_prob_no_toehold,
        point.price_toehold,
        point.takeover_prob_toehold,
        point.expected_profit,
        point.p1_minus_p0,
        point.x1_minus_x0,
    ]
    return [str(point.n)] + [to_decimal(v, digits) for v in values]


GOLDEN_N1 = {"sigma": "2/3", "x0": "4/9", "p0": "20/27", "x1": "2/3", "p1": "8/9", "profit": "8/9"}


def identity_suites(n_max: int, beta_max: int) -> list[dict]:
    """Every exact identity check; each entry lists the arguments that failed."""
    suites = []

    def suite(name: str, cases, ok) -> None:
        cases = list(cases)
        failures = [c for c in cases if not ok(c)]
        suites.append({"identity": name, "n_checked": len(cases), "failures": failures})

    ns = range(1, n_max + 1)
    suite("golden_n1", [1], lambda n: {k: v for k, v in model.model_point(n).to_json_dict().items() if k != "n"} == GOLDEN_N1)
    pairs = [
        ("appendix_item_1", beta_forms.analytic_price_no_toehold, model.price_no_toehold),
        ("appendix_item_2", beta_forms.analytic_takeover_prob_no_toehold, model.takeover_prob_no_toehold),
        ("appendix_item_3", beta_forms.analytic_profit, model.expected_profit),
        ("appendix_item_4", beta_forms.analytic_takeover_prob_toehold, model.takeover_prob_toehold),
        ("appendix_item_5", beta_forms.analytic_price_toehold, model.price_toehold),
    ]
    for name, analytic, summed in pairs:
        suite(name, ns, lambda n, a=analytic, s=summed: a(n) == s(n))

    def profit_equal(n: int) -> bool:
        s = model.equilibrium_sigma(n)
        target = model.expected_profit(n)
        return all(
            model.profit_curve(n, s, st) == target and model.profit_sum_route(n, s, st) == target for st in Strategy
        )

    suite("profit_equality", ns, profit_equal)
    suite(
        "indifference_no_toehold",
        ns,
        lambda n: model.indifference_gap(n, Strategy.NO_TOEHOLD, model.price_no_toehold(n), model.equilibrium_sigma(n)) == 0,
    )
    suite(
        "indifference_toehold",
        ns,
        lambda n: model.indifference_gap(n, Strategy.TOEHOLD, model.price_toehold(n), model.equilibrium_sigma(n)) == 0,
    )
    suite("derivative_root", ns, lambda n: model.profit_derivative_toehold(n, model.equilibrium_sigma(n)) == 0)
    triples = [
        [a, b, str(x)] for a in range(1, beta_max + 1) for b in range(1, beta_max + 1) for x in BETA_X_GRID
    ]
    suite("beta_equality", triples, lambda t: beta_forms.beta_tail_identity_gap(t[0], t[1], Fraction(t[2])) == 0)
    return suites


@main.command()
@click.option("--n-max", type=int, default=150, show_default=True)
@click.option("--beta-max", type=int, default=25, show_default=True)
def verify(n_max: int, beta_max: int) -> None:
    """Run every exact identity; exit 1 if any fails."""
    if n_max < 1:
        raise click.BadParameter("must be >= 1", param_hint="--n-max")
    if beta_max < 1:
        raise click.BadParameter("must be >= 1", param_hint="--beta-max")
    suites = identity_suites(n_max, beta_max)
    for s in suites:
        _emit(json.dumps(s))
    failed = [s["identity"] for s in suites if s["failures"]]
    if failed:
        click.echo(f"failed identities: {', '.join(failed)}", err=True)
        sys.exit(EXIT_FAILURE)


def parse_claims(text: str) -> list[ClaimId]:
    if text.strip().lower() == "all":
        return list(ALL_CLAIMS)
    try:
        return [ClaimId.parse(name) for name in text.split(",") if name.strip()]
    except DomainError as exc:
        raise click.BadParameter(str(exc), param_hint="--claims") from None


@main.command()
@click.option("--claims", default="all", show_default=True, help="Comma-separated claim ids, or 'all'.")
@click.option("--n-range", "n_range", default="1..100", show_default=True)
@click.option("--precision-bits", type=int, default=192, show_default=True)
@click.option("--golden", type=click.Path(dir_okay=False), default=None, help="Expected verdict file.")
@click.option("--workers", type=int, default=1, show_default=True)
def audit(claims: str, n_range: str, precision_bits: int, golden: Optional[str], workers: int) -> None:
    """Rigorous verdicts for the inequality claims, one JSON line per (claim, n)."""
    if precision_bits < 64:
        raise click.BadParameter("must be >= 64", param_hint="--precision-bits")
    lo, hi = parse_range(n_range)
    expected = None
    if golden is not None:
        try:
            with open(golden, encoding="utf-8") as fh:
                expected = fh.read()
        except OSError as exc:
            click.echo(f"cannot read golden file: {exc}", err=True)
            sys.exit(EXIT_USAGE)
    verdicts = audit_range(parse_claims(claims), lo, hi, precision_bits, workers=workers)
    text = "".join(v.to_json() + "\n" for v in verdicts)
    sys.stdout.write(text)
    if expected is not None and text != expected:
        got, want = text.splitlines(), expected.splitlines()
        for i, (a, b) in enumerate(zip(got, want)):
            if a != b:
                click.echo(f"first mismatch at line {i + 1}:\n  got  {a}\n  want {b}", err=True)
                break
        else:
            click.echo(f"line count differs: got {len(got)}, want {len(want)}", err=True)
        sys.exit(EXIT_GOLDEN_MISMATCH)


@main.command()
@click.option("--n", type=int, required=True)
@click.option("--strategy", type=click.Choice(["0", "1"]), required=True, help="0 no toehold, 1 toehold.")
@click.option("--trials", type=int, default=1_000_000, show_default=True)
@click.option("--seed", type=int, default=42, show_default=True)
@click.option("--sigma", default=None, help="Tender probability p/q; defaults to the equilibrium.")
@click.option("--workers", type=int, default=1, show_default=True)
@click.option("--compare", is_flag=True, help="Add exact targets and z-scores.")
def simulate(n: int, strategy: str, trials: int, seed: int, sigma: Optional[str], workers: int, compare: bool) -> None:
    """Seeded Monte Carlo estimate of takeover frequency and mean profit."""
    try:
        s = parse_rational(sigma) if sigma is not None else None
        config = SimConfig(n=n, strategy=Strategy(int(strategy)), trials=trials, seed=seed, sigma=s)
    except DomainError as exc:
        raise click.BadParameter(str(exc)) from None
    if compare:
        payload = empirical_vs_exact(config, workers=workers)
    else:
        payload = run_trials(config, workers=workers).to_json_dict()
    _emit(json.dumps(payload, separators=(",", ":")))


@main.command()
@click.option("--n-range", "n_range", required=True)
@click.option("--digits", type=int, default=6, show_default=True)
def sweep(n_range: str, digits: int) -> None:
    """CSV of exact values against large-n approximants."""
    lo, hi = parse_range(n_range)
    if digits < 1:
        raise click.BadParameter("must be >= 1", param_hint="--digits")
    writer = csv.writer(sys.stdout, lineterminator="\n")
    writer.writerow(sweep_header())
    for n in range(lo, hi + 1):
        writer.writerow(sweep_row(n, digits))


if __name__ == "__main__":
    main()
