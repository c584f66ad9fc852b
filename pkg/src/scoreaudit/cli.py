"""
scoreaudit (cli): Command-Line Interface for scoreaudit

This script audits second-order losses for propriety and writes a JSON report
plus one CSV file per curve.

Usage:
    1. Score a prediction against a target:
        scoreaudit score --loss bayes-ce --q-hat "dirichlet(2, 2)" --q "dirichlet(1, 1)"

    2. Search a family for propriety violations:
        scoreaudit audit --loss bayes-ce --lambda 0 --family dirichlet --k 2 --seed 7

    3. Run a counterexample construction:
        scoreaudit counterexample --case der --mu 0 --sigma 0.1

    4. Sweep the Bayesian loss over prediction peakedness:
        scoreaudit sweep --loss bayes-ce --lambda 0 --alpha 1,1 --c-grid 1:16:x2

    5. Run the invariant suite:
        scoreaudit selftest

"""

import argparse
import json
import os
import sys
from typing import Any, Dict, List, Optional

import numpy as np

from . import codec, console
from .__version__ import __version__
from .auditor import (
    AuditVerdict,
    FamilyBox,
    ProbeConfig,
    bayes_peakedness_sweep,
    classif_counterexample_i,
    classif_counterexample_ii,
    concavity_probe,
    der_lambda_sweep,
    der_proposition_demo,
    order_sensitivity_probe,
    propriety_search,
    regress_counterexample_i,
    regress_counterexample_ii,
    revalidate,
    strictness_impossibility,
)
from .config import config
from .constants import (
    COUNTEREXAMPLE_CASES,
    DEFAULT_ABS_TOL,
    DEFAULT_LAMBDA_GRID,
    DEFAULT_MARGIN_FACTOR,
    DEFAULT_OUTPUT_PREFIX,
    DEFAULT_RANDOM_PAIRS,
    SECOND_ORDER_FAMILY_NAMES,
    get_default_mc_samples,
)
from .exceptions import (
    ConfigurationException,
    EvaluationException,
    InvalidArgumentException,
)
from .losses import LOSS_NAMES, SecondOrderLoss, get_loss
from .messages import (
    CONFIG_FILE_ERROR,
    GRID_SYNTAX_ERROR,
    MISSING_OPTION_ERROR,
    SEED_REQUIRED_ERROR,
    SELFTEST_FAILED,
    SELFTEST_SUCCESSFUL,
    SWEEP_LOSS_ERROR,
    UNKNOWN_CONFIG_KEY,
)
from .report import Report, render_curves, write_report
from .scoring import METHODS, s2, score_gap
from .selftest import run_checks

EXIT_SELFTEST_FAILED = 1
EXIT_CONFIGURATION_ERROR = 2
EXIT_EVALUATION_ERROR = 3

# option -> fallback applied after the config file
DEFAULTS: Dict[str, Any] = {
    "output": DEFAULT_OUTPUT_PREFIX,
    "method": "auto",
    "abs_tol": DEFAULT_ABS_TOL,
    "margin_factor": DEFAULT_MARGIN_FACTOR,
    "lambda_grid": DEFAULT_LAMBDA_GRID,
    "random_pairs": DEFAULT_RANDOM_PAIRS,
    "k": 2,
    "side": "left",
}


def _add_common_arguments(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--config", type=str, help="JSON file with option values")
    parser.add_argument("--seed", type=int, help="Seed of every random draw")
    parser.add_argument(
        "--output", type=str, help=f"Output path prefix (default: {DEFAULT_OUTPUT_PREFIX})"
    )
    parser.add_argument(
        "--force", action="store_true", default=None, help="Overwrite existing reports"
    )
    parser.add_argument("--method", choices=METHODS, help="Evaluation method (default: auto)")
    parser.add_argument("--nodes", type=int, help="Quadrature node count")
    parser.add_argument("--mc-samples", type=int, help="Monte-Carlo sample count")
    parser.add_argument("--abs-tol", type=float, help="Absolute certification tolerance")
    parser.add_argument("--margin-factor", type=float, help="Standard errors in the margin")
    parser.add_argument("--lambda-grid", type=int, help="Points of the mixing-weight grid")
    parser.add_argument("--random-pairs", type=int, help="Random pairs per propriety search")

    output_group = parser.add_mutually_exclusive_group(required=False)
    # --quiet option is optional
    output_group.add_argument(
        "-q",
        "--quiet",
        action="store_true",
        help="Ignore stdout and stderr",
        default=False,
    )

    # --verbose option is optional
    output_group.add_argument(
        "-v",
        "--verbose",
        action="store_true",
        help="Verbose output",
        default=False,
    )


def _add_loss_arguments(parser: argparse.ArgumentParser) -> None:
    parser.add_argument(
        "--loss", type=str, help=f"Loss name ({', '.join(LOSS_NAMES)}) or descriptor"
    )
    parser.add_argument(
        "--lambda", dest="lam", type=float, help="Regularisation weight of the loss"
    )


def get_args() -> argparse.Namespace:
    """
    Parse CLI arguments.

    Options default to None so that values from ``--config`` can fill them in
    without overriding flags given on the command line.

    Returns:
        argparse.Namespace: The parsed CLI arguments.

    Raises:
        argparse.ArgumentError: If any argument error.
    """
    parser = argparse.ArgumentParser(
        description="Audit second-order losses for propriety."
    )

    # version
    parser.add_argument(
        "-V", "--version", action="version", version=f"%(prog)s {__version__}"
    )

    commands = parser.add_subparsers(dest="command", required=True)

    score = commands.add_parser("score", help="Evaluate S2(q_hat, q) and the propriety gap")
    _add_loss_arguments(score)
    score.add_argument("--q-hat", type=str, help="Second-order prediction descriptor")
    score.add_argument("--q", type=str, help="Second-order target descriptor")

    audit = commands.add_parser("audit", help="Probe a loss for propriety violations")
    _add_loss_arguments(audit)
    audit.add_argument("--family", choices=SECOND_ORDER_FAMILY_NAMES, help="Probe family")
    audit.add_argument("--k", type=int, help="Number of classes (default: 2)")

    counterexample = commands.add_parser(
        "counterexample", help="Run a counterexample construction"
    )
    _add_loss_arguments(counterexample)
    counterexample.add_argument("--case", choices=COUNTEREXAMPLE_CASES, help="Construction")
    counterexample.add_argument("--y", type=int, help="Distinguished class (classif-ii)")
    counterexample.add_argument("--q", type=str, help="Target descriptor (classif-ii)")
    counterexample.add_argument(
        "--q-bar", type=str, help="Competing prediction descriptor (classif-ii, regress-ii)"
    )
    counterexample.add_argument("--p-tilde", type=str, help="First-order descriptor (regress-ii)")
    counterexample.add_argument("--mu", type=float, help="Centre (regress-ii, der)")
    counterexample.add_argument("--sigma", type=float, help="Point-prediction scale (der)")
    counterexample.add_argument("--delta", type=float, help="Neighbourhood half-width (regress-ii)")
    counterexample.add_argument("--side", choices=("left", "right"), help="Mirror (regress-i)")

    sweep = commands.add_parser("sweep", help="Sweep a Bayesian loss over peakedness")
    _add_loss_arguments(sweep)
    sweep.add_argument("--alpha", type=str, help="Target Dirichlet parameters, e.g. 1,1")
    sweep.add_argument("--c-grid", type=str, help="Scale grid: a,b,c | start:stop:logN | start:stop:xF")

    selftest = commands.add_parser("selftest", help="Run the invariant suite")

    for command_parser in (score, audit, counterexample, sweep, selftest):
        _add_common_arguments(command_parser)

    # parsing args
    args = parser.parse_args()

    return args


def _load_config_file(path: str) -> Dict[str, Any]:
    """
    Reads a JSON run configuration.

    Args:
        path (str): The path of the JSON document.

    Returns:
        Dict[str, Any]: Option values keyed by option name.

    Raises:
        ConfigurationException: If the file cannot be read or is not an object.
    """
    abs_path = os.path.abspath(path)
    console.verbose(f"reading run configuration from {abs_path}")
    try:
        with open(abs_path, encoding="utf-8") as config_file:
            values = json.load(config_file)
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigurationException(CONFIG_FILE_ERROR % (path, exc)) from exc
    if not isinstance(values, dict):
        raise ConfigurationException(CONFIG_FILE_ERROR % (path, "expected a JSON object"))
    return values


def resolve_options(args: argparse.Namespace) -> argparse.Namespace:
    """
    Merge ``--config`` values and defaults into the parsed arguments.

    Flags given on the command line win over the file; the file wins over the
    defaults. File keys mirror the long flag names (``mc-samples`` or
    ``mc_samples``; ``lambda`` for ``--lambda``).

    Args:
        args (argparse.Namespace): The parsed arguments.

    Returns:
        argparse.Namespace: The same namespace, completed.

    Raises:
        ConfigurationException: On unreadable files or unknown keys.
    """
    if args.config:
        for key, value in _load_config_file(args.config).items():
            name = "lam" if key == "lambda" else key.replace("-", "_")
            if not hasattr(args, name) or name in ("command", "config"):
                raise ConfigurationException(
                    CONFIG_FILE_ERROR % (args.config, UNKNOWN_CONFIG_KEY % (key, args.command))
                )
            if getattr(args, name) is None:
                setattr(args, name, value)

    for name, value in DEFAULTS.items():
        if getattr(args, name, None) is None and hasattr(args, name):
            setattr(args, name, value)
    if args.force is None:
        args.force = False
    if args.method == "mc" and args.seed is None:
        raise ConfigurationException(SEED_REQUIRED_ERROR)
    return args


def probe_config(args: argparse.Namespace) -> ProbeConfig:
    """Build the probe configuration from resolved arguments."""
    return ProbeConfig(
        seed=args.seed if args.seed is not None else 0,
        n_random_pairs=args.random_pairs,
        mc_samples=args.mc_samples or get_default_mc_samples(),
        lambda_grid=args.lambda_grid,
        abs_tol=args.abs_tol,
        margin_factor=args.margin_factor,
        method=args.method,
        nodes=args.nodes,
    )


def _require(args: argparse.Namespace, name: str) -> Any:
    value = getattr(args, name, None)
    if value is None:
        raise ConfigurationException(MISSING_OPTION_ERROR % (args.command, name.replace("_", "-")))
    return value


def resolve_loss(name: str, lam: Optional[float] = None) -> SecondOrderLoss:
    """
    Resolve a loss from a registry name or a descriptor.

    Args:
        name (str): A name from ``LOSS_NAMES`` or a descriptor such as
            ``affine(3.7, poly(0, 0, 1), der(1.0))``.
        lam (Optional[float]): Regularisation weight for registry names.

    Returns:
        SecondOrderLoss: The loss.
    """
    if name in LOSS_NAMES:
        return get_loss(name, lam)
    return codec.parse_loss(name)


def _geometric(start: float, stop: float, factor: float, limit: Optional[int] = None) -> List[float]:
    """``start * factor**j`` for every ``j >= 0`` that stays within ``stop``."""
    if not (0 < start <= stop and factor > 1):
        raise ValueError(f"{start}:{stop}")
    count = int(np.floor(np.log(stop / start) / np.log(factor) + 1e-9)) + 1
    if limit is not None:
        count = min(count, limit)
    return (start * factor ** np.arange(count)).tolist()


def parse_grid(text: str) -> List[float]:
    """
    Parse a numeric grid.

    Accepts ``a,b,c``, ``start:stop:logN`` (octave grid ``start * 2**j`` up to
    ``stop``, at most ``N`` points, so ``1:16:log16`` is ``1, 2, 4, 8, 16``)
    and ``start:stop:xF`` (multiply by ``F`` from ``start`` up to ``stop``).

    Args:
        text (str): The grid text.

    Returns:
        List[float]: The grid values.

    Raises:
        ConfigurationException: If the text is malformed.
    """
    try:
        if ":" not in text:
            return [float(part) for part in text.split(",")]
        start_text, stop_text, spec = text.split(":")
        start, stop = float(start_text), float(stop_text)
        if spec.startswith("log"):
            limit = int(spec[3:])
            if limit < 1:
                raise ValueError(text)
            return _geometric(start, stop, 2.0, limit)
        if spec.startswith("x"):
            return _geometric(start, stop, float(spec[1:]))
    except ValueError:
        pass
    raise ConfigurationException(GRID_SYNTAX_ERROR % text)


def _show_verdict(verdict: AuditVerdict) -> None:
    console.info(verdict.summary())
    if verdict.witness is not None:
        console.info(f"  q_hat: {codec.dump(verdict.witness.q_hat)}")
        console.info(f"  q:     {codec.dump(verdict.witness.q)}")
    for note in verdict.notes:
        console.verbose(f"  note: {note}")


def _record(report: Report, verdict: AuditVerdict) -> None:
    _show_verdict(verdict)
    report.add_verdict(verdict)


def _handle_score(args: argparse.Namespace, report: Report) -> None:
    loss = resolve_loss(_require(args, "loss"), args.lam)
    q_hat = codec.parse_second_order(_require(args, "q_hat"))
    q = codec.parse_second_order(_require(args, "q"))
    options = (args.method, args.nodes, args.mc_samples)

    value = s2(loss, q_hat, q, *options, seed=args.seed)
    gap = score_gap(loss, q_hat, q, *options, seed=args.seed)
    report.add_score("S2(q_hat, q)", value)
    report.add_gap("S2(q_hat, q) - S2(q, q)", gap)
    console.info(f"S2(q_hat, q) = {value.value:.12g} +/- {value.stderr:.2g} [{value.method}]")
    console.info(f"gap          = {gap.gap:.12g} +/- {gap.stderr:.2g}")


def _handle_audit(args: argparse.Namespace, report: Report) -> None:
    cfg = probe_config(args)
    loss = resolve_loss(_require(args, "loss"), args.lam)
    family = FamilyBox.default(_require(args, "family"), args.k)

    search = propriety_search(loss, family, cfg)
    if search.violated and search.witness is not None:
        search.notes.append(f"Witness re-validated: {revalidate(search, cfg)}.")
    _record(report, search)
    _record(report, strictness_impossibility(loss, family.task, cfg))

    if search.witness is not None:
        witness = search.witness
        _record(report, order_sensitivity_probe(loss, witness.q, witness.q_hat, cfg))
        _record(report, concavity_probe(loss, witness.q, witness.q_hat, cfg))


def _handle_counterexample(args: argparse.Namespace, report: Report) -> None:
    cfg = probe_config(args)
    case = _require(args, "case")

    if case == "der":
        mu, sigma = args.mu if args.mu is not None else 0.0, _require(args, "sigma")
        verdicts = (
            [der_proposition_demo(mu, sigma, cfg, args.lam)] if args.lam is not None
            else der_lambda_sweep(mu, sigma, cfg)
        )
        for verdict in verdicts:
            _record(report, verdict)
        return

    loss = resolve_loss(_require(args, "loss"), args.lam)
    if case == "classif-i":
        verdict = classif_counterexample_i(loss, cfg)
    elif case == "classif-ii":
        verdict = classif_counterexample_ii(
            loss,
            _require(args, "y"),
            codec.parse_second_order(_require(args, "q")),
            codec.parse_second_order(_require(args, "q_bar")),
            cfg,
        )
    elif case == "regress-i":
        verdict = regress_counterexample_i(loss, cfg, side=args.side)
    else:
        verdict = regress_counterexample_ii(
            loss,
            _require(args, "mu"),
            codec.parse_first_order(_require(args, "p_tilde")),
            codec.parse_second_order(_require(args, "q_bar")),
            _require(args, "delta"),
            cfg,
        )
    _record(report, verdict)


def _handle_sweep(args: argparse.Namespace, report: Report) -> None:
    name = _require(args, "loss")
    if name not in ("bayes-ce", "bayes-brier"):
        raise ConfigurationException(SWEEP_LOSS_ERROR % name)
    alpha = parse_grid(_require(args, "alpha"))
    c_grid = parse_grid(_require(args, "c_grid"))
    lam = args.lam if args.lam is not None else 0.0

    table = bayes_peakedness_sweep(alpha, c_grid, lam, kind=name.split("-", 1)[1])
    curve_id = report.add_curve("peakedness", table)
    for c, value in table.rows:
        console.info(f"c = {c:<10.6g} S2 = {value:.12g}")
    console.verbose(f"sweep stored as curve '{curve_id}'")


def _handle_selftest(args: argparse.Namespace, report: Report) -> bool:
    success, errors = run_checks(probe_config(args))
    report.config["selftest_errors"] = errors
    if success:
        console.success(SELFTEST_SUCCESSFUL)
        return True

    console.error(SELFTEST_FAILED % len(errors))
    for error in errors:
        console.error(f"- {error}")
    return False


HANDLERS = {
    "score": _handle_score,
    "audit": _handle_audit,
    "counterexample": _handle_counterexample,
    "sweep": _handle_sweep,
}


def _run_config(args: argparse.Namespace) -> Dict[str, Any]:
    skip = ("command", "config", "quiet", "verbose", "force")
    return {
        ("lambda" if name == "lam" else name): value
        for name, value in sorted(vars(args).items())
        if name not in skip and value is not None
    }


def run(args: argparse.Namespace) -> int:
    """
    Execute one command and write its report.

    Args:
        args (argparse.Namespace): The parsed arguments.

    Returns:
        int: The exit status.
    """
    args = resolve_options(args)
    report = Report(args.command, args.seed, _run_config(args))

    console.verbose(f"running command {args.command}")
    if args.command == "selftest":
        status = 0 if _handle_selftest(args, report) else EXIT_SELFTEST_FAILED
    else:
        HANDLERS[args.command](args, report)
        status = 0

    write_report(report, args.output, force=args.force)
    render_curves(report, args.output, force=args.force)
    return status


def main() -> None:
    """
    Main function for cli to audit second-order losses.
    """
    args = get_args()

    config.configure(quiet=args.quiet, verbose=args.verbose)

    console.verbose("starting scoreaudit")
    try:
        status = run(args)
    except (ConfigurationException, InvalidArgumentException) as ex:
        console.error(f"{ex}")
        sys.exit(EXIT_CONFIGURATION_ERROR)

    except EvaluationException as ex:
        console.error(f"{ex}")
        sys.exit(EXIT_EVALUATION_ERROR)

    if status:
        sys.exit(status)


__all__ = ["main", "parse_grid", "resolve_loss", "resolve_options", "run"]


if __name__ == "__main__":
    main()  # pragma: no cover
