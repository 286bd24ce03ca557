"""
Command-line interface: ``lipmin <command> [options]``.

Exit codes: 0 success or passing verification, 1 failed verification, 2 usage error
(bad arguments, invalid parameters or any toolkit error).
"""

from __future__ import annotations

import argparse
import json
import sys
from collections.abc import Callable, Sequence
from dataclasses import asdict
from pathlib import Path
from typing import Any

import numpy as np
from pydantic import ValidationError

from src.azema.supermartingale import sample_azema
from src.core.config import settings
from src.core.exceptions import LipminError
from src.core.logging import get_logger
from src.excursions.extract import batch_features, extract_generic_excursions
from src.harness.registry import SUITES, moment_outcome
from src.harness.report import CheckRecord, Report
from src.harness.stats import moment_check
from src.harness.suites import run_suite
from src.laws.brownian import (
    FeatureKind,
    LawParams,
    conditional_density_gamma,
    density_frak_T,
    density_last_exit,
    feature_density,
    feature_laplace,
    joint_density_tau_gamma,
    joint_density_tau_u,
    laplace_last_exit,
    levy_measure_density,
    mean_features,
    psi_joint_laplace,
    second_moment_zeta,
    straddle_laplace,
)
from src.minorant.engine import boundary_buffer, compute_minorant, extract_contact_set
from src.paths.io import read_path_json, write_path_csv, write_path_json
from src.paths.rng import RngStream, split
from src.paths.simulate import simulate_brownian_two_sided, simulate_compound_poisson
from src.paths.types import BrownianWithDrift, CompoundPoissonDrift, JumpLaw
from src.sampler.excursion import sample_features_direct_batch, sample_generic_excursion

logger = get_logger(__name__)

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_USAGE = 2

AZEMA_DT = 1e-3


class UsageError(Exception):
    """Arguments that parse but cannot be acted on."""


def _seed(value: int | None) -> int:
    if value is not None:
        return value
    if settings.seed is not None:
        return settings.seed
    raise UsageError("no seed given: pass --seed or set LIPMIN_SEED")


def _floats(text: str) -> list[float]:
    try:
        return [float(x) for x in text.split(",") if x.strip()]
    except ValueError as e:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from e


def _emit(payload: str, out: Path | None) -> None:
    if out is None:
        sys.stdout.write(payload)
    else:
        out.parent.mkdir(parents=True, exist_ok=True)
        out.write_text(payload, encoding="utf-8")
        logger.info("Wrote %s", out)


# --- simulate ---


def cmd_simulate(args: argparse.Namespace) -> int:
    """Simulate a two-sided path and write it as JSON or CSV (by file suffix)."""
    rng = RngStream(_seed(args.seed))
    window = (args.tmin, args.tmax)
    if args.process == "brownian":
        spec = BrownianWithDrift(beta=args.beta, sigma=args.sigma)
        path = simulate_brownian_two_sided(spec, window, args.dt, rng)
    else:
        jump = JumpLaw(name=args.jump_law, params=json.loads(args.jump_params))
        cp_spec = CompoundPoissonDrift(d=args.drift, rate=args.rate, jump=jump)
        path = simulate_compound_poisson(cp_spec, window, rng)
    if args.out.suffix.lower() == ".csv":
        write_path_csv(path, args.out)
    else:
        write_path_json(path, args.out)
    logger.info("Simulated %s path on [%s, %s] to %s", args.process, *window, args.out)
    return EXIT_OK


# --- minorant ---


def cmd_minorant(args: argparse.Namespace) -> int:
    """Minorant and contact set of a stored path."""
    path = read_path_json(args.in_path)
    result = compute_minorant(path, args.alpha)
    contacts = extract_contact_set(path, result, tol=args.tol)
    payload = result.to_dict()
    payload["contacts"] = contacts.indices.tolist()
    payload["G"] = contacts.G
    payload["D"] = contacts.D
    payload["tol"] = contacts.tol
    _emit(json.dumps(payload) + "\n", args.out)
    return EXIT_OK


# --- excursions ---


def cmd_excursions(args: argparse.Namespace) -> int:
    """Generic excursions of a stored path as a CSV feature table."""
    path = read_path_json(args.in_path)
    result = compute_minorant(path, args.alpha)
    contacts = extract_contact_set(path, result, tol=args.tol)
    buffer = boundary_buffer(args.alpha) if args.buffer is None else args.buffer
    batch = extract_generic_excursions(path, contacts, buffer=buffer)
    table = batch_features(batch, args.alpha)
    table.write_csv(args.out)
    logger.info("Wrote %d excursions to %s", len(table), args.out)
    return EXIT_OK


# --- sample-excursion ---


def cmd_sample_excursion(args: argparse.Namespace) -> int:
    """Directly sampled generic excursions: feature rows, or full paths as JSON."""
    params = LawParams(alpha=args.alpha, beta=args.beta)
    rng = RngStream(_seed(args.seed))
    if args.mode == "features":
        table = sample_features_direct_batch(params, args.n, rng)
        table.write_csv(args.out)
        logger.info("Wrote %d sampled feature rows to %s", len(table), args.out)
        return EXIT_OK
    paths = []
    for gen in split(rng, args.n):
        exc = sample_generic_excursion(params, args.dt, gen)
        paths.append(
            {
                "dt": exc.path.dt,
                "values": exc.path.values.tolist(),
                "features": asdict(exc.features),
            }
        )
    _emit(json.dumps(paths) + "\n", args.out)
    return EXIT_OK


# --- laws eval ---


def _psi(params: LawParams, at: float | None, at2: float | None, rho: list[float]) -> float:
    if len(rho) != 4:
        raise UsageError("psi needs --rho r1,r2,r3,r4")
    return psi_joint_laplace(params, *rho)


def _needs(value: float | None, flag: str) -> float:
    if value is None:
        raise UsageError(f"this quantity needs {flag}")
    return value


def _density(kind: FeatureKind) -> Callable[..., float]:
    return lambda p, at, at2, rho: feature_density(kind, p, _needs(at, "--at"))


def _laplace(kind: FeatureKind) -> Callable[..., float]:
    return lambda p, at, at2, rho: feature_laplace(kind, p, _needs(at, "--at"))


QUANTITIES: dict[str, Callable[[LawParams, float | None, float | None, list[float]], float]] = {
    "zeta-density": _density(FeatureKind.ZETA),
    "L-density": _density(FeatureKind.L_PEAK),
    "zeta-minus-L-density": _density(FeatureKind.ZETA_MINUS_L),
    "zeta-laplace": _laplace(FeatureKind.ZETA),
    "L-laplace": _laplace(FeatureKind.L_PEAK),
    "zeta-minus-L-laplace": _laplace(FeatureKind.ZETA_MINUS_L),
    "w-laplace": _laplace(FeatureKind.W_ZETA),
    "psi": _psi,
    "tau-gamma": lambda p, at, at2, rho: joint_density_tau_gamma(
        p, _needs(at, "--at"), _needs(at2, "--at2")
    ),
    "tau-u": lambda p, at, at2, rho: joint_density_tau_u(
        p, _needs(at, "--at"), _needs(at2, "--at2")
    ),
    "gamma-given-tau": lambda p, at, at2, rho: conditional_density_gamma(
        p, _needs(at, "--at"), _needs(at2, "--at2")
    ),
    "tau-density": lambda p, at, at2, rho: density_frak_T(p, _needs(at, "--at")),
    "last-exit-density": lambda p, at, at2, rho: density_last_exit(p, _needs(at, "--at")),
    "last-exit-laplace": lambda p, at, at2, rho: laplace_last_exit(p, _needs(at, "--at")),
    "straddle-laplace": lambda p, at, at2, rho: straddle_laplace(p, _needs(at, "--at")),
    "levy-density": lambda p, at, at2, rho: levy_measure_density(p.alpha, _needs(at, "--at")),
    "mean-zeta": lambda p, at, at2, rho: mean_features(p).zeta,
    "mean-L": lambda p, at, at2, rho: mean_features(p).L,
    "mean-zeta-minus-L": lambda p, at, at2, rho: mean_features(p).zeta_minus_L,
    "mean-w": lambda p, at, at2, rho: mean_features(p).w_zeta,
    "second-moment-zeta": lambda p, at, at2, rho: second_moment_zeta(p),
}


def evaluate_quantity(
    quantity: str,
    alpha: float,
    beta: float = 0.0,
    at: float | None = None,
    at2: float | None = None,
    rho: list[float] | None = None,
) -> float:
    """Evaluate one named closed-form quantity.

    Raises:
        UsageError: for an unknown quantity or a missing argument
        LipminError: when the law rejects the arguments
    """
    if quantity not in QUANTITIES:
        raise UsageError(f"unknown quantity {quantity!r}")
    params = LawParams(alpha=alpha, beta=beta)
    return float(QUANTITIES[quantity](params, at, at2, rho or []))


def _batch_value(req: dict[str, Any]) -> float:
    try:
        quantity, alpha = req["quantity"], req["alpha"]
    except KeyError as e:
        raise UsageError(f"batch request {req} lacks {e}") from e
    return evaluate_quantity(
        quantity, alpha, req.get("beta", 0.0), req.get("at"), req.get("at2"), req.get("rho")
    )


def cmd_laws_eval(args: argparse.Namespace) -> int:
    """Print a closed-form quantity, or a JSON list of them in batch mode."""
    if args.batch is not None:
        requests: list[dict[str, Any]] = json.loads(args.batch.read_text())
        results = [{**req, "value": _batch_value(req)} for req in requests]
        _emit(json.dumps(results, indent=2) + "\n", args.out)
        return EXIT_OK
    if args.quantity is None or args.alpha is None:
        raise UsageError("laws eval needs --quantity and --alpha (or --batch)")
    value = evaluate_quantity(args.quantity, args.alpha, args.beta, args.at, args.at2, args.rho)
    _emit(f"{value!r}\n", args.out)
    return EXIT_OK


# --- azema ---


def azema_report(
    params: LawParams, t_points: list[float], n: int, seed: int, dt: float = AZEMA_DT
) -> Report:
    """Mean Z_t against the empirical P(D > t) at each t, as a report."""
    samples = sample_azema(params, t_points, n, dt, RngStream(seed).named("azema"))
    records = []
    for j, t in enumerate(samples.t):
        diff = samples.Z[:, j] - samples.survived[:, j]
        outcome = moment_outcome(
            moment_check(diff, 0.0),
            f"mean Z={np.mean(samples.Z[:, j]):.4f}, "
            f"P(D>t)={np.mean(samples.survived[:, j]):.4f}",
        )
        records.append(
            CheckRecord(name=f"mean_survival_t={t:g}", seed=seed, **outcome._asdict())
        )
    return Report(suite="azema", n=n, seed=seed, checks=records)


def cmd_azema(args: argparse.Namespace) -> int:
    params = LawParams(alpha=args.alpha, beta=args.beta)
    report = azema_report(params, args.t, args.n, _seed(args.seed), args.dt)
    if args.report is not None:
        report.write(args.report)
    else:
        sys.stdout.write(report.to_json())
    return EXIT_OK if report.passed else EXIT_FAILED


# --- verify ---


def cmd_verify(args: argparse.Namespace) -> int:
    """Run a verification suite and write its JSON report."""
    report = run_suite(
        args.suite,
        args.n,
        _seed(args.seed),
        include_slow=args.include_slow,
        workers=args.workers,
        timing=args.timing,
    )
    target = args.report
    if target is None and settings.report_dir is not None:
        target = Path(settings.report_dir) / f"{args.suite}.json"
    if target is not None:
        report.write(target)
    else:
        sys.stdout.write(report.to_json())
    for record in report.failed:
        logger.error("Check %s failed: %s", record.name, record.detail)
    return EXIT_OK if report.passed else EXIT_FAILED


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="lipmin",
        description="Lipschitz minorants of Levy paths: simulation, sampling and verification",
    )
    subparsers = parser.add_subparsers(dest="command", help="Available commands")

    # --- simulate ---
    sim = subparsers.add_parser("simulate", help="Simulate a two-sided path")
    sim.add_argument(
        "--process", choices=["brownian", "compound-poisson"], default="brownian"
    )
    sim.add_argument("--beta", type=float, default=0.0, help="Brownian drift")
    sim.add_argument("--sigma", type=float, default=1.0, help="Brownian volatility")
    sim.add_argument("--drift", type=float, default=0.0, help="Compound Poisson drift d")
    sim.add_argument("--rate", type=float, default=1.0, help="Jump intensity")
    sim.add_argument("--jump-law", default="norm", help="scipy.stats name or 'constant'")
    sim.add_argument("--jump-params", default="{}", help="Jump law parameters as JSON")
    sim.add_argument("--tmin", type=float, required=True)
    sim.add_argument("--tmax", type=float, required=True)
    sim.add_argument("--dt", type=float, default=1e-3, help="Grid step (Brownian only)")
    sim.add_argument("--seed", type=int, default=None, help="Master seed (or LIPMIN_SEED)")
    sim.add_argument("--out", type=Path, required=True, help="Output .json or .csv")
    sim.set_defaults(handler=cmd_simulate)

    # --- minorant ---
    mino = subparsers.add_parser("minorant", help="Minorant and contacts of a path")
    mino.add_argument("--in", dest="in_path", type=Path, required=True, help="Path JSON")
    mino.add_argument("--alpha", type=float, required=True)
    mino.add_argument("--tol", type=float, default=None, help="Contact tolerance")
    mino.add_argument("--out", type=Path, default=None, help="Output JSON (default stdout)")
    mino.set_defaults(handler=cmd_minorant)

    # --- excursions ---
    exc = subparsers.add_parser("excursions", help="Excursion feature table of a path")
    exc.add_argument("--in", dest="in_path", type=Path, required=True, help="Path JSON")
    exc.add_argument("--alpha", type=float, required=True)
    exc.add_argument("--tol", type=float, default=None, help="Contact tolerance")
    exc.add_argument("--buffer", type=float, default=None, help="Edge buffer (time units)")
    exc.add_argument("--out", type=Path, required=True, help="Output CSV")
    exc.set_defaults(handler=cmd_excursions)

    # --- sample-excursion ---
    samp = subparsers.add_parser("sample-excursion", help="Directly sample generic excursions")
    samp.add_argument("--alpha", type=float, required=True)
    samp.add_argument("--beta", type=float, default=0.0)
    samp.add_argument("--n", type=int, default=1000)
    samp.add_argument("--mode", choices=["features", "path"], default="features")
    samp.add_argument("--dt", type=float, default=1e-3, help="Grid step in path mode")
    samp.add_argument("--seed", type=int, default=None, help="Master seed (or LIPMIN_SEED)")
    samp.add_argument("--out", type=Path, required=True, help="Output CSV or JSON")
    samp.set_defaults(handler=cmd_sample_excursion)

    # --- laws eval ---
    laws = subparsers.add_parser("laws", help="Closed-form laws")
    laws_sub = laws.add_subparsers(dest="laws_command", required=True)
    ev = laws_sub.add_parser("eval", help="Evaluate a closed-form quantity")
    ev.add_argument("--quantity", choices=sorted(QUANTITIES), default=None)
    ev.add_argument("--alpha", type=float, default=None)
    ev.add_argument("--beta", type=float, default=0.0)
    ev.add_argument("--at", type=float, default=None, help="First argument (t, x or lambda)")
    ev.add_argument("--at2", type=float, default=None, help="Second argument")
    ev.add_argument("--rho", type=_floats, default=None, help="r1,r2,r3,r4 for psi")
    ev.add_argument("--batch", type=Path, default=None, help="JSON list of requests")
    ev.add_argument("--out", type=Path, default=None)
    ev.set_defaults(handler=cmd_laws_eval)

    # --- azema ---
    az = subparsers.add_parser("azema", help="Azema supermartingale against P(D > t)")
    az.add_argument("--alpha", type=float, required=True)
    az.add_argument("--beta", type=float, default=0.0)
    az.add_argument("--n", type=int, default=10_000)
    az.add_argument("--t", type=_floats, default=[0.1, 0.5, 1.0, 2.0], help="t1,t2,...")
    az.add_argument("--dt", type=float, default=AZEMA_DT)
    az.add_argument("--seed", type=int, default=None, help="Master seed (or LIPMIN_SEED)")
    az.add_argument("--report", type=Path, default=None, help="Output report JSON")
    az.set_defaults(handler=cmd_azema)

    # --- verify ---
    ver = subparsers.add_parser("verify", help="Run a verification suite")
    ver.add_argument("--suite", choices=[*SUITES, "all"], required=True)
    ver.add_argument("--n", type=int, default=10_000, help="Base Monte Carlo size")
    ver.add_argument("--seed", type=int, default=None, help="Master seed (or LIPMIN_SEED)")
    ver.add_argument("--report", type=Path, default=None, help="Output report JSON")
    ver.add_argument("--include-slow", action="store_true", help="Also run slow checks")
    ver.add_argument("--workers", type=int, default=None, help="Worker threads")
    ver.add_argument("--timing", action="store_true", help="Record wall time")
    ver.set_defaults(handler=cmd_verify)

    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_OK if e.code in (0, None) else EXIT_USAGE

    if args.command is None:
        parser.print_help()
        return EXIT_USAGE

    try:
        return int(args.handler(args))
    except (LipminError, UsageError, ValidationError, ValueError) as e:
        logger.error("%s: %s", type(e).__name__, e)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
