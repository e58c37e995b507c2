"""Command-line front end.

One binary, subcommand style; JSON for structured reports, CSV for
scans.  Exit codes are a stable contract: 0 success, 2 input error,
3 infeasible mixing parameters, 4 verification failure.  Output files
are written atomically (temp + rename).
"""

from __future__ import annotations

import argparse
import json
import os
import sys

import numpy as np

from . import constructions, mapping, states, witnesses
from .mapping import INV_SQRT3
from .measurements import qudit_measurement, random_basis
from .models import model_from_separable

LHS_SETTINGS_PER_TRIAL = 20
SPM_SAMPLES_PER_TRIAL = 50
ENSEMBLE_SIZE = 4

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_INFEASIBLE = 3
EXIT_VERIFY = 4


def _atomic_write(path: str, text: str) -> None:
    tmp = f"{path}.tmp.{os.getpid()}"
    with open(tmp, "w", encoding="utf-8") as fh:
        fh.write(text)
    os.replace(tmp, path)


def _sig12(x: float) -> float:
    return float(f"{x:.12g}")


def _emit(text: str, out: str | None) -> None:
    if out:
        _atomic_write(out, text)
    else:
        sys.stdout.write(text if text.endswith("\n") else text + "\n")


def _parse_dims(raw: str) -> tuple[int, int]:
    try:
        a, b = raw.lower().split("x")
        return int(a), int(b)
    except ValueError:
        raise ValueError(f"--dims expects the form AxB (e.g. 3x2), got {raw!r}") from None


def cmd_analyze(args) -> int:
    rho = states.load_state(args.state)
    report = witnesses.witness_report(rho)
    rounded = {k: _sig12(v) for k, v in json.loads(report.to_json()).items()}
    _emit(json.dumps(rounded), args.out)
    return EXIT_OK


def cmd_map(args) -> int:
    rho = states.load_state(args.state)
    mode = args.mode.upper()
    if mode == "M":
        partner = mapping.bob_biased_partner(rho, args.c)
        mapped = mapping.map_m(rho, partner, args.mu)
    elif mode == "N":
        partner = mapping.alice_biased_partner(rho, args.c)
        mapped = mapping.map_n(rho, partner, args.mu)
    else:
        raise ValueError(f"--mode must be M or N, got {args.mode!r}")
    ok = mapping.feasible(args.mu, args.c)
    print(f"feasible(mu={args.mu:.12g}, c={args.c:.12g}) = {str(ok).lower()}")
    if not ok and not args.force:
        if args.mu <= INV_SQRT3:
            bound = mapping.analytic_c_max(args.mu)
            print(
                f"infeasible: c = {args.c:.12g} exceeds c_max = {bound:.12g} "
                f"at mu = {args.mu:.12g} (use --force to map anyway)",
                file=sys.stderr,
            )
        else:
            print(
                f"infeasible: mu = {args.mu:.12g} > 1/sqrt(3) admits no c "
                f"(use --force to map anyway)",
                file=sys.stderr,
            )
        return EXIT_INFEASIBLE
    _atomic_write(args.out, states.state_to_json(mapped))
    return EXIT_OK


def cmd_region(args) -> int:
    points = mapping.region_scan(args.grid, args.tol)
    _emit(mapping.region_to_csv(points), args.out)
    return EXIT_OK


def _sample_params(rng: np.random.Generator) -> tuple[float, float]:
    mu = float(rng.uniform(0.0, INV_SQRT3))
    c = float(rng.uniform(0.0, 1.0)) * mapping.analytic_c_max(mu)
    return mu, c


def _verify_lhs(dims, trials, seed, fixed) -> float:
    d_a, d_b = dims
    if d_b != 2:
        raise ValueError(f"hidden-state verification needs AxB with B=2, got {d_a}x{d_b}")
    rng = np.random.default_rng(seed)
    worst = 0.0
    for trial in range(trials):
        tau, ensemble = states.random_separable(d_a, 2, ENSEMBLE_SIZE, seed + 1000 + trial)
        model_tau = model_from_separable(ensemble)
        mu, c = fixed if fixed else _sample_params(rng)
        model_prime = constructions.bob_biased_prime_model(model_tau, c)
        settings = [
            qudit_measurement(random_basis(d_a, rng))
            for _ in range(LHS_SETTINGS_PER_TRIAL)
        ]
        cert = constructions.lhs_certificate(model_tau, model_prime, mu, settings)
        rho = mapping.map_m(tau, mapping.bob_biased_partner(tau, c), mu)
        worst = max(worst, constructions.verify_lhs_identity(rho, cert, settings))
    return worst


def _verify_spm(dims, trials, seed, fixed) -> float:
    d_a, d_b = dims
    if d_a != 2:
        raise ValueError(f"separable verification needs AxB with A=2, got {d_a}x{d_b}")
    rng = np.random.default_rng(seed)
    worst = 0.0
    for trial in range(trials):
        rho, ensemble = states.random_separable(2, d_b, ENSEMBLE_SIZE, seed + 2000 + trial)
        model_rho = model_from_separable(ensemble)
        mu, c = fixed if fixed else _sample_params(rng)
        model_prime = constructions.alice_biased_prime_model(model_rho, c)
        cert = constructions.spm_certificate(model_rho, model_prime, mu)
        sigma = mapping.map_n(rho, mapping.alice_biased_partner(rho, c), mu)
        worst = max(
            worst,
            constructions.verify_spm_identity(
                sigma, cert, SPM_SAMPLES_PER_TRIAL, seed + 3000 + trial
            ),
        )
    return worst


def cmd_verify(args) -> int:
    dims = _parse_dims(args.dims)
    if dims[0] not in (2, 3, 4) or dims[1] not in (2, 3, 4):
        raise ValueError(f"--dims subsystems must be in 2..4, got {args.dims}")
    fixed = None
    if (args.mu is None) != (args.c is None):
        raise ValueError("--mu and --c must be given together")
    if args.mu is not None:
        fixed = (args.mu, args.c)
        if not mapping.feasible(*fixed):
            # Demonstrate the failure constructively before bailing out.
            base = constructions.vertex_witness_model(dims[0])
            prime = constructions.bob_biased_prime_model(base, args.c)
            settings = [qudit_measurement(np.eye(dims[0]))]
            try:
                constructions.lhs_certificate(base, prime, args.mu, settings)
            except constructions.UnphysicalHiddenStateError as exc:
                print(f"infeasible parameters: {exc}", file=sys.stderr)
                return EXIT_VERIFY
            print(
                "infeasible parameters (no vertex witness found)", file=sys.stderr
            )
            return EXIT_VERIFY
    try:
        if args.target == "lhs":
            residual = _verify_lhs(dims, args.trials, args.seed, fixed)
        else:
            residual = _verify_spm(dims, args.trials, args.seed, fixed)
    except constructions.UnphysicalHiddenStateError as exc:
        print(f"verification failed: {exc}", file=sys.stderr)
        return EXIT_VERIFY
    passed = bool(residual <= args.tol)
    report = {
        "target": args.target,
        "dims": list(dims),
        "trials": args.trials,
        "seed": args.seed,
        "tol": _sig12(args.tol),
        "max_residual": _sig12(float(residual)),
        "pass": passed,
    }
    _emit(json.dumps(report), args.out)
    return EXIT_OK if passed else EXIT_VERIFY


def cmd_demo_werner(args) -> int:
    if args.grid < 2:
        raise ValueError(f"--grid must be >= 2, got {args.grid}")
    rows = [
        "p,negativity_sigma,f3_tau,chsh_tau,steerable_rho_oracle,"
        "impl_steerable_nonlocal,impl_entangled_steerable"
    ]
    for i in range(args.grid):
        p = i / (args.grid - 1)
        tau = states.werner(p)
        sigma = mapping.map_n(tau, mapping.alice_biased_partner(tau, 0.0), INV_SQRT3)
        neg = witnesses.negativity(sigma)
        f3 = witnesses.f3_steering(tau)
        chsh = witnesses.chsh_horodecki(tau)
        steer = witnesses.werner_steerable_oracle(p * INV_SQRT3)
        impl_nonlocal = (not steer) or chsh > witnesses.CHSH_THRESHOLD
        impl_steer = neg <= 0.0 or f3 > witnesses.F3_THRESHOLD
        rows.append(
            f"{p:.12g},{neg:.12g},{f3:.12g},{chsh:.12g},"
            f"{str(steer).lower()},{str(impl_nonlocal).lower()},{str(impl_steer).lower()}"
        )
    _emit("\n".join(rows) + "\n", args.out)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="steermap",
        description="Mixing maps and model constructions linking nonlocality, "
        "steering and entanglement witnesses on bipartite states.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("analyze", help="run all applicable witnesses on a state")
    p.add_argument("--state", required=True, help="input state JSON file")
    p.add_argument("--out", help="output JSON file (default stdout)")
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("map", help="apply a mixing map with a biased product partner")
    p.add_argument("--state", required=True, help="input state JSON file")
    p.add_argument("--mode", required=True, help="M (qudit-qubit) or N (qubit-qudit)")
    p.add_argument("--mu", type=float, required=True, help="mixing visibility in [0,1]")
    p.add_argument("--c", type=float, default=0.0, help="partner z-bias in [0,1]")
    p.add_argument("--out", required=True, help="output state JSON file")
    p.add_argument("--force", action="store_true", help="map even if (mu, c) infeasible")
    p.set_defaults(func=cmd_map)

    p = sub.add_parser("region", help="scan the feasible (mu, c) boundary to CSV")
    p.add_argument("--grid", type=int, default=200, help="number of mu grid points")
    p.add_argument("--tol", type=float, default=1e-10, help="bisection tolerance")
    p.add_argument("--out", help="output CSV file (default stdout)")
    p.set_defaults(func=cmd_region)

    p = sub.add_parser("verify", help="randomized construction verification suite")
    p.add_argument(
        "target",
        choices=("lhs", "spm"),
        help="lhs: hidden-state construction on AxB qudit-qubit states; "
        "spm: separable construction on 2xB qubit-qudit states",
    )
    p.add_argument("--trials", type=int, default=50, help="number of random states")
    p.add_argument("--seed", type=int, default=7, help="RNG seed")
    p.add_argument("--tol", type=float, default=1e-10, help="residual pass threshold")
    p.add_argument("--dims", default="2x2", help="subsystem dims, e.g. 3x2 or 2x3")
    p.add_argument("--mu", type=float, help="fix the visibility instead of sampling")
    p.add_argument("--c", type=float, help="fix the partner bias instead of sampling")
    p.add_argument("--out", help="output report JSON file (default stdout)")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser(
        "demo-werner", help="threshold scan of all detectors on the Werner family"
    )
    p.add_argument("--grid", type=int, default=101, help="number of visibility steps")
    p.add_argument("--out", help="output CSV file (default stdout)")
    p.set_defaults(func=cmd_demo_werner)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, OSError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
