"""Command-line front end for fitting, evaluating and simulating the bus channel.

Subcommands: fit, eval, verify, process, synth, sweep, footprint, compare.
Exit codes are a stable contract: 0 success, 1 verification failure,
2 input/parse error, 3 insufficient data, 4 ineligible request.
All randomness flows from an explicit --seed; nothing is wall-clock seeded.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from . import fit as fitmod
from . import geometry, linkbudget, pdp
from .models import (
    FITTED_RANGE_M,
    HeightClass,
    PathLossModel,
    Region,
    builtin_model,
    builtin_registry,
    is_extrapolated,
    mean_path_loss,
    model_from_dict,
    model_to_dict,
    sample_path_loss,
    to_combined_form,
)

EXIT_OK = 0
EXIT_VERIFY_FAIL = 1
EXIT_INPUT = 2
EXIT_INSUFFICIENT = 3
EXIT_INELIGIBLE = 4

# 5th/95th percentile of a unit normal.
Z95 = 1.6449

# Rounded coefficients the pooled models must reproduce: combined-form
# slope (10*beta) and shadowing variance (sigma^2), plus alpha to 1 decimal.
_ROUNDED_COMBINED = {
    HeightClass.LOWER: {"alpha": (85.2, 0.05), "slope": (17.4, 0.05), "var": (6.5, 0.06)},
    HeightClass.UPPER: {"alpha": (82.9, 0.05), "slope": (20.3, 0.05), "var": (5.5, 0.03)},
}


class CliError(Exception):
    def __init__(self, message: str, code: int = EXIT_INPUT):
        super().__init__(message)
        self.code = code


def _resolve_model(spec: str) -> PathLossModel:
    """A model selector: 'Region/height' for built-ins, else a JSON file path."""
    if "/" in spec and not Path(spec).exists():
        region_part, _, height_part = spec.partition("/")
        try:
            region = Region(region_part.capitalize() if region_part.lower() != "all" else "All")
            height = HeightClass(height_part.lower())
        except ValueError:
            raise CliError(f"unknown built-in model selector {spec!r}") from None
        return builtin_model(region, height)
    path = Path(spec)
    if not path.is_file():
        raise CliError(f"model file not found: {spec}")
    try:
        return model_from_dict(json.loads(path.read_text(encoding="utf-8")))
    except (json.JSONDecodeError, KeyError, ValueError) as exc:
        raise CliError(f"{spec}: bad model JSON ({exc})") from None


def _load_model_file(spec: str) -> PathLossModel:
    """Like _resolve_model but only accepts an external JSON file."""
    path = Path(spec)
    if not path.is_file():
        raise CliError(f"model file not found: {spec}")
    try:
        return model_from_dict(json.loads(path.read_text(encoding="utf-8")))
    except (json.JSONDecodeError, KeyError, ValueError) as exc:
        raise CliError(f"{spec}: bad model JSON ({exc})") from None


def _resolve_layout(path: str | None) -> geometry.BusLayout:
    if path is None:
        return geometry.default_layout()
    try:
        return geometry.load_layout(path)
    except FileNotFoundError:
        raise CliError(f"layout file not found: {path}") from None


def _resolve_height(name: str) -> HeightClass:
    try:
        return HeightClass(name.lower())
    except ValueError:
        raise CliError(f"height must be 'lower' or 'upper', got {name!r}") from None


def _parse_range(spec: str) -> np.ndarray:
    """'a:b:step' -> inclusive distance grid."""
    parts = spec.split(":")
    if len(parts) != 3:
        raise CliError(f"distance range must be a:b:step, got {spec!r}")
    try:
        a, b, step = (float(p) for p in parts)
    except ValueError:
        raise CliError(f"non-numeric distance range {spec!r}") from None
    if a <= 0 or step <= 0 or b < a:
        raise CliError(f"invalid distance range {spec!r}")
    n = int(round((b - a) / step)) + 1
    grid = a + step * np.arange(n)
    return grid[grid <= b + 1e-9]


def _write_output(text: str, output: str | None) -> None:
    if output is None or output == "-":
        sys.stdout.write(text)
    else:
        Path(output).write_text(text, encoding="utf-8")


def _read_json(path: str) -> dict:
    p = Path(path)
    if not p.is_file():
        raise CliError(f"file not found: {path}")
    try:
        return json.loads(p.read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise CliError(f"{path}: invalid JSON ({exc})") from None


def cmd_fit(args) -> int:
    path = Path(args.samples)
    if not path.is_file():
        raise CliError(f"sample file not found: {args.samples}")
    try:
        samples = fitmod.samples_from_csv(path.read_text(encoding="utf-8"), source=str(path))
    except ValueError as exc:
        raise CliError(str(exc)) from None

    if args.by_group:
        try:
            partition = fitmod.fit_by_partition(samples)
        except ValueError as exc:
            raise CliError(str(exc)) from None
        if not partition.fits:
            raise CliError("no cell has enough samples to fit", EXIT_INSUFFICIENT)
        out = {
            f"{key[0].value}/{key[1].value}": fitmod.fit_result_to_dict(res)
            for key, res in partition.fits.items()
        }
        if partition.skipped:
            out["skipped"] = [
                {"region": r.value, "height": h.value, "n": n}
                for r, h, n in partition.skipped
            ]
        _write_output(json.dumps(out, indent=2) + "\n", args.output)
        return EXIT_OK

    result = fitmod.fit_log_distance(samples)
    _write_output(json.dumps(fitmod.fit_result_to_dict(result), indent=2) + "\n", args.output)
    return EXIT_OK


def cmd_eval(args) -> int:
    model = _resolve_model(args.model)
    grid = _parse_range(args.distances)
    lines = ["distance_m,mean_pl_db,p05_db,p95_db"]
    flagged = []
    for d in grid:
        mean = mean_path_loss(model, float(d))
        spread = Z95 * model.sigma_db
        lines.append(f"{d:.4f},{mean:.4f},{mean - spread:.4f},{mean + spread:.4f}")
        if is_extrapolated(d):
            flagged.append(float(d))
    if flagged:
        lo, hi = FITTED_RANGE_M
        print(
            f"warning: {len(flagged)} distance(s) outside the fitted range "
            f"({lo}-{hi} m); those rows are extrapolations",
            file=sys.stderr,
        )
    _write_output("\n".join(lines) + "\n", args.output)
    return EXIT_OK


def verify_registry(registry=None) -> tuple[bool, list[dict]]:
    """Check the pooled models against their rounded combined-form coefficients."""
    registry = registry if registry is not None else builtin_registry()
    rows = []
    ok = True
    for height, checks in _ROUNDED_COMBINED.items():
        model = registry[(Region.ALL, height)]
        form = to_combined_form(model)
        actual = {
            "alpha": round(form.alpha_db, 1),
            "slope": form.slope_db_per_decade,
            "var": form.variance_db2,
        }
        for name, (expected, tol) in checks.items():
            delta = actual[name] - expected
            passed = abs(delta) <= tol
            ok = ok and passed
            rows.append(
                {
                    "height": height.value,
                    "quantity": name,
                    "expected": expected,
                    "actual": actual[name],
                    "delta": delta,
                    "tolerance": tol,
                    "pass": passed,
                }
            )
    return ok, rows


def cmd_verify(args) -> int:
    ok, rows = verify_registry()
    lines = [f"{'height':<7}{'quantity':<10}{'expected':>9}{'actual':>10}{'delta':>9}  result"]
    for row in rows:
        lines.append(
            f"{row['height']:<7}{row['quantity']:<10}{row['expected']:>9.2f}"
            f"{row['actual']:>10.4f}{row['delta']:>9.4f}  "
            + ("PASS" if row["pass"] else "FAIL")
        )
    _write_output("\n".join(lines) + "\n", args.output)
    return EXIT_OK if ok else EXIT_VERIFY_FAIL


def cmd_process(args) -> int:
    try:
        cal = pdp.calibration_from_dict(_read_json(args.calibration))
    except (KeyError, ValueError) as exc:
        raise CliError(f"{args.calibration}: bad calibration ({exc})") from None
    try:
        sets = pdp.load_measurement_dir(args.measurement_dir)
    except pdp.PdpFormatError as exc:
        raise CliError(str(exc)) from None

    layout = _resolve_layout(args.layout) if args.layout else None
    distances, losses, seats, regions, heights = [], [], [], [], []
    for mset in sets:
        d, pl = pdp.aggregate_measurement(mset, cal)
        distances.append(d)
        losses.append(pl)
        seats.append(mset.seat)
        heights.append(mset.height)
        if layout is not None:
            regions.append(layout.seat(mset.seat).group)
    samples = fitmod.SampleSet(
        np.asarray(distances),
        np.asarray(losses),
        seat=seats,
        region=regions if layout is not None else None,
        height=heights,
    )
    _write_output(fitmod.samples_to_csv(samples), args.output)
    return EXIT_OK


def cmd_synth(args) -> int:
    model = _resolve_model(args.model)
    layout = _resolve_layout(args.layout)
    height = _resolve_height(args.height)
    seat_ids = geometry.seats_in_group(layout, Region.ALL, height)
    distances = [geometry.link_distance(layout, s, height) for s in seat_ids]

    if args.pdp_dir is not None:
        if args.calibration is None:
            raise CliError("--pdp-dir requires --calibration")
        try:
            cal = pdp.calibration_from_dict(_read_json(args.calibration))
        except (KeyError, ValueError) as exc:
            raise CliError(f"{args.calibration}: bad calibration ({exc})") from None
        rng = np.random.default_rng(args.seed)
        sets = []
        for seat_id, d in zip(seat_ids, distances):
            sweeps = []
            for k in range(args.sweeps):
                loss = sample_path_loss(model, d, rng)
                delay_ns = d / pdp.SPEED_OF_LIGHT * 1e9
                power = cal.radiated_power_db + cal.g_tx_dbi + cal.g_rx_dbi - loss
                sweeps.append(
                    pdp.PdpRecord(
                        np.array([delay_ns]), np.array([power]),
                        seat=seat_id, height=height, sweep=k,
                    )
                )
            sets.append(pdp.MeasurementSet(seat=seat_id, height=height, sweeps=sweeps))
        pdp.write_measurement_dir(args.pdp_dir, sets)
        return EXIT_OK

    samples = fitmod.synth_samples(model, distances, args.seed)
    samples.seat = list(seat_ids)
    samples.region = [layout.seat(s).group for s in seat_ids]
    samples.height = [height] * len(seat_ids)
    _write_output(fitmod.samples_to_csv(samples), args.output)
    return EXIT_OK


def cmd_sweep(args) -> int:
    layout = _resolve_layout(args.layout)
    height = _resolve_height(args.height)
    config = linkbudget.config_from_dict(_read_json(args.config)) if args.config \
        else linkbudget.LinkBudgetConfig()
    reports = linkbudget.seat_sweep(
        layout, builtin_registry(), config, height, use_all_model=args.use_all_model
    )
    if args.format == "json":
        text = json.dumps([linkbudget.report_to_dict(r) for r in reports], indent=2) + "\n"
    else:
        text = linkbudget.reports_to_csv(reports)
    _write_output(text, args.output)
    return EXIT_OK


def cmd_footprint(args) -> int:
    layout = _resolve_layout(args.layout)
    height = _resolve_height(args.height)
    config = linkbudget.config_from_dict(_read_json(args.config)) if args.config \
        else linkbudget.LinkBudgetConfig()
    try:
        active = [int(s) for s in args.active.split(",") if s.strip()]
    except ValueError:
        raise CliError(f"--active must be a comma-separated id list, got {args.active!r}") from None
    if not active:
        raise CliError("--active must name at least one seat")
    # Eligibility is part of the contract: fail fast on excluded/unknown seats.
    for seat_id in active:
        geometry.tx_position(layout, seat_id, height)
    summaries = linkbudget.interference_footprint(
        layout, builtin_registry(), config, active, height,
        seed=args.seed, n_draws=args.draws, use_all_model=args.use_all_model,
    )
    if args.format == "json":
        text = json.dumps(
            [linkbudget.footprint_to_dict(s) for s in summaries], indent=2
        ) + "\n"
    else:
        text = linkbudget.footprint_to_csv(summaries)
    _write_output(text, args.output)
    return EXIT_OK


def cmd_compare(args) -> int:
    a = _resolve_model(args.model_a)
    b = _load_model_file(args.model_b)
    grid = _parse_range(args.distances)
    lines = ["distance_m,delta_db"]
    for d in grid:
        lines.append(f"{d:.4f},{mean_path_loss(a, float(d)) - mean_path_loss(b, float(d)):.4f}")
    _write_output("\n".join(lines) + "\n", args.output)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="busloss",
        description="60 GHz intra-bus path loss: fitting, evaluation, link budget.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p, layout=True):
        p.add_argument("--output", "-o", default=None, help="output file (default stdout)")
        if layout:
            p.add_argument("--layout", default=None, help="layout JSON (default: shipped layout)")

    p = sub.add_parser("fit", help="fit (alpha, beta, sigma) from a sample CSV")
    p.add_argument("samples", help="sample CSV file")
    p.add_argument("--by-group", action="store_true", help="fit per (region, height) cell")
    add_common(p, layout=False)
    p.set_defaults(func=cmd_fit)

    p = sub.add_parser("eval", help="export a path loss curve as CSV")
    p.add_argument("--model", required=True, help="'Region/height' or model JSON file")
    p.add_argument("--distances", required=True, help="range a:b:step in metres")
    add_common(p, layout=False)
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("verify", help="check registry against rounded coefficients")
    add_common(p, layout=False)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("process", help="reduce a measurement directory to samples CSV")
    p.add_argument("measurement_dir", help="directory of <seat>_<height> sweep sets")
    p.add_argument("calibration", help="calibration JSON")
    add_common(p)
    p.set_defaults(func=cmd_process)

    p = sub.add_parser("synth", help="generate synthetic samples or a PDP directory")
    p.add_argument("--model", required=True, help="'Region/height' or model JSON file")
    p.add_argument("--height", required=True, help="lower or upper")
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--pdp-dir", default=None, help="write a PDP measurement directory here")
    p.add_argument("--calibration", default=None, help="calibration JSON (for --pdp-dir)")
    p.add_argument("--sweeps", type=int, default=10, help="sweeps per seat (default 10)")
    add_common(p)
    p.set_defaults(func=cmd_synth)

    p = sub.add_parser("sweep", help="per-seat link budget report")
    p.add_argument("--height", required=True, help="lower or upper")
    p.add_argument("--config", default=None, help="budget config JSON")
    p.add_argument("--use-all-model", action="store_true", help="use the pooled model for every seat")
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    add_common(p)
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("footprint", help="Monte-Carlo SINR with multiple transmitters")
    p.add_argument("--height", required=True, help="lower or upper")
    p.add_argument("--active", required=True, help="comma-separated active seat ids")
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--draws", type=int, default=10000)
    p.add_argument("--config", default=None, help="budget config JSON")
    p.add_argument("--use-all-model", action="store_true")
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    add_common(p)
    p.set_defaults(func=cmd_footprint)

    p = sub.add_parser("compare", help="mean path loss difference against an external model")
    p.add_argument("--model-a", required=True, help="'Region/height' or model JSON file")
    p.add_argument("--model-b", required=True, help="external model JSON file")
    p.add_argument("--distances", required=True, help="range a:b:step in metres")
    add_common(p, layout=False)
    p.set_defaults(func=cmd_compare)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.code
    except (fitmod.InsufficientDataError, fitmod.DegenerateDataError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INSUFFICIENT
    except (geometry.ExcludedPositionError, geometry.SeatNotFoundError) as exc:
        print(f"error: {exc.args[0]}", file=sys.stderr)
        return EXIT_INELIGIBLE
    except (pdp.PdpFormatError, geometry.LayoutError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
