"""Command-line front end.

Subcommands:

* ``fi-scan``              information vs detector plane behind a relay
* ``fi-density``           radial information and intensity profiles
* ``optimal-plane``        closed-form optimal detector planes
* ``point-source``         quantum ranging limit through a Gaussian pupil
* ``simulate``             seeded Monte Carlo estimator benchmark
* ``reproduce-experiment`` preset benchmark with pass/fail checks

Lengths on the command line accept unit suffixes (nm, um, mm, m, km);
internally everything is SI meters.  Every output file starts with a
header that embeds the resolved configuration and seed, so artifacts
are self-describing and runs can be reproduced from the file alone.

Exit codes: 0 success, 1 usage error, 2 numerical failure, 3 check
failure.
"""

from __future__ import annotations

import argparse
import json
import math
import re
import sys
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .beam_optics import BeamParams, RelaySystem, beam_width_sq, intensity_pdf
from .estimators import (
    TrialConfig,
    TrialReport,
    UninformativePlaneError,
    expected_fraction_estimate,
    run_trials,
)
from .fisher import (
    DegenerateAlphaError,
    NoGeometricImageError,
    NormalizationDriftError,
    fi_density,
    geometric_image_plane,
    image_fi,
    image_width_response,
    info_boundary,
    info_fraction_outside,
    optimal_detection_planes,
    optimal_planes_numeric,
    point_source_range_std,
    preferred_detection_plane,
    qfi_gaussian,
    qfi_point_source,
    scan_image_fi,
    width_log_derivative,
)
from .numerics import QuadratureError

#: Fixed default seed so that bare invocations are reproducible.
DEFAULT_SEED = 0xA71A10C

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_NUMERICAL = 2
EXIT_CHECK_FAILED = 3

_UNIT_FACTORS = {
    "nm": 1e-9,
    "um": 1e-6,
    "µm": 1e-6,
    "mm": 1e-3,
    "m": 1.0,
    "km": 1e3,
}

_LENGTH_RE = re.compile(
    r"^\s*([+-]?(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)\s*([a-zµ]*)\s*$"
)

# Preset matching the tabletop configuration the benchmark mirrors.
_PRESET_WAVELENGTH = 632.8e-9
_PRESET_RAYLEIGH = 18.9e-6
_PRESET_N_PER_TRIAL = 1_600_000
_PRESET_TRIALS = 200
_PRESET_DELTAS = "10nm,100nm,400nm,1000nm,1650nm"

_STD_CHECK_REL_TOL = 0.10
_BIAS_CHECK_REL_TOL = 0.05


class UsageError(Exception):
    """Bad flags or parameter values; maps to exit code 1."""


class _Parser(argparse.ArgumentParser):
    def error(self, message: str) -> None:  # type: ignore[override]
        raise UsageError(message)


def parse_length(text: str) -> float:
    """Parse a length with an optional unit suffix into meters."""
    match = _LENGTH_RE.match(text)
    if not match:
        raise UsageError(f"cannot parse length {text!r}")
    value, unit = match.groups()
    if unit == "":
        return float(value)
    try:
        return float(value) * _UNIT_FACTORS[unit]
    except KeyError:
        raise UsageError(
            f"unknown length unit {unit!r} in {text!r}; use one of "
            + ", ".join(sorted(set(_UNIT_FACTORS) - {"µm"}))
        ) from None


def parse_delta_list(text: str) -> list[float]:
    items = [piece for piece in text.split(",") if piece.strip()]
    if not items:
        raise UsageError(f"empty displacement list {text!r}")
    return [parse_length(piece) for piece in items]


def _positive_int(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise UsageError(f"expected an integer, got {text!r}") from None
    if value <= 0:
        raise UsageError(f"expected a positive integer, got {value}")
    return value


def _seed(text: str) -> int:
    try:
        value = int(text, 0)
    except ValueError:
        raise UsageError(f"seed must be an integer, got {text!r}") from None
    if not 0 <= value < 2**64:
        raise UsageError(f"seed must fit in 64 bits, got {value}")
    return value


# ---------------------------------------------------------------------------
# Self-describing output helpers
# ---------------------------------------------------------------------------


def render_header(config: dict) -> str:
    """One-line ``# key=value`` header embedding the resolved config."""
    parts = []
    for key in sorted(config):
        value = config[key]
        if isinstance(value, float):
            rendered = repr(value)
        else:
            rendered = str(value)
        if any(ch.isspace() for ch in rendered):
            raise ValueError(f"config value for {key!r} contains whitespace: {value!r}")
        parts.append(f"{key}={rendered}")
    return "# " + " ".join(parts)


def parse_run_header(line: str) -> dict:
    """Reconstruct the config dict from a header line written by
    ``render_header``."""
    if not line.startswith("# "):
        raise ValueError(f"not a run header: {line!r}")
    config: dict = {}
    for item in line[2:].split():
        key, _, raw = item.partition("=")
        if raw in ("True", "False"):
            config[key] = raw == "True"
            continue
        try:
            config[key] = int(raw)
            continue
        except ValueError:
            pass
        try:
            config[key] = float(raw)
            continue
        except ValueError:
            pass
        config[key] = raw
    return config


def _jsonify(value):
    if isinstance(value, float) and not math.isfinite(value):
        return None
    if isinstance(value, dict):
        return {key: _jsonify(item) for key, item in value.items()}
    if isinstance(value, (list, tuple)):
        return [_jsonify(item) for item in value]
    if isinstance(value, (np.integer,)):
        return int(value)
    if isinstance(value, (np.floating,)):
        return _jsonify(float(value))
    if isinstance(value, np.ndarray):
        return [_jsonify(item) for item in value.tolist()]
    return value


def write_json(path: Path, payload: dict) -> None:
    path.write_text(
        json.dumps(_jsonify(payload), indent=2, sort_keys=True) + "\n",
        encoding="ascii",
    )


def write_csv(
    path: Path, config: dict, columns: Sequence[str], rows: Iterable[Sequence]
) -> None:
    with open(path, "w", encoding="ascii", newline="\n") as fh:
        fh.write(render_header(config) + "\n")
        fh.write(",".join(columns) + "\n")
        for row in rows:
            fh.write(
                ",".join(
                    repr(item) if isinstance(item, float) else str(item) for item in row
                )
                + "\n"
            )


def _out_path(args, default_name: str) -> Path:
    return Path(args.out) if args.out else Path(default_name)


# ---------------------------------------------------------------------------
# Shared flag groups
# ---------------------------------------------------------------------------


def _add_common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--seed", type=_seed, default=DEFAULT_SEED,
                        help="base RNG seed (default %(default)#x)")
    parser.add_argument("--out", default=None, metavar="PATH",
                        help="output path (default: command-specific name in cwd)")
    parser.add_argument("--format", choices=("csv", "json"), default="csv",
                        help="tabular output format (default %(default)s)")
    parser.add_argument("--config", default=None, metavar="PATH",
                        help="key=value file supplying defaults for these flags")


def _add_beam(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--wavelength", type=parse_length, default=None,
                        help="vacuum wavelength, e.g. 632.8nm")
    parser.add_argument("--waist", type=parse_length, default=None,
                        help="beam waist radius, e.g. 1.95um")
    parser.add_argument("--rayleigh-range", type=parse_length, default=None,
                        help="Rayleigh range, e.g. 18.9um")


def _add_relay(parser: argparse.ArgumentParser, required: bool) -> None:
    parser.add_argument("--focal", type=parse_length, default=None,
                        required=required, help="relay focal length")
    parser.add_argument("--object-distance", type=parse_length, default=None,
                        required=required, help="waist-to-lens distance")


def beam_from_args(args) -> BeamParams:
    given = {
        name: value
        for name, value in (
            ("wavelength", args.wavelength),
            ("waist", args.waist),
            ("rayleigh-range", args.rayleigh_range),
        )
        if value is not None
    }
    if len(given) != 2:
        raise UsageError(
            "specify exactly two of --wavelength/--waist/--rayleigh-range "
            f"(got {sorted(given) or 'none'})"
        )
    try:
        if "rayleigh-range" not in given:
            return BeamParams(args.wavelength, args.waist)
        if "wavelength" in given:
            return BeamParams.from_rayleigh_range(args.wavelength, args.rayleigh_range)
        wavelength = math.pi * args.waist**2 / args.rayleigh_range
        return BeamParams(wavelength, args.waist)
    except ValueError as bad:
        raise UsageError(str(bad)) from None


def relay_from_args(args) -> RelaySystem | None:
    if args.focal is None and args.object_distance is None:
        return None
    if args.focal is None or args.object_distance is None:
        raise UsageError("--focal and --object-distance must be given together")
    try:
        return RelaySystem(args.focal, args.object_distance)
    except ValueError as bad:
        raise UsageError(str(bad)) from None


def _beam_config(beam: BeamParams) -> dict:
    return {"wavelength_m": beam.wavelength, "waist_m": beam.waist}


# ---------------------------------------------------------------------------
# Commands
# ---------------------------------------------------------------------------


def cmd_fi_scan(args) -> int:
    beam = beam_from_args(args)
    relay = relay_from_args(args)
    if relay is None:
        raise UsageError("fi-scan needs a relay: --focal and --object-distance")
    if not args.zmax > args.zmin:
        raise UsageError("--zmax must exceed --zmin")
    if args.steps < 2:
        raise UsageError("--steps must be at least 2")

    planes = np.linspace(args.zmin, args.zmax, args.steps)
    scan = scan_image_fi(beam, relay, planes)
    config = {
        "command": "fi-scan",
        "focal_m": relay.focal_length,
        "object_distance_m": relay.object_distance,
        "seed": args.seed,
        "steps": args.steps,
        "zmax_m": args.zmax,
        "zmin_m": args.zmin,
        **_beam_config(beam),
    }

    markers: dict = {"qfi_per_m2": scan.qfi}
    try:
        planes_opt = optimal_detection_planes(beam, relay)
        markers["alpha"] = planes_opt.alpha
        markers["fallback"] = False
    except DegenerateAlphaError:
        planes_opt = optimal_planes_numeric(beam, relay)
        markers["alpha"] = None
        markers["fallback"] = True
    markers["plane_plus_m"] = planes_opt.plane_plus
    markers["plane_minus_m"] = planes_opt.plane_minus
    try:
        markers["geometric_image_plane_m"] = geometric_image_plane(relay)
    except NoGeometricImageError:
        markers["geometric_image_plane_m"] = None

    rows = [
        (float(zp), float(fi), float(fi / scan.qfi))
        for zp, fi in zip(scan.plane_positions, scan.fi_values)
    ]
    if args.format == "json":
        out = _out_path(args, "fi_scan.json")
        write_json(out, {
            "config": config,
            "markers": markers,
            "columns": ["z_prime_m", "fi_per_m2", "fi_over_qfi"],
            "rows": rows,
        })
        print(f"wrote {out}")
    else:
        out = _out_path(args, "fi_scan.csv")
        write_csv(out, config, ("z_prime_m", "fi_per_m2", "fi_over_qfi"), rows)
        sidecar = out.with_suffix(".json")
        write_json(sidecar, {"config": config, "markers": markers})
        print(f"wrote {out} and {sidecar}")
    return EXIT_OK


def _density_response(beam, relay, plane) -> tuple[float, float]:
    if relay is None:
        w_sq = beam_width_sq(beam, plane)
        return w_sq, w_sq * width_log_derivative(beam, plane)
    return image_width_response(beam, relay, plane)


def cmd_fi_density(args) -> int:
    beam = beam_from_args(args)
    relay = relay_from_args(args)
    if args.plane is not None:
        plane = args.plane
    elif relay is not None:
        plane = preferred_detection_plane(beam, relay)
    else:
        plane = beam.rayleigh_range
    w_sq, dw_sq = _density_response(beam, relay, plane)
    if dw_sq == 0.0:
        raise UninformativePlaneError(
            f"plane {plane!r} has zero axial sensitivity; no information density"
        )
    if args.steps < 2:
        raise UsageError("--steps must be at least 2")
    rmax = args.rmax if args.rmax is not None else 3.0 * math.sqrt(w_sq)
    if rmax <= 0.0:
        raise UsageError("--rmax must be positive")

    radii = np.linspace(0.0, rmax, args.steps)
    density = np.array([fi_density(w_sq, dw_sq, r) for r in radii])
    intensity = np.array([intensity_pdf(w_sq, r) for r in radii])
    r_b = info_boundary(w_sq)

    config = {
        "command": "fi-density",
        "plane_m": plane,
        "rmax_m": rmax,
        "seed": args.seed,
        "steps": args.steps,
        **_beam_config(beam),
    }
    if relay is not None:
        config["focal_m"] = relay.focal_length
        config["object_distance_m"] = relay.object_distance

    summary = {
        "boundary_radius_m": r_b,
        "fraction_outside": info_fraction_outside(w_sq, r_b),
        "width_sq_m2": w_sq,
        "dwidth_sq_dz_m": dw_sq,
    }
    rows = [
        (float(r), float(d / density.max()), float(i / intensity.max()))
        for r, d, i in zip(radii, density, intensity)
    ]
    columns = ("r_m", "fi_density_norm", "intensity_norm")
    if args.format == "json":
        out = _out_path(args, "fi_density.json")
        write_json(out, {
            "config": config,
            "summary": summary,
            "columns": list(columns),
            "rows": rows,
        })
        print(f"wrote {out}")
    else:
        out = _out_path(args, "fi_density.csv")
        write_csv(out, config, columns, rows)
        sidecar = out.with_suffix(".json")
        write_json(sidecar, {"config": config, "summary": summary})
        print(f"wrote {out} and {sidecar}")
    return EXIT_OK


def cmd_optimal_plane(args) -> int:
    beam = beam_from_args(args)
    relay = relay_from_args(args)
    if relay is None:
        raise UsageError("optimal-plane needs a relay: --focal and --object-distance")
    config = {
        "command": "optimal-plane",
        "focal_m": relay.focal_length,
        "object_distance_m": relay.object_distance,
        "seed": args.seed,
        **_beam_config(beam),
    }
    qfi = qfi_gaussian(beam)
    try:
        planes = optimal_detection_planes(beam, relay)
        fallback = False
    except DegenerateAlphaError:
        planes = optimal_planes_numeric(beam, relay)
        fallback = True
    try:
        geometric = geometric_image_plane(relay)
    except NoGeometricImageError:
        geometric = None

    payload = {
        "config": config,
        "alpha": planes.alpha,
        "fallback": fallback,
        "plane_plus_m": planes.plane_plus,
        "plane_minus_m": planes.plane_minus,
        "fi_over_qfi_plus": image_fi(beam, relay, planes.plane_plus) / qfi,
        "fi_over_qfi_minus": image_fi(beam, relay, planes.plane_minus) / qfi,
        "geometric_image_plane_m": geometric,
        "preferred_plane_m": preferred_detection_plane(beam, relay),
        "qfi_per_m2": qfi,
    }
    if geometric is not None:
        payload["defocus_plus_m"] = planes.plane_plus - geometric
        payload["defocus_minus_m"] = planes.plane_minus - geometric
    out = _out_path(args, "optimal_plane.json")
    write_json(out, payload)
    print(f"wrote {out}")
    print(
        f"optimal planes: {planes.plane_plus!r} m and {planes.plane_minus!r} m"
        + (" (numeric fallback)" if fallback else "")
    )
    return EXIT_OK


def cmd_point_source(args) -> int:
    try:
        qfi = qfi_point_source(args.wavenumber, args.pupil_width, args.distance)
        sigma_one = point_source_range_std(
            args.wavenumber, args.pupil_width, args.distance, 1
        )
        sigma_n = point_source_range_std(
            args.wavenumber, args.pupil_width, args.distance, args.detections
        )
    except ValueError as bad:
        raise UsageError(str(bad)) from None
    config = {
        "command": "point-source",
        "detections": args.detections,
        "distance_m": args.distance,
        "pupil_width_m": args.pupil_width,
        "seed": args.seed,
        "wavenumber_per_m": args.wavenumber,
    }
    payload = {
        "config": config,
        "qfi_per_m2": qfi,
        "sigma_single_m": sigma_one,
        "sigma_n_m": sigma_n,
    }
    out = _out_path(args, "point_source.json")
    write_json(out, payload)
    print(f"wrote {out}")
    print(f"range precision: {sigma_n!r} m at {args.detections} detections")
    return EXIT_OK


def _trial_config_dict(config: TrialConfig) -> dict:
    out = {
        "base_seed": config.base_seed,
        "detector_plane_m": config.detector_plane,
        "estimator": config.estimator,
        "n_per_trial": config.n_per_trial,
        "poisson_total": config.poisson_total,
        "trials": config.trials,
        "true_delta_m": config.true_delta,
        "wavelength_m": config.beam.wavelength,
        "waist_m": config.beam.waist,
    }
    if config.relay is not None:
        out["focal_m"] = config.relay.focal_length
        out["object_distance_m"] = config.relay.object_distance
    return out


def _report_payload(report: TrialReport) -> dict:
    return {
        "config": _trial_config_dict(report.config),
        "mean_estimate_m": report.mean_estimate,
        "empirical_std_m": report.empirical_std,
        "classical_crb_std_m": report.classical_crb_std,
        "quantum_crb_std_m": report.quantum_crb_std,
        "flagged_trials": report.flagged_count,
        "trials": [
            {
                "trial_index": index,
                "seed": int(seed),
                "n": int(total),
                "count_outside": int(outside),
                "delta_hat_m": float(estimate),
                "flagged": bool(flag),
            }
            for index, (seed, total, outside, estimate, flag) in enumerate(
                zip(
                    report.trial_seeds,
                    report.totals,
                    report.counts_outside,
                    report.estimates,
                    report.flagged,
                )
            )
        ],
    }


def _write_report_csv(path: Path, report: TrialReport) -> None:
    config = {"command": "simulate", **_trial_config_dict(report.config)}
    rows = [
        (index, int(seed), int(total), int(outside), float(estimate))
        for index, (seed, total, outside, estimate) in enumerate(
            zip(
                report.trial_seeds,
                report.totals,
                report.counts_outside,
                report.estimates,
            )
        )
    ]
    write_csv(
        path, config, ("trial_index", "seed", "n", "count_outside", "delta_hat_m"), rows
    )


def cmd_simulate(args) -> int:
    beam = beam_from_args(args)
    relay = relay_from_args(args)
    if args.plane is not None:
        plane = args.plane
    elif relay is not None:
        plane = preferred_detection_plane(beam, relay)
    else:
        plane = -beam.rayleigh_range
    try:
        config = TrialConfig(
            beam=beam,
            detector_plane=plane,
            true_delta=args.delta,
            n_per_trial=args.n_per_trial,
            trials=args.trials,
            estimator=args.estimator,
            base_seed=args.seed,
            relay=relay,
            poisson_total=args.poisson_total,
            workers=args.workers,
        )
        report = run_trials(config)
    except ValueError as bad:
        raise UsageError(str(bad)) from None

    if args.format == "json":
        out = _out_path(args, "simulate.json")
        write_json(out, _report_payload(report))
        print(f"wrote {out}")
    else:
        out = _out_path(args, "simulate.csv")
        _write_report_csv(out, report)
        sidecar = out.with_suffix(".json")
        payload = _report_payload(report)
        del payload["trials"]
        write_json(sidecar, payload)
        print(f"wrote {out} and {sidecar}")
    print(
        f"estimator={report.config.estimator} mean={report.mean_estimate!r} m "
        f"std={report.empirical_std!r} m quantum_bound={report.quantum_crb_std!r} m"
    )
    return EXIT_OK


def cmd_reproduce_experiment(args) -> int:
    beam = BeamParams.from_rayleigh_range(args.wavelength, args.rayleigh_range)
    plane = -beam.rayleigh_range
    deltas = args.deltas if isinstance(args.deltas, list) else parse_delta_list(args.deltas)
    quantum_bound = 1.0 / math.sqrt(args.n_per_trial * qfi_gaussian(beam))
    fraction_bound = quantum_bound * math.sqrt(math.e - 1.0)

    config = {
        "command": "reproduce-experiment",
        "deltas_m": ",".join(repr(d) for d in deltas),
        "detector_plane_m": plane,
        "n_per_trial": args.n_per_trial,
        "seed": args.seed,
        "trials": args.trials,
        **_beam_config(beam),
    }

    rows = []
    summaries = []
    failures = []
    for delta in deltas:
        per_delta: dict = {"true_delta_m": delta}
        for estimator in ("mle", "fraction"):
            trial_config = TrialConfig(
                beam=beam,
                detector_plane=plane,
                true_delta=delta,
                n_per_trial=args.n_per_trial,
                trials=args.trials,
                estimator=estimator,
                base_seed=args.seed,
                workers=args.workers,
            )
            report = run_trials(trial_config)
            per_delta[f"{estimator}_mean_m"] = report.mean_estimate
            per_delta[f"{estimator}_std_m"] = report.empirical_std
            per_delta[f"{estimator}_flagged"] = report.flagged_count
        bias_config = TrialConfig(
            beam=beam,
            detector_plane=plane,
            true_delta=delta,
            n_per_trial=args.n_per_trial,
            trials=args.trials,
            estimator="fraction",
            base_seed=args.seed,
        )
        per_delta["fraction_response_m"] = expected_fraction_estimate(bias_config)
        summaries.append(per_delta)
        rows.append(
            (
                float(delta),
                float(per_delta["mle_mean_m"]),
                float(per_delta["mle_std_m"]),
                float(per_delta["fraction_mean_m"]),
                float(per_delta["fraction_std_m"]),
                float(per_delta["fraction_response_m"]),
                float(quantum_bound),
                float(fraction_bound),
            )
        )
        if args.check:
            mle_err = abs(per_delta["mle_std_m"] - quantum_bound) / quantum_bound
            if not mle_err <= _STD_CHECK_REL_TOL:
                failures.append(
                    f"delta={delta!r} m: width std {per_delta['mle_std_m']!r} m "
                    f"departs from the quantum bound {quantum_bound!r} m by {mle_err:.3f}"
                )
            frac_err = abs(per_delta["fraction_std_m"] - fraction_bound) / fraction_bound
            if not frac_err <= _STD_CHECK_REL_TOL:
                failures.append(
                    f"delta={delta!r} m: fraction std {per_delta['fraction_std_m']!r} m "
                    f"departs from its binomial bound {fraction_bound!r} m by {frac_err:.3f}"
                )
            bias = abs(per_delta["fraction_response_m"] - delta)
            if not bias <= _BIAS_CHECK_REL_TOL * abs(delta):
                failures.append(
                    f"delta={delta!r} m: fraction response bias {bias!r} m exceeds "
                    f"{_BIAS_CHECK_REL_TOL:.0%} of the displacement"
                )

    payload = {
        "config": config,
        "quantum_bound_m": quantum_bound,
        "fraction_bound_m": fraction_bound,
        "per_delta": summaries,
        "checks": {
            "enabled": bool(args.check),
            "failures": failures,
        },
    }
    columns = (
        "true_delta_m",
        "mle_mean_m",
        "mle_std_m",
        "fraction_mean_m",
        "fraction_std_m",
        "fraction_response_m",
        "quantum_bound_m",
        "fraction_bound_m",
    )
    if args.format == "json":
        out = _out_path(args, "reproduce_experiment.json")
        write_json(out, payload)
        print(f"wrote {out}")
    else:
        out = _out_path(args, "reproduce_experiment.csv")
        write_csv(out, config, columns, rows)
        sidecar = out.with_suffix(".json")
        write_json(sidecar, payload)
        print(f"wrote {out} and {sidecar}")
    print(f"quantum bound: {quantum_bound!r} m per exposure")

    if args.check and failures:
        for failure in failures:
            print(f"CHECK FAILED: {failure}", file=sys.stderr)
        return EXIT_CHECK_FAILED
    if args.check:
        print("all checks passed")
    return EXIT_OK


# ---------------------------------------------------------------------------
# Parser assembly and entry point
# ---------------------------------------------------------------------------


def build_parser() -> _Parser:
    parser = _Parser(
        prog="axialfisher",
        description="Fisher-information limits and estimator benchmarks "
        "for axial localization with Gaussian beams.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    scan = sub.add_parser("fi-scan", help="information vs detector plane")
    _add_common(scan)
    _add_beam(scan)
    _add_relay(scan, required=False)
    scan.add_argument("--zmin", type=parse_length, required=True,
                      help="first detector plane (from the lens)")
    scan.add_argument("--zmax", type=parse_length, required=True,
                      help="last detector plane (from the lens)")
    scan.add_argument("--steps", type=_positive_int, default=201)
    scan.set_defaults(func=cmd_fi_scan)

    density = sub.add_parser("fi-density", help="radial information density")
    _add_common(density)
    _add_beam(density)
    _add_relay(density, required=False)
    density.add_argument("--plane", type=parse_length, default=None,
                         help="detector plane (default: preferred optimal plane)")
    density.add_argument("--rmax", type=parse_length, default=None,
                         help="largest radius (default: 3 beam widths)")
    density.add_argument("--steps", type=_positive_int, default=400)
    density.set_defaults(func=cmd_fi_density)

    optimal = sub.add_parser("optimal-plane", help="optimal detector planes")
    _add_common(optimal)
    _add_beam(optimal)
    _add_relay(optimal, required=False)
    optimal.set_defaults(func=cmd_optimal_plane)

    point = sub.add_parser("point-source", help="quantum ranging limit")
    _add_common(point)
    point.add_argument("--wavenumber", type=float, required=True,
                       help="wavenumber k in 1/m")
    point.add_argument("--pupil-width", type=parse_length, required=True)
    point.add_argument("--distance", type=parse_length, required=True)
    point.add_argument("--detections", type=_positive_int, default=1)
    point.set_defaults(func=cmd_point_source)

    simulate = sub.add_parser("simulate", help="Monte Carlo estimator benchmark")
    _add_common(simulate)
    _add_beam(simulate)
    _add_relay(simulate, required=False)
    simulate.add_argument("--plane", type=parse_length, default=None,
                          help="detector plane (default: -z_R, or the preferred "
                          "optimal plane behind a relay)")
    simulate.add_argument("--delta", type=parse_length, default=0.0,
                          help="true displacement from the nominal plane")
    simulate.add_argument("--n-per-trial", type=_positive_int, default=100_000)
    simulate.add_argument("--trials", type=_positive_int, default=200)
    simulate.add_argument("--estimator",
                          choices=("fraction", "fraction-absolute", "mle"),
                          default="fraction")
    simulate.add_argument("--poisson-total", action="store_true",
                          help="draw each exposure's photon number from a Poisson law")
    simulate.add_argument("--workers", type=_positive_int, default=1)
    simulate.set_defaults(func=cmd_simulate)

    reproduce = sub.add_parser(
        "reproduce-experiment",
        help="preset benchmark: 632.8nm beam, z_R=18.9um, 1.6e6 detections",
    )
    _add_common(reproduce)
    reproduce.add_argument("--wavelength", type=parse_length,
                           default=_PRESET_WAVELENGTH)
    reproduce.add_argument("--rayleigh-range", type=parse_length,
                           default=_PRESET_RAYLEIGH)
    reproduce.add_argument("--n-per-trial", type=_positive_int,
                           default=_PRESET_N_PER_TRIAL)
    reproduce.add_argument("--trials", type=_positive_int, default=_PRESET_TRIALS)
    reproduce.add_argument("--deltas", type=parse_delta_list,
                           default=_PRESET_DELTAS,
                           help="comma-separated displacements, e.g. 10nm,1650nm")
    reproduce.add_argument("--workers", type=_positive_int, default=1)
    reproduce.add_argument("--check", action="store_true",
                           help="verify stds and bias against the bounds; "
                           "exit 3 on failure")
    reproduce.set_defaults(func=cmd_reproduce_experiment)

    return parser


def _config_file_tokens(path: str) -> list[str]:
    """Turn a key=value config file into synthetic command-line tokens."""
    tokens: list[str] = []
    text = Path(path).read_text(encoding="utf-8")
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition("=")
        if not sep:
            raise UsageError(f"{path}:{lineno}: expected key=value, got {raw!r}")
        key = key.strip().replace("_", "-")
        value = value.strip()
        if value.lower() in ("true", "false"):
            if value.lower() == "true":
                tokens.append(f"--{key}")
            continue
        tokens.extend([f"--{key}", value])
    return tokens


def _inject_config(argv: list[str]) -> list[str]:
    """Splice config-file tokens in right after the subcommand, so that
    explicitly passed flags still win (they come later)."""
    path = None
    for index, token in enumerate(argv):
        if token == "--config" and index + 1 < len(argv):
            path = argv[index + 1]
            break
        if token.startswith("--config="):
            path = token.split("=", 1)[1]
            break
    if path is None:
        return argv
    if not argv or argv[0].startswith("-"):
        raise UsageError("--config requires a subcommand")
    return [argv[0], *_config_file_tokens(path), *argv[1:]]


def main(argv: list[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        args = parser.parse_args(_inject_config(argv))
        return args.func(args)
    except (UsageError, ValueError, FileNotFoundError) as bad:
        print(f"error: {bad}", file=sys.stderr)
        return EXIT_USAGE
    except (
        QuadratureError,
        NormalizationDriftError,
        ArithmeticError,
        OverflowError,
    ) as numerical:
        print(f"numerical failure: {numerical}", file=sys.stderr)
        return EXIT_NUMERICAL


def entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entry()
