"""Axial-displacement estimators and their Monte Carlo benchmarking.

Two estimators are benchmarked against the Cramer-Rao bounds:

* a binary "fraction outside" estimator that only counts photons beyond
  the information-free radius r_b = w / sqrt(2) and inverts the
  linearized response; cheap, camera-friendly, and carries
  1 / (e - 1) of the full information at the optimal plane;
* a width estimator that uses every radius through the sufficient
  statistic w^2_hat = 2 mean(r^2) and inverts the width law; this one
  attains the full classical information asymptotically.

``run_trials`` repeats seeded exposures, applies one estimator, and
reports the empirical spread next to the classical and quantum bounds.
Trials use independent derived streams, so the report is independent of
execution order and worker count.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from functools import partial
from typing import Literal

import numpy as np
from scipy import optimize

from .beam_optics import (
    BeamParams,
    RelaySystem,
    beam_width_sq,
    image_beam_width_sq,
    relay_transform,
)
from .fisher import (
    classical_fi_analytic,
    image_fi,
    image_log_derivative,
    info_boundary,
    qfi_gaussian,
    width_log_derivative,
)
from .photon_sim import DetectionSample, count_outside, derive_trial_seed, sample_radii

#: Slopes smaller than this (in units of 1 / z_R) mark a detection plane
#: as carrying no usable first-order signal.
MIN_SLOPE_FRACTION = 1e-9


class UninformativePlaneError(ValueError):
    """The detection plane has (numerically) zero axial sensitivity."""


class SaturatedEstimateError(RuntimeError):
    """All photons fell on one side of the boundary; the linearized
    fraction estimate is undefined for this exposure."""

    def __init__(self, outside: int, total: int):
        super().__init__(
            f"saturated exposure: {outside} of {total} photons outside the boundary"
        )
        self.outside = outside
        self.total = total


@dataclass(frozen=True)
class EstimatorCalibration:
    """Frozen per-plane constants of the fraction estimator.

    ``f0`` is the expected outside fraction at the nominal plane and
    ``slope`` the signed logarithmic response d/dz ln f_out, so that to
    first order f_out(z + delta) = f0 (1 + slope * delta).
    """

    nominal_z: float
    r_b: float
    f0: float
    slope: float

    def __post_init__(self) -> None:
        if not (self.r_b > 0.0 and math.isfinite(self.r_b)):
            raise ValueError(f"boundary radius must be positive, got {self.r_b}")
        if not 0.0 < self.f0 < 1.0:
            raise ValueError(f"nominal fraction must lie in (0, 1), got {self.f0}")
        if not (self.slope != 0.0 and math.isfinite(self.slope)):
            raise ValueError(f"slope must be finite and nonzero, got {self.slope}")


def _plane_response(
    beam: BeamParams, relay: RelaySystem | None, detector_plane: float
) -> tuple[float, float]:
    """(w^2, d/dz ln w^2) at the detector, object or image side."""
    if relay is None:
        return beam_width_sq(beam, detector_plane), width_log_derivative(
            beam, detector_plane
        )
    image = relay_transform(beam, relay)
    return image_beam_width_sq(image, detector_plane), image_log_derivative(
        beam, relay, detector_plane
    )


def calibrate(
    beam: BeamParams, detector_plane: float, relay: RelaySystem | None = None
) -> EstimatorCalibration:
    """Calibrate the fraction estimator for a detector plane.

    The boundary is placed on the information-free circle of the nominal
    profile, where the nominal outside fraction is exactly 1/e and the
    response slope is (2 r_b^2 / w^2) d/dz ln w^2.  Planes with no
    first-order response (the waist, a geometric image plane) are
    rejected rather than calibrated.
    """
    w_sq, log_slope = _plane_response(beam, relay, detector_plane)
    r_b = info_boundary(w_sq)
    ratio = 2.0 * r_b * r_b / w_sq
    f0 = math.exp(-ratio)
    slope = ratio * log_slope
    if abs(slope) < MIN_SLOPE_FRACTION / beam.rayleigh_range:
        raise UninformativePlaneError(
            f"plane {detector_plane!r} has |d ln f_out / dz| = {abs(slope)!r}; "
            "no usable axial signal"
        )
    return EstimatorCalibration(nominal_z=detector_plane, r_b=r_b, f0=f0, slope=slope)


def estimate_fraction(sample: DetectionSample, cal: EstimatorCalibration) -> float:
    """Displacement from the nominal plane via the outside fraction.

    delta_hat = (k / n - f0) / (f0 * slope).  Exposures with k = 0 or
    k = n carry no invertible fraction and raise instead of returning a
    fabricated number.
    """
    k = count_outside(sample, cal.r_b)
    n = sample.total_count
    if k == 0 or k == n:
        raise SaturatedEstimateError(k, n)
    return (k / n - cal.f0) / (cal.f0 * cal.slope)


def estimate_fraction_absolute(
    sample: DetectionSample, cal: EstimatorCalibration, expected_total: float
) -> float:
    """Intensity-calibrated variant: no per-exposure normalization.

    Uses the absolute outside count against the calibrated expectation
    ``expected_total * f0``.  Appropriate when the total flux is known
    and the exposure's photon number fluctuates (Poisson totals).
    """
    if expected_total <= 0.0:
        raise ValueError(f"expected_total must be positive, got {expected_total}")
    k = count_outside(sample, cal.r_b)
    if k == 0:
        raise SaturatedEstimateError(k, sample.total_count)
    return (k / (expected_total * cal.f0) - 1.0) / cal.slope


def fraction_estimator_fi(cal: EstimatorCalibration) -> float:
    """Per-photon information of the binarized measurement.

    (f0 s)^2 / (f0 (1 - f0)): the binomial information of the outside
    count under the linearized response.
    """
    return (cal.f0 * cal.slope) ** 2 / (cal.f0 * (1.0 - cal.f0))


Branch = Literal["inside", "outside"]


def estimate_mle_width(
    sample: DetectionSample,
    beam: BeamParams,
    nominal_z: float,
    branch: Branch,
) -> tuple[float, bool]:
    """Width-based displacement estimate on one side of the waist.

    The sufficient statistic w^2_hat = 2 mean(r^2) is inverted through
    w^2(z); ``branch`` picks the sign of z ("inside" of the waist is
    z < 0, "outside" is z > 0).  Returns (delta_hat, clamped): when the
    sampled width falls below the waist width there is no solution on
    the branch and the estimate is clamped to the waist, flagged.
    """
    if branch not in ("inside", "outside"):
        raise ValueError(f"unknown branch {branch!r}")
    sign = -1.0 if branch == "inside" else 1.0
    if nominal_z == 0.0:
        raise ValueError("nominal plane at the waist: branch is ambiguous")
    if nominal_z * sign < 0.0:
        raise ValueError(
            f"nominal plane {nominal_z!r} is not on the {branch!r} branch"
        )
    if sample.total_count == 0:
        raise ValueError("cannot estimate from an empty sample")
    w_hat_sq = 2.0 * float(np.mean(np.square(sample.radii)))
    w0_sq = beam.waist**2
    if w_hat_sq < w0_sq:
        return -nominal_z, True  # clamped to the waist
    z_hat = sign * beam.rayleigh_range * math.sqrt(w_hat_sq / w0_sq - 1.0)
    return z_hat - nominal_z, False


def _invert_image_width(
    beam: BeamParams,
    relay: RelaySystem,
    detector_plane: float,
    w_hat_sq: float,
) -> float:
    """Solve image width = w_hat_sq for the object displacement, near 0.

    The response is locally monotonic at any calibrated plane; the
    bracket is grown geometrically until it straddles the root.
    """

    def mismatch(delta: float) -> float:
        shifted = RelaySystem(relay.focal_length, relay.object_distance + delta)
        return image_beam_width_sq(relay_transform(beam, shifted), detector_plane) - w_hat_sq

    half = 0.25 * beam.rayleigh_range
    for _ in range(24):
        lo, hi = mismatch(-half), mismatch(half)
        if lo == 0.0:
            return -half
        if hi == 0.0:
            return half
        if lo * hi < 0.0:
            return float(optimize.brentq(mismatch, -half, half, xtol=1e-18, rtol=1e-15))
        half *= 2.0
    raise ArithmeticError(
        "could not bracket the width inversion; sample is far outside the model"
    )


@dataclass(frozen=True)
class TrialConfig:
    """Inputs of a Monte Carlo estimator benchmark."""

    beam: BeamParams
    detector_plane: float
    true_delta: float
    n_per_trial: int
    trials: int
    estimator: Literal["fraction", "fraction-absolute", "mle"]
    base_seed: int
    relay: RelaySystem | None = None
    poisson_total: bool = False
    workers: int = 1

    def __post_init__(self) -> None:
        if self.n_per_trial <= 0:
            raise ValueError(f"n_per_trial must be positive, got {self.n_per_trial}")
        if self.trials <= 0:
            raise ValueError(f"trials must be positive, got {self.trials}")
        if self.estimator not in ("fraction", "fraction-absolute", "mle"):
            raise ValueError(f"unknown estimator {self.estimator!r}")
        if self.base_seed < 0:
            raise ValueError(f"base_seed must be nonnegative, got {self.base_seed}")
        if self.workers <= 0:
            raise ValueError(f"workers must be positive, got {self.workers}")


@dataclass(frozen=True, eq=False)
class TrialReport:
    """Outcome of ``run_trials``: per-trial records plus the summary
    statistics and the two Cramer-Rao floors they are judged against."""

    config: TrialConfig
    trial_seeds: np.ndarray
    totals: np.ndarray
    counts_outside: np.ndarray
    estimates: np.ndarray
    flagged: np.ndarray
    mean_estimate: float
    empirical_std: float
    classical_crb_std: float
    quantum_crb_std: float

    def __post_init__(self) -> None:
        if self.classical_crb_std < self.quantum_crb_std * (1.0 - 1e-12):
            raise ValueError(
                "classical bound below the quantum bound: "
                f"{self.classical_crb_std!r} < {self.quantum_crb_std!r}"
            )

    @property
    def flagged_count(self) -> int:
        return int(self.flagged.sum())


def _true_width_sq(config: TrialConfig) -> float:
    """Squared width actually illuminating the detector, with the object
    displaced by the true delta."""
    if config.relay is None:
        return beam_width_sq(config.beam, config.detector_plane + config.true_delta)
    shifted = RelaySystem(
        config.relay.focal_length, config.relay.object_distance + config.true_delta
    )
    return image_beam_width_sq(
        relay_transform(config.beam, shifted), config.detector_plane
    )


def _nominal_fi(config: TrialConfig) -> float:
    if config.relay is None:
        return classical_fi_analytic(config.beam, config.detector_plane)
    return image_fi(config.beam, config.relay, config.detector_plane)


def _mle_branch(config: TrialConfig) -> Branch:
    if config.detector_plane == 0.0:
        raise ValueError("width estimator is ambiguous at the waist plane")
    return "inside" if config.detector_plane < 0.0 else "outside"


def _run_one(
    config: TrialConfig,
    cal: EstimatorCalibration,
    width_sq_true: float,
    trial: int,
) -> tuple[int, int, int, int, float, bool]:
    seed = derive_trial_seed(config.base_seed, trial)
    n = config.n_per_trial
    if config.poisson_total:
        n = int(
            np.random.default_rng(
                derive_trial_seed(config.base_seed, trial, substream=1)
            ).poisson(config.n_per_trial)
        )
    sample = sample_radii(width_sq_true, n, seed)
    k = count_outside(sample, cal.r_b)
    flagged = False
    estimate = math.nan
    try:
        if config.estimator == "fraction":
            estimate = estimate_fraction(sample, cal)
        elif config.estimator == "fraction-absolute":
            estimate = estimate_fraction_absolute(sample, cal, config.n_per_trial)
        else:
            if config.relay is None:
                estimate, flagged = estimate_mle_width(
                    sample, config.beam, config.detector_plane, _mle_branch(config)
                )
            else:
                w_hat_sq = 2.0 * float(np.mean(np.square(sample.radii)))
                estimate = _invert_image_width(
                    config.beam, config.relay, config.detector_plane, w_hat_sq
                )
    except SaturatedEstimateError:
        flagged = True
    return trial, seed, n, k, estimate, flagged


def run_trials(config: TrialConfig) -> TrialReport:
    """Run the seeded benchmark described by ``config``.

    Flagged trials (saturated or clamped) are excluded from the mean and
    standard deviation but remain in the per-trial arrays; the flag count
    is part of the report rather than silently dropped.
    """
    cal = calibrate(config.beam, config.detector_plane, config.relay)
    width_sq_true = _true_width_sq(config)
    if config.estimator == "mle" and config.relay is None:
        _mle_branch(config)  # validate early

    worker = partial(_run_one, config, cal, width_sq_true)
    if config.workers > 1:
        with ProcessPoolExecutor(max_workers=config.workers) as pool:
            rows = list(
                pool.map(
                    worker,
                    range(config.trials),
                    chunksize=max(1, config.trials // (4 * config.workers)),
                )
            )
    else:
        rows = [worker(t) for t in range(config.trials)]
    rows.sort(key=lambda row: row[0])

    seeds = np.array([row[1] for row in rows], dtype=np.uint64)
    totals = np.array([row[2] for row in rows], dtype=np.int64)
    counts = np.array([row[3] for row in rows], dtype=np.int64)
    estimates = np.array([row[4] for row in rows], dtype=float)
    flagged = np.array([row[5] for row in rows], dtype=bool)

    valid = estimates[~flagged]
    mean = float(np.mean(valid)) if valid.size else math.nan
    std = float(np.std(valid, ddof=1)) if valid.size > 1 else math.nan

    n_info = config.n_per_trial
    return TrialReport(
        config=config,
        trial_seeds=seeds,
        totals=totals,
        counts_outside=counts,
        estimates=estimates,
        flagged=flagged,
        mean_estimate=mean,
        empirical_std=std,
        classical_crb_std=1.0 / math.sqrt(n_info * _nominal_fi(config)),
        quantum_crb_std=1.0 / math.sqrt(n_info * qfi_gaussian(config.beam)),
    )


def expected_fraction_estimate(config: TrialConfig) -> float:
    """Deterministic mean response of the fraction estimator.

    Replaces the sampled fraction with its exact expectation
    exp(-2 r_b^2 / w^2(true)); useful for bias analysis without Monte
    Carlo noise.
    """
    cal = calibrate(config.beam, config.detector_plane, config.relay)
    width_sq_true = _true_width_sq(config)
    f_out = math.exp(-2.0 * cal.r_b**2 / width_sq_true)
    return (f_out - cal.f0) / (cal.f0 * cal.slope)
