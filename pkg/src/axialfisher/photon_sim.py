"""Seeded Monte Carlo detection of single photons on a Gaussian profile.

Sampling uses the inverse survival function of the radial intensity:
with u uniform on (0, 1],

    r = w * sqrt(-ln(u) / 2)

so the statistic 2 r^2 / w^2 is a unit-mean exponential.  Everything is
driven by explicit integer seeds; per-trial streams are derived from a
base seed and a trial index so that trials are independent of execution
order, and re-running any trial reproduces it bit for bit.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Literal

import numpy as np

_HEADER_PREFIX = "# "


def derive_trial_seed(base_seed: int, trial_index: int, substream: int = 0) -> int:
    """Injective, documented derivation of a per-trial RNG seed.

    Feeds ``base_seed`` as entropy and ``(trial_index, substream)`` as a
    spawn key into a seed sequence, so distinct (base, trial, substream)
    triples give independent streams and the mapping never changes
    between runs.  ``substream`` separates different random purposes
    within one trial (radii, fluctuating totals, azimuths).
    """
    if base_seed < 0:
        raise ValueError(f"base_seed must be nonnegative, got {base_seed}")
    if trial_index < 0:
        raise ValueError(f"trial_index must be nonnegative, got {trial_index}")
    if substream < 0:
        raise ValueError(f"substream must be nonnegative, got {substream}")
    ss = np.random.SeedSequence(entropy=base_seed, spawn_key=(trial_index, substream))
    return int(ss.generate_state(1, np.uint64)[0])


@dataclass(frozen=True, eq=False)
class DetectionSample:
    """One exposure: ``total_count`` photon radii drawn at squared beam
    width ``width_sq`` from the stream identified by ``seed``."""

    radii: np.ndarray
    width_sq: float
    total_count: int
    seed: int

    def __post_init__(self) -> None:
        radii = np.asarray(self.radii, dtype=float)
        object.__setattr__(self, "radii", radii)
        if radii.ndim != 1:
            raise ValueError(f"radii must be one-dimensional, got shape {radii.shape}")
        if self.total_count != radii.size:
            raise ValueError(
                f"total_count {self.total_count} disagrees with {radii.size} radii"
            )
        if not (self.width_sq > 0.0 and math.isfinite(self.width_sq)):
            raise ValueError(f"width_sq must be positive, got {self.width_sq}")
        if self.seed < 0:
            raise ValueError(f"seed must be nonnegative, got {self.seed}")
        if radii.size and radii.min() < 0.0:
            raise ValueError("radii must be nonnegative")


@dataclass(frozen=True)
class CameraModel:
    """Detector geometry.

    ``mode="continuous"`` records exact radii; ``mode="pixelated"`` bins
    onto a square grid of ``2 * half_extent`` pixels per side centered
    on the optic axis.  ``mean_dark_counts`` is a forward-compatibility
    hook; only the zero value is modeled.
    """

    pixel_pitch: float
    half_extent: int
    mode: Literal["continuous", "pixelated"] = "pixelated"
    mean_dark_counts: float = 0.0

    def __post_init__(self) -> None:
        if self.mode not in ("continuous", "pixelated"):
            raise ValueError(f"unknown camera mode {self.mode!r}")
        if self.mode == "pixelated":
            if not (self.pixel_pitch > 0.0 and math.isfinite(self.pixel_pitch)):
                raise ValueError(f"pixel pitch must be positive, got {self.pixel_pitch}")
            if self.half_extent <= 0:
                raise ValueError(f"half_extent must be positive, got {self.half_extent}")
        if self.mean_dark_counts < 0.0:
            raise ValueError("mean_dark_counts cannot be negative")


@dataclass(frozen=True, eq=False)
class PixelImage:
    """Binned exposure: integer counts per pixel plus an overflow bin for
    photons that landed off the grid, so the total is conserved."""

    counts: np.ndarray
    overflow: int
    pixel_pitch: float

    @property
    def total(self) -> int:
        return int(self.counts.sum()) + self.overflow


def sample_radii(width_sq: float, n: int, seed: int) -> DetectionSample:
    """Draw ``n`` photon radii at squared width ``width_sq``.

    The uniform variate is mapped to (0, 1] before the log so the
    transform never sees zero.
    """
    if n < 0:
        raise ValueError(f"photon count must be nonnegative, got {n}")
    if not (width_sq > 0.0 and math.isfinite(width_sq)):
        raise ValueError(f"width_sq must be positive, got {width_sq}")
    rng = np.random.default_rng(seed)
    u = 1.0 - rng.random(n)
    radii = np.sqrt(-0.5 * width_sq * np.log(u))
    return DetectionSample(radii=radii, width_sq=width_sq, total_count=n, seed=seed)


def poisson_count(mean: float, seed: int) -> int:
    """One Poisson draw for a fluctuating total photon number."""
    if mean < 0.0:
        raise ValueError(f"mean must be nonnegative, got {mean}")
    return int(np.random.default_rng(seed).poisson(mean))


def count_outside(sample: DetectionSample, r_b: float) -> int:
    """Number of detections strictly beyond radius ``r_b``."""
    if r_b < 0.0:
        raise ValueError(f"boundary radius must be nonnegative, got {r_b}")
    return int(np.count_nonzero(sample.radii > r_b))


def pixelate(sample: DetectionSample, camera: CameraModel, seed: int) -> PixelImage:
    """Scatter radii to uniformly random azimuths and bin onto the camera.

    Photons outside the grid go to the overflow bin rather than being
    clipped, so ``PixelImage.total`` always equals the sample size.
    """
    if camera.mode != "pixelated":
        raise ValueError("pixelate needs a camera with mode='pixelated'")
    if camera.mean_dark_counts != 0.0:
        raise NotImplementedError("dark counts are a hook; only 0.0 is modeled")
    rng = np.random.default_rng(seed)
    theta = rng.uniform(0.0, 2.0 * math.pi, sample.total_count)
    x = sample.radii * np.cos(theta)
    y = sample.radii * np.sin(theta)
    side = 2 * camera.half_extent
    ix = np.floor(x / camera.pixel_pitch).astype(np.int64) + camera.half_extent
    iy = np.floor(y / camera.pixel_pitch).astype(np.int64) + camera.half_extent
    on_grid = (ix >= 0) & (ix < side) & (iy >= 0) & (iy < side)
    counts = np.zeros((side, side), dtype=np.int64)
    np.add.at(counts, (iy[on_grid], ix[on_grid]), 1)
    overflow = int(sample.total_count - int(on_grid.sum()))
    return PixelImage(counts=counts, overflow=overflow, pixel_pitch=camera.pixel_pitch)


def write_sample(sample: DetectionSample, path) -> None:
    """Dump raw radii, one per line in decimal meters, behind a
    self-describing header."""
    with open(path, "w", encoding="ascii") as fh:
        fh.write(
            f"{_HEADER_PREFIX}w_sq={sample.width_sq!r} "
            f"n={sample.total_count} seed={sample.seed}\n"
        )
        for r in sample.radii:
            fh.write(f"{float(r)!r}\n")


def read_sample(path) -> DetectionSample:
    """Inverse of ``write_sample``; round-trips bit for bit."""
    with open(path, "r", encoding="ascii") as fh:
        header = fh.readline()
        if not header.startswith(_HEADER_PREFIX):
            raise ValueError(f"{path}: missing sample header")
        fields = dict(item.split("=", 1) for item in header[len(_HEADER_PREFIX):].split())
        try:
            width_sq = float(fields["w_sq"])
            n = int(fields["n"])
            seed = int(fields["seed"])
        except KeyError as missing:
            raise ValueError(f"{path}: header lacks field {missing}") from None
        radii = np.array([float(line) for line in fh], dtype=float)
    return DetectionSample(radii=radii, width_sq=width_sq, total_count=n, seed=seed)
