"""Fisher information for axial localization with Gaussian beams.

The quantum limit for estimating the axial position of a Gaussian beam
is flat in z: Q = 1 / z_R^2 per detected photon.  The classical
information carried by an intensity-only (photon-counting) measurement
of the transverse profile is

    F(z) = (d/dz ln w^2(z))^2,

which saturates Q exactly one Rayleigh range on either side of the
waist.  This module computes both sides of that comparison three
independent ways (closed form, radial quadrature of the intensity
score, spectral-domain generator variance), propagates the classical
information through a thin-lens relay, and locates the detection planes
where the relayed measurement is optimal.

All positions are meters.  Information values are 1/m^2.
"""

from __future__ import annotations

import functools
import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np
from scipy import special

from .beam_optics import (
    BeamParams,
    FieldFamily,
    RelaySystem,
    beam_width_sq,
    intensity_pdf,
    relay_transform,
    wavefront_curvature,
)
from .numerics import (
    DEFAULT_REL_TOL,
    central_derivative,
    finite_integral,
    integral_to_infinity,
)

#: Pinned relative step for axial finite differences, in units of the
#: caller's axial scale.
FD_STEP_FRACTION = 1e-6

#: Absolute floor for axial finite-difference steps [m].
FD_STEP_FLOOR = 1e-12

#: |f - z + z_R| below this many Rayleigh ranges makes the closed-form
#: optimal-plane parameter alpha meaningless.
ALPHA_DEGENERACY_TOL = 1e-12


class DegenerateAlphaError(ArithmeticError):
    """The closed-form optimal-plane parameter alpha is singular or zero.

    The physics is fine (the information landscape still has maxima);
    only the coordinate form degenerates.  Callers should fall back to
    ``optimal_planes_numeric``.
    """


class NoGeometricImageError(ValueError):
    """Object at the front focal plane: the geometric image is at infinity."""


class NormalizationDriftError(RuntimeError):
    """A field profile failed to renormalize within tolerance."""

    def __init__(self, message: str, drift: float):
        super().__init__(message)
        self.drift = drift


@dataclass(frozen=True)
class FisherScan:
    """Classical information sampled over detection planes, with the
    quantum ceiling it is measured against."""

    plane_positions: np.ndarray
    fi_values: np.ndarray
    qfi: float

    def __post_init__(self) -> None:
        planes = np.asarray(self.plane_positions, dtype=float)
        values = np.asarray(self.fi_values, dtype=float)
        object.__setattr__(self, "plane_positions", planes)
        object.__setattr__(self, "fi_values", values)
        if planes.shape != values.shape:
            raise ValueError(
                f"plane/value shape mismatch: {planes.shape} vs {values.shape}"
            )
        if not (self.qfi > 0.0 and math.isfinite(self.qfi)):
            raise ValueError(f"qfi must be positive and finite, got {self.qfi}")
        if values.size:
            if values.min() < 0.0:
                raise ValueError("classical information cannot be negative")
            if values.max() > self.qfi * (1.0 + 1e-9):
                raise ValueError(
                    "classical information exceeds the quantum bound: "
                    f"max F = {values.max()!r} > Q = {self.qfi!r}"
                )


@dataclass(frozen=True)
class OptimalPlanes:
    """The two image-side planes where the relayed intensity measurement
    reaches the quantum bound.  ``alpha`` is the asymmetry parameter of
    the closed form; it is NaN when the planes were found numerically."""

    alpha: float
    plane_plus: float
    plane_minus: float

    def __post_init__(self) -> None:
        if not (math.isfinite(self.plane_plus) and math.isfinite(self.plane_minus)):
            raise ValueError("optimal planes must be finite")


# ---------------------------------------------------------------------------
# Quantum side
# ---------------------------------------------------------------------------


def qfi_gaussian(beam: BeamParams) -> float:
    """Per-photon quantum information for axial displacement: 1 / z_R^2.

    Independent of z; free propagation is unitary so the information
    cannot decay with distance.
    """
    zr = beam.rayleigh_range
    return 1.0 / (zr * zr)


@functools.cache
def _waist_mode_spectral_moments() -> tuple[float, float, float]:
    """Moments (M0, M2, M4) of the waist mode's spatial-frequency density.

    Works in dimensionless variables u = r / w0, kappa = q * w0.  The
    transform g~(kappa) = integral g(u) J0(kappa u) u du is evaluated by
    quadrature for each kappa the outer moment integrals request, so the
    momentum-space density is obtained numerically rather than from the
    known closed form.

    Both integrals are truncated where their Gaussian windows underflow
    double precision (e^{-u^2} beyond u = 12, the spectral density beyond
    kappa = 30), which keeps the Bessel oscillation count bounded and the
    adaptive rule convergent at every requested kappa.
    """
    amp = math.sqrt(2.0 / math.pi)
    u_max = 12.0
    kappa_max = 30.0

    @functools.lru_cache(maxsize=None)
    def transform(kappa: float) -> float:
        return finite_integral(
            lambda u: amp * math.exp(-u * u) * special.j0(kappa * u) * u,
            0.0,
            u_max,
            rel_tol=1e-12,
            abs_tol=1e-14,
        )

    def moment(power: int) -> float:
        return finite_integral(
            lambda kappa: (kappa**power) * transform(kappa) ** 2 * 2.0 * math.pi * kappa,
            0.0,
            kappa_max,
            rel_tol=1e-11,
            abs_tol=1e-14,
        )

    return moment(0), moment(2), moment(4)


def generator_moments(beam: BeamParams) -> tuple[float, float]:
    """First and second moments of the axial-displacement generator on
    the waist mode, from spectral-domain quadrature.

    The generator acts multiplicatively in the transverse frequency
    domain with eigenvalue -q^2 / (2k); the moments are taken against
    the numerically transformed mode.
    """
    m0, m2, m4 = _waist_mode_spectral_moments()
    k = beam.wavenumber
    w0_sq = beam.waist**2
    mean = -(m2 / m0) / (2.0 * k * w0_sq)
    second = (m4 / m0) / (4.0 * (k * w0_sq) ** 2)
    return mean, second


def qfi_via_generator(beam: BeamParams) -> float:
    """Quantum information as four times the generator variance.

    An independent route to ``qfi_gaussian``: nothing here assumes the
    1 / z_R^2 form, it emerges from the frequency-domain moments.
    """
    mean, second = generator_moments(beam)
    if not mean < 0.0:
        raise ArithmeticError(
            f"generator mean should be negative, got {mean!r}; "
            "spectral quadrature is inconsistent"
        )
    return 4.0 * (second - mean * mean)


# ---------------------------------------------------------------------------
# Classical side, object space
# ---------------------------------------------------------------------------


def width_log_derivative(beam: BeamParams, z: float) -> float:
    """d/dz ln w^2(z) = 2 z / (z^2 + z_R^2), i.e. twice the curvature."""
    return 2.0 * wavefront_curvature(beam, z)


def classical_fi_analytic(beam: BeamParams, z: float) -> float:
    """Closed-form classical information of the transverse intensity.

    F(z) = (d/dz ln w^2)^2 = 4 C(z)^2.  Equals the quantum bound at
    z = +-z_R and vanishes at the waist.
    """
    slope = width_log_derivative(beam, z)
    return slope * slope


def classical_fi_numeric(
    width_fn: Callable[[float], float],
    z: float,
    quad_tol: float = DEFAULT_REL_TOL,
    step: float | None = None,
) -> float:
    """Classical information by direct radial quadrature of the score.

    F(z) = 2 pi * integral r (d_z p)^2 / p dr  over r in [0, inf)

    with p the normalized intensity for the width law ``width_fn`` and
    d_z p taken by Richardson-extrapolated central differences.  This is
    the reference the closed form is validated against; it shares no
    algebra with ``classical_fi_analytic``.

    ``step`` is the finite-difference step in meters.  Callers that know
    the axial scale of ``width_fn`` should pass
    ``max(1e-6 * scale, 1e-12)``; the default guesses from |z| and the
    local width.
    """
    if not 0.0 < quad_tol <= 1e-4:
        raise ValueError(f"quad_tol must lie in (0, 1e-4], got {quad_tol}")
    w_center = width_fn(z)
    if not (w_center > 0.0 and math.isfinite(w_center)):
        raise ValueError(f"width_fn returned a non-positive width {w_center!r} at z={z!r}")
    if step is None:
        scale = max(abs(z), math.sqrt(w_center))
        step = max(FD_STEP_FRACTION * scale, FD_STEP_FLOOR)

    widths = {}
    for offset in (step, -step, 0.5 * step, -0.5 * step):
        w = width_fn(z + offset)
        if not (w > 0.0 and math.isfinite(w)):
            raise ValueError(f"width_fn returned {w!r} at z={z + offset!r}")
        widths[offset] = w

    def integrand(r: float) -> float:
        p = intensity_pdf(w_center, r)
        if p == 0.0:
            # Far tail: both p and its derivative have underflowed.
            return 0.0
        coarse = (
            intensity_pdf(widths[step], r) - intensity_pdf(widths[-step], r)
        ) / (2.0 * step)
        fine = (
            intensity_pdf(widths[0.5 * step], r)
            - intensity_pdf(widths[-0.5 * step], r)
        ) / step
        dp = (4.0 * fine - coarse) / 3.0
        return r * dp * dp / p

    return 2.0 * math.pi * integral_to_infinity(
        integrand, scale=math.sqrt(w_center), rel_tol=quad_tol
    )


def beam_fi_numeric(beam: BeamParams, z: float, quad_tol: float = DEFAULT_REL_TOL) -> float:
    """``classical_fi_numeric`` for a free beam, with the step pinned to
    the beam's Rayleigh range."""
    return classical_fi_numeric(
        lambda zz: beam_width_sq(beam, zz),
        z,
        quad_tol=quad_tol,
        step=max(FD_STEP_FRACTION * beam.rayleigh_range, FD_STEP_FLOOR),
    )


# ---------------------------------------------------------------------------
# Classical side, through a relay
# ---------------------------------------------------------------------------


def image_width_response(
    beam: BeamParams, relay: RelaySystem, z_prime: float
) -> tuple[float, float]:
    """Squared width at the fixed detector plane z' and its sensitivity
    to the true object distance.

    Returns (w'^2, d w'^2 / dz) where the derivative is taken with
    respect to the object distance z at fixed z', propagated through the
    z-dependence of the magnification, image waist and image waist
    position by the chain rule.
    """
    f = relay.focal_length
    s = relay.object_distance - f
    zr = beam.rayleigh_range
    w0_sq = beam.waist**2

    denom = s * s + zr * zr
    m_sq = f * f / denom
    dm_sq = -2.0 * s * f * f / (denom * denom)

    w0p_sq = m_sq * w0_sq
    dw0p_sq = dm_sq * w0_sq
    zrp = m_sq * zr
    dzrp = dm_sq * zr
    z0p = m_sq * s + f
    dz0p = dm_sq * s + m_sq

    tau = (z_prime - z0p) / zrp
    dtau = (-dz0p - tau * dzrp) / zrp

    w_sq = w0p_sq * (1.0 + tau * tau)
    dw_sq = dw0p_sq * (1.0 + tau * tau) + 2.0 * w0p_sq * tau * dtau
    return w_sq, dw_sq


def image_log_derivative(beam: BeamParams, relay: RelaySystem, z_prime: float) -> float:
    """Signed d/dz ln w'^2 at a fixed detector plane."""
    w_sq, dw_sq = image_width_response(beam, relay, z_prime)
    return dw_sq / w_sq


def image_fi(beam: BeamParams, relay: RelaySystem, z_prime: float) -> float:
    """Classical information about the object distance available from
    the intensity profile at detector plane z'."""
    slope = image_log_derivative(beam, relay, z_prime)
    return slope * slope


def scan_image_fi(
    beam: BeamParams, relay: RelaySystem, plane_positions: Sequence[float]
) -> FisherScan:
    """Evaluate ``image_fi`` over a set of detector planes."""
    planes = np.asarray(plane_positions, dtype=float)
    values = np.array([image_fi(beam, relay, zp) for zp in planes.ravel()])
    return FisherScan(
        plane_positions=planes,
        fi_values=values.reshape(planes.shape),
        qfi=qfi_gaussian(beam),
    )


def geometric_image_plane(relay: RelaySystem) -> float:
    """Thin-lens image position f z / (z - f), from the lens.

    At this plane the relayed width is stationary in the object distance
    and the intensity profile carries no axial information.
    """
    f = relay.focal_length
    z = relay.object_distance
    if z == f:
        raise NoGeometricImageError(
            f"object at the focal distance {f!r}: geometric image is at infinity"
        )
    return f * z / (z - f)


def optimal_detection_planes(beam: BeamParams, relay: RelaySystem) -> OptimalPlanes:
    """Closed-form detector planes where ``image_fi`` reaches the
    quantum bound.

    With alpha = (f - z - z_R) / (f - z + z_R) the planes sit at
    z0' + alpha z_R' and z0' - z_R' / alpha.  When alpha is singular or
    zero the coordinates degenerate (one plane escapes to infinity);
    that raises ``DegenerateAlphaError`` and the caller should use
    ``optimal_planes_numeric`` instead.
    """
    f = relay.focal_length
    z = relay.object_distance
    zr = beam.rayleigh_range
    denom = f - z + zr
    if abs(denom) <= ALPHA_DEGENERACY_TOL * zr:
        raise DegenerateAlphaError(
            f"f - z + z_R = {denom!r} is singular at the scale of z_R = {zr!r}"
        )
    alpha = (f - z - zr) / denom
    if abs(alpha) <= ALPHA_DEGENERACY_TOL:
        raise DegenerateAlphaError(
            f"alpha = {alpha!r}: the second optimal plane recedes to infinity"
        )
    image = relay_transform(beam, relay)
    return OptimalPlanes(
        alpha=alpha,
        plane_plus=image.waist_position + alpha * image.rayleigh_range,
        plane_minus=image.waist_position - image.rayleigh_range / alpha,
    )


def optimal_planes_numeric(
    beam: BeamParams,
    relay: RelaySystem,
    span: float = 30.0,
    grid_points: int = 4001,
) -> OptimalPlanes:
    """Locate the information maxima by direct search over detector planes.

    Scans ``span`` image-side Rayleigh ranges around the image waist,
    picks the interior local maxima, and polishes each with a bounded
    scalar maximization.  Meant as the fallback when the closed form is
    degenerate, and as an independent cross-check of it.
    """
    from scipy import optimize

    image = relay_transform(beam, relay)
    zrp = image.rayleigh_range
    lo = image.waist_position - span * zrp
    hi = image.waist_position + span * zrp
    grid = np.linspace(lo, hi, grid_points)
    values = np.array([image_fi(beam, relay, zp) for zp in grid])

    interior = np.flatnonzero(
        (values[1:-1] >= values[:-2]) & (values[1:-1] >= values[2:])
    ) + 1
    if interior.size == 0:
        raise ArithmeticError(
            "no interior information maximum found; widen the search span"
        )
    # Keep the two strongest distinct maxima (or duplicate a lone one).
    ranked = interior[np.argsort(values[interior])][::-1][:2]
    polished = []
    for idx in ranked:
        res = optimize.minimize_scalar(
            lambda zp: -image_fi(beam, relay, zp),
            bounds=(grid[idx - 1], grid[idx + 1]),
            method="bounded",
            options={"xatol": 1e-13 * max(abs(grid[idx]), zrp)},
        )
        polished.append(res.x)
    if len(polished) == 1:
        polished.append(polished[0])
    plane_plus, plane_minus = max(polished), min(polished)
    return OptimalPlanes(alpha=math.nan, plane_plus=plane_plus, plane_minus=plane_minus)


def preferred_detection_plane(beam: BeamParams, relay: RelaySystem) -> float:
    """Single default detector plane for downstream consumers.

    Of the two optimal planes, prefer the one farther from the geometric
    image plane (more defocus, which tolerates camera-placement error
    better).  If the geometric image does not exist, take the plane
    farther from the lens.
    """
    try:
        planes = optimal_detection_planes(beam, relay)
    except DegenerateAlphaError:
        planes = optimal_planes_numeric(beam, relay)
    try:
        anchor = geometric_image_plane(relay)
    except NoGeometricImageError:
        return max(planes.plane_plus, planes.plane_minus)
    if abs(planes.plane_plus - anchor) >= abs(planes.plane_minus - anchor):
        return planes.plane_plus
    return planes.plane_minus


# ---------------------------------------------------------------------------
# Radial structure of the information
# ---------------------------------------------------------------------------


def fi_density(width_sq: float, dwidth_sq_dz: float, r: float) -> float:
    """Radial density of classical information at radius r.

    F(r) = r p(r) (d_z w^2 / w^2)^2 (2 r^2 / w^2 - 1)^2,

    normalized so that 2 pi * integral F(r) dr equals the total
    information.  Vanishes on the circle r = w / sqrt(2) where the
    intensity is first-order insensitive to defocus.
    """
    if width_sq <= 0.0:
        raise ValueError(f"width_sq must be positive, got {width_sq}")
    if r < 0.0:
        raise ValueError(f"radius must be nonnegative, got {r}")
    slope = dwidth_sq_dz / width_sq
    shape = 2.0 * r * r / width_sq - 1.0
    return r * intensity_pdf(width_sq, r) * slope * slope * shape * shape


def info_boundary(width_sq: float) -> float:
    """Radius w / sqrt(2) of the information-free circle."""
    if width_sq <= 0.0:
        raise ValueError(f"width_sq must be positive, got {width_sq}")
    return math.sqrt(0.5 * width_sq)


def info_fraction_outside(
    width_sq: float, r_b: float, rel_tol: float = 1e-11
) -> float:
    """Fraction of the classical information carried by radii beyond r_b.

    Quadrature ratio of the radial density; the slope factor cancels, so
    the result depends only on r_b / w.
    """
    if width_sq <= 0.0:
        raise ValueError(f"width_sq must be positive, got {width_sq}")
    if r_b < 0.0:
        raise ValueError(f"boundary radius must be nonnegative, got {r_b}")

    def shape(r: float) -> float:
        p = intensity_pdf(width_sq, r)
        if p == 0.0:
            return 0.0
        t = 2.0 * r * r / width_sq - 1.0
        return r * p * t * t

    scale = math.sqrt(width_sq)
    total = integral_to_infinity(shape, scale=scale, rel_tol=rel_tol)
    outside = integral_to_infinity(shape, scale=scale, lower=r_b, rel_tol=rel_tol)
    return outside / total


# ---------------------------------------------------------------------------
# Derivative-based information for arbitrary pure radial fields
# ---------------------------------------------------------------------------


def _complex_radial_inner(
    left: Callable[[float], complex],
    right: Callable[[float], complex],
    scale: float,
    rel_tol: float,
    abs_tol: float,
) -> complex:
    """<left|right> = integral conj(left) right 2 pi r dr."""

    def real_part(r: float) -> float:
        return (left(r).conjugate() * right(r)).real * 2.0 * math.pi * r

    def imag_part(r: float) -> float:
        return (left(r).conjugate() * right(r)).imag * 2.0 * math.pi * r

    return complex(
        integral_to_infinity(real_part, scale=scale, rel_tol=rel_tol, abs_tol=abs_tol),
        integral_to_infinity(imag_part, scale=scale, rel_tol=rel_tol, abs_tol=abs_tol),
    )


def _estimate_transverse_scale(profile: Callable[[float], complex]) -> float:
    """Radius where |profile| falls to 1/e of its axis value, found by
    geometric search.  Used only to condition quadrature maps."""
    center = abs(profile(0.0))
    if not (center > 0.0 and math.isfinite(center)):
        raise ValueError(
            "cannot infer a transverse scale for a profile that vanishes "
            "on axis; pass transverse_scale explicitly"
        )
    target = center / math.e
    r = 1e-12
    for _ in range(120):
        if abs(profile(r)) < target:
            return r
        r *= 2.0
    raise ValueError("field profile does not decay; cannot infer a transverse scale")


def qfi_pure_state(
    field_family: FieldFamily,
    z: float,
    step: float | None = None,
    quad_tol: float = 1e-10,
    transverse_scale: float | None = None,
) -> float:
    """Quantum information of a pure radial field family at parameter z.

    Q = 4 ( <d_z psi | d_z psi> - |<psi | d_z psi>|^2 )

    with the derivative taken by Richardson-extrapolated central
    differences of the renormalized profiles.  Each stencil profile is
    renormalized (so families that lose norm, e.g. after pupil
    filtering, are handled) and phase-aligned to the central profile,
    which removes any piston phase before differencing; the result is
    gauge invariant, so this only improves conditioning.

    ``step`` defaults to 1e-3 |z| (an explicit value is required at
    z = 0) and is then refined once against the result: sqrt(Q) is the
    state's rate of change, so the truncation error scales like
    (sqrt(Q) step)^4 and a first estimate of Q tells us the step that
    meets the tolerance.  An explicitly passed step is used as given.
    """
    refine = step is None
    if step is None:
        if z == 0.0:
            raise ValueError("at z = 0 an explicit finite-difference step is required")
        step = 1e-3 * abs(z)
    if step <= 0.0:
        raise ValueError(f"step must be positive, got {step}")

    center_raw = field_family(z)
    if transverse_scale is None:
        transverse_scale = _estimate_transverse_scale(center_raw)
    if transverse_scale <= 0.0:
        raise ValueError(f"transverse_scale must be positive, got {transverse_scale}")

    def normalized(profile: Callable[[float], complex]) -> Callable[[float], complex]:
        norm_sq = integral_to_infinity(
            lambda r: abs(profile(r)) ** 2 * 2.0 * math.pi * r,
            scale=transverse_scale,
            rel_tol=quad_tol,
        )
        if not (norm_sq > 0.0 and math.isfinite(norm_sq)):
            raise NormalizationDriftError(
                f"field norm^2 = {norm_sq!r} is not a positive finite number",
                drift=float("inf"),
            )
        inv = 1.0 / math.sqrt(norm_sq)
        scaled = lambda r: inv * profile(r)  # noqa: E731
        check = integral_to_infinity(
            lambda r: abs(scaled(r)) ** 2 * 2.0 * math.pi * r,
            scale=transverse_scale,
            rel_tol=quad_tol,
        )
        drift = abs(check - 1.0)
        if drift > 1e-8:
            raise NormalizationDriftError(
                f"renormalized field norm drifted by {drift!r} (tolerance 1e-8)",
                drift=drift,
            )
        return scaled

    psi_c = normalized(center_raw)

    def aligned(offset: float) -> Callable[[float], complex]:
        profile = normalized(field_family(z + offset))
        overlap = _complex_radial_inner(
            psi_c, profile, transverse_scale, quad_tol, abs_tol=quad_tol
        )
        mag = abs(overlap)
        if mag < 1e-3:
            raise ValueError(
                f"stencil field at offset {offset!r} nearly orthogonal to the "
                "center field; reduce the finite-difference step"
            )
        gauge = overlap.conjugate() / mag
        return lambda r: gauge * profile(r)

    def evaluate(h: float) -> float:
        plus_h = aligned(h)
        minus_h = aligned(-h)
        plus_half = aligned(0.5 * h)
        minus_half = aligned(-0.5 * h)

        def dpsi(r: float) -> complex:
            coarse = (plus_h(r) - minus_h(r)) / (2.0 * h)
            fine = (plus_half(r) - minus_half(r)) / h
            return (4.0 * fine - coarse) / 3.0

        grad_sq = integral_to_infinity(
            lambda r: abs(dpsi(r)) ** 2 * 2.0 * math.pi * r,
            scale=transverse_scale,
            rel_tol=quad_tol,
        )
        # Absolute floors keep the adaptive rule from chasing pure
        # roundoff in components that vanish by symmetry.
        floor = quad_tol * (1.0 + math.sqrt(max(grad_sq, 0.0)))
        overlap = _complex_radial_inner(
            psi_c, dpsi, transverse_scale, quad_tol, abs_tol=floor
        )
        return 4.0 * (grad_sq - abs(overlap) ** 2)

    result = evaluate(step)
    if refine and result > 0.0:
        speed = math.sqrt(result)
        if speed * step > 0.02:
            result = evaluate(0.01 / speed)
    return result


def qfi_point_source(wavenumber: float, pupil_width: float, z: float) -> float:
    """Per-detection quantum information for ranging a point source
    through a Gaussian pupil: Q = k^2 w_l^4 / (4 z^4)."""
    if wavenumber <= 0.0:
        raise ValueError(f"wavenumber must be positive, got {wavenumber}")
    if pupil_width <= 0.0:
        raise ValueError(f"pupil width must be positive, got {pupil_width}")
    if z == 0.0:
        raise ValueError("source distance must be nonzero")
    return (wavenumber * pupil_width * pupil_width) ** 2 / (4.0 * z**4)


def point_source_range_std(
    wavenumber: float, pupil_width: float, z: float, detections: int
) -> float:
    """Quantum-limited ranging precision 2 z^2 / (k w_l^2 sqrt(n))."""
    if detections <= 0:
        raise ValueError(f"detections must be positive, got {detections}")
    return 1.0 / math.sqrt(detections * qfi_point_source(wavenumber, pupil_width, z))
