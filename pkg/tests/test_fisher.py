import math

import numpy as np
import pytest

from axialfisher.beam_optics import (
    BeamParams,
    RelaySystem,
    beam_width_sq,
    gaussian_field,
    gaussian_field_family,
    image_beam_width_sq,
    pupil_field_family,
    relay_transform,
)
from axialfisher.fisher import (
    DegenerateAlphaError,
    FisherScan,
    NoGeometricImageError,
    NormalizationDriftError,
    beam_fi_numeric,
    classical_fi_analytic,
    classical_fi_numeric,
    fi_density,
    generator_moments,
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
    qfi_pure_state,
    qfi_via_generator,
    scan_image_fi,
    width_log_derivative,
)
from axialfisher.numerics import central_derivative, integral_to_infinity

UNIT = BeamParams(math.pi, 1.0)  # z_R = 1, k = 2, Q = 1
HENE = BeamParams.from_rayleigh_range(632.8e-9, 18.9e-6)

# Reference relay: f = 1, object one beam at z = 5 with z_R = 1.  All the
# image-side quantities are exact small fractions for this geometry.
RELAY = RelaySystem(1.0, 5.0)
PLANE_PLUS = 4.0 / 3.0
PLANE_MINUS = 6.0 / 5.0
GEOMETRIC = 5.0 / 4.0


# ---------------------------------------------------------------------------
# Quantum information
# ---------------------------------------------------------------------------


def test_qfi_is_inverse_square_rayleigh_range():
    assert qfi_gaussian(UNIT) == pytest.approx(1.0, rel=1e-15)
    assert qfi_gaussian(HENE) == pytest.approx(1.0 / 18.9e-6**2, rel=1e-12)


@pytest.mark.parametrize("beam", [UNIT, HENE], ids=["unit", "hene"])
def test_generator_route_reproduces_qfi(beam):
    assert qfi_via_generator(beam) == pytest.approx(qfi_gaussian(beam), rel=1e-12)


def test_generator_moments_against_closed_forms():
    """<G> = -1/(k w0^2) and <G^2> = 2/(k w0^2)^2 for the waist mode."""
    mean, second = generator_moments(HENE)
    k_w0_sq = HENE.wavenumber * HENE.waist**2
    assert mean == pytest.approx(-1.0 / k_w0_sq, rel=1e-10)
    assert second == pytest.approx(2.0 / k_w0_sq**2, rel=1e-10)
    assert mean < 0.0


# ---------------------------------------------------------------------------
# Classical information, free beam
# ---------------------------------------------------------------------------


def test_classical_fi_closed_form_landmarks():
    q = qfi_gaussian(UNIT)
    assert classical_fi_analytic(UNIT, 0.0) == 0.0
    assert classical_fi_analytic(UNIT, 1.0) == pytest.approx(q, rel=1e-15)
    assert classical_fi_analytic(UNIT, -1.0) == pytest.approx(q, rel=1e-15)
    assert classical_fi_analytic(UNIT, 2.0) == pytest.approx(0.64 * q, rel=1e-15)


def test_classical_never_exceeds_quantum():
    q = qfi_gaussian(HENE)
    for z in np.linspace(-6.0, 6.0, 121) * HENE.rayleigh_range:
        assert classical_fi_analytic(HENE, z) <= q * (1.0 + 1e-12)


def test_quadrature_route_matches_closed_form_on_a_grid():
    q = qfi_gaussian(HENE)
    for z in np.linspace(-3.0, 3.0, 13) * HENE.rayleigh_range:
        numeric = beam_fi_numeric(HENE, float(z), quad_tol=1e-10)
        analytic = classical_fi_analytic(HENE, float(z))
        assert abs(numeric - analytic) <= 1e-7 * q + 1e-7 * analytic


def test_quadrature_route_rejects_sloppy_tolerance():
    with pytest.raises(ValueError):
        classical_fi_numeric(lambda z: beam_width_sq(UNIT, z), 1.0, quad_tol=1e-3)


def test_quadrature_route_rejects_bad_width_function():
    with pytest.raises(ValueError):
        classical_fi_numeric(lambda z: -1.0, 1.0)


# ---------------------------------------------------------------------------
# Through the relay
# ---------------------------------------------------------------------------


def test_image_width_response_at_reference_planes():
    w_sq_plus, dw_sq_plus = image_width_response(UNIT, RELAY, PLANE_PLUS)
    assert w_sq_plus == pytest.approx(2.0 / 9.0, rel=1e-13)
    assert dw_sq_plus == pytest.approx(2.0 / 9.0, rel=1e-12)
    w_sq_minus, dw_sq_minus = image_width_response(UNIT, RELAY, PLANE_MINUS)
    assert dw_sq_minus / w_sq_minus == pytest.approx(-1.0, rel=1e-12)


def test_image_width_sensitivity_matches_finite_differences():
    """The chain-rule derivative against a brute-force object shift."""
    configs = [
        (UNIT, RelaySystem(1.0, 5.0), 1.3),
        (UNIT, RelaySystem(1.0, 5.0), 0.4),
        (UNIT, RelaySystem(-2.0, 3.0), -1.0),
        (HENE, RelaySystem(0.1, 0.105), 40.0),
    ]
    for beam, relay, z_prime in configs:
        _, analytic = image_width_response(beam, relay, z_prime)

        def by_shift(z_obj: float) -> float:
            moved = RelaySystem(relay.focal_length, z_obj)
            return image_beam_width_sq(relay_transform(beam, moved), z_prime)

        numeric = central_derivative(
            by_shift, relay.object_distance, step=1e-6 * beam.rayleigh_range
        )
        assert numeric == pytest.approx(analytic, rel=1e-6)


def test_image_fi_saturates_at_both_reference_planes():
    q = qfi_gaussian(UNIT)
    assert image_fi(UNIT, RELAY, PLANE_PLUS) == pytest.approx(q, rel=1e-12)
    assert image_fi(UNIT, RELAY, PLANE_MINUS) == pytest.approx(q, rel=1e-12)


def test_image_fi_vanishes_at_geometric_image_and_back_focal_plane():
    assert image_fi(UNIT, RELAY, GEOMETRIC) < 1e-25
    assert image_fi(UNIT, RELAY, RELAY.focal_length) < 1e-25


def test_optimal_planes_reference_case():
    planes = optimal_detection_planes(UNIT, RELAY)
    assert planes.alpha == pytest.approx(5.0 / 3.0, rel=1e-14)
    assert planes.plane_plus == pytest.approx(PLANE_PLUS, rel=1e-13)
    assert planes.plane_minus == pytest.approx(PLANE_MINUS, rel=1e-13)


def test_optimal_planes_saturate_across_random_geometries():
    """The closed form must hit F = Q for any non-degenerate geometry."""
    rng = np.random.default_rng(20260815)
    for _ in range(60):
        zr = 10.0 ** rng.uniform(-5.0, 0.0)
        beam = BeamParams.from_rayleigh_range(632.8e-9, zr) if zr < 0.1 else BeamParams(
            math.pi * rng.uniform(0.5, 2.0), math.sqrt(zr)
        )
        zr = beam.rayleigh_range
        f = float(rng.choice([-1.0, 1.0])) * 10.0 ** rng.uniform(-2.0, 1.0)
        t = float(rng.choice([-1.0, 1.0])) * rng.uniform(0.05, 0.8)
        relay = RelaySystem(f, f - zr / t)
        planes = optimal_detection_planes(beam, relay)
        q = qfi_gaussian(beam)
        assert image_fi(beam, relay, planes.plane_plus) / q == pytest.approx(1.0, abs=1e-9)
        assert image_fi(beam, relay, planes.plane_minus) / q == pytest.approx(1.0, abs=1e-9)


def test_numeric_search_agrees_with_closed_form():
    closed = optimal_detection_planes(UNIT, RELAY)
    numeric = optimal_planes_numeric(UNIT, RELAY)
    assert math.isnan(numeric.alpha)
    assert numeric.plane_plus == pytest.approx(closed.plane_plus, abs=1e-7)
    assert numeric.plane_minus == pytest.approx(closed.plane_minus, abs=1e-7)


@pytest.mark.parametrize("offset", [1.0, -1.0], ids=["f+zR", "f-zR"])
def test_degenerate_geometries_raise(offset):
    relay = RelaySystem(1.0, 1.0 + offset * UNIT.rayleigh_range)
    with pytest.raises(DegenerateAlphaError):
        optimal_detection_planes(UNIT, relay)


def test_numeric_fallback_on_degenerate_geometry():
    """At z = f + z_R one optimum sits at the image waist and the other
    recedes to infinity; the search must still find the reachable one."""
    relay = RelaySystem(1.0, 2.0)
    planes = optimal_planes_numeric(UNIT, relay)
    image = relay_transform(UNIT, relay)
    q = qfi_gaussian(UNIT)
    best = max(
        image_fi(UNIT, relay, planes.plane_plus),
        image_fi(UNIT, relay, planes.plane_minus),
    )
    assert best / q == pytest.approx(1.0, abs=1e-9)
    assert min(abs(planes.plane_plus - image.waist_position),
               abs(planes.plane_minus - image.waist_position)) < 1e-6 * image.rayleigh_range


def test_geometric_image_plane():
    assert geometric_image_plane(RELAY) == pytest.approx(GEOMETRIC, rel=1e-15)
    with pytest.raises(NoGeometricImageError):
        geometric_image_plane(RelaySystem(1.0, 1.0))


def test_preferred_plane_is_farther_from_geometric_image():
    # |4/3 - 5/4| = 1/12 > |6/5 - 5/4| = 1/20.
    assert preferred_detection_plane(UNIT, RELAY) == pytest.approx(PLANE_PLUS, rel=1e-12)


def test_scan_shape_and_structure():
    image = relay_transform(UNIT, RELAY)
    grid = np.linspace(
        image.waist_position - 6.0 * image.rayleigh_range,
        image.waist_position + 6.0 * image.rayleigh_range,
        601,
    )
    scan = scan_image_fi(UNIT, RELAY, grid)
    assert scan.fi_values.shape == grid.shape
    assert scan.qfi == pytest.approx(1.0, rel=1e-15)
    values = scan.fi_values
    interior_max = np.flatnonzero(
        (values[1:-1] > values[:-2]) & (values[1:-1] > values[2:])
    )
    assert interior_max.size == 2
    # The information dies at the geometric image between the two maxima.
    assert values.min() < 1e-20


def test_scan_rejects_values_above_quantum_bound():
    with pytest.raises(ValueError):
        FisherScan(
            plane_positions=np.array([0.0]),
            fi_values=np.array([1.1]),
            qfi=1.0,
        )


# ---------------------------------------------------------------------------
# Radial structure
# ---------------------------------------------------------------------------


def test_density_integrates_to_total_information():
    z = -HENE.rayleigh_range
    w_sq = beam_width_sq(HENE, z)
    dw_sq = w_sq * width_log_derivative(HENE, z)
    total = 2.0 * math.pi * integral_to_infinity(
        lambda r: fi_density(w_sq, dw_sq, r), scale=math.sqrt(w_sq), rel_tol=1e-11
    )
    assert total == pytest.approx(classical_fi_analytic(HENE, z), rel=1e-9)


def test_density_vanishes_on_axis_and_at_the_boundary():
    w_sq, dw_sq = 2.0, 0.7
    r_b = info_boundary(w_sq)
    assert fi_density(w_sq, dw_sq, 0.0) == 0.0
    peak = max(fi_density(w_sq, dw_sq, r) for r in np.linspace(0.0, 3.0, 301))
    assert fi_density(w_sq, dw_sq, r_b) < 1e-25 * peak


def test_info_boundary_is_width_over_sqrt2():
    assert info_boundary(2.0) == pytest.approx(1.0, rel=1e-15)
    assert info_boundary(HENE.waist**2) == pytest.approx(HENE.waist / math.sqrt(2.0), rel=1e-15)


@pytest.mark.parametrize("width_sq", [1.0, 7.613921547934482e-12])
def test_fraction_outside_boundary_is_two_over_e(width_sq):
    fraction = info_fraction_outside(width_sq, info_boundary(width_sq))
    assert fraction == pytest.approx(2.0 / math.e, rel=1e-12)


def test_fraction_outside_validates_inputs():
    with pytest.raises(ValueError):
        info_fraction_outside(-1.0, 0.5)
    with pytest.raises(ValueError):
        info_fraction_outside(1.0, -0.5)


# ---------------------------------------------------------------------------
# Derivative route for arbitrary fields
# ---------------------------------------------------------------------------


def test_pure_state_route_is_flat_for_the_free_beam():
    family = gaussian_field_family(HENE)
    q = qfi_gaussian(HENE)
    zr = HENE.rayleigh_range
    for z in (0.0, zr, -zr, 3.0 * zr, -3.0 * zr):
        step = 1e-3 * zr if z == 0.0 else None
        assert qfi_pure_state(family, z, step=step) == pytest.approx(q, rel=1e-8)


def test_pure_state_requires_explicit_step_at_origin():
    with pytest.raises(ValueError):
        qfi_pure_state(gaussian_field_family(UNIT), 0.0)


def test_pure_state_renormalizes_scaled_families():
    base = gaussian_field_family(UNIT)

    def scaled(z: float):
        inner = base(z)
        return lambda r: 2.5 * inner(r)

    assert qfi_pure_state(scaled, 1.0) == pytest.approx(qfi_gaussian(UNIT), rel=1e-8)


def test_pure_state_ignores_piston_phase():
    """A huge z-dependent global phase carries no information and must be
    removed by the gauge alignment rather than poisoning the derivative."""
    base = gaussian_field_family(UNIT)

    def spinning(z: float):
        inner = base(z)
        gauge = complex(math.cos(1e6 * z), math.sin(1e6 * z))
        return lambda r: gauge * inner(r)

    assert qfi_pure_state(spinning, 1.0) == pytest.approx(qfi_gaussian(UNIT), rel=1e-8)


def test_pure_state_is_zero_for_a_frozen_family():
    frozen_profile = gaussian_field(UNIT, 0.3)

    def frozen(_z: float):
        return frozen_profile

    assert abs(qfi_pure_state(frozen, 1.0)) <= 1e-12


def test_pure_state_rejects_pathological_profiles():
    def vanishing_on_axis(_z: float):
        return lambda r: complex(r, 0.0)

    with pytest.raises(ValueError):
        qfi_pure_state(vanishing_on_axis, 1.0)

    def non_decaying(_z: float):
        return lambda r: complex(1.0, 0.0)

    with pytest.raises(ValueError):
        qfi_pure_state(non_decaying, 1.0)


def test_pure_state_accepts_explicit_transverse_scale():
    family = gaussian_field_family(UNIT)
    w = math.sqrt(beam_width_sq(UNIT, 1.0))
    assert qfi_pure_state(family, 1.0, transverse_scale=w) == pytest.approx(
        qfi_gaussian(UNIT), rel=1e-8
    )


@pytest.mark.parametrize(
    "wavenumber,pupil_width,distance",
    [(1e7, 1.0, 2e5), (2.0 * math.pi / 632.8e-9, 2e-3, 0.5), (1e6, 0.05, 10.0)],
)
def test_pure_state_matches_point_source_closed_form(wavenumber, pupil_width, distance):
    family = pupil_field_family(pupil_width, wavenumber)
    numeric = qfi_pure_state(family, distance)
    assert numeric == pytest.approx(
        qfi_point_source(wavenumber, pupil_width, distance), rel=1e-6
    )


def test_pure_state_point_source_with_lens_offset():
    """With a focusing term the information depends on z - f, not z."""
    family = pupil_field_family(0.05, 1e6, focal_length=2.0)
    numeric = qfi_pure_state(family, 10.0)
    assert numeric == pytest.approx(qfi_point_source(1e6, 0.05, 8.0), rel=1e-6)


def test_normalization_drift_error_carries_drift():
    err = NormalizationDriftError("drifted", drift=0.25)
    assert err.drift == 0.25


# ---------------------------------------------------------------------------
# Point-source ranging
# ---------------------------------------------------------------------------


def test_point_source_scalings():
    base = qfi_point_source(1e6, 0.05, 10.0)
    assert qfi_point_source(2e6, 0.05, 10.0) == pytest.approx(4.0 * base, rel=1e-14)
    assert qfi_point_source(1e6, 0.1, 10.0) == pytest.approx(16.0 * base, rel=1e-14)
    assert qfi_point_source(1e6, 0.05, 20.0) == pytest.approx(base / 16.0, rel=1e-14)
    assert qfi_point_source(1e6, 0.05, -10.0) == pytest.approx(base, rel=1e-14)


def test_point_source_orbital_reference_numbers():
    assert qfi_point_source(1e7, 1.0, 2e5) == pytest.approx(1.5625e-8, rel=1e-14)
    assert point_source_range_std(1e7, 1.0, 2e5, 1) == pytest.approx(8000.0, rel=1e-14)
    assert point_source_range_std(1e7, 1.0, 2e5, 2_000_000) == pytest.approx(
        8000.0 / math.sqrt(2e6), rel=1e-14
    )


def test_point_source_validation():
    with pytest.raises(ValueError):
        qfi_point_source(-1.0, 1.0, 1.0)
    with pytest.raises(ValueError):
        qfi_point_source(1.0, 0.0, 1.0)
    with pytest.raises(ValueError):
        qfi_point_source(1.0, 1.0, 0.0)
    with pytest.raises(ValueError):
        point_source_range_std(1.0, 1.0, 1.0, 0)
