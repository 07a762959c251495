"""Induced geometry of the catalog hypersurfaces.

Derived reference values used below:
  * flat hyperplane ((u1,u2),(u3,0)): totally geodesic, normal in the second
    factor, so E = 0, h = -1, V = 0 and f has eigenvalues (1, 1, -1).
  * round 3-sphere of radius r in the flat product, torus chart with angle
    alpha between the factor planes: E = Id/r (inner normal), H = 1/r,
    h = |p1|^2/r^2 - |p2|^2/r^2 = cos(2 alpha), |V|^2 = 1 - h^2,
    and grad h = -(2/r) V.
  * geodesic slice in curved factors: E = 0, h = -1, V = 0 and the only
    curvature is the factor-1 block, g(R(e1,e2)e2,e1) = c1.
"""

import numpy as np
import pytest

from conftest import sample
from helpers import fd_gradient, fd_weingarten
from spinlab import build_chart, build_product, evaluate
from spinlab.hypersurfaces import (HypersurfaceChart, RankDeficientError,
                                   codazzi_residual, consistency_residuals,
                                   contact_identities, derivative_identities,
                                   frame_orthonormality_residual,
                                   gauss_residual, involution_identities,
                                   projection_formulas, rank_pair)
from spinlab.jets import value
from spinlab.surfaces import OutsideDomainError


def test_flat_hyperplane_reference_values():
    ev = evaluate(build_chart("flat-hyperplane"), build_product(0.0, 0.0),
                  [0.3, -0.5, 0.2])
    d = ev.data
    assert np.max(np.abs(d.E)) == 0.0
    assert d.h == pytest.approx(-1.0, abs=1e-15)
    assert np.max(np.abs(d.V)) == 0.0
    assert np.allclose(np.sort(np.linalg.eigvals(d.f).real), [-1.0, 1.0, 1.0])
    assert rank_pair(d.f_frame, d.V_frame, d.h) == (2, 2)


@pytest.mark.parametrize("r", [1.0, 2.0])
def test_round_sphere_reference_values(r, rng):
    chart = build_chart("round-sphere", {"r": r})
    prod = build_product(0.0, 0.0)
    for _ in range(5):
        u = rng.uniform(chart.domain[:, 0], chart.domain[:, 1])
        ev = evaluate(chart, prod, u)
        d = ev.data
        assert np.allclose(d.E_frame, np.eye(3) / r, atol=1e-11)
        assert d.H == pytest.approx(1.0 / r, abs=1e-12)
        alpha = u[0]
        assert d.h == pytest.approx(np.cos(2 * alpha), abs=1e-12)
        V2 = float(d.V @ d.g @ d.V)
        assert d.h ** 2 + V2 == pytest.approx(1.0, abs=1e-12)
        # grad h = -(2/r) V [also the h-gradient identity with E = Id/r]
        assert np.max(np.abs(ev.dh + (2.0 / r) * d.g @ d.V)) < 1e-12


def test_round_sphere_mixed_point():
    """At alpha = pi/4 the normal splits evenly: h = 0, |V| = 1,
    |pi_1 nu|^2 = |pi_2 nu|^2 = 1/2."""
    chart = build_chart("round-sphere", {"r": 1.0})
    ev = evaluate(chart, build_product(0.0, 0.0), [np.pi / 4, 0.7, 1.9])
    d = ev.data
    assert abs(d.h) < 1e-14
    assert float(d.V @ d.g @ d.V) == pytest.approx(1.0, abs=1e-14)
    nu = d.nu
    assert nu[0] ** 2 + nu[1] ** 2 == pytest.approx(0.5, abs=1e-14)
    assert nu[2] ** 2 + nu[3] ** 2 == pytest.approx(0.5, abs=1e-14)


def test_geodesic_slice_curvature_block():
    prod = build_product(1.0, -0.5)
    ev = evaluate(build_chart("slice-geodesic"), prod, [0.2, -0.3, 0.4])
    d = ev.data
    assert np.max(np.abs(d.E)) < 1e-15
    assert d.h == pytest.approx(-1.0, abs=1e-14)
    assert np.max(np.abs(d.V)) < 1e-15
    # factor-1 tangent plane carries curvature c1; we locate it via f = +1
    evec = np.linalg.eigh(d.f_frame)[1][:, 1:]  # eigenvalues (-1, 1, 1)
    e1, e2 = evec[:, 0], evec[:, 1]
    R = ev.riemann_frame
    sec = np.einsum("i,j,k,l,ijkl->", e1, e2, e2, e1, R)
    assert sec == pytest.approx(1.0, abs=1e-12)


def test_weingarten_against_finite_differences(rng):
    prod = build_product(1.0, 0.8)
    chart = build_chart("sphere-circle-tube", {"a": 0.5})
    for _ in range(4):
        u = rng.uniform(chart.domain[:, 0], chart.domain[:, 1])
        ev = evaluate(chart, prod, u)
        Efd = fd_weingarten(chart, prod, u)
        assert np.max(np.abs(Efd - ev.E_mixed_val)) < 1e-7


def test_mean_curvature_gradient_against_fd(rng):
    prod = build_product(1.0, 0.0)
    chart = build_chart("graph")
    for _ in range(3):
        u = rng.uniform(chart.domain[:, 0], chart.domain[:, 1])
        ev = evaluate(chart, prod, u)
        dH_fd = fd_gradient(
            lambda uu: value(evaluate(chart, prod, uu).mean_curvature), u)
        assert np.max(np.abs(dH_fd - ev.dH)) < 1e-7


def test_identity_battery_on_catalog(members, rng):
    """Pointwise identities below 1e-9 on >= 5 members x 100 points."""
    assert len(members) >= 5
    for name, prod, chart in members:
        pts = sample(chart, rng, 100)
        worst = 0.0
        for u in pts:
            ev = evaluate(chart, prod, u)
            worst = max(worst,
                        max(involution_identities(ev).values()),
                        max(contact_identities(ev).values()),
                        max(consistency_residuals(ev).values()),
                        frame_orthonormality_residual(ev))
            assert max(projection_formulas(ev).values()) < 1e-10
        assert worst < 1e-9, name


def test_frame_is_orthonormal_tightly(members, rng):
    for name, prod, chart in members:
        for u in sample(chart, rng, 20):
            assert frame_orthonormality_residual(
                evaluate(chart, prod, u)) < 1e-12, name


def test_gauss_codazzi_on_catalog(members, rng):
    for name, prod, chart in members:
        for u in sample(chart, rng, 30):
            ev = evaluate(chart, prod, u)
            assert gauss_residual(ev) < 1e-5, name
            assert codazzi_residual(ev) < 1e-5, name


def test_structure_derivative_identities_on_catalog(members, rng):
    for name, prod, chart in members:
        for u in sample(chart, rng, 30):
            ev = evaluate(chart, prod, u)
            assert max(derivative_identities(ev).values()) < 1e-6, name


def test_shape_operator_symmetric(members, rng):
    from spinlab.jets import values
    for name, prod, chart in members:
        for u in sample(chart, rng, 20):
            II = values(evaluate(chart, prod, u).second_fundamental)
            assert np.max(np.abs(II - II.T)) < 1e-10, name


def test_rank_detection_flags_corruption(rng):
    ev = evaluate(build_chart("graph"), build_product(1.0, 0.0),
                  [0.3, -0.2, 0.4])
    d = ev.data
    assert rank_pair(d.f_frame, d.V_frame, d.h) == (2, 2)
    bad = rank_pair(d.f_frame, d.V_frame, d.h + 0.3)
    assert bad != (2, 2)
    assert max(bad) >= 3


def test_rank_two_trivial_at_slice():
    ev = evaluate(build_chart("slice-geodesic"), build_product(1.0, -0.5),
                  [0.1, 0.1, 0.1])
    d = ev.data
    # h = -1, V = 0: (F + Id)/2 projects onto the first factor directions
    F4 = np.empty((4, 4))
    F4[:3, :3] = d.f_frame
    F4[:3, 3] = d.V_frame
    F4[3, :3] = d.V_frame
    F4[3, 3] = d.h
    P = (F4 + np.eye(4)) / 2.0
    assert np.allclose(P @ P, P, atol=1e-12)
    assert rank_pair(d.f_frame, d.V_frame, d.h) == (2, 2)


def test_outside_domain_raises():
    prod = build_product(0.0, -1.0)  # factor-2 chart radius 2
    chart = build_chart("flat-hyperplane")
    with pytest.raises(OutsideDomainError):
        evaluate(chart, prod, [0.0, 0.0, 2.5])


def test_rank_deficient_immersion_raises():
    # a map collapsing the third direction is not an immersion
    bad = HypersurfaceChart(
        kind="degenerate",
        map_fn=lambda x, y, z: (x, y, 0.0 * z, 0.0 * z),
        domain=np.array([[-1, 1], [-1, 1], [-1, 1]]))
    with pytest.raises(RankDeficientError):
        evaluate(bad, build_product(0.0, 0.0), [0.1, 0.2, 0.3])


def test_sphere_poles_are_rank_deficient():
    chart = build_chart("round-sphere", {"r": 1.0})
    with pytest.raises(RankDeficientError):
        evaluate(chart, build_product(0.0, 0.0), [0.0, 1.0, 2.0])
