"""Restricted spin^c structures: Clifford layer, Killing law, curvature
formulas, pairing identities, Dirac operator and energy-momentum tensors."""

import numpy as np
import pytest

from conftest import sample
from helpers import adapted_gauge_derivative
from spinlab import build_chart, build_product, evaluate, structure
from spinlab.hypersurfaces import HypersurfaceChart
from spinlab.restriction import (algebraic_conditions, closed_form_omega,
                                 curvature_restriction_residual,
                                 dirac_and_energy_momentum,
                                 omega_formula_residual, pairing_identities,
                                 projection_cancellation_residuals,
                                 restrict_structure)


def test_restricted_field_has_constant_unit_norm(members, rng):
    for name, prod, chart in members:
        for tag in (1, 2):
            st = structure(tag)
            for u in sample(chart, rng, 100):
                rs = restrict_structure(evaluate(chart, prod, u), st)
                assert abs(np.linalg.norm(rs.psi) - 1.0) < 1e-8, name


def test_clifford_relations_at_points(members, rng):
    for name, prod, chart in members:
        for u in sample(chart, rng, 8):
            ev = evaluate(chart, prod, u)
            for tag in (1, 2):
                rs = restrict_structure(ev, structure(tag))
                assert rs.anticommutation_residual(rng, trials=4) < 1e-12, name


def test_volume_element_measurement(members, rng):
    """gamma(e1) gamma(e2) gamma(xi) acts as -Id on both restricted
    structures for every catalog member (measured, and pinned here)."""
    for name, prod, chart in members:
        for u in sample(chart, rng, 6):
            ev = evaluate(chart, prod, u)
            for tag in (1, 2):
                m = restrict_structure(ev, structure(tag)).volume_measurement()
                assert abs(m + 1.0) < 1e-12, (name, tag, m)


def test_killing_residual_on_catalog(members, rng):
    for name, prod, chart in members:
        for u in sample(chart, rng, 15):
            ev = evaluate(chart, prod, u)
            for tag in (1, 2):
                rs = restrict_structure(ev, structure(tag))
                for k in range(3):
                    assert rs.killing_residual(ev.frame[:, k]) < 1e-6, name


def test_killing_law_against_adapted_gauge_oracle(rng):
    """Independent route: trivialize by the adapted frame, lift the frame
    change to the spin group, differentiate there with the induced
    Levi-Civita rotation coefficients and the restricted auxiliary form.
    Must reproduce -+ 1/2 gamma(EX) phi."""
    cases = [
        ("round-sphere", 0.0, 0.0, {"r": 1.0}),
        ("graph", 1.0, 0.0, {}),
        ("round-sphere", 1.0, 4.0, {"r": 0.35}),
        ("sphere-circle-tube", 1.0, 0.8, {"a": 0.5}),
    ]
    for kind, c1, c2, params in cases:
        prod = build_product(c1, c2)
        chart = build_chart(kind, params)
        for _ in range(3):
            u = rng.uniform(chart.domain[:, 0], chart.domain[:, 1])
            ev = evaluate(chart, prod, u)
            X = rng.standard_normal(3)
            for tag in (1, 2):
                st = structure(tag)
                rs = restrict_structure(ev, st)
                oracle = adapted_gauge_derivative(chart, prod, st, u, X)
                EX = ev.E_mixed_val @ X
                killing_rhs = -0.5 * rs.sign * rs.gamma(EX, rs.psi)
                assert np.linalg.norm(oracle - killing_rhs) < 1e-6
                assert np.linalg.norm(
                    oracle - rs.covariant_derivative(X)) < 1e-6


def test_totally_geodesic_members_have_parallel_spinors():
    for kind, c1, c2 in [("flat-hyperplane", 0.0, 0.0),
                         ("slice-geodesic", 1.0, -0.5)]:
        ev = evaluate(build_chart(kind), build_product(c1, c2),
                      [0.2, -0.1, 0.3])
        for tag in (1, 2):
            rs = restrict_structure(ev, structure(tag))
            for k in range(3):
                assert np.linalg.norm(
                    rs.covariant_derivative(ev.frame[:, k])) < 1e-6


def test_algebraic_conditions_on_catalog(members, rng):
    for name, prod, chart in members:
        for u in sample(chart, rng, 25):
            ev = evaluate(chart, prod, u)
            for tag in (1, 2):
                rs = restrict_structure(ev, structure(tag))
                assert algebraic_conditions(rs) < 1e-8, (name, tag)


def test_algebraic_condition_sign_flip_control():
    """Using the opposite chirality convention in the Clifford restriction
    turns gamma(xi) phi = -i phi into +i phi: the defect saturates at 2.
    Flipping the whole normal instead leaves the condition invariant,
    since xi and nu change sign together."""
    ev = evaluate(build_chart("round-sphere", {"r": 1.0}),
                  build_product(0.0, 0.0), [0.7, 1.0, 2.0])
    rs = restrict_structure(ev, structure(1))
    rs.sign = -rs.sign  # wrong chirality rule for this structure
    assert algebraic_conditions(rs) == pytest.approx(2.0, abs=1e-9)

    base = build_chart("round-sphere", {"r": 1.0})
    flipped = HypersurfaceChart(kind=base.kind, map_fn=base.map_fn,
                                domain=base.domain,
                                orientation=-base.orientation,
                                params=base.params)
    ev2 = evaluate(flipped, build_product(0.0, 0.0), [0.7, 1.0, 2.0])
    assert algebraic_conditions(restrict_structure(ev2, structure(1))) < 1e-12


def test_pairing_identities_on_catalog(members, rng):
    for name, prod, chart in members:
        for u in sample(chart, rng, 25):
            rs = restrict_structure(evaluate(chart, prod, u), structure(2))
            assert max(pairing_identities(rs).values()) < 1e-8, name


def test_pairing_identity_at_extreme_h():
    """Where h = -1 and V = 0 the xi-pairing gives i(gamma(xi)phi, phi) = -1."""
    ev = evaluate(build_chart("slice-geodesic"), build_product(1.0, -0.5),
                  [0.1, 0.2, 0.3])
    rs = restrict_structure(ev, structure(2))
    g3 = rs.gamma_matrix(ev.frame[:, 2])
    val = 1j * np.vdot(rs.psi, g3 @ rs.psi)
    assert val.real == pytest.approx(-1.0, abs=1e-12)
    assert abs(val.imag) < 1e-12


def test_omega_closed_forms_on_catalog(members, rng):
    for name, prod, chart in members:
        for u in sample(chart, rng, 25):
            ev = evaluate(chart, prod, u)
            for tag in (1, 2):
                rs = restrict_structure(ev, structure(tag))
                assert omega_formula_residual(rs) < 1e-6, (name, tag)


def test_omega_slice_value():
    """Geodesic slice (h = -1, V = 0): Omega_1(e1, e2) = -c1, xi-row zero."""
    c1 = 1.0
    ev = evaluate(build_chart("slice-geodesic"), build_product(c1, -0.5),
                  [0.2, 0.1, -0.3])
    rs = restrict_structure(ev, structure(1))
    Om = rs.omega_pullback
    assert Om[0, 1] == pytest.approx(-c1, abs=1e-12)
    assert abs(Om[0, 2]) < 1e-13 and abs(Om[1, 2]) < 1e-13
    ref = closed_form_omega(1, c1, -0.5, -1.0, np.zeros(3))
    assert np.allclose(Om, ref, atol=1e-12)


def test_omega_closed_form_fails_under_flipped_pairing(rng):
    """The pairing with the anti-canonical gauge on the second factor does
    not satisfy the negative-structure curvature formulas; this pins which
    factor carries the anti-canonical gauge."""
    prod = build_product(1.0, 4.0)
    chart = build_chart("round-sphere", {"r": 0.35})
    worst = 0.0
    for u in sample(chart, rng, 10):
        rs = restrict_structure(evaluate(chart, prod, u),
                                structure(2, "flipped"))
        worst = max(worst, omega_formula_residual(rs))
    assert worst > 1e-2


def test_curvature_restriction_relation(members, rng):
    for name, prod, chart in members:
        for u in sample(chart, rng, 20):
            ev = evaluate(chart, prod, u)
            for tag in (1, 2):
                rs = restrict_structure(ev, structure(tag))
                assert curvature_restriction_residual(rs) < 1e-8, (name, tag)


def test_projection_cancellation(members, rng):
    for name, prod, chart in members:
        for u in sample(chart, rng, 30):
            res = projection_cancellation_residuals(evaluate(chart, prod, u))
            assert max(res.values()) < 1e-10, name


def test_dirac_law_on_catalog(members, rng):
    for name, prod, chart in members:
        for u in sample(chart, rng, 15):
            ev = evaluate(chart, prod, u)
            for tag in (1, 2):
                de = dirac_and_energy_momentum(
                    restrict_structure(ev, structure(tag)))
                assert de.dirac_residual < 1e-5, (name, tag)


def test_dirac_eigenvalue_on_sphere():
    r = 2.0
    ev = evaluate(build_chart("round-sphere", {"r": r}),
                  build_product(0.0, 0.0), [0.8, 0.4, 1.3])
    rs = restrict_structure(ev, structure(1))
    nab = [rs.covariant_derivative(ev.frame[:, k]) for k in range(3)]
    D = sum(rs.frame_gammas[k] @ nab[k] for k in range(3))
    assert np.linalg.norm(D - (1.5 / r) * rs.psi) < 1e-12


def test_energy_momentum_structure1_equals_shape(members, rng):
    for name, prod, chart in members:
        for u in sample(chart, rng, 15):
            ev = evaluate(chart, prod, u)
            de = dirac_and_energy_momentum(restrict_structure(ev, structure(1)))
            assert np.max(np.abs(de.Q - ev.E_frame)) < 1e-5, name


def test_energy_momentum_structure2_measured_sign(members, rng):
    """Wherever E != 0 the negative-structure tensor matches -E: the signed
    relation is recorded, and here pinned to the measured value."""
    for name, prod, chart in members:
        for u in sample(chart, rng, 10):
            ev = evaluate(chart, prod, u)
            de = dirac_and_energy_momentum(restrict_structure(ev, structure(2)))
            assert de.Q_vs_E < 1e-5, name
            if np.max(np.abs(ev.E_frame)) > 1e-8:
                assert de.Q_sign == -1, name


def test_vanishing_shape_gives_zero_dirac_and_Q():
    ev = evaluate(build_chart("slice-geodesic"), build_product(1.0, -0.5),
                  [0.0, 0.1, 0.2])
    for tag in (1, 2):
        de = dirac_and_energy_momentum(restrict_structure(ev, structure(tag)))
        assert de.dirac_residual < 1e-14
        assert np.max(np.abs(de.Q)) < 1e-14
