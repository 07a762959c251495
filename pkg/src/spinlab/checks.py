"""Check registry and scenario runner.

Every check has a stable name, a math anchor string, a tolerance and a
kind:

    assert   worst residual must stay below tolerance
    control  a deliberately corrupted input must push the residual above
             the tolerance (negative control)
    record   the quantity is measured and reported, never failed

Point checks share one :class:`PointEvaluation` per sampled point and one
restricted structure per (point, tag); ambient checks sample the product
chart near the hypersurface image.  Per-check RNG streams are derived from
the scenario seed and the check name, so reports are deterministic and
independent of check selection order.
"""

from __future__ import annotations

import time
import zlib
from dataclasses import dataclass

import numpy as np

from . import hypersurfaces as hyp
from . import restriction as rst
from . import systems as sysmod
from .catalog import build_chart, build_product, sample_points
from .jets import value
from .product import structure
from .reports import (CheckRecord, ResidualReport, Scenario, ScenarioError,
                      tolerance_scale)
from .surfaces import OutsideDomainError


class ScenarioContext:
    """Shared state of one scenario run."""

    def __init__(self, scenario: Scenario):
        self.scenario = scenario
        self.product = build_product(scenario.c1, scenario.c2)
        kind = scenario.hypersurface["kind"]
        params = scenario.hypersurface.get("params", {})
        self.chart = build_chart(kind, params)
        rng = np.random.default_rng(scenario.seed)
        self.points = sample_points(self.chart, scenario.samples, rng)
        self._evals = {}
        self._restrictions = {}

    def rng_for(self, name: str):
        return np.random.default_rng(
            (self.scenario.seed << 16) ^ zlib.crc32(name.encode()))

    def evaluation(self, i: int) -> hyp.PointEvaluation:
        if i not in self._evals:
            self._evals[i] = hyp.evaluate(self.chart, self.product,
                                          self.points[i])
        return self._evals[i]

    def restricted(self, i: int, tag: int) -> rst.RestrictedSpinc:
        key = (i, tag)
        if key not in self._restrictions:
            st = structure(tag, self.scenario.structure_pairing)
            self._restrictions[key] = rst.restrict_structure(
                self.evaluation(i), st)
        return self._restrictions[key]

    @property
    def spin_case(self):
        return self.scenario.c1 == 0.0 and self.scenario.c2 == 0.0


@dataclass(frozen=True)
class CheckSpec:
    name: str
    anchor: str
    tolerance: float
    kind: str
    fn: object


def _max_over_points(ctx, per_point):
    worst = 0.0
    for i in range(len(ctx.points)):
        worst = max(worst, per_point(i))
    return CheckRecord("", "", worst, 0.0, "", points_evaluated=len(ctx.points))


# --- ambient / product-model checks -----------------------------------------

def check_ambient_parallel(ctx):
    rng = ctx.rng_for("ambient.parallel_spinor")
    worst = 0.0
    n = min(20, len(ctx.points))
    ts = np.linspace(-0.5, 0.5, 7)
    for i in range(n):
        p0 = ctx.evaluation(i).position
        vel = 0.2 * rng.standard_normal(4)
        acc = 0.1 * rng.standard_normal(4)
        for tag in (1, 2):
            st = structure(tag, ctx.scenario.structure_pairing)
            worst = max(worst, ctx.product.parallel_residual_on_curve(
                st, p0, vel, acc, ts))
    return CheckRecord("", "", worst, 0.0, "", points_evaluated=n)


def check_ambient_auxiliary(ctx):
    worst = 0.0
    n = min(12, len(ctx.points))
    for i in range(n):
        p = ctx.evaluation(i).position
        for tag in (1, 2):
            st = structure(tag, ctx.scenario.structure_pairing)
            worst = max(worst, ctx.product.auxiliary_curvature_residual(p, st))
    return CheckRecord("", "", worst, 0.0, "", points_evaluated=n)


def check_ambient_product_structure(ctx):
    """F involutive/symmetric/trace-free and rho against finite-difference
    Gauss curvature of the conformal factors."""
    from .product import F_MATRIX
    worst = float(np.max(np.abs(F_MATRIX @ F_MATRIX - np.eye(4))))
    worst = max(worst, float(np.max(np.abs(F_MATRIX - F_MATRIX.T))))
    worst = max(worst, abs(float(np.trace(F_MATRIX))))
    h = 1e-3
    n = min(10, len(ctx.points))
    for i in range(n):
        p = ctx.evaluation(i).position
        for surf, (x, y) in ((ctx.product.factor1, p[:2]),
                             (ctx.product.factor2, p[2:])):
            lam = lambda a, b: value(surf.conformal_factor(a, b))

            def d2(fn):  # fourth-order second derivative stencil
                return (-fn(2 * h) + 16 * fn(h) - 30 * fn(0.0)
                        + 16 * fn(-h) - fn(2 * -h)) / (12 * h * h)

            lap = (d2(lambda t: np.log(lam(x + t, y)))
                   + d2(lambda t: np.log(lam(x, y + t))))
            K = -lap / lam(x, y) ** 2
            # rho coefficient must equal K * lam^2 (area form density)
            rho = value(surf.ricci_form_coefficient(x, y))
            worst = max(worst, abs(rho - K * lam(x, y) ** 2))
    return CheckRecord("", "", worst, 0.0, "", points_evaluated=n)


# --- hypersurface point checks ------------------------------------------------

def check_frame(ctx):
    return _max_over_points(
        ctx, lambda i: hyp.frame_orthonormality_residual(ctx.evaluation(i)))


def check_consistency(ctx):
    worst = 0.0
    H = []
    for i in range(len(ctx.points)):
        ev = ctx.evaluation(i)
        worst = max(worst, max(hyp.consistency_residuals(ev).values()))
        H.append(value(ev.mean_curvature))
    rec = CheckRecord("", "", worst, 0.0, "",
                      points_evaluated=len(ctx.points))
    rec.notes = {"mean_curvature_min": float(min(H)),
                 "mean_curvature_max": float(max(H))}
    return rec


def check_involution(ctx):
    return _max_over_points(
        ctx, lambda i: max(hyp.involution_identities(ctx.evaluation(i)).values()))


def check_contact(ctx):
    return _max_over_points(
        ctx, lambda i: max(hyp.contact_identities(ctx.evaluation(i)).values()))


def check_projection_split(ctx):
    return _max_over_points(
        ctx, lambda i: max(hyp.projection_formulas(ctx.evaluation(i)).values()))


def check_rank_two(ctx):
    worst = 0.0
    for i in range(len(ctx.points)):
        ev = ctx.evaluation(i)
        r = hyp.rank_pair(ev.f_frame, ev.V_frame, value(ev.h))
        worst = max(worst, float(abs(r[0] - 2) + abs(r[1] - 2)))
    return CheckRecord("", "", worst, 0.0, "",
                       points_evaluated=len(ctx.points))


def check_structure_derivatives(ctx):
    return _max_over_points(
        ctx, lambda i: max(hyp.derivative_identities(ctx.evaluation(i)).values()))


def check_gauss(ctx):
    return _max_over_points(ctx, lambda i: hyp.gauss_residual(ctx.evaluation(i)))


def check_codazzi(ctx):
    return _max_over_points(ctx, lambda i: hyp.codazzi_residual(ctx.evaluation(i)))


def check_gauss_control(ctx):
    rng = ctx.rng_for("curvature.gauss_control")
    highs = []
    n = min(10, len(ctx.points))
    for i in range(n):
        ev = ctx.evaluation(i)
        highs.append(hyp.gauss_residual(
            ev, E_frame=sysmod.perturbed_shape(ev, rng)))
    rec = CheckRecord("", "", float(max(highs)), 0.0, "", points_evaluated=n)
    rec.notes = {"control": "shape operator perturbed by symmetric "
                            "rank-two noise; residual must exceed tolerance"}
    return rec


def check_xi_derivative(ctx):
    return _max_over_points(
        ctx, lambda i: sysmod.xi_derivative_residual(ctx.evaluation(i)))


def _system_check(tag):
    def fn(ctx):
        worst = 0.0
        degenerate = 0
        for i in range(len(ctx.points)):
            res = sysmod.system_residuals(tag, ctx.evaluation(i))
            worst = max(worst, res.max_residual)
            if res.degenerate:
                degenerate += 1
        rec = CheckRecord("", "", worst, 0.0, "",
                          points_evaluated=len(ctx.points))
        if degenerate:
            rec.notes = {"points_with_vanishing_V": degenerate,
                         "degenerate_equations": ["eq04", "eq08"]}
        return rec
    return fn


def check_system_control(ctx):
    rng = ctx.rng_for("system.control")
    highs = []
    n = min(10, len(ctx.points))
    for i in range(n):
        ev = ctx.evaluation(i)
        ap = sysmod.perturbed_shape(ev, rng)
        highs.append(max(sysmod.system_residuals(1, ev, E_frame=ap).max_residual,
                         sysmod.system_residuals(2, ev, E_frame=ap).max_residual))
    return CheckRecord("", "", float(max(highs)), 0.0, "", points_evaluated=n)


def check_covanish(ctx):
    rng = ctx.rng_for("system.covanish")
    n = min(12, len(ctx.points))
    evs = [ctx.evaluation(i) for i in range(n)]
    rec = CheckRecord("", "", 0.0, 0.0, "", points_evaluated=n)
    notes = {}
    for tag in (1, 2):
        rep = sysmod.gauss_iff_codazzi(tag, evs, rng)
        joint = [min(g, s) for g, s in rep.perturbed_joint]
        notes[f"system{tag}"] = {
            "confirmed": rep.confirmed, "skipped": rep.skipped,
            "counterexamples": rep.counterexamples,
            "perturbed_min_joint": float(min(joint)) if joint else None,
        }
        if not rep.verdict:
            rec.max_residual = 1.0
    rec.notes = notes
    return rec


def _killing_check(tag):
    def fn(ctx):
        worst = 0.0
        for i in range(len(ctx.points)):
            rs = ctx.restricted(i, tag)
            for k in range(3):
                worst = max(worst, rs.killing_residual(rs.ev.frame[:, k]))
        return CheckRecord("", "", worst, 0.0 * worst, "",
                           points_evaluated=len(ctx.points))
    return fn


def _relations_check(tag):
    def fn(ctx):
        rng = ctx.rng_for(f"spinc.relations_s{tag}")
        worst = 0.0
        measured = set()
        for i in range(len(ctx.points)):
            rs = ctx.restricted(i, tag)
            worst = max(worst, rs.anticommutation_residual(rng, trials=3))
            m = rs.volume_measurement()
            worst = max(worst, min(abs(m - 1.0), abs(m + 1.0)))
            measured.add(int(np.sign(m.real)))
        rec = CheckRecord("", "", worst, 0.0, "",
                          points_evaluated=len(ctx.points))
        rec.notes = {"volume_element_sign": sorted(measured)}
        return rec
    return fn


def _normal_condition_check(tag):
    def fn(ctx):
        return _max_over_points(
            ctx, lambda i: rst.algebraic_conditions(ctx.restricted(i, tag)))
    return fn


def check_pairing_identities(ctx):
    return _max_over_points(
        ctx, lambda i: max(rst.pairing_identities(ctx.restricted(i, 2)).values()))


def _omega_check(tag):
    def fn(ctx):
        return _max_over_points(
            ctx, lambda i: rst.omega_formula_residual(ctx.restricted(i, tag)))
    return fn


def _omega_restriction_check(tag):
    def fn(ctx):
        return _max_over_points(
            ctx, lambda i: rst.curvature_restriction_residual(
                ctx.restricted(i, tag)))
    return fn


def check_projection_cancellation(ctx):
    return _max_over_points(
        ctx, lambda i: max(rst.projection_cancellation_residuals(
            ctx.evaluation(i)).values()))


def _dirac_check(tag):
    def fn(ctx):
        worst = 0.0
        for i in range(len(ctx.points)):
            worst = max(worst, rst.dirac_and_energy_momentum(
                ctx.restricted(i, tag)).dirac_residual)
        return CheckRecord("", "", worst, 0.0, "",
                           points_evaluated=len(ctx.points))
    return fn


def check_energy_momentum_s1(ctx):
    worst = 0.0
    for i in range(len(ctx.points)):
        de = rst.dirac_and_energy_momentum(ctx.restricted(i, 1))
        worst = max(worst, float(np.max(np.abs(de.Q - ctx.evaluation(i).E_frame))))
    return CheckRecord("", "", worst, 0.0, "", points_evaluated=len(ctx.points))


def check_energy_momentum_s2(ctx):
    worst = 0.0
    signs = set()
    for i in range(len(ctx.points)):
        ev = ctx.evaluation(i)
        de = rst.dirac_and_energy_momentum(ctx.restricted(i, 2))
        worst = max(worst, de.Q_vs_E)
        if float(np.max(np.abs(ev.E_frame))) > 1e-10:
            signs.add(de.Q_sign)
    rec = CheckRecord("", "", worst, 0.0, "", points_evaluated=len(ctx.points))
    rec.notes = {"measured_sign_Q_vs_E": sorted(signs) if signs
                 else "indeterminate (E = 0 everywhere)"}
    return rec


def check_umbilic(ctx):
    verified = skipped = 0
    worst = 0.0
    worst_xi = 0.0
    for i in range(len(ctx.points)):
        r = sysmod.umbilic_gradient_identity(ctx.evaluation(i))
        if not r.umbilic:
            skipped += 1
            continue
        verified += 1
        worst = max(worst, r.residuals["dH-tangential"],
                    r.residuals["norm-identity"])
        worst_xi = max(worst_xi, r.residuals["dH-xi"])
    rec = CheckRecord("", "", worst, 0.0, "",
                      points_evaluated=verified, points_skipped=skipped,
                      skip_reason="non-umbilic point" if skipped else "")
    rec.notes = {"umbilic_points": verified,
                 "dH_xi_max": worst_xi,
                 "status": "verified" if verified else "vacuous (no umbilic points)"}
    return rec


def check_converse(ctx):
    worst_ratio = 0.0
    worst_name = ""
    for i in range(len(ctx.points)):
        hv = sysmod.harvest(ctx.evaluation(i))
        res, _ = sysmod.converse_check(hv)
        for k, v in res.items():
            ratio = v / sysmod.CONVERSE_TOLERANCES[k]
            if ratio > worst_ratio:
                worst_ratio, worst_name = ratio, k
    rec = CheckRecord("", "", worst_ratio, 0.0, "",
                      points_evaluated=len(ctx.points))
    rec.notes = {"worst_named_check": worst_name,
                 "unit": "residual / per-check tolerance"}
    return rec


def check_spin_case(ctx):
    if not ctx.spin_case:
        rec = CheckRecord("", "", 0.0, 0.0, "", points_evaluated=0,
                          points_skipped=len(ctx.points),
                          skip_reason="factors are curved")
        rec.notes = {"status": "not a spin case (c1, c2) != (0, 0)"}
        return rec
    worst = 0.0
    for i in range(min(10, len(ctx.points))):
        for tag in (1, 2):
            worst = max(worst, float(np.max(np.abs(
                ctx.restricted(i, tag).omega_pullback))))
    rec = CheckRecord("", "", worst, 0.0, "",
                      points_evaluated=min(10, len(ctx.points)))
    rec.notes = {"status": "flat factors: both induced structures coincide "
                           "(spin case), auxiliary curvature vanishes"}
    return rec


REGISTRY = [
    CheckSpec("ambient.product_structure",
              "product endomorphism F: involutive, symmetric, trace free; "
              "Ricci form = curvature times area form (finite differences)",
              1e-7, "assert", check_ambient_product_structure),
    CheckSpec("ambient.parallel_spinor",
              "distinguished constant section is parallel along random curves",
              1e-7, "assert", check_ambient_parallel),
    CheckSpec("ambient.auxiliary_curvature",
              "loop holonomy of the auxiliary gauge equals the curvature "
              "2-form of the structure", 1e-6, "assert",
              check_ambient_auxiliary),
    CheckSpec("frame.orthonormality",
              "adapted frame {e1, Chi e1, xi} is orthonormal",
              1e-12, "assert", check_frame),
    CheckSpec("induced.consistency",
              "unit normal, symmetric second fundamental form, tangency of "
              "xi and V, agreement of both routes to V",
              1e-10, "assert", check_consistency),
    CheckSpec("structure.involution",
              "splitting algebra: f symmetric, f^2 + V (x) V-flat = Id, "
              "f V = -h V, h^2 + |V|^2 = 1", 1e-9, "assert", check_involution),
    CheckSpec("structure.contact",
              "ten pointwise identities tying (Chi, xi, eta) to (f, V, h)",
              1e-9, "assert", check_contact),
    CheckSpec("structure.projection_split",
              "closed forms of the factor projections of V, nu, xi",
              1e-10, "assert", check_projection_split),
    CheckSpec("structure.rank_two",
              "(F + Id)/2 and (F - Id)/2 have rank 2 in the adapted basis",
              0.5, "assert", check_rank_two),
    CheckSpec("structure.derivatives",
              "first-order compatibility: nabla f, nabla V and grad h "
              "expressed through E and V", 1e-6, "assert",
              check_structure_derivatives),
    CheckSpec("curvature.gauss",
              "Gauss equation for a product of two space forms",
              1e-5, "assert", check_gauss),
    CheckSpec("curvature.codazzi",
              "Codazzi equation for a product of two space forms",
              1e-5, "assert", check_codazzi),
    CheckSpec("curvature.gauss_control",
              "negative control: perturbed shape operator must violate the "
              "Gauss equation", 1e-2, "control", check_gauss_control),
    CheckSpec("connection.xi_derivative",
              "derivative of the contact direction: nabla_X xi = Chi E X",
              1e-6, "assert", check_xi_derivative),
    CheckSpec("system.one",
              "twelve scalar components of the Ricci identity for the "
              "positive structure (compatibility system 1)",
              1e-5, "assert", _system_check(1)),
    CheckSpec("system.two",
              "twelve scalar components of the Ricci identity for the "
              "negative structure (compatibility system 2)",
              1e-5, "assert", _system_check(2)),
    CheckSpec("system.control",
              "negative control: perturbed shape operator must violate the "
              "compatibility systems", 1e-2, "control", check_system_control),
    CheckSpec("system.covanish",
              "Gauss and Codazzi residuals vanish together wherever the "
              "compatibility system holds", 0.5, "assert", check_covanish),
    CheckSpec("killing.s1",
              "generalized Killing law nabla_X phi = -1/2 gamma(EX) phi "
              "for the restricted positive-structure spinor",
              1e-6, "assert", _killing_check(1)),
    CheckSpec("killing.s2",
              "generalized Killing law nabla_X phi = +1/2 gamma(EX) phi "
              "for the restricted negative-structure spinor",
              1e-6, "assert", _killing_check(2)),
    CheckSpec("spinc.relations_s1",
              "induced Clifford relations and skew-adjointness; volume "
              "element gamma(e1)gamma(e2)gamma(xi) = -Id measured",
              1e-12, "assert", _relations_check(1)),
    CheckSpec("spinc.relations_s2",
              "induced Clifford relations and skew-adjointness; volume "
              "element measured (negative structure)",
              1e-12, "assert", _relations_check(2)),
    CheckSpec("spinc.normal_condition_s1",
              "gamma(xi) phi = -i phi for the restricted positive-structure "
              "spinor", 1e-8, "assert", _normal_condition_check(1)),
    CheckSpec("spinc.normal_condition_s2",
              "gamma(V) phi = -i gamma(xi) phi + h phi for the restricted "
              "negative-structure spinor", 1e-8, "assert",
              _normal_condition_check(2)),
    CheckSpec("spinc.pairing_identities",
              "four spinor pairings recovering (V, e_i) and h from the "
              "negative-structure spinor", 1e-8, "assert",
              check_pairing_identities),
    CheckSpec("spinc.omega_s1",
              "pullback auxiliary curvature equals its closed form "
              "(positive structure)", 1e-6, "assert", _omega_check(1)),
    CheckSpec("spinc.omega_s2",
              "pullback auxiliary curvature equals its closed form "
              "(negative structure)", 1e-6, "assert", _omega_check(2)),
    CheckSpec("spinc.omega_restriction_s1",
              "restriction law for the Clifford action of the ambient "
              "curvature 2-form (positive structure)", 1e-8, "assert",
              _omega_restriction_check(1)),
    CheckSpec("spinc.omega_restriction_s2",
              "restriction law for the Clifford action of the ambient "
              "curvature 2-form (negative structure)", 1e-8, "assert",
              _omega_restriction_check(2)),
    CheckSpec("spinc.projection_cancellation",
              "tensor cancellation identities for the factor projections of "
              "nu, xi, V acting on the factor spinors", 1e-10, "assert",
              check_projection_cancellation),
    CheckSpec("spinc.dirac_s1",
              "Dirac eigenvalue law D phi = +3/2 H phi (positive structure)",
              1e-5, "assert", _dirac_check(1)),
    CheckSpec("spinc.dirac_s2",
              "Dirac eigenvalue law D phi = -3/2 H phi (negative structure)",
              1e-5, "assert", _dirac_check(2)),
    CheckSpec("spinc.energy_momentum_s1",
              "energy-momentum tensor of the positive-structure spinor "
              "equals the shape operator", 1e-5, "assert",
              check_energy_momentum_s1),
    CheckSpec("spinc.energy_momentum_s2",
              "signed relation of the negative-structure energy-momentum "
              "tensor to the shape operator (recorded)", 1e-5, "record",
              check_energy_momentum_s2),
    CheckSpec("umbilic.gradient_identity",
              "at umbilic points: dH(xi) = 0, dH(e_i) = (c1-c2)/4 (V, e_i), "
              "4|dH| = |V| |c1-c2|", 1e-5, "assert", check_umbilic),
    CheckSpec("theorem.converse_roundtrip",
              "abstract-data direction: harvested point data passes the "
              "full compatibility battery (ratios to per-check tolerances)",
              1.0, "assert", check_converse),
    CheckSpec("spinc.spin_case",
              "flat factors: the two induced structures coincide and the "
              "auxiliary curvature vanishes", 1e-10, "record",
              check_spin_case),
]

REGISTRY_BY_NAME = {spec.name: spec for spec in REGISTRY}


def list_checks():
    return [(s.name, s.kind, s.tolerance, s.anchor) for s in REGISTRY]


def run_scenario(scenario: Scenario) -> ResidualReport:
    t0 = time.perf_counter()
    ctx = ScenarioContext(scenario)
    scale = tolerance_scale()
    names = scenario.checks if scenario.checks is not None \
        else [s.name for s in REGISTRY]
    warnings = []
    if not names:
        warnings.append("empty check list: nothing was verified")
    records = []
    all_pass = True
    for name in names:
        spec = REGISTRY_BY_NAME.get(name)
        if spec is None:
            raise ScenarioError(f"unknown check {name!r}")
        try:
            rec = spec.fn(ctx)
        except (OutsideDomainError, hyp.RankDeficientError) as exc:
            raise ScenarioError(
                f"scenario geometry invalid while running {name!r}: {exc}"
            ) from exc
        rec.name = spec.name
        rec.anchor = spec.anchor
        tol = scenario.tolerances.get(name, spec.tolerance) * scale
        rec.tolerance = tol
        if spec.kind == "record":
            rec.verdict = "recorded"
        elif rec.points_evaluated == 0 and rec.points_skipped > 0:
            rec.verdict = "skip"
        elif spec.kind == "control":
            rec.verdict = "pass" if rec.max_residual > tol else "fail"
        else:
            rec.verdict = "pass" if rec.max_residual <= tol else "fail"
        if rec.verdict == "fail":
            all_pass = False
        records.append(rec)
    runtime = time.perf_counter() - t0
    return ResidualReport(
        scenario=scenario.to_dict(), checks=records,
        overall_verdict="pass" if all_pass else "fail",
        runtime_seconds=runtime, warnings=warnings)


def run_catalog(structure_pairing="standard"):
    """Run every built-in scenario; returns the list of reports."""
    from .catalog import BUILTIN_SCENARIOS
    reports = []
    for raw in BUILTIN_SCENARIOS:
        d = dict(raw)
        d["structure_pairing"] = structure_pairing
        reports.append(run_scenario(Scenario.from_dict(d)))
    return reports
