"""Parametrized hypersurfaces of a product of two surface space forms.

A chart is a map u = (u1, u2, u3) -> (p1(u), p2(u)) into the two conformal
factor charts.  One evaluation of :class:`PointEvaluation` runs the whole
pipeline in degree-3 jet arithmetic and exposes, at the base point:

  * induced metric, unit normal, shape operator E = -nabla nu, mean curvature
  * the almost contact data (Chi, xi, eta) from J and the splitting (f, V, h)
    of the product structure F
  * Christoffel symbols and curvature tensor of the induced metric
  * covariant derivatives of E, f, V, h, xi and the mean curvature gradient
  * the adapted orthonormal frame {e1, e2 = Chi e1, xi}

Conventions: nu is the chart normal scaled by the chart's orientation flag,
E X = -nabla_X nu (a round 3-sphere of radius r with inner normal has
H = 1/r > 0), R(X,Y) = [nabla_X, nabla_Y] - nabla_[X,Y], and the frame
component R_ijkl means g(R(e_i, e_j) e_k, e_l).  Mixed endomorphism arrays
follow numpy orientation: A[i, j] = (A applied to d_j), component i.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from .jets import Jet, value, values, variables
from .product import F_MATRIX, J_MATRIX, ProductModel

_EPS4 = np.zeros((4, 4, 4, 4))
for _p in itertools.permutations(range(4)):
    _sign = 1.0
    _l = list(_p)
    for _i in range(4):
        for _j in range(_i + 1, 4):
            if _l[_i] > _l[_j]:
                _sign = -_sign
    _EPS4[_p] = _sign


class RankDeficientError(ValueError):
    pass


@dataclass(frozen=True)
class HypersurfaceChart:
    """Immersion u -> (p1(u), p2(u)) given as a jet-composable map."""

    kind: str
    map_fn: object  # callable (x, y, z jets) -> 4 jet components
    domain: np.ndarray  # (3, 2) parameter box used for sampling
    orientation: int = 1
    params: dict = field(default_factory=dict)

    def map_jets(self, u, order=3):
        x, y, z = variables(u, order)
        return list(self.map_fn(x, y, z))

    def point(self, u):
        return values(self.map_jets(u, order=1))


def _inv3(m):
    """Inverse of a 3x3 matrix of jets/floats via the adjugate."""
    a, b, c = m[0]
    d, e, f = m[1]
    g, h, i = m[2]
    A = e * i - f * h
    B = f * g - d * i
    C = d * h - e * g
    det = a * A + b * B + c * C
    adj = [
        [A, c * h - b * i, b * f - c * e],
        [B, a * i - c * g, c * d - a * f],
        [C, b * g - a * h, a * e - b * d],
    ]
    return [[adj[r][s] / det for s in range(3)] for r in range(3)]


class PointEvaluation:
    """All induced data of a hypersurface chart at one parameter point.

    ``order`` is the jet truncation degree: 1 suffices for the pointwise
    splitting algebra, 2 adds the shape operator and first covariant
    derivatives, 3 (default) everything up to the curvature tensor and the
    covariant exterior derivative of E.  Requesting data beyond the chosen
    order trips the jets' validity assertions.
    """

    def __init__(self, chart: HypersurfaceChart, product: ProductModel, u,
                 order: int = 3):
        self.chart = chart
        self.product = product
        self.u = np.asarray(u, dtype=float)
        self.order = order

    # --- immersion-level jets ------------------------------------------
    @cached_property
    def phi(self):
        return self.chart.map_jets(self.u, self.order)

    @cached_property
    def position(self):
        return values(self.phi)

    @cached_property
    def T(self):
        """Coordinate tangent vectors T[alpha][a] = d_alpha Phi^a (jets)."""
        return [[self.phi[a].deriv(al) for a in range(4)] for al in range(3)]

    @cached_property
    def T_val(self):
        return values(self.T)  # (3, 4)

    @cached_property
    def gbar(self):
        return self.product.metric_diagonal(self.phi)

    @cached_property
    def gbar_val(self):
        return values(self.gbar)

    def _bar_dot(self, Xa, Ya):
        return sum(self.gbar[a] * Xa[a] * Ya[a] for a in range(4))

    @cached_property
    def g(self):
        return [[self._bar_dot(self.T[a], self.T[b]) for b in range(3)]
                for a in range(3)]

    @cached_property
    def g_val(self):
        return values(self.g)

    @cached_property
    def g_inv(self):
        return _inv3(self.g)

    @cached_property
    def g_inv_val(self):
        return values(self.g_inv)

    def check_immersion(self, threshold=1e-8):
        sv = np.linalg.svd(
            np.sqrt(self.gbar_val)[:, None] * self.T_val.T, compute_uv=False)
        if sv[-1] <= threshold:
            raise RankDeficientError(
                f"immersion rank below 3 at u={self.u} (min sv {sv[-1]:.2e})")
        return sv[-1]

    @cached_property
    def nu(self):
        """Unit normal (ambient chart components, jets)."""
        w = []
        for mu in range(4):
            s = 0.0
            for a in range(4):
                for b in range(4):
                    for c in range(4):
                        if _EPS4[a, b, c, mu] != 0.0:
                            s = s + _EPS4[a, b, c, mu] * (
                                self.T[0][a] * self.T[1][b] * self.T[2][c])
            w.append(s)
        n = [w[mu] / self.gbar[mu] for mu in range(4)]
        norm = self._bar_dot(n, n).sqrt()
        return [float(self.chart.orientation) * n[mu] / norm for mu in range(4)]

    @cached_property
    def nu_val(self):
        return values(self.nu)

    # --- second fundamental form -----------------------------------------
    @cached_property
    def ambient_gamma(self):
        return self.product.christoffels(self.phi)

    def ambient_derivative(self, alpha, W):
        """nabla_{T_alpha} W for an ambient jet field W along the chart."""
        G = self.ambient_gamma
        out = []
        for a in range(4):
            s = W[a].deriv(alpha) if isinstance(W[a], Jet) else 0.0
            for b in range(4):
                for c in range(4):
                    G_abc = G[a][b][c]
                    if isinstance(G_abc, Jet) or G_abc != 0.0:
                        s = s + G_abc * self.T[alpha][b] * W[c]
            out.append(s)
        return out

    @cached_property
    def shape_ambient(self):
        """E T_alpha = -nabla_{T_alpha} nu as ambient jets, per alpha."""
        return [[-1.0 * w for w in self.ambient_derivative(al, self.nu)]
                for al in range(3)]

    @cached_property
    def second_fundamental(self):
        """II[alpha][beta] = <E T_alpha, T_beta> (jets)."""
        return [[self._bar_dot(self.shape_ambient[a], self.T[b])
                 for b in range(3)] for a in range(3)]

    @cached_property
    def E_mixed(self):
        """Shape operator, E_mixed[i][j] = E^i_j (jets)."""
        II = self.second_fundamental
        return [[sum(self.g_inv[i][c] * II[c][j] for c in range(3))
                 for j in range(3)] for i in range(3)]

    @cached_property
    def E_mixed_val(self):
        return values(self.E_mixed)

    @cached_property
    def mean_curvature(self):
        return sum(self.E_mixed[a][a] for a in range(3)) / 3.0

    # --- product structure splitting --------------------------------------
    @cached_property
    def V_form(self):
        """(V, d_alpha) = <F T_alpha, nu> (jets)."""
        return [self._bar_dot([F_MATRIX[a, a] * self.T[al][a] for a in range(4)],
                              self.nu) for al in range(3)]

    @cached_property
    def h(self):
        Fnu = [F_MATRIX[a, a] * self.nu[a] for a in range(4)]
        return self._bar_dot(Fnu, self.nu)

    @cached_property
    def V_ambient(self):
        Fnu = [F_MATRIX[a, a] * self.nu[a] for a in range(4)]
        return [Fnu[a] - self.h * self.nu[a] for a in range(4)]

    @cached_property
    def V_coord(self):
        return [sum(self.g_inv[a][b] * self.V_form[b] for b in range(3))
                for a in range(3)]

    @cached_property
    def V_coord_val(self):
        return np.array([value(v) for v in self.V_coord])

    @cached_property
    def f_mixed(self):
        """Tangential part of F, f_mixed[i][j] = f^i_j (jets)."""
        cols = []
        for j in range(3):
            fT = [F_MATRIX[a, a] * self.T[j][a] - self.V_form[j] * self.nu[a]
                  for a in range(4)]
            cols.append([sum(self.g_inv[i][c] * self._bar_dot(fT, self.T[c])
                             for c in range(3)) for i in range(3)])
        return [[cols[j][i] for j in range(3)] for i in range(3)]

    @cached_property
    def f_mixed_val(self):
        return values(self.f_mixed)

    # --- almost contact data ----------------------------------------------
    @cached_property
    def xi_ambient(self):
        return [-sum(J_MATRIX[a, b] * self.nu[b] for b in range(4))
                for a in range(4)]

    @cached_property
    def xi_ambient_val(self):
        return values(self.xi_ambient)

    @cached_property
    def xi_coord(self):
        return [sum(self.g_inv[a][b] * self._bar_dot(self.xi_ambient, self.T[b])
                    for b in range(3)) for a in range(3)]

    @cached_property
    def xi_coord_val(self):
        return np.array([value(x) for x in self.xi_coord])

    @cached_property
    def eta(self):
        """eta_alpha = g(xi, d_alpha) (values)."""
        return np.array([value(self._bar_dot(self.xi_ambient, self.T[a]))
                         for a in range(3)])

    @cached_property
    def chi_mixed(self):
        """Chi[i, j] = component i of Chi(d_j), the tangential part of J."""
        out = np.empty((3, 3))
        for j in range(3):
            JT = J_MATRIX @ self.T_val[j]
            for i in range(3):
                out[i, j] = sum(
                    self.g_inv_val[i, c]
                    * float(self.gbar_val @ (JT * self.T_val[c]))
                    for c in range(3))
        return out

    # --- induced Levi-Civita connection and curvature ----------------------
    @cached_property
    def gamma_induced(self):
        """Gamma^d_{bc} of the induced metric (jets, valid to first order)."""
        dg = [[[self.g[b][c].deriv(a) for c in range(3)] for b in range(3)]
              for a in range(3)]
        G = [[[None] * 3 for _ in range(3)] for _ in range(3)]
        for d in range(3):
            for b in range(3):
                for c in range(3):
                    s = 0.0
                    for e in range(3):
                        s = s + self.g_inv[d][e] * (
                            dg[b][e][c] + dg[c][e][b] - dg[e][b][c])
                    G[d][b][c] = 0.5 * s
        return G

    @cached_property
    def gamma_induced_val(self):
        return values(self.gamma_induced)

    @cached_property
    def riemann(self):
        """R[al, be, ga, de] = component de of R(d_al, d_be) d_ga (values)."""
        G = self.gamma_induced
        Gv = self.gamma_induced_val
        dG = np.empty((3, 3, 3, 3))
        for a in range(3):
            for d in range(3):
                for b in range(3):
                    for c in range(3):
                        dG[a, d, b, c] = G[d][b][c].deriv(a).val
        R = np.empty((3, 3, 3, 3))
        for al in range(3):
            for be in range(3):
                for ga in range(3):
                    for de in range(3):
                        s = dG[al, de, be, ga] - dG[be, de, al, ga]
                        for e in range(3):
                            s += (Gv[de, al, e] * Gv[e, be, ga]
                                  - Gv[de, be, e] * Gv[e, al, ga])
                        R[al, be, ga, de] = s
        return R

    def riemann_lower(self):
        """R_{al be ga de} = g(R(d_al, d_be) d_ga, d_de)."""
        return np.einsum("abcd,de->abce", self.riemann, self.g_val)

    # --- covariant derivatives of the induced fields ------------------------
    def _cov_deriv_vector(self, Vjets):
        """(nabla_b V)^a as a (3, 3) value array, indices [b, a]."""
        Gv = self.gamma_induced_val
        Vv = np.array([value(v) for v in Vjets])
        out = np.empty((3, 3))
        for b in range(3):
            for a in range(3):
                out[b, a] = Vjets[a].deriv(b).val + Gv[a, b, :] @ Vv
        return out

    def _cov_deriv_endo(self, Ajets):
        """(nabla_c A)^a_b as a (3, 3, 3) value array, indices [c, a, b]."""
        Gv = self.gamma_induced_val
        Av = values(Ajets)
        out = np.empty((3, 3, 3))
        for c in range(3):
            for a in range(3):
                for b in range(3):
                    s = Ajets[a][b].deriv(c).val
                    s += Gv[a, c, :] @ Av[:, b]
                    s -= Av[a, :] @ Gv[:, c, b]
                    out[c, a, b] = s
        return out

    @cached_property
    def nabla_E(self):
        return self._cov_deriv_endo(self.E_mixed)

    @cached_property
    def nabla_f(self):
        return self._cov_deriv_endo(self.f_mixed)

    @cached_property
    def nabla_V(self):
        return self._cov_deriv_vector(self.V_coord)

    @cached_property
    def nabla_xi(self):
        return self._cov_deriv_vector(self.xi_coord)

    @cached_property
    def dh(self):
        return self.h.grad()

    @cached_property
    def dH(self):
        return self.mean_curvature.grad()

    # --- adapted frame ------------------------------------------------------
    @cached_property
    def frame(self):
        """Columns e1, e2 = Chi e1, e3 = xi in chart coordinates (values)."""
        xi = self.xi_coord_val
        gv = self.g_val
        for seed in ((1.0, 0.0, 0.0), (0.0, 1.0, 0.0)):
            w = np.array(seed) - (np.array(seed) @ gv @ xi) * xi
            n2 = w @ gv @ w
            if n2 > 1e-12:
                e1 = w / np.sqrt(n2)
                break
        else:  # pragma: no cover - charts never degenerate this far
            raise RankDeficientError("no coordinate direction transverse to xi")
        e2 = self.chi_mixed @ e1
        return np.column_stack([e1, e2, xi])

    def frame_ambient(self, i):
        """Ambient chart components of frame vector e_i (values)."""
        return self.frame[:, i] @ self.T_val

    @cached_property
    def E_frame(self):
        """a[i, j] = g(E e_i, e_j) in the adapted frame."""
        return self.frame.T @ self.g_val @ self.E_mixed_val @ self.frame

    @cached_property
    def f_frame(self):
        return self.frame.T @ self.g_val @ self.f_mixed_val @ self.frame

    @cached_property
    def V_frame(self):
        return self.frame.T @ self.g_val @ self.V_coord_val

    @cached_property
    def riemann_frame(self):
        Rl = self.riemann_lower()
        e = self.frame
        return np.einsum("abcd,ai,bj,ck,dl->ijkl", Rl, e, e, e, e)

    @cached_property
    def dE_frame(self):
        """dE[i, j, k] = g(dNabla E(e_i, e_j), e_k) in the adapted frame."""
        gv, nE, e = self.g_val, self.nabla_E, self.frame
        lowered = np.einsum("cab,ad->cbd", nE, gv)  # g((nabla_c E) d_b, d_d)
        out = np.empty((3, 3, 3))
        for i in range(3):
            for j in range(3):
                vec = (np.einsum("c,cbd,b->d", e[:, i], lowered, e[:, j])
                       - np.einsum("c,cbd,b->d", e[:, j], lowered, e[:, i]))
                for k in range(3):
                    out[i, j, k] = vec @ e[:, k]
        return out

    # --- value-level summary -------------------------------------------------
    @cached_property
    def data(self):
        return InducedPointData(
            u=self.u.copy(),
            position=self.position.copy(),
            g=self.g_val.copy(),
            nu=self.nu_val.copy(),
            E=self.E_mixed_val.copy(),
            H=value(self.mean_curvature),
            chi=self.chi_mixed.copy(),
            xi=self.xi_coord_val.copy(),
            eta=self.eta.copy(),
            f=self.f_mixed_val.copy(),
            V=self.V_coord_val.copy(),
            h=value(self.h),
            frame=self.frame.copy(),
            E_frame=self.E_frame.copy(),
            f_frame=self.f_frame.copy(),
            V_frame=self.V_frame.copy(),
        )


@dataclass
class InducedPointData:
    """Pointwise induced quantities of a hypersurface immersion."""

    u: np.ndarray
    position: np.ndarray
    g: np.ndarray
    nu: np.ndarray
    E: np.ndarray
    H: float
    chi: np.ndarray
    xi: np.ndarray
    eta: np.ndarray
    f: np.ndarray
    V: np.ndarray
    h: float
    frame: np.ndarray
    E_frame: np.ndarray
    f_frame: np.ndarray
    V_frame: np.ndarray


def evaluate(chart, product, u, immersion_check=True,
             order: int = 3) -> PointEvaluation:
    ev = PointEvaluation(chart, product, u, order=order)
    if immersion_check:
        ev.check_immersion()
    return ev


# ---------------------------------------------------------------------------
# pointwise identity residuals
# ---------------------------------------------------------------------------

def consistency_residuals(ev: PointEvaluation):
    """Internal consistency of the splitting: normalization, tangency,
    symmetry of the second fundamental form, agreement of the two routes
    to V and xi."""
    out = {}
    out["normal-unit"] = abs(float(ev.gbar_val @ (ev.nu_val * ev.nu_val)) - 1.0)
    out["metric-posdef"] = max(0.0, 1e-12 - float(np.linalg.eigvalsh(ev.g_val)[0]))
    II = values(ev.second_fundamental)
    out["shape-symmetric"] = float(np.max(np.abs(II - II.T)))
    Vamb = np.array([value(v) for v in ev.V_ambient])
    Vtan = ev.V_coord_val @ ev.T_val
    out["product-split"] = float(np.max(np.abs(Vamb - Vtan)))
    xitan = ev.xi_coord_val @ ev.T_val
    out["contact-split"] = float(np.max(np.abs(ev.xi_ambient_val - xitan)))
    return out


def frame_orthonormality_residual(ev: PointEvaluation) -> float:
    gram = ev.frame.T @ ev.g_val @ ev.frame
    return float(np.max(np.abs(gram - np.eye(3))))


def involution_identities(ev: PointEvaluation):
    """f symmetric, f^2 + V (x) V-flat = Id, f V = -h V, h^2 + |V|^2 = 1."""
    gv = ev.g_val
    fv = ev.f_mixed_val
    Vv = ev.V_coord_val
    Vflat = gv @ Vv
    h = value(ev.h)
    out = {}
    out["f-symmetric"] = float(np.max(np.abs(gv @ fv - (gv @ fv).T)))
    out["f-squared"] = float(np.max(np.abs(fv @ fv + np.outer(Vv, Vflat)
                                           - np.eye(3))))
    out["f-of-V"] = float(np.max(np.abs(fv @ Vv + h * Vv)))
    out["unit-split"] = abs(h * h + Vv @ Vflat - 1.0)
    return out


def contact_identities(ev: PointEvaluation):
    """The ten pointwise identities tying (Chi, xi, eta) to (f, V, h)."""
    gv = ev.g_val
    fv = ev.f_mixed_val
    chi = ev.chi_mixed
    xi = ev.xi_coord_val
    Vv = ev.V_coord_val
    h = value(ev.h)
    e = ev.frame
    e1, e2 = e[:, 0], e[:, 1]

    def eta(X):
        return float(X @ gv @ xi)

    def ip(X, Y):
        return float(X @ gv @ Y)

    out = {}
    out["chi-antisymmetric"] = abs(ip(chi @ e1, e2) + ip(e1, chi @ e2))
    out["chi-kills-xi"] = float(np.max(np.abs(chi @ xi)))
    out["JF-commute"] = float(np.max(np.abs(J_MATRIX @ F_MATRIX
                                            - F_MATRIX @ J_MATRIX)))
    r3 = r4 = 0.0
    for X in (e1, e2, xi):
        r3 = max(r3, abs(ip(Vv, chi @ X) + eta(X) * h - eta(fv @ X)))
        r4 = max(r4, float(np.max(np.abs(
            fv @ (chi @ X) + eta(X) * Vv - chi @ (fv @ X) + ip(Vv, X) * xi))))
    out["mixed-endomorphism"] = r3
    out["commutation-split"] = r4
    out["V-horizontal"] = abs(eta(Vv))
    out["f-of-xi"] = float(np.max(np.abs(fv @ xi - h * xi + chi @ Vv)))
    out["f-V-horizontal"] = abs(eta(fv @ Vv))
    out["f-frame-entries"] = max(abs(ip(fv @ e1, e2)),
                                 abs(ip(fv @ e1, e1) + h),
                                 abs(ip(fv @ e2, e2) + h))
    JV = J_MATRIX @ (Vv @ ev.T_val)
    chiV = (chi @ Vv) @ ev.T_val
    out["J-of-V"] = float(np.max(np.abs(JV - chiV)))
    Fxi = F_MATRIX @ (xi @ ev.T_val)
    fxi = (fv @ xi) @ ev.T_val
    out["F-of-xi"] = float(np.max(np.abs(Fxi - fxi)))
    return out


def projection_formulas(ev: PointEvaluation):
    """Factor projections of V, nu, xi against their closed forms."""
    Vamb = ev.V_coord_val @ ev.T_val
    nu = ev.nu_val
    xi = ev.xi_ambient_val
    h = value(ev.h)
    V2 = float(ev.gbar_val @ (Vamb * Vamb))

    def pi1(w):
        return np.array([w[0], w[1], 0.0, 0.0])

    def pi2(w):
        return np.array([0.0, 0.0, w[2], w[3]])

    out = {
        "pi1-V": pi1(Vamb) - ((1.0 - h) * Vamb + V2 * nu) / 2.0,
        "pi2-V": pi2(Vamb) - ((1.0 + h) * Vamb - V2 * nu) / 2.0,
        "pi1-nu": pi1(nu) - ((h + 1.0) * nu + Vamb) / 2.0,
        "pi2-nu": pi2(nu) - ((1.0 - h) * nu - Vamb) / 2.0,
        "pi1-xi": pi1(xi) + J_MATRIX @ pi1(nu),
        "pi2-xi": pi2(xi) + J_MATRIX @ pi2(nu),
    }
    return {k: float(np.max(np.abs(v))) for k, v in out.items()}


def product_structure_matrix(f_frame, V_frame, h):
    """F in the basis {e1, e2, xi, nu} from frame data."""
    F4 = np.empty((4, 4))
    F4[:3, :3] = f_frame
    F4[:3, 3] = V_frame
    F4[3, :3] = V_frame
    F4[3, 3] = h
    return F4


def rank_pair(f_frame, V_frame, h, threshold=1e-8):
    """Numerical ranks of (F + Id)/2 and (F - Id)/2 for the frame data."""
    F4 = product_structure_matrix(f_frame, V_frame, h)
    ranks = []
    for sign in (1.0, -1.0):
        sv = np.linalg.svd((F4 + sign * np.eye(4)) / 2.0, compute_uv=False)
        ranks.append(int(np.sum(sv > threshold)))
    return tuple(ranks)


def gauss_rhs(c1, c2, f_frame, a_frame, i, j, k):
    """Frame components of the Gauss right side for (e_i, e_j) e_k."""
    eye = np.eye(3)
    fp = eye + f_frame
    fm = eye - f_frame
    return (0.25 * c1 * (fp[j, k] * fp[i, :] - fp[i, k] * fp[j, :])
            + 0.25 * c2 * (fm[j, k] * fm[i, :] - fm[i, k] * fm[j, :])
            + a_frame[j, k] * a_frame[i, :] - a_frame[i, k] * a_frame[j, :])


def gauss_residual(ev: PointEvaluation, E_frame=None):
    """max_{ijk} |R(e_i,e_j)e_k - RHS| for the product-target Gauss equation."""
    c1, c2 = ev.product.c1, ev.product.c2
    R = ev.riemann_frame
    a = ev.E_frame if E_frame is None else E_frame
    worst = 0.0
    for i in range(3):
        for j in range(3):
            for k in range(3):
                diff = R[i, j, k, :] - gauss_rhs(c1, c2, ev.f_frame, a, i, j, k)
                worst = max(worst, float(np.max(np.abs(diff))))
    return worst


def codazzi_rhs(c1, c2, f_frame, V_frame, i, j, k):
    g = np.eye(3)
    f = f_frame
    V = V_frame
    t1 = (f[j, k] * V[i] - f[i, k] * V[j] + g[j, k] * V[i] - g[i, k] * V[j])
    t2 = (g[j, k] * V[i] - f[j, k] * V[i] - g[i, k] * V[j] + f[i, k] * V[j])
    return 0.25 * c1 * t1 - 0.25 * c2 * t2


def codazzi_residual(ev: PointEvaluation, dE_frame=None):
    """max_{ijk} |g(dNabla E(e_i, e_j), e_k) - RHS(i, j, k)|."""
    c1, c2 = ev.product.c1, ev.product.c2
    dE = ev.dE_frame if dE_frame is None else dE_frame
    worst = 0.0
    for i in range(3):
        for j in range(3):
            for k in range(3):
                worst = max(worst, abs(
                    dE[i, j, k]
                    - codazzi_rhs(c1, c2, ev.f_frame, ev.V_frame, i, j, k)))
    return worst


def derivative_identities(ev: PointEvaluation):
    """Residuals of the three first-order compatibility equations:
    (nabla_X f)Y = g(Y,V) EX + g(EX,Y) V,  nabla_X V = -f(EX) + h EX,
    and grad h = -2 E V."""
    gv = ev.g_val
    E = ev.E_mixed_val
    fv = ev.f_mixed_val
    Vv = ev.V_coord_val
    h = value(ev.h)
    nf = ev.nabla_f      # [c, a, b]
    nV = ev.nabla_V      # [b, a]
    out = {}
    worst = 0.0
    for c in range(3):
        for b in range(3):
            lhs = nf[c, :, b]
            rhs = (gv @ Vv)[b] * E[:, c] + (gv @ E[:, c])[b] * Vv
            worst = max(worst, float(np.max(np.abs(lhs - rhs))))
    out["f-derivative"] = worst
    worst = 0.0
    for b in range(3):
        lhs = nV[b, :]
        rhs = -fv @ E[:, b] + h * E[:, b]
        worst = max(worst, float(np.max(np.abs(lhs - rhs))))
    out["V-derivative"] = worst
    out["h-gradient"] = float(np.max(np.abs(ev.dh + 2.0 * gv @ E @ Vv)))
    return out
