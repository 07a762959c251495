"""The Riemannian product of two surface space forms and its spin^c data.

Chart coordinates are (x1, y1, x2, y2), the two conformal charts side by
side.  The product structure F and the complex structure J = J1 + J2 are
constant matrices in these coordinates:

    F = diag(1, 1, -1, -1),        J = blockdiag([[0,-1],[1,0]], [[0,-1],[1,0]]).

Two spin^c structures carry a parallel spinor.  Each is described by a sign
per factor (+1 canonical, -1 anti-canonical); the auxiliary connection is
gauged so that the distinguished spinor is the constant section

    psi0 = b(s1) (x) b(s2),   b(+1) = (1,0),  b(-1) = (0,1),

in the trivialization of the spinor bundle by the J-adapted frames
(eps1, eps2 = J eps1) of the factors.  The full connection matrix along a
tangent vector X = (X1, X2) is

    C(X) = 1/2 w1(X1) E1 E2 + 1/2 w2(X2) E3 E4
         + (i/2) (s1 w1(X1) + s2 w2(X2)) Id,

with w_i the factor frame rotation forms.  C(X) psi0 = 0 identically, and
the curvature of the auxiliary part reproduces the 2-form

    Omega(X, Y) = -s1 rho1(pi1 X, pi1 Y) - s2 rho2(pi2 X, pi2 Y),

which the loop-holonomy probe verifies numerically rather than assumes.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .clifford import build_clifford
from .jets import value
from .surfaces import SurfaceModel

# 4-point Gauss-Legendre nodes/weights on [0, 1]
_GL_T = 0.5 + np.array([-0.4305681557970263, -0.1699905217924282,
                        0.1699905217924282, 0.4305681557970263])
_GL_W = 0.5 * np.array([0.3478548451374538, 0.6521451548625461,
                        0.6521451548625461, 0.3478548451374538])

J_MATRIX = np.array([
    [0.0, -1.0, 0.0, 0.0],
    [1.0, 0.0, 0.0, 0.0],
    [0.0, 0.0, 0.0, -1.0],
    [0.0, 0.0, 1.0, 0.0],
])
F_MATRIX = np.diag([1.0, 1.0, -1.0, -1.0])


@dataclass(frozen=True)
class SpincStructure:
    """One of the two product spin^c structures, as a sign per factor."""

    tag: int
    signs: tuple

    @property
    def chirality(self):
        """Chirality of the parallel spinor: product of the factor signs."""
        return self.signs[0] * self.signs[1]


def structure(tag: int, pairing: str = "standard") -> SpincStructure:
    """Structure 1 is canonical x canonical; structure 2 carries one
    anti-canonical factor (the first, unless pairing='flipped')."""
    if tag == 1:
        return SpincStructure(1, (1, 1))
    if tag == 2:
        return SpincStructure(2, (-1, 1) if pairing == "standard" else (1, -1))
    raise ValueError("structure tag must be 1 or 2")


class ProductModel:
    """Product of two space forms with its spin^c machinery."""

    def __init__(self, c1: float, c2: float):
        self.factor1 = SurfaceModel(c1)
        self.factor2 = SurfaceModel(c2)
        self.c1 = float(c1)
        self.c2 = float(c2)
        self.scalar_curvature = 2.0 * (self.c1 + self.c2)  # stored, unused
        self.clifford = build_clifford(4)
        self._e12 = self.clifford.generators[0] @ self.clifford.generators[1]
        self._e34 = self.clifford.generators[2] @ self.clifford.generators[3]

    # basic tensors -----------------------------------------------------
    def metric_diagonal(self, p):
        """Diagonal of the product metric in chart coordinates."""
        l1 = self.factor1.conformal_factor(p[0], p[1])
        l2 = self.factor2.conformal_factor(p[2], p[3])
        return [l1 * l1, l1 * l1, l2 * l2, l2 * l2]

    def frame_components(self, p, w):
        """Orthonormal-frame components of a chart tangent 4-vector."""
        l1 = self.factor1.conformal_factor(p[0], p[1])
        l2 = self.factor2.conformal_factor(p[2], p[3])
        return np.array([value(l1 * w[0]), value(l1 * w[1]),
                         value(l2 * w[2]), value(l2 * w[3])])

    def christoffels(self, p):
        """Gamma[a][b][c] with factor-block structure; zero across factors."""
        g1 = self.factor1.christoffels(p[0], p[1])
        g2 = self.factor2.christoffels(p[2], p[3])
        zero = 0.0
        G = [[[zero] * 4 for _ in range(4)] for _ in range(4)]
        for a in range(2):
            for b in range(2):
                for c in range(2):
                    G[a][b][c] = g1[a][b][c]
                    G[a + 2][b + 2][c + 2] = g2[a][b][c]
        return G

    # curvature data ------------------------------------------------------
    def ricci_form(self, p, X, Y, factor: int):
        """rho_i(pi_i X, pi_i Y) for chart tangent vectors X, Y at p."""
        if factor == 1:
            coeff = self.factor1.ricci_form_coefficient(p[0], p[1])
            return coeff * (X[0] * Y[1] - X[1] * Y[0])
        coeff = self.factor2.ricci_form_coefficient(p[2], p[3])
        return coeff * (X[2] * Y[3] - X[3] * Y[2])

    def curvature_form(self, p, X, Y, struct: SpincStructure):
        """Auxiliary curvature 2-form Omega evaluated on chart vectors."""
        s1, s2 = struct.signs
        return (-s1 * self.ricci_form(p, X, Y, 1)
                - s2 * self.ricci_form(p, X, Y, 2))

    # spin^c connection ----------------------------------------------------
    def rotation_forms(self, p, X):
        """(w1(X1), w2(X2)) for a chart tangent vector X at p."""
        a1 = self.factor1.frame_rotation_form(p[0], p[1])
        a2 = self.factor2.frame_rotation_form(p[2], p[3])
        return (a1[0] * X[0] + a1[1] * X[1], a2[0] * X[2] + a2[1] * X[3])

    def auxiliary_form(self, p, X, struct: SpincStructure):
        """Local connection 1-form a(X) of the auxiliary line bundle."""
        w1, w2 = self.rotation_forms(p, X)
        return struct.signs[0] * w1 + struct.signs[1] * w2

    def connection_matrix(self, p, X, struct: SpincStructure):
        """4x4 coefficient matrix C(X) of the spinor connection at p."""
        w1, w2 = self.rotation_forms(p, X)
        w1, w2 = value(w1), value(w2)
        aux = struct.signs[0] * w1 + struct.signs[1] * w2
        return (0.5 * w1 * self._e12 + 0.5 * w2 * self._e34
                + 0.5j * aux * np.eye(4))

    def parallel_spinor(self, struct: SpincStructure):
        """The constant section spanning the parallel line of the structure."""
        b = {1: np.array([1.0, 0.0], dtype=complex),
             -1: np.array([0.0, 1.0], dtype=complex)}
        return np.kron(b[struct.signs[0]], b[struct.signs[1]])

    # verification probes --------------------------------------------------
    def parallel_residual_on_curve(self, struct, p0, vel, acc, ts):
        """max |C(c(t), c'(t)) psi0| along the curve c(t) = p0 + t v + t^2 w."""
        psi0 = self.parallel_spinor(struct)
        worst = 0.0
        p0, vel, acc = map(np.asarray, (p0, vel, acc))
        for t in ts:
            p = p0 + t * vel + t * t * acc
            dp = vel + 2.0 * t * acc
            res = np.linalg.norm(self.connection_matrix(p, dp, struct) @ psi0)
            worst = max(worst, float(res))
        return worst

    def _loop_integral(self, p, a, b, h, struct):
        """Line integral of the auxiliary form around the (a,b) square of side h."""
        ea = np.zeros(4)
        ea[a] = 1.0
        eb = np.zeros(4)
        eb[b] = 1.0
        p = np.asarray(p, dtype=float)
        # square centered at p: the circulation then estimates d(a) at p
        # itself to second order, which Richardson extrapolation removes
        base = p - 0.5 * h * (ea + eb)
        corners = [base, base + h * ea, base + h * ea + h * eb, base + h * eb]
        total = 0.0
        for k in range(4):
            start, stop = corners[k], corners[(k + 1) % 4]
            seg = stop - start
            for t, w in zip(_GL_T, _GL_W):
                q = start + t * seg
                total += w * value(self.auxiliary_form(q, seg, struct))
        return total

    def auxiliary_curvature_residual(self, p, struct, h=0.02):
        """Compare loop-holonomy curvature of the gauge with the closed form.

        Richardson-extrapolated curvature d(a) from two loop sizes against
        curvature_form on every coordinate plane; returns the worst deviation.
        """
        worst = 0.0
        for a in range(4):
            for b in range(a + 1, 4):
                d1 = self._loop_integral(p, a, b, h, struct) / h**2
                d2 = self._loop_integral(p, a, b, h / 2, struct) / (h / 2) ** 2
                approx = (4.0 * d2 - d1) / 3.0
                ea = np.zeros(4)
                ea[a] = 1.0
                eb = np.zeros(4)
                eb[b] = 1.0
                exact = value(self.curvature_form(p, ea, eb, struct))
                worst = max(worst, abs(approx - exact))
        return worst
