"""Two-dimensional space forms in a single conformal chart.

The surface of constant curvature c is modelled on the plane (c >= 0) or the
disk of radius 2/sqrt(-c) (c < 0) with metric lam^2 (du^2 + dv^2), where

    lam(u, v) = 1 / (1 + (c/4)(u^2 + v^2)).

For c > 0 the chart misses one point of the sphere; all sampling happens at
desk scale well inside the domain.  The orthonormal frame is fixed once and
for all as eps1 = lam^-1 d_u, eps2 = lam^-1 d_v = J eps1, which pins the
frame rotation form w12(X) = <nabla_X eps1, eps2>:

    w12 = (c/2) lam (v du - u dv),      d(w12) = -c vol.

All evaluators accept floats or jets.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .jets import value


class OutsideDomainError(ValueError):
    pass


@dataclass(frozen=True)
class SurfaceModel:
    curvature: float

    @property
    def chart_radius(self):
        """Radius of the chart domain; None means the whole plane."""
        c = self.curvature
        return None if c >= 0 else 2.0 / np.sqrt(-c)

    def contains(self, x, y, margin=0.0):
        r = self.chart_radius
        if r is None:
            return True
        return value(x) ** 2 + value(y) ** 2 < (r - margin) ** 2

    def check_point(self, x, y):
        if not self.contains(x, y):
            raise OutsideDomainError(
                f"point ({value(x):.3f}, {value(y):.3f}) outside chart of curvature "
                f"{self.curvature}")

    def conformal_factor(self, x, y):
        self.check_point(x, y)
        return 1.0 / (1.0 + 0.25 * self.curvature * (x * x + y * y))

    def log_factor_gradient(self, x, y):
        """(d_u log lam, d_v log lam) in closed form."""
        lam = self.conformal_factor(x, y)
        c2 = 0.5 * self.curvature
        return (-c2 * x * lam, -c2 * y * lam)

    def christoffels(self, x, y):
        """Christoffel symbols G[a][b][c] = Gamma^a_{bc} of lam^2(du^2+dv^2)."""
        lx, ly = self.log_factor_gradient(x, y)
        return [
            [[lx, ly], [ly, -1.0 * lx]],
            [[-1.0 * ly, lx], [lx, ly]],
        ]

    def frame_rotation_form(self, x, y):
        """Chart components (w_u, w_v) of w12."""
        lam = self.conformal_factor(x, y)
        c2 = 0.5 * self.curvature
        return (c2 * y * lam, -c2 * x * lam)

    def ricci_form_coefficient(self, x, y):
        """rho = coeff du ^ dv with coeff = c lam^2 (the Ricci 2-form)."""
        lam = self.conformal_factor(x, y)
        return self.curvature * lam * lam

    def frame_components(self, x, y, w):
        """Orthonormal-frame components of a chart tangent vector w."""
        lam = self.conformal_factor(x, y)
        return (lam * w[0], lam * w[1])
