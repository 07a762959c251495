"""Registry of named hypersurface charts and the built-in scenarios.

Catalog keys
------------
flat-hyperplane        u -> ((u1, u2), (u3, 0)); totally geodesic slice of the
                       flat product, h = -1, V = 0.
round-sphere           torus-style parametrization of the chart sphere
                       |p| = r.  For c1 = c2 = 0 this is the round 3-sphere
                       with inner normal (orientation -1, so H = 1/r > 0);
                       for curved factors it is a generic compact hypersurface
                       exercising every term of the theory.
slice-geodesic         u -> ((u1, u2), (u3, 0)) viewed inside curved factors;
                       the second-factor line through the chart origin is a
                       geodesic, so the slice is totally geodesic with
                       h = -1, V = 0 and factor-1 curvature only.
sphere-circle-tube     product of the first factor with the chart circle of
                       radius a in the second factor; parallel nonzero shape
                       operator.
graph                  ((u1, u2), (u3, w(u))) for a fixed trigonometric
                       polynomial family w; coefficients come from the
                       scenario parameters, giving generic E, V, h fields.
"""

from __future__ import annotations

import numpy as np

from .hypersurfaces import HypersurfaceChart
from .jets import jcos, jsin
from .product import ProductModel

DEFAULT_GRAPH_COEFFS = (0.25, 0.2, 0.15, 0.2, 0.1)


def _flat_hyperplane(params):
    return HypersurfaceChart(
        kind="flat-hyperplane",
        map_fn=lambda x, y, z: (x, y, z, 0.0 * z),
        domain=np.array([[-1.0, 1.0], [-1.0, 1.0], [-1.0, 1.0]]),
        orientation=int(params.get("orientation", 1)),
        params=dict(params),
    )


def _round_sphere(params):
    r = float(params.get("r", 1.0))

    def sphere_map(x, y, z):
        ca, sa = jcos(x), jsin(x)
        return (r * ca * jcos(y), r * ca * jsin(y),
                r * sa * jcos(z), r * sa * jsin(z))

    # orientation -1 selects the inner normal -p/r (positive mean curvature)
    return HypersurfaceChart(
        kind="round-sphere",
        map_fn=sphere_map,
        domain=np.array([[0.25, 1.32], [0.0, 6.28], [0.0, 6.28]]),
        orientation=int(params.get("orientation", -1)),
        params=dict(params, r=r),
    )


def _slice_geodesic(params):
    return HypersurfaceChart(
        kind="slice-geodesic",
        map_fn=lambda x, y, z: (x, y, z, 0.0 * z),
        domain=np.array([[-0.7, 0.7], [-0.7, 0.7], [-0.7, 0.7]]),
        orientation=int(params.get("orientation", 1)),
        params=dict(params),
    )


def _sphere_circle_tube(params):
    a = float(params.get("a", 0.5))
    return HypersurfaceChart(
        kind="sphere-circle-tube",
        map_fn=lambda x, y, z: (x, y, a * jcos(z), a * jsin(z)),
        domain=np.array([[-0.7, 0.7], [-0.7, 0.7], [0.0, 6.28]]),
        orientation=int(params.get("orientation", 1)),
        params=dict(params, a=a),
    )


def _graph(params):
    co = tuple(float(c) for c in params.get("coeffs", DEFAULT_GRAPH_COEFFS))
    if len(co) != 5:
        raise ValueError("graph expects 5 coefficients")

    def graph_map(x, y, z):
        w = (co[0] * jsin(x) * jcos(y) + co[1] * z * z + co[2] * x * z
             + co[3] * jsin(y) + co[4] * y * z)
        return (x, y, z, w)

    return HypersurfaceChart(
        kind="graph",
        map_fn=graph_map,
        domain=np.array([[-0.7, 0.7], [-0.7, 0.7], [-0.7, 0.7]]),
        orientation=int(params.get("orientation", 1)),
        params=dict(params, coeffs=co),
    )


CATALOG = {
    "flat-hyperplane": _flat_hyperplane,
    "round-sphere": _round_sphere,
    "slice-geodesic": _slice_geodesic,
    "sphere-circle-tube": _sphere_circle_tube,
    "graph": _graph,
}


def build_chart(kind: str, params=None) -> HypersurfaceChart:
    if kind not in CATALOG:
        raise KeyError(f"unknown hypersurface kind {kind!r}; "
                       f"known: {sorted(CATALOG)}")
    return CATALOG[kind](params or {})


def sample_points(chart: HypersurfaceChart, count: int, rng) -> np.ndarray:
    box = chart.domain
    return rng.uniform(box[:, 0], box[:, 1], size=(count, 3))


# Built-in scenario definitions (name, c1, c2, hypersurface kind, params).
BUILTIN_SCENARIOS = [
    {"name": "flat-hyperplane", "c1": 0.0, "c2": 0.0,
     "hypersurface": {"kind": "flat-hyperplane", "params": {}},
     "samples": 40, "seed": 11},
    {"name": "round-sphere-flat", "c1": 0.0, "c2": 0.0,
     "hypersurface": {"kind": "round-sphere", "params": {"r": 1.0}},
     "samples": 40, "seed": 12},
    {"name": "slice-geodesic", "c1": 1.0, "c2": -0.5,
     "hypersurface": {"kind": "slice-geodesic", "params": {}},
     "samples": 40, "seed": 13},
    {"name": "sphere-circle-tube", "c1": 1.0, "c2": 0.8,
     "hypersurface": {"kind": "sphere-circle-tube", "params": {"a": 0.5}},
     "samples": 40, "seed": 14},
    {"name": "graph-spherical-flat", "c1": 1.0, "c2": 0.0,
     "hypersurface": {"kind": "graph", "params": {}},
     "samples": 40, "seed": 15},
    {"name": "chart-sphere-curved", "c1": 1.0, "c2": 4.0,
     "hypersurface": {"kind": "round-sphere", "params": {"r": 0.35}},
     "samples": 40, "seed": 16},
    {"name": "graph-flat-spin", "c1": 0.0, "c2": 0.0,
     "hypersurface": {"kind": "graph",
                      "params": {"coeffs": (0.3, 0.15, 0.2, 0.1, 0.12)}},
     "samples": 40, "seed": 17},
]


def build_product(c1: float, c2: float) -> ProductModel:
    return ProductModel(c1, c2)
