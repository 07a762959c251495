"""Independent oracles for the test suite.

Everything here recomputes engine quantities through a different route:
finite differences instead of jets, and an adapted-gauge construction of
the induced spinor derivative instead of the hypersurface Gauss formula.
"""

import numpy as np
from scipy.linalg import expm, logm

from spinlab.hypersurfaces import evaluate
from spinlab.jets import value


def fd_second_derivative(f, x, h):
    return (-f(x + 2 * h) + 16 * f(x + h) - 30 * f(x)
            + 16 * f(x - h) - f(x - 2 * h)) / (12 * h * h)


def fd_gradient(f, u, h=1e-6):
    u = np.asarray(u, dtype=float)
    out = np.empty(3)
    for a in range(3):
        e = np.zeros(3)
        e[a] = h
        out[a] = (f(u + e) - f(u - e)) / (2 * h)
    return out


def fd_weingarten(chart, product, u, h=1e-6):
    """Shape operator from central differences of the unit normal field."""
    u = np.asarray(u, dtype=float)
    ev0 = evaluate(chart, product, u)
    G = product.christoffels(ev0.phi)
    E_amb = np.empty((3, 4))
    for al in range(3):
        e = np.zeros(3)
        e[al] = h
        nup = evaluate(chart, product, u + e).nu_val
        num = evaluate(chart, product, u - e).nu_val
        dnu = (nup - num) / (2 * h)
        for a in range(4):
            s = dnu[a]
            for b in range(4):
                for c in range(4):
                    Gv = value(G[a][b][c]) if not isinstance(G[a][b][c], float) \
                        else G[a][b][c]
                    s += Gv * value(ev0.T[al][b]) * ev0.nu_val[c]
            E_amb[al, a] = -s
    # convert to mixed coordinate components
    E = np.empty((3, 3))
    for al in range(3):
        for i in range(3):
            E[i, al] = sum(
                ev0.g_inv_val[i, c] * float(
                    ev0.gbar_val @ (E_amb[al] * ev0.T_val[c]))
                for c in range(3))
    return E


def _gram_schmidt_frame(ev, flip_second):
    """Adapted ambient orthonormal frame (t1, t2, t3, nu), frame components,
    plus the chart-coordinate components of the tangent part."""
    gbar = ev.gbar_val
    rows = []
    coeffs = []
    for al in range(3):
        v = ev.T_val[al].copy()
        c = np.zeros(3)
        c[al] = 1.0
        for t, tc in zip(rows, coeffs):
            proj = float(gbar @ (v * t)) / float(gbar @ (t * t))
            v -= proj * t
            c -= proj * tc
        rows.append(v)
        coeffs.append(c)
    frame_cols = []
    coord_cols = []
    for k, (v, c) in enumerate(zip(rows, coeffs)):
        n = np.sqrt(float(gbar @ (v * v)))
        sign = -1.0 if (flip_second and k == 1) else 1.0
        frame_cols.append(sign * ev.product.frame_components(ev.position, v) / n)
        coord_cols.append(sign * c / n)
    frame_cols.append(ev.product.frame_components(ev.position, ev.nu_val))
    O = np.column_stack(frame_cols)
    return O, np.column_stack(coord_cols)


def adapted_gauge_derivative(chart, product, struct, u, X_coord, h=1e-5):
    """Induced spinor derivative built without the Gauss formula.

    The restricted bundle is trivialized by the adapted frame
    (Gram-Schmidt tangents, normal last); the change of frame is lifted to
    the spin group through the matrix logarithm, and the covariant
    derivative in that gauge uses only the induced Levi-Civita rotation
    coefficients and the restricted auxiliary 1-form.  Returns ambient
    trivialization components, comparable with the production derivative.
    """
    u = np.asarray(u, dtype=float)
    X_coord = np.asarray(X_coord, dtype=float)
    ev0 = evaluate(chart, product, u)
    flip = np.linalg.det(_gram_schmidt_frame(ev0, False)[0]) < 0
    gens = product.clifford.generators

    def lift(t):
        ev = evaluate(chart, product, u + t * X_coord)
        O, coords = _gram_schmidt_frame(ev, flip)
        Theta = logm(O).real
        # with the e.e = -1 convention, conjugation by exp(+1/4 Theta e e)
        # rotates vectors by exp(-Theta); hence the minus sign
        M = np.zeros((4, 4), dtype=complex)
        for a in range(4):
            for b in range(4):
                M -= 0.25 * Theta[a, b] * gens[a] @ gens[b]
        return expm(M), coords, ev

    L0, coords0, _ = lift(0.0)
    Lp, coords_p, _ = lift(h)
    Lm, coords_m, _ = lift(-h)
    psi = product.parallel_spinor(struct)
    phi_t = lambda L: L.conj().T @ psi
    dphi = (phi_t(Lp) - phi_t(Lm)) / (2 * h)

    # induced rotation coefficients w_ij(X) = g(nabla_X t_i, t_j)
    Gv = ev0.gamma_induced_val
    gv = ev0.g_val
    dcoords = (coords_p - coords_m) / (2 * h)
    w = np.zeros((3, 3))
    for i in range(3):
        nabla_ti = dcoords[:, i] + np.einsum(
            "abc,b,c->a", Gv, X_coord, coords0[:, i])
        for j in range(3):
            w[i, j] = float(nabla_ti @ gv @ coords0[:, j])

    X_amb = X_coord @ ev0.T_val
    aux = value(product.auxiliary_form(ev0.position, X_amb, struct))
    conn = 0.5j * aux * np.eye(4, dtype=complex)
    for i in range(3):
        for j in range(i + 1, 3):
            conn += 0.5 * w[i, j] * gens[i] @ gens[j]
    return L0 @ (dphi + conn @ phi_t(L0))
