"""Truncated trivariate Taylor arithmetic (forward-mode AD).

A ``Jet`` stores the Taylor coefficients of a scalar quantity as a function
of the three parameters of a hypersurface chart, truncated at a chosen
total degree (1, 2 or 3).  Evaluating the whole geometric pipeline once in
jet arithmetic yields every derivative the engine needs (metric,
Christoffel symbols, curvature tensor, derivatives of the shape operator
and of the product-structure data) without finite differencing.  Finite
differences appear only in test oracles.

The monomial table is graded, so a lower-order jet is literally a prefix
of a higher-order one; algebra-only evaluations run on 4-coefficient jets
while curvature-level evaluations use the full 20.

Each jet tracks a ``valid`` order: differentiating a degree-3 jet yields
coefficients that are only trustworthy to degree 2, and so on.  Arithmetic
propagates the minimum valid order of its operands; extraction methods
assert that the requested derivative is still valid, so truncation garbage
can never be read silently.
"""

from __future__ import annotations

import numpy as np

ORDER = 3
NVARS = 3

# Graded list of exponent triples (i, j, k) with i + j + k <= ORDER.
MONOMIALS: list[tuple[int, int, int]] = []
for deg in range(ORDER + 1):
    for i in range(deg, -1, -1):
        for j in range(deg - i, -1, -1):
            MONOMIALS.append((i, j, deg - i - j))
NTERMS = len(MONOMIALS)  # 20
_INDEX = {m: n for n, m in enumerate(MONOMIALS)}
_NT_OF_ORDER = {1: 4, 2: 10, 3: 20}
_ORDER_OF_NT = {v: k for k, v in _NT_OF_ORDER.items()}

# Sparse multiplication pairs per truncation length: c[K] += a[I] * b[J].
_PAIRS = {}
for _nt in (4, 10, 20):
    I, J, K = [], [], []
    for a, ma in enumerate(MONOMIALS[:_nt]):
        for b, mb in enumerate(MONOMIALS[:_nt]):
            tot = (ma[0] + mb[0], ma[1] + mb[1], ma[2] + mb[2])
            k = _INDEX.get(tot)
            if k is not None and k < _nt:
                I.append(a)
                J.append(b)
                K.append(k)
    _PAIRS[_nt] = (np.array(I), np.array(J), np.array(K))

# For each variable: (source slot, destination slot, exponent factor).
_DERIV: list[tuple[np.ndarray, np.ndarray, np.ndarray]] = []
for v in range(NVARS):
    src, dst, fac = [], [], []
    for n, m in enumerate(MONOMIALS):
        if m[v] > 0:
            lower = list(m)
            lower[v] -= 1
            src.append(n)
            dst.append(_INDEX[tuple(lower)])
            fac.append(m[v])
    _DERIV.append((np.array(src), np.array(dst), np.array(fac, dtype=float)))

_FACT = np.array([1.0, 1.0, 2.0, 6.0])


class Jet:
    """Truncated Taylor expansion in three chart variables."""

    __slots__ = ("c", "valid")
    __array_ufunc__ = None  # force numpy to defer to our operators

    def __init__(self, coeffs, valid=None):
        self.c = np.asarray(coeffs, dtype=float)
        self.valid = _ORDER_OF_NT[len(self.c)] if valid is None else valid

    # construction -----------------------------------------------------
    @staticmethod
    def constant(x, nterms=NTERMS):
        c = np.zeros(nterms)
        c[0] = float(x)
        return Jet(c)

    @staticmethod
    def variable(i, x0, order=ORDER):
        c = np.zeros(_NT_OF_ORDER[order])
        c[0] = float(x0)
        c[_INDEX[tuple(1 if k == i else 0 for k in range(NVARS))]] = 1.0
        return Jet(c)

    # basic queries -----------------------------------------------------
    @property
    def val(self):
        return self.c[0]

    def grad(self):
        """First derivatives as a length-3 array."""
        assert self.valid >= 1
        return self.c[1:4].copy()  # degree-1 block is ordered (x, y, z)

    def hess(self):
        """Symmetric matrix of second derivatives."""
        assert self.valid >= 2
        H = np.empty((3, 3))
        for i in range(3):
            for j in range(3):
                m = [0, 0, 0]
                m[i] += 1
                m[j] += 1
                H[i, j] = self.c[_INDEX[tuple(m)]] * (2.0 if i == j else 1.0)
        return H

    def deriv(self, v):
        """Jet of the partial derivative along chart variable ``v``."""
        assert self.valid >= 1
        src, dst, fac = _DERIV[v]
        nt = len(self.c)
        keep = src < nt
        c = np.zeros(nt)
        c[dst[keep]] = self.c[src[keep]] * fac[keep]
        return Jet(c, self.valid - 1)

    # arithmetic ---------------------------------------------------------
    def __add__(self, other):
        if isinstance(other, Jet):
            return Jet(self.c + other.c, min(self.valid, other.valid))
        c = self.c.copy()
        c[0] += float(other)
        return Jet(c, self.valid)

    __radd__ = __add__

    def __neg__(self):
        return Jet(-self.c, self.valid)

    def __sub__(self, other):
        return self + (-other if isinstance(other, Jet) else -float(other))

    def __rsub__(self, other):
        return (-self) + float(other)

    def __mul__(self, other):
        if isinstance(other, Jet):
            I, J, K = _PAIRS[len(self.c)]
            c = np.bincount(K, self.c[I] * other.c[J], minlength=len(self.c))
            return Jet(c, min(self.valid, other.valid))
        return Jet(self.c * float(other), self.valid)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, Jet):
            return self * other._reciprocal()
        return Jet(self.c / float(other), self.valid)

    def __rtruediv__(self, other):
        return self._reciprocal() * float(other)

    def __pow__(self, n):
        if not isinstance(n, int) or n < 0:
            raise ValueError("jets support nonnegative integer powers only")
        out = Jet.constant(1.0, len(self.c))
        for _ in range(n):
            out = out * self
        return out

    def __repr__(self):
        return f"Jet(val={self.val:.6g}, order={len(self.c)}, " \
               f"valid={self.valid})"

    # analytic functions --------------------------------------------------
    def _compose(self, ladder):
        """Evaluate f(self) given [f, f', f'', f'''] at self.val."""
        s = Jet(self.c.copy(), self.valid)
        s.c[0] = 0.0
        out = Jet.constant(ladder[0], len(self.c))
        p = Jet.constant(1.0, len(self.c))
        for k in range(1, _ORDER_OF_NT[len(self.c)] + 1):
            p = p * s
            out = out + (ladder[k] / _FACT[k]) * p
        out.valid = self.valid
        return out

    def _reciprocal(self):
        x = self.val
        if x == 0.0:
            raise ZeroDivisionError("jet with zero value part")
        return self._compose([1.0 / x, -1.0 / x**2, 2.0 / x**3, -6.0 / x**4])

    def sqrt(self):
        x = self.val
        if x <= 0.0:
            raise ValueError("sqrt of non-positive jet value")
        r = np.sqrt(x)
        return self._compose([r, 0.5 / r, -0.25 / r**3, 0.375 / r**5])

    def exp(self):
        e = np.exp(self.val)
        return self._compose([e, e, e, e])

    def log(self):
        x = self.val
        if x <= 0.0:
            raise ValueError("log of non-positive jet value")
        return self._compose([np.log(x), 1.0 / x, -1.0 / x**2, 2.0 / x**3])

    def sin(self):
        s, c = np.sin(self.val), np.cos(self.val)
        return self._compose([s, c, -s, -c])

    def cos(self):
        s, c = np.sin(self.val), np.cos(self.val)
        return self._compose([c, -s, -c, s])


# module-level helpers so geometry code reads naturally on floats and jets
def asjet(x, nterms=NTERMS):
    return x if isinstance(x, Jet) else Jet.constant(x, nterms)


def variables(u, order=ORDER):
    """Seed jets for a chart point u = (u1, u2, u3)."""
    return tuple(Jet.variable(i, u[i], order) for i in range(NVARS))


def value(x):
    return x.val if isinstance(x, Jet) else float(x)


def values(arr):
    """Extract the value part of an object array of jets/floats."""
    out = np.empty(np.shape(arr))
    flat_in = np.asarray(arr, dtype=object).reshape(-1)
    flat_out = out.reshape(-1)
    for k, x in enumerate(flat_in):
        flat_out[k] = value(x)
    return out


def jsqrt(x):
    return x.sqrt() if isinstance(x, Jet) else float(np.sqrt(x))


def jsin(x):
    return x.sin() if isinstance(x, Jet) else float(np.sin(x))


def jcos(x):
    return x.cos() if isinstance(x, Jet) else float(np.cos(x))
