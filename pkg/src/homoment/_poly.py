"""Small polynomial and determinant helpers shared by the estimators.

Polynomials are coefficient lists in ascending order (``coeffs[i]``
multiplies ``x**i``).  Routines keep exact ``Fraction`` arithmetic when
every input is exact and fall back to floats otherwise; root finding is
always floating point via companion-matrix eigenvalues.
"""

from fractions import Fraction

import numpy as np

from . import exactla


def is_exact(values):
    return all(isinstance(v, (Fraction, int)) for v in values)


def poly_eval(coeffs, x):
    acc = None
    for c in reversed(list(coeffs)):
        acc = c if acc is None else acc * x + c
    return 0 if acc is None else acc


def poly_derivative(coeffs):
    return [i * c for i, c in enumerate(coeffs)][1:]


def poly_degree(coeffs, rel_tol=0.0):
    """Index of the last coefficient that is not negligibly small."""
    mags = [abs(float(c)) for c in coeffs]
    top = max(mags, default=0.0)
    if top == 0.0:
        return -1
    for i in range(len(coeffs) - 1, -1, -1):
        if mags[i] > rel_tol * top:
            return i
    return -1


def real_roots(coeffs, imag_tol=1e-9, drop_tol=1e-13):
    """Real roots of an ascending-coefficient polynomial.

    Roots come from the companion matrix (``numpy.roots``); a root counts
    as real when its imaginary part is below ``imag_tol`` relative to its
    magnitude.  Leading coefficients that are negligible relative to the
    largest one are dropped first so nearly degenerate leading terms do
    not inject spurious huge roots.
    """
    deg = poly_degree(coeffs, rel_tol=drop_tol)
    if deg <= 0:
        return []
    desc = [float(c) for c in coeffs[deg::-1]]
    roots = np.roots(desc)
    out = [float(r.real) for r in roots
           if abs(r.imag) <= imag_tol * max(1.0, abs(r))]
    return sorted(out)


def lagrange_interpolate(xs, ys):
    """Exact interpolation through rational points, ascending coefficients."""
    n = len(xs)
    coeffs = [Fraction(0)] * n
    for i in range(n):
        num = [Fraction(1)]
        den = Fraction(1)
        for j in range(n):
            if j == i:
                continue
            num = _poly_mul_linear(num, -Fraction(xs[j]))
            den *= Fraction(xs[i]) - Fraction(xs[j])
        w = Fraction(ys[i]) / den
        for p, c in enumerate(num):
            coeffs[p] += w * c
    return coeffs


def _poly_mul_linear(coeffs, constant):
    # multiply by (x + constant)
    out = [Fraction(0)] * (len(coeffs) + 1)
    for i, c in enumerate(coeffs):
        out[i + 1] += c
        out[i] += c * constant
    return out


def interpolate(xs, ys):
    """Polynomial through the given points; exact when the data is exact."""
    if is_exact(xs) and is_exact(ys):
        return lagrange_interpolate(xs, ys)
    coeffs = np.polynomial.polynomial.polyfit(
        np.asarray(xs, dtype=float), np.asarray(ys, dtype=float),
        len(xs) - 1)
    return [float(c) for c in coeffs]


def interpolation_nodes(count, scale):
    """Chebyshev-spaced float nodes on [0, 2*scale] for stable fits."""
    i = np.arange(count)
    return list(scale * (1.0 - np.cos((i + 0.5) * np.pi / count)))


def det(rows):
    """Determinant, exact over rationals and floating otherwise."""
    flat = [x for row in rows for x in row]
    if is_exact(flat):
        return exactla.det([list(r) for r in rows])
    return float(np.linalg.det(np.asarray(rows, dtype=float)))
