"""Parameter recovery from moments and cumulants.

Two pipelines live here.  The closed-form two-component recovery
(:func:`fit_two_gaussians`) works in any dimension from cumulants up to
order four or five: the ratio of the pivot fourth to third cumulant
coefficients determines the product of the two weights through a cubic
with a unique statistically meaningful root, after which means and the
shared covariance follow in closed form.  The univariate pipeline
(:func:`fit_univariate`) recovers a k-component mixture from its first 2k
moments by first locating the shared variance as the smallest nonnegative
root of a Hankel determinant polynomial and then running the classical
quadrature-rule recovery of a discrete measure.

Moment vectors are plain sequences ``(m_1, ..., m_d)`` with the zeroth
moment equal to one left implicit.  Entries may be ``Fraction`` for exact
work; root finding is always floating point.
"""

import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from . import _poly, models
from . import series as ts
from .errors import (
    InconsistentMomentsError,
    InputError,
    InsufficientOrderError,
    ModelMismatchError,
    PreconditionError,
    RankDeficientMomentsError,
    SingularSystemError,
    SymmetricMixtureError,
)


@dataclass
class Estimate:
    """Recovered mixture parameters plus fit diagnostics."""

    params: models.HomoscedasticParams
    diagnostics: dict = field(default_factory=dict)

    def as_dict(self):
        out = self.params.as_dict()
        out["diagnostics"] = self.diagnostics
        return out


def _cbrt(x):
    return math.copysign(abs(float(x)) ** (1.0 / 3.0), float(x))


# ----------------------------------------------------------------------
# sample moments and cumulants


def sample_cumulants(data, degree):
    """Cumulant series of the empirical distribution of ``data``.

    ``data`` is a ``count x n`` array (a flat array is read as one
    column).  Raw sample moments are averaged monomials; the cumulant
    series is their log transform.
    """
    arr = np.asarray(data, dtype=float)
    if arr.ndim == 1:
        arr = arr.reshape(-1, 1)
    if arr.ndim != 2 or arr.shape[0] < 1 or arr.shape[1] < 1:
        raise InputError("need at least one observation", code="INPUT_EMPTY")
    if not np.all(np.isfinite(arr)):
        raise InputError("data contains non-finite values", code="INPUT_PARSE")
    count, n = arr.shape
    powers = [[np.ones(count)] for _ in range(n)]
    for j in range(n):
        for _ in range(degree):
            powers[j].append(powers[j][-1] * arr[:, j])
    moments = {}
    for a in ts.multi_indices(n, degree):
        if sum(a) == 0:
            continue
        prod = powers[0][a[0]]
        for j in range(1, n):
            if a[j]:
                prod = prod * powers[j][a[j]]
        moments[a] = float(np.mean(prod))
    series = ts.TruncatedSeries.from_moments(n, degree, moments)
    return ts.log(series)


# ----------------------------------------------------------------------
# two-component closed form


def two_point_cumulant_coeff(weight, order):
    """Coefficient of the centered two-point mixture's cumulant series.

    For atoms ``t`` and ``-w t / (1 - w)`` carrying weights ``w`` and
    ``1 - w``, the cumulant generating function expands as
    ``sum_j f_j(w) (t u)^j`` and this returns ``f_order``.
    """
    w = ts._promote(weight)
    q = w * (1 - w)
    if order == 3:
        return q * (1 - 2 * w) / ((1 - w) ** 3) / 6
    if order == 4:
        return q * (1 - 6 * q) / ((1 - w) ** 4) / 24
    if order == 5:
        return q * (1 - 2 * w) * (1 - 12 * q) / ((1 - w) ** 5) / 120
    raise PreconditionError("order must be 3, 4, or 5")


def cumulant_ratio_from_weight_product(q):
    """The pivot ratio a(q) realized by a mixture with weight product q.

    Strictly decreasing on (0, 1/4); this is the inverse of
    :func:`solve_weight_product` and serves as its round-trip oracle.
    """
    q = float(q)
    if not 0.0 < q < 0.25:
        raise PreconditionError("weight product must lie in (0, 1/4)")
    return (3.0 ** (1.0 / 3.0) * (1.0 - 6.0 * q)
            / (2.0 * (4.0 * q * (1.0 - 4.0 * q) ** 2) ** (1.0 / 3.0)))


def weight_product_cubic(ratio):
    """Ascending coefficients of the cubic satisfied by the weight product."""
    cube = ts._promote(ratio) ** 3
    const = -1.5 if isinstance(cube, float) else -Fraction(3, 2)
    return [const, 16 * cube + 27, -(128 * cube + 162), 256 * cube + 324]


def solve_weight_product(ratio, imag_tol=1e-9, relax=1e-7):
    """Unique root in (0, 1/4) of the weight-product cubic.

    The roots cluster around 1/6 for small ratios, which the substitution
    ``b = 1 - 6q`` spreads apart: the cubic becomes the depressed
    ``(81 + 64 r^3) b^3 - 48 r^3 b - 16 r^3`` whose small root is well
    conditioned, so companion-matrix roots are solved in ``b`` and mapped
    back.  The leading coefficient vanishes on one ratio value (the
    horizontal asymptote of the forward map) where the equation drops to
    a quadratic; negligible leading coefficients are trimmed before root
    finding.  If no root lands in the open interval, the bounds are
    relaxed by ``relax`` and the nearest root is clamped inside; failing
    that the input moments are inconsistent with a two-component model.
    """
    cube = float(ratio) ** 3
    beta_coeffs = [-16.0 * cube, -48.0 * cube, 0.0, 81.0 + 64.0 * cube]
    roots = [(1.0 - b) / 6.0
             for b in _poly.real_roots(beta_coeffs, imag_tol=imag_tol)]
    roots = [_refine_weight_product(r, cube) for r in roots]
    inside = [r for r in roots if 0.0 < r < 0.25]
    if len(inside) == 1:
        return inside[0]
    if len(inside) > 1:
        # theory gives a single interior root; duplicates can only come
        # from conditioning, keep the one that best satisfies the cubic
        coeffs = [float(c) for c in weight_product_cubic(ratio)]
        return min(inside, key=lambda r: abs(_poly.poly_eval(coeffs, r)))
    near = [r for r in roots if -relax < r < 0.25 + relax]
    if near:
        return min(0.25, max(min(near, key=lambda r: abs(r - 0.125)), 1e-300))
    raise InconsistentMomentsError(
        "no admissible weight product: cumulant ratios are not consistent "
        "with a two-component homoscedastic mixture")


def _refine_weight_product(q, cube, steps=2):
    # Newton polish in the shifted variable keeps the defining identity
    # (3/32)(1-6q)^3 = r^3 q (1-4q)^2 tight near the interval ends
    b = 1.0 - 6.0 * q
    lead = 81.0 + 64.0 * cube
    for _ in range(steps):
        val = lead * b ** 3 - 48.0 * cube * b - 16.0 * cube
        der = 3.0 * lead * b ** 2 - 48.0 * cube
        if der == 0.0 or not math.isfinite(val):
            break
        step = val / der
        if not math.isfinite(step) or abs(step) > 0.5 * max(1.0, abs(b)):
            break
        b -= step
    return (1.0 - b) / 6.0


def weight_product_closed_form(ratio, imag_tol=1e-7):
    """Radical form of the statistically admissible cubic root.

    Cross-checks :func:`solve_weight_product`: among the three cube-root
    branches of the discriminant expression exactly one yields a real
    value in (0, 1/4).  Undefined at ratio values where the cubic
    degenerates (zero leading coefficient) and at ratio zero, where the
    root is exactly 1/6.
    """
    a3 = float(ratio) ** 3
    if ratio == 0:
        return 1.0 / 6.0
    lead = 64.0 * a3 + 81.0
    if abs(lead) < 1e-12:
        raise PreconditionError("cubic degenerates at this ratio")
    radicand = complex(a3 * a3 * lead ** 3)
    eta3 = complex(-4096.0 * a3 ** 3 - 10368.0 * a3 ** 2 - 6561.0 * a3
                   + 9.0 * np.sqrt(radicand))
    if eta3 == 0:
        raise PreconditionError("cube-root branch collapses at this ratio")
    base = eta3 ** (1.0 / 3.0)
    candidates = []
    for turn in range(3):
        eta = base * np.exp(2j * np.pi * turn / 3.0)
        g = 4.0 * a3 / (3.0 * eta) + eta / (3.0 * lead) + 1.0 / 6.0
        if abs(g.imag) < imag_tol * max(1.0, abs(g)) and 0.0 < g.real < 0.25:
            candidates.append(g.real)
    if not candidates:
        raise InconsistentMomentsError("no admissible branch of the closed form")
    return candidates[0]


def _raw_second_cumulants(cumulants):
    n = cumulants.nvars
    cov = [[0.0] * n for _ in range(n)]
    for i in range(n):
        for j in range(i, n):
            a = tuple((2 if t == i else 0) if i == j else (1 if t in (i, j) else 0)
                      for t in range(n))
            cov[i][j] = cov[j][i] = float(cumulants.moment(a))
    return cov


def fit_two_gaussians(cumulants, order=None, pivot_tol=None):
    """Closed-form recovery of a two-component homoscedastic mixture.

    ``cumulants`` is a cumulant-space series of degree at least four.
    With ``order=4`` the two label-symmetric presentations of the
    recovered mixture are returned; with ``order=5`` (the default when
    fifth cumulants are available) the fifth-order pivot ratio is checked
    against both and the best-matching single estimate is returned.

    Requires a nonzero principal third cumulant: mixtures with equal
    weights or equal means have none and raise
    :class:`SymmetricMixtureError`.
    """
    n = cumulants.nvars
    if cumulants.constant() != 0:
        raise PreconditionError("expected a cumulant-space series "
                                "(zero constant term)")
    if order is None:
        order = min(cumulants.degree, 5)
    if order not in (4, 5):
        raise PreconditionError("order must be 4 or 5")
    if cumulants.degree < order:
        raise InsufficientOrderError(
            f"series of degree {cumulants.degree} cannot serve order {order}")

    def unit(i, e):
        return tuple(e if t == i else 0 for t in range(n))

    mean_shift = [float(cumulants.moment(unit(i, 1))) for i in range(n)]
    total_cov = _raw_second_cumulants(cumulants)
    third = [float(cumulants.coeff(unit(i, 3))) for i in range(n)]

    cov_scale = max([abs(total_cov[i][j]) for i in range(n) for j in range(n)],
                    default=0.0)
    scale = max(1.0, cov_scale) ** 1.5
    if pivot_tol is None:
        pivot_tol = 1e-10 * scale
    pivot = max(range(n), key=lambda i: abs(third[i]))
    if abs(6.0 * third[pivot]) <= pivot_tol:
        raise SymmetricMixtureError(
            "all principal third cumulants vanish; equal weights or equal "
            "means are not recoverable from orders three and four")

    t3 = _cbrt(third[pivot])
    ratio_a = float(cumulants.coeff(unit(pivot, 4))) / t3 ** 4
    q = solve_weight_product(ratio_a)
    lam_small = 0.5 * (1.0 - math.sqrt(max(0.0, 1.0 - 4.0 * q)))
    root3 = [_cbrt(c) for c in third]

    def build(lam1, order_used):
        lam2 = 1.0 - lam1
        f3 = two_point_cumulant_coeff(lam1, 3)
        inv = _cbrt(1.0 / f3)
        mu1 = [inv * r for r in root3]
        mu2 = [-(lam1 / lam2) * x for x in mu1]
        means = [[x + s for x, s in zip(mu1, mean_shift)],
                 [x + s for x, s in zip(mu2, mean_shift)]]
        cov = [[total_cov[i][j]
                - lam1 * mu1[i] * mu1[j] - lam2 * mu2[i] * mu2[j]
                for j in range(n)] for i in range(n)]
        params = models.HomoscedasticParams(means=means,
                                            weights=[lam1, lam2], cov=cov)
        eigmin = float(np.min(np.linalg.eigvalsh(np.asarray(cov))))
        diag = {
            "order_used": order_used,
            "pivot": pivot,
            "ratio_a": ratio_a,
            "weight_product": q,
            "cubic_roots": [[r.real, r.imag] for r in
                            np.roots([float(c) for c in
                                      weight_product_cubic(ratio_a)][::-1])],
            "cov_min_eigenvalue": eigmin,
            "cov_psd": bool(eigmin >= -1e-8 * max(1.0, cov_scale)),
            "residual": _fit_residual(params, cumulants, order),
            "near_symmetric": bool(0.25 - q < 1e-5),
        }
        return Estimate(params=params, diagnostics=diag)

    if order == 4:
        return [build(lam_small, 4), build(1.0 - lam_small, 4)]

    ratio_b = float(cumulants.coeff(unit(pivot, 5))) / t3 ** 5
    candidates = []
    for lam1 in (lam_small, 1.0 - lam_small):
        f3 = float(two_point_cumulant_coeff(lam1, 3))
        f5 = float(two_point_cumulant_coeff(lam1, 5))
        predicted = f5 / _cbrt(f3) ** 5
        candidates.append((abs(predicted - ratio_b), lam1, predicted))
    candidates.sort(key=lambda item: item[0])
    gap, lam1, predicted = candidates[0]
    est = build(lam1, 5)
    est.diagnostics["ratio_b"] = ratio_b
    est.diagnostics["ratio_b_predicted"] = predicted
    est.diagnostics["ratio_b_residual"] = gap
    return [est]


def _fit_residual(params, cumulants, order):
    """Scaled max deviation of the input cumulants from the fitted model
    over every coordinate of orders three to ``order`` (the equations the
    closed form does not consume)."""
    recon = models.homoscedastic_cumulants(params, order)
    worst = 0.0
    for a in ts.multi_indices(cumulants.nvars, order):
        if not 3 <= sum(a) <= order:
            continue
        x = float(cumulants.coeff(a))
        y = float(recon.coeff(a))
        worst = max(worst, abs(x - y) / max(1.0, abs(x), abs(y)))
    return worst


# ----------------------------------------------------------------------
# univariate pipeline


def _moment_list(moments):
    m = list(moments)
    if not m:
        raise InsufficientOrderError("empty moment vector")
    return [ts._promote(x) for x in m]


def _moment_scale(m):
    vals = [abs(float(x)) ** (1.0 / j) for j, x in enumerate(m, start=1)
            if float(x) != 0.0]
    return max(vals, default=1.0)


def deconvolve_moments(moments, variance):
    """Moments of the atomic part after removing a Gaussian of the given
    variance: ``mt_j = sum_i j! / ((-2)^i i! (j-2i)!) m_{j-2i} variance^i``."""
    m = [Fraction(1)] + _moment_list(moments)
    variance = ts._promote(variance)
    out = []
    for j in range(1, len(m)):
        acc = None
        power = 1
        for i in range(j // 2 + 1):
            coeff = math.factorial(j) // (
                2 ** i * math.factorial(i) * math.factorial(j - 2 * i))
            if i % 2:
                coeff = -coeff
            term = coeff * m[j - 2 * i] * power
            acc = term if acc is None else acc + term
            power = power * variance
        out.append(acc)
    return out


def quadrature_nodes(moments, k, rel_tol=1e-6):
    """Atom locations of a k-atomic measure from its first 2k-1 moments.

    These are the roots of the degree-k polynomial whose coefficients are
    signed maximal minors of the moment matrix bordered by the power
    column; a vanishing leading minor or missing real roots mean the
    measure has fewer than k atoms (or the variance fed to the
    deconvolution was wrong).  The leading-minor tolerance must absorb
    the sqrt(eps) accuracy of a variance located at a double root, where
    the minor vanishes like the variance error.
    """
    m = [Fraction(1)] + _moment_list(moments)
    if len(m) < 2 * k:
        raise InsufficientOrderError(f"need {2 * k - 1} moments for {k} atoms")
    block = [[m[i + j] for j in range(k)] for i in range(k + 1)]
    coeffs = []
    for i in range(k + 1):
        minor = [block[r] for r in range(k + 1) if r != i]
        sign = -1 if (i + k) % 2 else 1
        coeffs.append(sign * _poly.det(minor))
    scale = _moment_scale(m[1:])
    lead_weight = k * (k - 1)
    if abs(float(coeffs[k])) <= rel_tol * scale ** lead_weight:
        raise RankDeficientMomentsError(
            f"leading moment minor vanishes: fewer than {k} atoms")
    roots = _poly.real_roots(coeffs, imag_tol=1e-9)
    if len(roots) != k:
        raise RankDeficientMomentsError(
            f"expected {k} real atom locations, found {len(roots)}")
    return roots


def quadrature_weights(nodes, moments, rel_tol=1e-9):
    """Weights of known atom locations from the first k-1 moments, by the
    Vandermonde system whose first row forces the weights to sum to one."""
    k = len(nodes)
    nodes = [float(x) for x in nodes]
    gap = min((abs(a - b) for i, a in enumerate(nodes)
               for b in nodes[i + 1:]), default=float("inf"))
    span = max((abs(x) for x in nodes), default=1.0)
    if gap <= rel_tol * max(1.0, span):
        raise SingularSystemError("repeated atom locations")
    m = [1.0] + [float(x) for x in _moment_list(moments)]
    if len(m) < k:
        raise InsufficientOrderError(f"need {k - 1} moments for {k} weights")
    vander = np.asarray([[x ** i for x in nodes] for i in range(k)])
    rhs = np.asarray(m[:k])
    return list(np.linalg.solve(vander, rhs))


def variance_polynomial(moments, k):
    """Determinant of the deconvolved moment matrix as a polynomial in the
    variance, expanded by evaluation and interpolation.

    Degree in the variance is k(k+1)/2; its smallest nonnegative root is
    the variance estimator.  Exact moment input yields exact coefficients.
    """
    m = _moment_list(moments)
    if len(m) < 2 * k:
        raise InsufficientOrderError(f"need {2 * k} moments for the "
                                     f"variance polynomial at k={k}")
    degree = k * (k + 1) // 2

    def hankel_det(s):
        mt = [ts._promote(1)] + deconvolve_moments(m, s)
        return _poly.det([[mt[i + j] for j in range(k + 1)]
                          for i in range(k + 1)])

    if _poly.is_exact(m):
        nodes = list(range(degree + 1))
    else:
        nodes = _poly.interpolation_nodes(degree + 1,
                                          max(abs(float(m[1])), 1.0))
    return _poly.interpolate(nodes, [hankel_det(s) for s in nodes])


def _polish_root(coeffs, x, steps=3):
    # Newton refinement against the (possibly exact) coefficients; kept
    # only while it shrinks the residual, so near-multiple roots cannot
    # send it wandering
    fl = [float(c) for c in coeffs]
    dfl = _poly.poly_derivative(fl)
    best_x, best_r = x, abs(_poly.poly_eval(fl, x))
    for _ in range(steps):
        der = _poly.poly_eval(dfl, x)
        if der == 0.0:
            break
        x = x - _poly.poly_eval(fl, x) / der
        r = abs(_poly.poly_eval(fl, x))
        if not math.isfinite(r) or r >= best_r:
            break
        best_x, best_r = x, r
    return best_x


def fit_univariate(moments, k, root_tol=1e-9):
    """Recover a univariate k-component homoscedastic mixture from its
    first 2k moments: variance from the smallest nonnegative root of
    :func:`variance_polynomial`, then atoms and weights by quadrature."""
    m = _moment_list(moments)
    coeffs = variance_polynomial(m, k)
    s_scale = max(1.0, abs(float(m[1])))
    roots = _poly.real_roots(coeffs, imag_tol=root_tol)
    admissible = sorted(r for r in roots if r >= -root_tol * s_scale)
    if not admissible:
        raise ModelMismatchError(
            "variance polynomial has no nonnegative real root")
    s_star = max(0.0, _polish_root(coeffs, admissible[0]))
    exact_zero = s_star == 0.0 and _poly.is_exact(m)
    mt = deconvolve_moments(m, Fraction(0) if exact_zero else s_star)
    nodes = quadrature_nodes(mt, k)
    weights = quadrature_weights(nodes, mt)
    params = models.HomoscedasticParams(
        means=[[x] for x in nodes], weights=weights, cov=[[s_star]])
    residual = abs(float(_poly.poly_eval(coeffs, s_star)))
    top = max(abs(float(c)) for c in coeffs)
    diagnostics = {
        "order_used": 2 * k,
        "selected_variance": s_star,
        "variance_roots": [float(r) for r in roots],
        "variance_residual": residual / max(top, 1e-300),
        "negative_weights": bool(any(w < 0 for w in weights)),
    }
    return Estimate(params=params, diagnostics=diagnostics)


# ----------------------------------------------------------------------
# identifiability curve for the two-component analysis

_CURVE_TERMS = (
    (849346560, 5, 2, 0), (-679477248, 4, 3, 0), (-29491200, 5, 1, 1),
    (2674483200, 4, 2, 1), (-2439217152, 3, 3, 1), (256000, 5, 0, 2),
    (79744000, 4, 1, 2), (2415168000, 3, 2, 2), (-2616192000, 2, 3, 2),
    (499500000, 2, 2, 3), (-406500000, 1, 3, 3), (474609375, 0, 3, 4),
)


def identifiability_curve_point(q):
    """Projective point traced by the fourth- and fifth-order pivot ratio
    cubes as the weight product ``q`` varies (degree-seven coordinates)."""
    q = ts._promote(q)
    x = 3 * (1 - 6 * q) ** 3 * (1 - q) ** 3 * (1 - 12 * q) / 32
    y = 15 * (1 - 6 * q) ** 5 * (1 - 4 * q) ** 2 / 128
    z = q * (1 - 4 * q) ** 2 * (1 - q) ** 3 * (1 - 12 * q)
    return x, y, z


def identifiability_curve_residual(q):
    """Relative residual of the degree-seven plane curve on the point of
    :func:`identifiability_curve_point`; zero exactly on the curve."""
    x, y, z = identifiability_curve_point(q)
    total = None
    mag = 0.0
    for c, ex, ey, ez in _CURVE_TERMS:
        term = c * x ** ex * y ** ey * z ** ez
        total = term if total is None else total + term
        mag = max(mag, abs(float(term)))
    if mag == 0.0:
        return 0.0
    return abs(float(total)) / mag
