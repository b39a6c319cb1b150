"""Membership tests for univariate homoscedastic secants.

A univariate mixture of k Gaussians with shared variance s has moments
whose Gaussian-deconvolved Hankel matrix drops rank at the true s.  The
pencil of all maximal minors of that matrix, viewed as polynomials in s,
therefore has a common nonnegative root exactly on the model.  Membership
is decided numerically: the scaled sum of squared minors is minimized
over the admissible variance interval and compared against a threshold,
with a Sylvester-resultant evaluation of two fixed linear combinations of
the pencil kept as an advisory cross-check (the resultant also vanishes
on complex or negative common roots, so the residual criterion is the
authoritative one).

Closed forms are provided for the two smallest cases: the third cumulant
(order-3 hypersurface of single Gaussians) and the weighted degree-18
invariant cutting out two-component mixtures in cumulants up to order 5.
"""

import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations

import numpy as np

from . import _poly
from . import series as ts
from .errors import InsufficientOrderError, PreconditionError
from .estimate import _moment_list, _moment_scale, deconvolve_moments

DEFAULT_THRESHOLD = 1e-8


def cumulant_k3(m1, m2, m3):
    """Third cumulant from raw moments: ``2 m1^3 - 3 m1 m2 + m3``.

    This is the equation of the univariate Gaussian moment variety in
    moments up to order three.  On exact input the polynomial form is
    cross-checked against the log-transform of the moment series.
    """
    m1, m2, m3 = (ts._promote(x) for x in (m1, m2, m3))
    value = 2 * m1 ** 3 - 3 * m1 * m2 + m3
    if _poly.is_exact([m1, m2, m3]):
        series = ts.TruncatedSeries.from_moments(1, 3, {(1,): m1, (2,): m2,
                                                        (3,): m3})
        if ts.log(series).moment((3,)) != value:
            raise AssertionError("moment form disagrees with log transform")
    return value


def two_secant_invariant(k3, k4, k5):
    """Weighted degree-18 invariant vanishing on two-component mixtures.

    Arguments are raw cumulants of orders 3, 4, 5.  Scaling the
    underlying variable by t multiplies the value by t**18.
    """
    k3, k4, k5 = (ts._promote(x) for x in (k3, k4, k5))
    return (108 * k3 ** 6 - 32 * k3 ** 2 * k4 ** 3 + 36 * k3 ** 3 * k4 * k5
            - k4 ** 2 * k5 ** 2 + k3 * k5 ** 3)


# ----------------------------------------------------------------------
# Hankel minor pencil


@dataclass(frozen=True)
class HankelPencil:
    """Maximal minors of the deconvolved moment matrix, as polynomials in
    the shared variance (ascending coefficients)."""

    k: int
    d: int
    columns: tuple     # column subsets, one per minor
    minors: tuple      # ascending coefficient lists
    weights: tuple     # weighted degree of each minor

    @property
    def nminors(self):
        return len(self.minors)


def _pencil_matrix(mt, k, d):
    row = [ts._promote(1)] + list(mt)
    return [[row[i + j] for j in range(d - k + 1)] for i in range(k + 1)]


def pencil_minor_values(moments, k, s, d=None):
    """Values of every maximal minor at one variance ``s``."""
    m = _moment_list(moments)
    d = len(m) if d is None else d
    if d < 2 * k:
        raise InsufficientOrderError(f"need order {2 * k} for k={k}")
    matrix = _pencil_matrix(deconvolve_moments(m[:d], s), k, d)
    cols = list(combinations(range(d - k + 1), k + 1))
    return [_poly.det([[matrix[i][j] for j in sel] for i in range(k + 1)])
            for sel in cols]


def hankel_pencil(moments, k, d=None):
    """Expand every maximal minor as a polynomial in the variance.

    Each minor is homogeneous of known weighted degree in the moments
    (moment j weighing j, the variance weighing 2), which bounds its
    degree in the variance; coefficients are recovered by evaluating the
    determinants at that many nodes and interpolating, exactly over
    rational input.
    """
    m = _moment_list(moments)
    d = len(m) if d is None else d
    if d < 2 * k:
        raise InsufficientOrderError(
            f"pencil needs moment order at least {2 * k}, got {d}")
    if len(m) < d:
        raise InsufficientOrderError(f"only {len(m)} moments for order {d}")
    m = m[:d]
    cols = list(combinations(range(d - k + 1), k + 1))
    weights = [k * (k + 1) // 2 + sum(sel) for sel in cols]
    max_degree = max(w // 2 for w in weights)
    if _poly.is_exact(m):
        nodes = list(range(max_degree + 1))
    else:
        nodes = _poly.interpolation_nodes(max_degree + 1,
                                          max(abs(float(m[1])), 1.0))
    values = [pencil_minor_values(m, k, s, d) for s in nodes]
    minors = []
    for idx, (sel, w) in enumerate(zip(cols, weights)):
        deg = w // 2
        ys = [values[t][idx] for t in range(deg + 1)]
        minors.append(tuple(_poly.interpolate(nodes[:deg + 1], ys)))
    return HankelPencil(k=k, d=d, columns=tuple(cols), minors=tuple(minors),
                        weights=tuple(weights))


# ----------------------------------------------------------------------
# membership


@dataclass(frozen=True)
class MembershipVerdict:
    """Outcome of one secant membership test."""

    k: int
    on_model: bool
    residual: float    # min over admissible s of the scaled sum of squares
    witness_s: float   # argmin
    threshold: float
    resultant: float   # advisory Sylvester cross-check
    nminors: int

    def as_dict(self):
        return {
            "k": self.k, "on_model": self.on_model,
            "residual": self.residual, "witness_variance": self.witness_s,
            "threshold": self.threshold, "resultant": self.resultant,
            "minors": self.nminors,
        }


def _poly_mul(p, q):
    out = [0.0] * (len(p) + len(q) - 1)
    for i, a in enumerate(p):
        if a:
            for j, b in enumerate(q):
                out[i + j] += a * b
    return out


def sylvester_resultant(p, q):
    """Resultant of two ascending-coefficient polynomials via the
    Sylvester matrix determinant, or None when either degenerates."""
    dp = _poly.poly_degree(p, rel_tol=1e-13)
    dq = _poly.poly_degree(q, rel_tol=1e-13)
    if dp < 1 or dq < 1:
        return None
    p = [float(c) for c in p[dp::-1]]
    q = [float(c) for c in q[dq::-1]]
    size = dp + dq
    rows = []
    for shift in range(dq):
        rows.append([0.0] * shift + p + [0.0] * (size - dp - 1 - shift))
    for shift in range(dp):
        rows.append([0.0] * shift + q + [0.0] * (size - dq - 1 - shift))
    return float(np.linalg.det(np.asarray(rows)))


def secant_membership(moments, k, threshold=DEFAULT_THRESHOLD,
                      minor_scales=None, d=None):
    """Does a moment vector lie on the homoscedastic k-secant?

    Minimizes the sum of squared minors over variances in [0, m2] (the
    component variance can never exceed the raw second moment) after
    scaling each minor either by the moment scale raised to its weighted
    degree or by the caller's ``minor_scales`` (noise levels, for sample
    moments).  The verdict is never an error: off-model input simply
    reports a residual above the threshold.
    """
    m = _moment_list(moments)
    pencil = hankel_pencil(m, k, d=d)
    if minor_scales is None:
        base = _moment_scale(m)
        minor_scales = [base ** w for w in pencil.weights]
    elif len(minor_scales) != pencil.nminors:
        raise PreconditionError("one scale per minor required")
    scaled = []
    for coeffs, scale in zip(pencil.minors, minor_scales):
        scale = float(scale) if scale else 1.0
        scaled.append([float(c) / scale for c in coeffs])
    objective = [0.0]
    for coeffs in scaled:
        sq = _poly_mul(coeffs, coeffs)
        objective = [a + b for a, b in
                     zip(objective + [0.0] * (len(sq) - len(objective)),
                         sq + [0.0] * max(0, len(objective) - len(sq)))]
    s_max = max(float(m[1]), 0.0)
    candidates = [0.0, s_max]
    for r in _poly.real_roots(_poly.poly_derivative(objective), imag_tol=1e-6):
        if 0.0 < r < s_max:
            candidates.append(r)
    values = [(max(0.0, float(_poly.poly_eval(objective, s))), s)
              for s in candidates]
    residual, witness = min(values)
    rng = np.random.default_rng(0)
    combo = rng.standard_normal((2, pencil.nminors))
    width = max(len(c) for c in scaled)
    padded = [list(c) + [0.0] * (width - len(c)) for c in scaled]
    mixed = combo @ np.asarray(padded)
    res = sylvester_resultant(list(mixed[0]), list(mixed[1]))
    return MembershipVerdict(
        k=k, on_model=bool(residual < threshold), residual=residual,
        witness_s=witness, threshold=float(threshold),
        resultant=float("nan") if res is None else res,
        nminors=pencil.nminors)


def component_ladder(moments, k_max, threshold=DEFAULT_THRESHOLD,
                     minor_scales=None):
    """Membership verdicts for k = 1..k_max (the residual trace)."""
    m = _moment_list(moments)
    if len(m) < 2 * k_max + 1:
        raise InsufficientOrderError(
            f"component search up to {k_max} needs order {2 * k_max + 1}")
    out = []
    for k in range(1, k_max + 1):
        scales = None if minor_scales is None else minor_scales[k]
        out.append(secant_membership(m, k, threshold=threshold,
                                     minor_scales=scales))
    return out


def estimate_components(moments, k_max, threshold=DEFAULT_THRESHOLD):
    """Smallest k whose secant accepts the moments; k_max + 1 if none."""
    for verdict in component_ladder(moments, k_max, threshold=threshold):
        if verdict.on_model:
            return verdict.k
    return k_max + 1


# ----------------------------------------------------------------------
# noise-calibrated component count for sample data


def raw_moments(data, order):
    """First ``order`` raw sample moments of a flat data vector."""
    arr = np.asarray(data, dtype=float).ravel()
    if arr.size == 0:
        raise InsufficientOrderError("empty sample")
    return [float(np.mean(arr ** j)) for j in range(1, order + 1)]


def bootstrap_minor_scales(data, k, witness_s, n_boot=32, seed=0, d=None):
    """Sampling noise of each pencil minor at a fixed variance, estimated
    by the nonparametric bootstrap of the data."""
    arr = np.asarray(data, dtype=float).ravel()
    order = 2 * k if d is None else d
    rng = np.random.default_rng(seed)
    samples = []
    for _ in range(n_boot):
        pick = rng.integers(0, arr.size, arr.size)
        m_b = raw_moments(arr[pick], order)
        samples.append([float(v) for v in
                        pencil_minor_values(m_b, k, witness_s)])
    spread = np.std(np.asarray(samples), axis=0, ddof=1)
    floor = 1e-300
    return [max(float(s), floor) for s in spread]


def estimate_components_from_data(data, k_max, n_boot=32, factor=25.0,
                                  seed=0):
    """Component count for raw observations with noise-aware thresholds.

    Each minor is whitened by its bootstrap noise level, making the
    on-model residual an order-nminors quantity regardless of sample
    size; ``factor * nminors`` then separates sampling noise from real
    model violation.  Returns ``(k_hat, verdicts)``.
    """
    arr = np.asarray(data, dtype=float).ravel()
    order = 2 * k_max + 1
    m = raw_moments(arr, order)
    verdicts = []
    k_hat = k_max + 1
    for k in range(1, k_max + 1):
        first = secant_membership(m, k)
        scales = bootstrap_minor_scales(arr, k, first.witness_s,
                                        n_boot=n_boot, seed=seed, d=order)
        verdict = secant_membership(m, k, threshold=factor * first.nminors,
                                    minor_scales=scales)
        verdicts.append(verdict)
        if verdict.on_model and k_hat > k_max:
            k_hat = k
    return k_hat, verdicts
