"""Dimensions and defects of homoscedastic secant moment varieties.

The dimension of a parametrized variety equals the rank of the Jacobian
of its parametrization at a general point.  Ranks here are computed
exactly: parameters are seeded as dual numbers with ``Fraction`` values at
random integer points, pushed through the forward maps of
:mod:`homoment.models`, and the resulting rational Jacobian is reduced by
fraction-free elimination.  The rank at any point lower-bounds the
generic rank, and agreement across independent random points makes the
bound sharp with overwhelming probability, so reports take the maximum
over at least two points and draw a third when the first two disagree.

The module also carries two pieces of reference data: the published
classification table of the order-3 homoscedastic secants for up to
seven variables, and the classical list of defective Veronese secants.
Both are inputs this artifact checks against, not results it derives.
"""

import random
from dataclasses import dataclass
from fractions import Fraction

from . import models
from . import series as ts
from .dual import Dual
from .errors import PreconditionError
from .exactla import rank

MAX_N = 8
MAX_D = 6
MAX_K = 12
MAX_K_VERONESE = 14
COORD_BOUND = 1000


def parameter_count(n, k):
    """dim of the mixture parameter space: nk + (k-1) + n(n+1)/2."""
    return n * k + (k - 1) + n * (n + 1) // 2


def ambient_dim(n, d):
    """Number of moment coordinates of order 1..d."""
    num = 1
    den = 1
    for i in range(1, d + 1):
        num *= n + i
        den *= i
    return num // den - 1


def _check_envelope(n, k, d, k_max=MAX_K):
    if not (1 <= n <= MAX_N and 1 <= k <= k_max and 1 <= d <= MAX_D):
        raise PreconditionError(
            f"(n={n}, k={k}, d={d}) outside the supported envelope "
            f"n<={MAX_N}, k<={k_max}, d<={MAX_D}")


def _mix_seed(seed, n, k, d, trial):
    # deterministic per-cell stream so concurrent table fills reproduce
    return (seed * 1_000_003 + n * 9_176 + k * 613 + d * 89 + trial) & 0x7FFFFFFF


# ----------------------------------------------------------------------
# Jacobians at exact points


def _moment_columns(n, d):
    return [a for a in ts.multi_indices(n, d) if sum(a) >= 1]


def moment_map_jacobian(params, degree):
    """Exact Jacobian of all moment coordinates of order 1..degree.

    Rows follow the free parameters: the k*n mean coordinates, the first
    k-1 weights (the last weight is eliminated as one minus their sum),
    then the upper triangle of the covariance.  Entries are Fractions.
    ``params`` must have rational entries.
    """
    n, k = params.nvars, params.ncomponents
    idx = 0
    means = []
    for i in range(k):
        row = []
        for j in range(n):
            row.append(Dual.variable(params.means[i][j], idx))
            idx += 1
        means.append(row)
    weights = [Dual.variable(params.weights[i], idx + i) for i in range(k - 1)]
    idx += k - 1
    last = Dual(Fraction(1))
    for w in weights:
        last = last - w
    weights.append(last)
    cov = [[None] * n for _ in range(n)]
    for i in range(n):
        for j in range(i, n):
            entry = Dual.variable(params.cov[i][j], idx)
            idx += 1
            cov[i][j] = entry
            cov[j][i] = entry
    point = models.HomoscedasticParams(means=means, weights=weights, cov=cov)
    image = models.homoscedastic_moments(point, degree)
    return _gradient_matrix(image, _moment_columns(n, degree), idx)


def _gradient_matrix(image, cols, nparams):
    jac = [[Fraction(0)] * len(cols) for _ in range(nparams)]
    for c, a in enumerate(cols):
        entry = image.coeff(a)
        if isinstance(entry, Dual):
            for p, g in entry.grad.items():
                jac[p][c] = g
    return jac


def _random_mixture_point(n, k, rng):
    while True:
        means = [tuple(rng.randint(-COORD_BOUND, COORD_BOUND) for _ in range(n))
                 for _ in range(k)]
        if len(set(means)) == k:
            break
    free = [rng.randint(-COORD_BOUND, COORD_BOUND) for _ in range(k - 1)]
    weights = free + [1 - sum(free)]
    if any(w == 0 for w in weights):
        return _random_mixture_point(n, k, rng)
    cov = [[0] * n for _ in range(n)]
    for i in range(n):
        for j in range(i, n):
            cov[i][j] = cov[j][i] = rng.randint(-COORD_BOUND, COORD_BOUND)
    return models.HomoscedasticParams(means=means, weights=weights, cov=cov)


def _generic_rank(sample_rank, seed, n, k, d):
    ranks = []
    for trial in range(2):
        ranks.append(sample_rank(random.Random(_mix_seed(seed, n, k, d, trial))))
    if ranks[0] != ranks[1]:
        ranks.append(sample_rank(random.Random(_mix_seed(seed, n, k, d, 2))))
    return max(ranks), len(ranks)


# ----------------------------------------------------------------------
# reports


@dataclass(frozen=True)
class DefectReport:
    """One classification row for a homoscedastic secant variety."""

    n: int
    k: int
    d: int
    par: int          # parameter space dimension
    ambient: int      # moment space dimension
    expected: int     # min(par, ambient)
    dim: int          # computed variety dimension
    fiber_dim: int    # par - dim
    defect: int       # fiber_dim - max(par - ambient, 0)
    points: int       # random points evaluated
    seed: int

    def as_row(self):
        return (self.n, self.k, self.d, self.par, self.ambient,
                self.expected, self.dim, self.defect, self.fiber_dim)

    def as_dict(self):
        return {
            "n": self.n, "k": self.k, "d": self.d, "par": self.par,
            "ambient": self.ambient, "expected": self.expected,
            "dim": self.dim, "defect": self.defect,
            "fiber_dim": self.fiber_dim, "points": self.points,
            "seed": self.seed,
        }


@dataclass(frozen=True)
class VeroneseReport:
    """Dimension data for a plain (Dirac mixture) secant variety."""

    n: int
    k: int
    d: int
    par: int
    ambient: int
    dim: int
    fiber_dim: int
    defect: int
    points: int
    seed: int


def defect_report(n, k, d, seed=0):
    """Classify the (n, k, d) homoscedastic secant by exact generic rank."""
    _check_envelope(n, k, d)
    par = parameter_count(n, k)
    ambient = ambient_dim(n, d)

    def sample_rank(rng):
        return rank(moment_map_jacobian(_random_mixture_point(n, k, rng), d))

    dim, points = _generic_rank(sample_rank, seed, n, k, d)
    fiber = par - dim
    return DefectReport(n=n, k=k, d=d, par=par, ambient=ambient,
                        expected=min(par, ambient), dim=dim, fiber_dim=fiber,
                        defect=fiber - max(par - ambient, 0),
                        points=points, seed=seed)


def _random_centered_jacobian(n, k, d, rng):
    # free coordinates of the centered atom space: k-1 weights and k-1
    # atoms; the last weight and atom are eliminated by the constraints
    idx = 0
    points = []
    for _ in range(k - 1):
        row = []
        for _ in range(n):
            row.append(Dual.variable(rng.randint(-COORD_BOUND, COORD_BOUND), idx))
            idx += 1
        points.append(row)
    free = []
    for _ in range(k - 1):
        w = rng.randint(-COORD_BOUND, COORD_BOUND)
        free.append(Dual.variable(w, idx))
        idx += 1
    last = Dual(Fraction(1))
    for w in free:
        last = last - w
    if last.value == 0:
        return _random_centered_jacobian(n, k, d, rng)
    weights = free + [last]
    last_point = []
    for j in range(n):
        acc = Dual(Fraction(0))
        for i in range(k - 1):
            acc = acc + weights[i] * points[i][j]
        last_point.append(-acc / last)
    atoms = models.CenteredDiracParams(points=points + [last_point],
                                       weights=weights)
    image = models.dirac_higher_cumulants(atoms, d)
    cols = [a for a in ts.multi_indices(n, d) if sum(a) >= 3]
    return _gradient_matrix(image, cols, idx)


def centered_cumulant_rank(n, k, d, seed=0):
    """Generic rank of the order >= 3 cumulant map on centered atoms.

    The mixture fiber dimension equals (k-1)(n+1) minus this rank, which
    cross-checks :func:`defect_report` on a much smaller Jacobian.
    """
    _check_envelope(n, k, d)
    if k == 1:
        return 0

    def sample_rank(rng):
        return rank(_random_centered_jacobian(n, k, d, rng))

    value, _ = _generic_rank(sample_rank, seed, n, k, d)
    return value


def veronese_report(n, k, d, seed=0):
    """Dimension data for the k-secant of the Dirac moment variety."""
    _check_envelope(n, k, d, k_max=MAX_K_VERONESE)
    par = n * k + k - 1
    ambient = ambient_dim(n, d)

    def sample_rank(rng):
        idx = 0
        points = []
        for _ in range(k):
            row = []
            for _ in range(n):
                row.append(Dual.variable(rng.randint(-COORD_BOUND, COORD_BOUND), idx))
                idx += 1
            points.append(row)
        free = [Dual.variable(rng.randint(-COORD_BOUND, COORD_BOUND), idx + i)
                for i in range(k - 1)]
        last = Dual(Fraction(1))
        for w in free:
            last = last - w
        atoms = models.DiracMixtureParams(points=points, weights=free + [last])
        image = models.dirac_mixture_moments(atoms, d)
        return rank(_gradient_matrix(image, _moment_columns(n, d), idx + k - 1))

    dim, points = _generic_rank(sample_rank, seed, n, k, d)
    fiber = par - dim
    return VeroneseReport(n=n, k=k, d=d, par=par, ambient=ambient, dim=dim,
                          fiber_dim=fiber,
                          defect=fiber - max(par - ambient, 0),
                          points=points, seed=seed)


# ----------------------------------------------------------------------
# closed-form order-3 classification and reference data


def predicted_defect_order3(n, k):
    """Closed-form defect of the order-3 homoscedastic secant.

    Case analysis: two and three/four component mixtures in enough
    variables are always defective, (5, 7) is sporadic, and for n >= 4
    there is a defective band just above k = n + 1.
    """
    if n < 1 or k < 1:
        raise PreconditionError("n and k must be positive")
    if k == 1:
        return 0
    if k == 2 and n >= 2:
        return 1
    if k in (3, 4) and n >= k:
        return 2
    if (n, k) == (5, 7):
        return 1
    if n >= 4:
        six_lo = n * n + 2 * n + 6
        six_hi = n * n + 3 * n + 2
        if 6 * (n + 1) < 6 * k <= six_lo:
            return k - n - 1
        if six_lo <= 6 * k < six_hi:
            # n * (six_hi/6 - k); six_hi = (n+1)(n+2) is divisible by 6
            # exactly when the band is nonempty, keep it in integers
            return n * six_hi // 6 - n * k
    return 0


# Published classification of the order-3 secants for n = 1..7.
# Columns: n, k, d, par, ambient, expected, dim, defect, fiber_dim.
ORDER3_TABLE = (
    (1, 1, 3, 2, 3, 2, 2, 0, 0),
    (1, 2, 3, 4, 3, 3, 3, 0, 1),
    (2, 2, 3, 8, 9, 8, 7, 1, 1),
    (2, 3, 3, 11, 9, 9, 9, 0, 2),
    (3, 2, 3, 13, 19, 13, 12, 1, 1),
    (3, 3, 3, 17, 19, 17, 15, 2, 2),
    (3, 4, 3, 21, 19, 19, 19, 0, 2),
    (4, 2, 3, 19, 34, 19, 18, 1, 1),
    (4, 3, 3, 24, 34, 24, 22, 2, 2),
    (4, 4, 3, 29, 34, 29, 27, 2, 2),
    (4, 5, 3, 34, 34, 34, 34, 0, 0),
    (5, 2, 3, 26, 55, 26, 25, 1, 1),
    (5, 3, 3, 32, 55, 32, 30, 2, 2),
    (5, 4, 3, 38, 55, 38, 36, 2, 2),
    (5, 5, 3, 44, 55, 44, 44, 0, 0),
    (5, 6, 3, 50, 55, 50, 50, 0, 0),
    (5, 7, 3, 56, 55, 55, 54, 1, 2),
    (6, 2, 3, 34, 83, 34, 33, 1, 1),
    (6, 3, 3, 41, 83, 41, 39, 2, 2),
    (6, 4, 3, 48, 83, 48, 46, 2, 2),
    (6, 5, 3, 55, 83, 55, 55, 0, 0),
    (6, 6, 3, 62, 83, 62, 62, 0, 0),
    (6, 7, 3, 69, 83, 69, 69, 0, 0),
    (6, 8, 3, 76, 83, 76, 75, 1, 1),
    (6, 9, 3, 83, 83, 83, 81, 2, 2),
    (7, 2, 3, 43, 119, 43, 42, 1, 1),
    (7, 3, 3, 51, 119, 51, 49, 2, 2),
    (7, 4, 3, 59, 119, 59, 57, 2, 2),
    (7, 5, 3, 67, 119, 67, 67, 0, 0),
    (7, 6, 3, 75, 119, 75, 75, 0, 0),
    (7, 7, 3, 83, 119, 83, 83, 0, 0),
    (7, 8, 3, 91, 119, 91, 91, 0, 0),
    (7, 9, 3, 99, 119, 99, 98, 1, 1),
    (7, 10, 3, 107, 119, 107, 105, 2, 2),
    (7, 11, 3, 115, 119, 115, 112, 3, 3),
    (7, 12, 3, 123, 119, 119, 119, 0, 4),
)


def order3_reference_row(n, k):
    """The published order-3 row for (n, k), or None if not tabulated."""
    for row in ORDER3_TABLE:
        if row[0] == n and row[1] == k:
            return row
    return None


def default_k_range(n, d=3):
    """Component counts tabulated for dimension n: from 1 (n = 1) or 2 up
    to the first k whose parameter count reaches the ambient dimension."""
    ambient = ambient_dim(n, d)
    k = 1 if n == 1 else 2
    ks = []
    while True:
        ks.append(k)
        if parameter_count(n, k) >= ambient:
            return ks
        k += 1


# Defective Veronese secants (classical classification), keyed by
# (n, d, k) with the sporadic defects all equal to one; for d = 2 the
# fiber dimension is k(k-1)/2 whenever 2 <= k <= n.
VERONESE_SPORADIC = ((2, 4, 5), (3, 4, 9), (4, 3, 7), (4, 4, 14))


def veronese_expected(n, k, d):
    """Expected (fiber_dim, defect) of the Veronese k-secant from the
    classical defectivity list."""
    base = max(n * k + k - 1 - ambient_dim(n, d), 0)
    if d == 2 and 2 <= k <= n:
        fiber = k * (k - 1) // 2
        return fiber, fiber - base
    if (n, d, k) in VERONESE_SPORADIC:
        return base + 1, 1
    return base, 0
