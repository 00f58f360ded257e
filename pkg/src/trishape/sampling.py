"""Random shapes, classification, and the exact probabilities they obey.

Samplers draw from three models: independent Gaussian vertex coordinates
(equivalently a Gaussian 2x2 shape matrix), the uniform measure on the
hemisphere, and uniform angles on the simplex.  Monte Carlo drivers stream
fixed-size blocks, each with its own deterministically derived generator,
so totals are reproducible for any worker count.

Normal deviates come from NumPy's Generator.standard_normal (ziggurat) on
PCG64 streams keyed by (seed, stream, block); frozen statistics in the
test-suite assume this generator.
"""

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from . import specfun
from .conversions import DiskPoint, HemispherePoint, SquaredSides, sides_to_disk
from .core import HELMERT3, INPUT_TOL
from .errors import DomainError

BLOCK_SIZE = 1 << 16
RIGHT_ANGLE_TOL = 1e-9

SQRT3 = math.sqrt(3.0)
BROKEN_STICK_FRACTION = math.pi / math.sqrt(27.0)
# Normalizer of the angle density over the (alpha, beta) simplex; the
# unnormalized density integrates to 1/ANGLE_DENSITY_NORM.
ANGLE_DENSITY_NORM = 3.0 * SQRT3 * math.pi

CLASS_NAMES = ("acute", "right", "obtuse")


@dataclass(frozen=True)
class RngSeed:
    """Reproducible stream identity: (seed, stream) plus per-block spawning."""

    seed: int
    stream: int = 0

    def generator(self, block: int | None = None) -> np.random.Generator:
        key = (self.stream,) if block is None else (self.stream, block)
        return np.random.default_rng(np.random.SeedSequence(self.seed, spawn_key=key))


def as_rng_seed(seed) -> RngSeed:
    if isinstance(seed, RngSeed):
        return seed
    if isinstance(seed, (int, np.integer)):
        return RngSeed(int(seed))
    if isinstance(seed, (tuple, list)) and len(seed) == 2:
        return RngSeed(int(seed[0]), int(seed[1]))
    raise ValueError(f"cannot interpret {seed!r} as an rng seed")


@dataclass
class SimplexAngles:
    """Angles divided by pi: nonnegative (alpha, beta, gamma) summing to one."""

    alpha: float
    beta: float
    gamma: float

    def __post_init__(self):
        vals = [float(self.alpha), float(self.beta), float(self.gamma)]
        if min(vals) < -INPUT_TOL:
            raise DomainError(f"simplex angles must be nonnegative, got {vals}")
        if abs(sum(vals) - 1.0) > INPUT_TOL:
            raise DomainError(f"simplex angles must sum to 1, got {sum(vals)}")
        self.alpha, self.beta, self.gamma = (max(v, 0.0) for v in vals)

    def as_array(self) -> np.ndarray:
        return np.array([self.alpha, self.beta, self.gamma])


@dataclass
class ClassifiedShape:
    sides: SquaredSides
    kind: str
    disk: DiskPoint


@dataclass
class MonteCarloEstimate:
    estimate: float
    stderr: float
    n_samples: int


# ---------------------------------------------------------------------------
# samplers


def sample_gaussian_shape(rng: np.random.Generator) -> np.ndarray:
    """One unit-norm 2x2 matrix of iid standard normals (resampled if all zero)."""
    while True:
        m = rng.standard_normal((2, 2))
        norm = np.linalg.norm(m)
        if norm > 0.0:
            return m / norm


def gaussian_shapes(rng: np.random.Generator, n: int) -> np.ndarray:
    """Batch of n unit-norm Gaussian shape matrices, shape (n, 2, 2)."""
    m = rng.standard_normal((n, 2, 2))
    norms = np.linalg.norm(m.reshape(n, 4), axis=1)
    norms[norms == 0.0] = 1.0   # probability-zero guard
    return m / norms[:, None, None]


def sample_uniform_hemisphere(rng: np.random.Generator) -> HemispherePoint:
    """Uniform-on-hemisphere point: height uniform on [0, 1/2], longitude free."""
    lat, lon = uniform_hemisphere_batch(rng, 1)
    return HemispherePoint(float(lat[0]), float(lon[0]))


def uniform_hemisphere_batch(rng: np.random.Generator, n: int):
    height = rng.uniform(0.0, 0.5, size=n)
    lat = np.arcsin(2.0 * height)
    lon = rng.uniform(0.0, 2.0 * math.pi, size=n)
    return lat, lon


def sample_uniform_angles(rng: np.random.Generator) -> SimplexAngles:
    """Uniform point on the angle simplex via normalized exponentials."""
    return SimplexAngles(*uniform_angles_batch(rng, 1)[0])


def uniform_angles_batch(rng: np.random.Generator, n: int) -> np.ndarray:
    e = rng.exponential(size=(n, 3))
    return e / e.sum(axis=1)[:, None]


def sample_ndim_shape(m: int, k: int, rng: np.random.Generator) -> np.ndarray:
    """Unit-Frobenius m x (k-1) matrix of iid normals (a k-point shape in R^m)."""
    return ndim_shapes(m, k, rng, 1)[0]


def ndim_shapes(m: int, k: int, rng: np.random.Generator, n: int) -> np.ndarray:
    if m < 1 or k < 2:
        raise ValueError(f"need m >= 1 and k >= 2, got m={m}, k={k}")
    z = rng.standard_normal((n, m, k - 1))
    norms = np.linalg.norm(z.reshape(n, -1), axis=1)
    norms[norms == 0.0] = 1.0
    return z / norms[:, None, None]


# ---------------------------------------------------------------------------
# classification


def classify(s: SquaredSides) -> ClassifiedShape:
    """Acute/right/obtuse by the largest squared side against the 1/2 threshold."""
    top = max(s.a2, s.b2, s.c2)
    if abs(top - 0.5) <= RIGHT_ANGLE_TOL:
        kind = "right"
    elif top > 0.5:
        kind = "obtuse"
    else:
        kind = "acute"
    return ClassifiedShape(s, kind, sides_to_disk(s))


def _classify_codes(s2: np.ndarray) -> np.ndarray:
    """0 acute / 1 right / 2 obtuse for an (n, 3) squared-sides array."""
    top = s2.max(axis=1)
    codes = np.where(top > 0.5, 2, 0)
    codes[np.abs(top - 0.5) <= RIGHT_ANGLE_TOL] = 1
    return codes


# vectorized pipeline helpers -----------------------------------------------


def _shapes_to_xy(m: np.ndarray):
    """Disk Cartesian coordinates (r cos phi, r sin phi) of a (n,2,2) batch."""
    g11 = m[:, 0, 0] ** 2 + m[:, 1, 0] ** 2
    g22 = m[:, 0, 1] ** 2 + m[:, 1, 1] ** 2
    g12 = m[:, 0, 0] * m[:, 0, 1] + m[:, 1, 0] * m[:, 1, 1]
    return (g11 - g22) / 2.0, g12


def _sides_from_xy(x: np.ndarray, y: np.ndarray) -> np.ndarray:
    a2 = (1.0 + x + SQRT3 * y) / 3.0
    b2 = (1.0 + x - SQRT3 * y) / 3.0
    c2 = (1.0 - 2.0 * x) / 3.0
    return np.stack([a2, b2, c2], axis=1)


def _shapes_to_sides(m: np.ndarray) -> np.ndarray:
    x, y = _shapes_to_xy(m)
    return _sides_from_xy(x, y)


def _ndim_to_sides(z: np.ndarray) -> np.ndarray:
    """Normalized squared sides of triangles in R^m from (n, m, 2) preshapes."""
    e = z @ HELMERT3
    return (e * e).sum(axis=1)


def _sides_to_angles(s2: np.ndarray) -> np.ndarray:
    """Angles over pi, rows summing to 1, from an (n, 3) squared-sides array."""
    quart = (s2 * s2).sum(axis=1)
    k = np.sqrt(np.maximum(1.0 - 2.0 * quart, 0.0)) / 4.0
    return np.arctan2(4.0 * k[:, None], 1.0 - 2.0 * s2) / math.pi


# ---------------------------------------------------------------------------
# block-wise Monte Carlo


def _mc_sum(n_samples: int, block_fn, seed, workers: int = 1) -> np.ndarray:
    """Sum block_fn(rng, count) over deterministic blocks of the sample budget.

    block_fn must return integer counts so the total is exactly independent
    of how blocks are scheduled across workers.
    """
    if n_samples < 1:
        raise ValueError(f"need at least one sample, got {n_samples}")
    seed = as_rng_seed(seed)
    n_blocks = (n_samples + BLOCK_SIZE - 1) // BLOCK_SIZE

    def run(i: int) -> np.ndarray:
        count = min(BLOCK_SIZE, n_samples - i * BLOCK_SIZE)
        return np.asarray(block_fn(seed.generator(block=i), count), dtype=np.int64)

    if workers <= 1:
        total = run(0)
        for i in range(1, n_blocks):
            total = total + run(i)
        return total
    with ThreadPoolExecutor(max_workers=workers) as pool:
        results = list(pool.map(run, range(n_blocks)))
    return np.sum(results, axis=0)


def _class_counts_block(model: str, m: int):
    def block(rng: np.random.Generator, count: int) -> np.ndarray:
        if model == "gaussian":
            s2 = _shapes_to_sides(gaussian_shapes(rng, count))
        elif model == "ndim":
            s2 = _ndim_to_sides(ndim_shapes(m, 3, rng, count))
        elif model == "hemisphere":
            lat, lon = uniform_hemisphere_batch(rng, count)
            r = np.cos(lat) / 2.0
            s2 = _sides_from_xy(r * np.cos(lon), r * np.sin(lon))
        elif model == "angles":
            ang = uniform_angles_batch(rng, count)
            top = ang.max(axis=1)
            codes = np.where(top > 0.5, 2, 0)
            codes[np.abs(top - 0.5) <= RIGHT_ANGLE_TOL] = 1
            return np.bincount(codes, minlength=3)
        else:
            raise ValueError(f"unknown sampling model {model!r}")
        return np.bincount(_classify_codes(s2), minlength=3)

    return block


def class_fractions(model: str, n_samples: int, seed=0, m: int = 2,
                    workers: int = 1) -> dict:
    """Acute/right/obtuse fractions with binomial standard errors.

    model is 'gaussian', 'hemisphere', 'angles', or 'ndim' (triangles in R^m).
    """
    counts = _mc_sum(n_samples, _class_counts_block(model, m), seed, workers)
    out = {"n_samples": n_samples, "counts": {n: int(c) for n, c in zip(CLASS_NAMES, counts)}}
    for name, c in zip(CLASS_NAMES, counts):
        p = c / n_samples
        out[name] = p
        out[f"{name}_stderr"] = math.sqrt(p * (1.0 - p) / n_samples)
    return out


def acute_probability_mc(n_samples: int, seed=0, workers: int = 1) -> MonteCarloEstimate:
    """Fraction of Gaussian shapes that are acute (exact right angles count as acute;
    the boundary has probability zero)."""
    fr = class_fractions("gaussian", n_samples, seed=seed, workers=workers)
    p = (fr["counts"]["acute"] + fr["counts"]["right"]) / n_samples
    return MonteCarloEstimate(p, math.sqrt(p * (1.0 - p) / n_samples), n_samples)


def obtuse_fraction_ndim_mc(n_dim: int, n_samples: int, seed=0,
                            workers: int = 1) -> MonteCarloEstimate:
    """Monte Carlo obtuse fraction for Gaussian triangles in R^n."""
    fr = class_fractions("ndim", n_samples, seed=seed, m=n_dim, workers=workers)
    p = fr["counts"]["obtuse"] / n_samples
    return MonteCarloEstimate(p, math.sqrt(p * (1.0 - p) / n_samples), n_samples)


def broken_stick_fraction(n_samples: int, seed=0, workers: int = 1) -> MonteCarloEstimate:
    """Fraction of uniform-simplex triples (a2, b2, c2) that form a triangle.

    The acceptance region is a^4 + b^4 + c^4 <= 1/2, i.e. the inscribed disk;
    the fraction converges to pi / sqrt(27).
    """

    def block(rng: np.random.Generator, count: int) -> np.ndarray:
        e = rng.exponential(size=(count, 3))
        s2 = e / e.sum(axis=1)[:, None]
        good = int(((s2 * s2).sum(axis=1) <= 0.5).sum())
        return np.array([good])

    good = int(_mc_sum(n_samples, block, seed, workers)[0])
    p = good / n_samples
    return MonteCarloEstimate(p, math.sqrt(p * (1.0 - p) / n_samples), n_samples)


# ---------------------------------------------------------------------------
# exact probabilities


def obtuse_probability_ndim(n: int) -> float:
    """Probability that a Gaussian triangle in R^n is obtuse:
    3 (1 - I(3/4; n/2, n/2)) with I the regularized incomplete beta."""
    if not isinstance(n, (int, np.integer)) or n < 2:
        raise ValueError(f"dimension must be an integer >= 2, got {n!r}")
    return 3.0 * (1.0 - specfun.betainc_reg(n / 2.0, n / 2.0, 0.75))


def acute_probability_ndim(n: int) -> float:
    return 1.0 - obtuse_probability_ndim(n)


def squared_side_marginal_cdf(n: int, x: float, clamp: bool = False) -> float:
    """CDF of one squared side under the Gaussian model in R^n: I(3x/2; n/2, n/2).

    The support is [0, 2/3].  Out-of-range x raises unless clamp is set.
    """
    if not isinstance(n, (int, np.integer)) or n < 2:
        raise ValueError(f"dimension must be an integer >= 2, got {n!r}")
    if x < 0.0 or x > 2.0 / 3.0:
        if not clamp:
            raise DomainError(f"squared side must lie in [0, 2/3], got {x}")
        x = min(max(x, 0.0), 2.0 / 3.0)
    return specfun.betainc_reg(n / 2.0, n / 2.0, 1.5 * x)


# ---------------------------------------------------------------------------
# density of angles under the uniform shape measure


def _angle_density_arrays(alpha, beta, gamma):
    """Unnormalized density at simplex points, vectorized; inf on the boundary.

    The density is |det(D J D^T)| / (sqrt(48) K): the Jacobian of the
    law-of-sines map from angles to the squared-sides disk (D the 3-point
    Helmert frame), composed with the disk-to-hemisphere area factor
    1/sqrt(1 - 4 r^2) = 1/(sqrt(48) K).  Expanding the determinant with the
    2x2 adjugate identity and sin(pi(alpha+beta+gamma)) = 0 collapses the
    whole expression to a closed form with no cancellation anywhere:

        (2/sqrt(3)) sin(pi a) sin(pi b) sin(pi g) / sigma^2,

    sigma the sum of squared sines.  It diverges like 1/(9 sqrt(3) pi d) at
    distance d from a simplex corner and vanishes on the open edges.
    """
    alpha, beta, gamma = np.broadcast_arrays(
        np.asarray(alpha, dtype=float), np.asarray(beta, dtype=float),
        np.asarray(gamma, dtype=float))
    ang = np.stack([alpha, beta, gamma], axis=-1)
    sines = np.sin(math.pi * ang)
    sigma = (sines**2).sum(axis=-1)
    interior = ang.min(axis=-1) > 0.0
    sigma_safe = np.where(interior, sigma, 1.0)
    out = (2.0 / SQRT3) * np.prod(sines, axis=-1) / sigma_safe**2
    return np.where(interior, np.abs(out), np.inf)


def angle_density(angles, normalized: bool = False) -> float:
    """Density of (alpha, beta, gamma) when the shape is uniform on the hemisphere.

    Evaluated per unit d(alpha) d(beta) on the simplex.  By default returns
    the raw inverse-Jacobian value; with normalized=True it is scaled by
    ANGLE_DENSITY_NORM so it integrates to one.  Boundary points return inf
    (degenerate triangles; the density diverges at the simplex corners).
    """
    if isinstance(angles, SimplexAngles):
        a, b, g = angles.alpha, angles.beta, angles.gamma
    else:
        a, b, g = (float(v) for v in angles)
        SimplexAngles(a, b, g)  # validate
    val = float(_angle_density_arrays(a, b, g))
    return val * ANGLE_DENSITY_NORM if normalized else val


# ---------------------------------------------------------------------------
# barycentric binning of the angle simplex (the "N^2 bins" picture)


def angle_bins(bins_per_side: int = 10) -> list:
    """Bin labels (i, j, orientation) covering the simplex with n^2 triangles.

    i and j index floor(alpha n) and floor(beta n); orientation is 'up' for
    the lower cell half (i + j + k = n - 1) and 'down' for the upper half.
    """
    n = bins_per_side
    out = [(i, j, "up") for i in range(n) for j in range(n - i)]
    out += [(i, j, "down") for i in range(n - 1) for j in range(n - 1 - i)]
    return out


def angle_bin_index(alpha: float, beta: float, bins_per_side: int = 10) -> tuple:
    n = bins_per_side
    i = min(int(alpha * n), n - 1)
    j = min(int(beta * n), n - 1)
    up = (alpha * n + beta * n <= i + j + 1.0) or (i + j >= n - 1)
    if up:
        j = min(j, n - 1 - i)
    return (i, j, "up" if up else "down")


def _bin_triangle(label, bins_per_side: int) -> np.ndarray:
    """Vertices of a bin in (alpha, beta) coordinates, rows = 3 corners."""
    i, j, orient = label
    h = 1.0 / bins_per_side
    a0, b0 = i * h, j * h
    if orient == "up":
        return np.array([[a0, b0], [a0 + h, b0], [a0, b0 + h]])
    return np.array([[a0 + h, b0], [a0 + h, b0 + h], [a0, b0 + h]])


# 7-point degree-5 symmetric triangle rule (barycentric nodes, weights sum 1)
_TRI_A = (6.0 - math.sqrt(15.0)) / 21.0
_TRI_B = (6.0 + math.sqrt(15.0)) / 21.0
_TRI_NODES = np.array(
    [[1 / 3, 1 / 3, 1 / 3]]
    + [[_TRI_A, _TRI_A, 1 - 2 * _TRI_A], [_TRI_A, 1 - 2 * _TRI_A, _TRI_A],
       [1 - 2 * _TRI_A, _TRI_A, _TRI_A]]
    + [[_TRI_B, _TRI_B, 1 - 2 * _TRI_B], [_TRI_B, 1 - 2 * _TRI_B, _TRI_B],
       [1 - 2 * _TRI_B, _TRI_B, _TRI_B]])
_TRI_WTS = np.array([9 / 40]
                    + [(155.0 - math.sqrt(15.0)) / 1200.0] * 3
                    + [(155.0 + math.sqrt(15.0)) / 1200.0] * 3)

_SIMPLEX_CORNERS = np.array([[0.0, 0.0], [1.0, 0.0], [0.0, 1.0]])


def _leaf_triangles(tri: np.ndarray, depth: int, corner_depth: int) -> list:
    """Uniform bisection refinement, pushed deeper toward simplex corners
    (where the density has its integrable 1/distance singularity)."""
    near_corner = any(
        np.linalg.norm(tri - c, axis=1).min() < 1e-12 for c in _SIMPLEX_CORNERS
    )
    budget = corner_depth if near_corner else depth
    if budget <= 0:
        return [tri]
    mids = np.array([(tri[0] + tri[1]) / 2, (tri[1] + tri[2]) / 2, (tri[2] + tri[0]) / 2])
    out = []
    for child in (
        np.array([tri[0], mids[0], mids[2]]),
        np.array([mids[0], tri[1], mids[1]]),
        np.array([mids[2], mids[1], tri[2]]),
        np.array([mids[0], mids[1], mids[2]]),
    ):
        out.extend(_leaf_triangles(child, depth - 1, corner_depth - 1))
    return out


def _integrate_bins(labels, bins_per_side: int, depth: int, corner_depth: int) -> np.ndarray:
    vals = np.empty(len(labels))
    for pos, label in enumerate(labels):
        leaves = _leaf_triangles(_bin_triangle(label, bins_per_side), depth, corner_depth)
        verts = np.stack(leaves)                        # (L, 3, 2)
        pts = _TRI_NODES @ verts                        # (L, 7, 2) via barycentric
        e1 = verts[:, 1] - verts[:, 0]
        e2 = verts[:, 2] - verts[:, 0]
        areas = 0.5 * np.abs(e1[:, 0] * e2[:, 1] - e1[:, 1] * e2[:, 0])
        a = pts[..., 0]
        b = pts[..., 1]
        f = _angle_density_arrays(a, b, 1.0 - a - b)
        vals[pos] = float(((f * _TRI_WTS).sum(axis=1) * areas).sum())
    return vals


def angle_bin_probabilities(bins_per_side: int = 10, depth: int = 6,
                            corner_depth: int = 24) -> dict:
    """Probability mass of each barycentric bin under the uniform shape measure.

    Integrates the normalized angle density over every bin triangle; the
    values sum to one (up to quadrature error well below 1e-3).
    """
    labels = angle_bins(bins_per_side)
    raw = _integrate_bins(labels, bins_per_side, depth, corner_depth)
    return dict(zip(labels, raw * ANGLE_DENSITY_NORM))


def angle_bin_counts(model: str, n_samples: int, seed=0, bins_per_side: int = 10,
                     workers: int = 1) -> dict:
    """Histogram of sampled shapes (or sampled angles) over the barycentric bins."""
    labels = angle_bins(bins_per_side)
    n = bins_per_side
    up_base = np.cumsum([0] + [n - ii for ii in range(n)])
    down_base = up_base[n] + np.cumsum([0] + [n - 1 - ii for ii in range(n - 1)])

    def block(rng: np.random.Generator, count: int) -> np.ndarray:
        if model == "gaussian":
            ang = _sides_to_angles(_shapes_to_sides(gaussian_shapes(rng, count)))
        elif model == "angles":
            ang = uniform_angles_batch(rng, count)
        else:
            raise ValueError(f"angle bins need model 'gaussian' or 'angles', got {model!r}")
        i = np.minimum((ang[:, 0] * n).astype(np.int64), n - 1)
        j = np.minimum((ang[:, 1] * n).astype(np.int64), n - 1)
        # points exactly on a cell diagonal or the simplex edge count as 'up'
        up = (ang[:, 0] * n + ang[:, 1] * n <= i + j + 1.0) | (i + j >= n - 1)
        j = np.where(up, np.minimum(j, n - 1 - i), j)
        flat = np.where(up, up_base[i] + j, down_base[np.minimum(i, n - 2)] + j)
        return np.bincount(flat, minlength=len(labels))

    counts = _mc_sum(n_samples, block, seed, workers)
    return dict(zip(labels, (int(c) for c in counts)))
