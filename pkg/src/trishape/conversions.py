"""Conversions among the triangle shape representations.

A shape lives in any of five equivalent forms:

1. ``SvdShape``        -- (sigma1, sigma2, theta), the reduced SVD of the
                          shape matrix with the left factor discarded
2. ``SquaredSides``    -- (a2, b2, c2), normalized squared side lengths
3. ``HemispherePoint`` -- (latitude, longitude) on the radius-1/2 hemisphere
4. ``DiskPoint``       -- (r, phi), the vertical projection onto the disk
5. shape matrix        -- unit-Frobenius 2x2 array (known only modulo the
                          rotation/reflection it shares with congruent copies)

Every ordered pair of representations has a conversion here, plus the Hopf
map and the quaternion machinery that makes it rotation-equivariant.
"""

import itertools
import math
from dataclasses import dataclass, field

import numpy as np

from .core import HELMERT3, INPUT_TOL
from .errors import DomainError, NotATriangleError

TWO_PI = 2.0 * math.pi

# Projection sending squared sides to the disk: DISK_FROM_SIDES @ (a2,b2,c2)
# equals r*(cos phi, sin phi).  Its columns are the vertices of an
# equilateral triangle whose inscribed circle is the radius-1/2 disk.
DISK_FROM_SIDES = np.array([
    [0.5, 0.5, -1.0],
    [np.sqrt(3.0) / 2.0, -np.sqrt(3.0) / 2.0, 0.0],
])

# Tie-break for the SVD rotation angle when sigma1 ~ sigma2 (V is arbitrary
# at the equilateral point; theta = 0 keeps output deterministic).
DEGENERATE_SVD_TOL = 1e-9


def _clamp(x: float, lo: float, hi: float) -> float:
    return lo if x < lo else hi if x > hi else x


def _wrap(angle: float, period: float) -> float:
    a = math.fmod(angle, period)
    if a < 0.0:
        a += period
    return a if a < period else 0.0


@dataclass
class SvdShape:
    """Singular values and right-rotation angle of a unit-norm shape matrix."""

    sigma1: float
    sigma2: float
    theta: float

    def __post_init__(self):
        s1, s2 = float(self.sigma1), float(self.sigma2)
        if s2 < -INPUT_TOL or s1 < s2 - INPUT_TOL or s1 > 1.0 + INPUT_TOL:
            raise DomainError(f"need 1 >= sigma1 >= sigma2 >= 0, got ({s1}, {s2})")
        if abs(s1 * s1 + s2 * s2 - 1.0) > INPUT_TOL:
            raise DomainError(f"sigma1^2 + sigma2^2 must be 1, got {s1*s1 + s2*s2}")
        self.sigma1 = _clamp(s1, 0.0, 1.0)
        self.sigma2 = _clamp(s2, 0.0, self.sigma1)
        self.theta = _wrap(float(self.theta), math.pi)


@dataclass
class SquaredSides:
    """Squared side lengths (a2, b2, c2) normalized so a2 + b2 + c2 = 1."""

    a2: float
    b2: float
    c2: float

    def __post_init__(self):
        vals = [float(self.a2), float(self.b2), float(self.c2)]
        if min(vals) < -INPUT_TOL:
            raise DomainError(f"squared sides must be nonnegative, got {vals}")
        if abs(sum(vals) - 1.0) > INPUT_TOL:
            raise DomainError(f"squared sides must sum to 1, got sum {sum(vals)}")
        quartic = sum(v * v for v in vals)
        if quartic > 0.5 + INPUT_TOL:
            raise NotATriangleError(
                f"triangle inequality fails: a^4 + b^4 + c^4 = {quartic} > 1/2"
            )
        self.a2, self.b2, self.c2 = (max(v, 0.0) for v in vals)

    def as_array(self) -> np.ndarray:
        return np.array([self.a2, self.b2, self.c2])

    def lengths(self) -> np.ndarray:
        return np.sqrt(self.as_array())


@dataclass
class HemispherePoint:
    """Latitude in [0, pi/2] and longitude in [0, 2 pi) on the radius-1/2 hemisphere."""

    latitude: float
    longitude: float

    def __post_init__(self):
        lat = float(self.latitude)
        if lat < -INPUT_TOL or lat > math.pi / 2.0 + INPUT_TOL:
            raise DomainError(f"latitude must lie in [0, pi/2], got {lat}")
        self.latitude = _clamp(lat, 0.0, math.pi / 2.0)
        self.longitude = _wrap(float(self.longitude), TWO_PI)


@dataclass
class DiskPoint:
    """Polar point (r, phi) with r in [0, 1/2] on the radius-1/2 disk."""

    r: float
    phi: float

    def __post_init__(self):
        r = float(self.r)
        if r < -INPUT_TOL or r > 0.5 + INPUT_TOL:
            raise DomainError(f"disk radius must lie in [0, 1/2], got {r}")
        self.r = _clamp(r, 0.0, 0.5)
        self.phi = _wrap(float(self.phi), TWO_PI)

    def xy(self) -> np.ndarray:
        return np.array([self.r * math.cos(self.phi), self.r * math.sin(self.phi)])


@dataclass
class UnitQuaternion:
    """Quaternion (alpha, beta, gamma, delta) with unit norm."""

    alpha: float
    beta: float
    gamma: float
    delta: float

    def __post_init__(self):
        n2 = self.alpha**2 + self.beta**2 + self.gamma**2 + self.delta**2
        if abs(n2 - 1.0) > INPUT_TOL:
            raise DomainError(f"quaternion must have unit norm, got |q|^2 = {n2}")


def rotation(theta: float) -> np.ndarray:
    """2x2 counterclockwise rotation by theta."""
    c, s = math.cos(theta), math.sin(theta)
    return np.array([[c, -s], [s, c]])


def _check_unit_matrix(m) -> np.ndarray:
    m = np.asarray(m, dtype=float)
    if m.shape != (2, 2):
        raise ValueError(f"shape matrix must be 2x2, got shape {m.shape}")
    if abs(np.linalg.norm(m) - 1.0) > INPUT_TOL:
        raise DomainError(f"shape matrix must have unit Frobenius norm, got {np.linalg.norm(m)}")
    return m


# ---------------------------------------------------------------------------
# (1) SVD of the shape matrix


def svd2x2_factors(m):
    """Closed-form SVD of a unit-norm 2x2 matrix.

    Returns (U, (sigma1, sigma2), theta) with M = U @ diag(sigma) @ R(theta).T,
    sigma1 >= sigma2 >= 0 and theta in [0, pi).  U absorbs any reflection, so
    it is orthogonal but not necessarily a rotation.

    Uses the rotation-component split of M (no Gram matrix), so the small
    singular value is formed without cancellation.
    """
    m = _check_unit_matrix(m)
    e = (m[0, 0] + m[1, 1]) / 2.0
    f = (m[0, 0] - m[1, 1]) / 2.0
    g = (m[1, 0] + m[0, 1]) / 2.0
    h = (m[1, 0] - m[0, 1]) / 2.0
    q = math.hypot(e, h)
    p = math.hypot(f, g)
    sigma1 = q + p
    sigma2 = abs(q - p)

    a1 = math.atan2(g, f) if p > 0.0 else 0.0
    a2 = math.atan2(h, e) if q > 0.0 else 0.0
    nu = (a1 - a2) / 2.0
    mu = (a1 + a2) / 2.0

    if sigma1 - sigma2 < DEGENERATE_SVD_TOL:
        # V arbitrary at the equilateral point; pin theta and refit U below.
        theta = 0.0
        u = m @ np.diag([1.0 / sigma1, 1.0 / sigma2])
        return u, (sigma1, sigma2), theta

    theta = _wrap(nu, math.pi)
    u = rotation(mu)
    if q - p < 0.0:
        u = u @ np.diag([1.0, -1.0])
    # wrapping nu by an odd multiple of pi flips R(theta); compensate in U
    if round((theta - nu) / math.pi) % 2:
        u = -u
    return u, (sigma1, sigma2), theta


def svd2x2(m) -> SvdShape:
    """Reduced SVD of a unit-norm shape matrix; the left factor is dropped."""
    _, (s1, s2), theta = svd2x2_factors(m)
    return SvdShape(min(s1, 1.0), max(s2, 0.0), theta)


def svd_to_shape(s: SvdShape) -> np.ndarray:
    """Canonical shape matrix Sigma @ V^T (left factor taken as the identity)."""
    return np.diag([s.sigma1, s.sigma2]) @ rotation(s.theta).T


# ---------------------------------------------------------------------------
# (1) <-> (3) hemisphere


def svd_to_hemisphere(s: SvdShape) -> HemispherePoint:
    # lat = asin(2 sigma1 sigma2), evaluated as 2 atan2(sigma2, sigma1) so the
    # pole (sigma1 = sigma2) does not lose half the significant digits
    lat = 2.0 * math.atan2(s.sigma2, s.sigma1)
    return HemispherePoint(lat, _wrap(2.0 * s.theta, TWO_PI))


def hemisphere_to_svd(h: HemispherePoint) -> SvdShape:
    return SvdShape(math.cos(h.latitude / 2.0), math.sin(h.latitude / 2.0), h.longitude / 2.0)


# ---------------------------------------------------------------------------
# (3) <-> (4) disk


def hemisphere_to_disk(h: HemispherePoint) -> DiskPoint:
    return DiskPoint(math.cos(h.latitude) / 2.0, h.longitude)


def disk_to_hemisphere(d: DiskPoint) -> HemispherePoint:
    return HemispherePoint(math.acos(_clamp(2.0 * d.r, -1.0, 1.0)), d.phi)


# ---------------------------------------------------------------------------
# (2) <-> (4) squared sides and disk


def disk_to_sides(d: DiskPoint) -> SquaredSides:
    """Squared sides (1 - 2 r cos(phi + offset))/3 at offsets +2pi/3, -2pi/3, 0."""
    r, phi = d.r, d.phi
    a2 = (1.0 - 2.0 * r * math.cos(phi + TWO_PI / 3.0)) / 3.0
    b2 = (1.0 - 2.0 * r * math.cos(phi - TWO_PI / 3.0)) / 3.0
    c2 = (1.0 - 2.0 * r * math.cos(phi)) / 3.0
    return SquaredSides(a2, b2, c2)


def sides_to_disk(s: SquaredSides) -> DiskPoint:
    """Polar coordinates of DISK_FROM_SIDES @ (a2, b2, c2); inverse of disk_to_sides."""
    x, y = DISK_FROM_SIDES @ s.as_array()
    r = math.hypot(x, y)
    if r > 0.5 + INPUT_TOL:
        raise NotATriangleError(f"squared sides map outside the disk (r = {r})")
    phi = math.atan2(y, x) if r > 0.0 else 0.0
    return DiskPoint(min(r, 0.5), _wrap(phi, TWO_PI))


# ---------------------------------------------------------------------------
# remaining pairs


def svd_to_sides(s: SvdShape) -> SquaredSides:
    """Closed-form squared sides (1 - (sigma1^2 - sigma2^2) cos(2 theta + offset))/3."""
    gap = s.sigma1**2 - s.sigma2**2
    t2 = 2.0 * s.theta
    a2 = (1.0 - gap * math.cos(t2 + TWO_PI / 3.0)) / 3.0
    b2 = (1.0 - gap * math.cos(t2 - TWO_PI / 3.0)) / 3.0
    c2 = (1.0 - gap * math.cos(t2)) / 3.0
    return SquaredSides(a2, b2, c2)


def svd_to_disk(s: SvdShape) -> DiskPoint:
    return DiskPoint((s.sigma1**2 - s.sigma2**2) / 2.0, _wrap(2.0 * s.theta, TWO_PI))


def disk_radius_via_area(s: SvdShape) -> float:
    """Alternative radius sqrt(1/4 - (sigma1 sigma2)^2); agrees with svd_to_disk."""
    return math.sqrt(max(0.25 - (s.sigma1 * s.sigma2) ** 2, 0.0))


def disk_to_svd(d: DiskPoint) -> SvdShape:
    return SvdShape(math.sqrt(0.5 + d.r), math.sqrt(max(0.5 - d.r, 0.0)), d.phi / 2.0)


def sides_to_svd(s: SquaredSides) -> SvdShape:
    return disk_to_svd(sides_to_disk(s))


def sides_to_hemisphere(s: SquaredSides) -> HemispherePoint:
    return disk_to_hemisphere(sides_to_disk(s))


def hemisphere_to_sides(h: HemispherePoint) -> SquaredSides:
    return disk_to_sides(hemisphere_to_disk(h))


def shape_to_sides(m) -> SquaredSides:
    """Squared sides as diag((M D)^T (M D)) for the Helmert frame D = helmert(3)."""
    m = _check_unit_matrix(m)
    e = m @ HELMERT3
    return SquaredSides(*(e * e).sum(axis=0))


def shape_to_disk(m) -> DiskPoint:
    """Disk point from the Gram matrix: r cos phi = (G11 - G22)/2, r sin phi = G12."""
    m = _check_unit_matrix(m)
    gram = m.T @ m
    x = (gram[0, 0] - gram[1, 1]) / 2.0
    y = gram[0, 1]
    r = math.hypot(x, y)
    phi = math.atan2(y, x) if r > 0.0 else 0.0
    return DiskPoint(min(r, 0.5), _wrap(phi, TWO_PI))


def shape_to_hemisphere(m) -> HemispherePoint:
    x, y, z = shape_to_hemisphere_cartesian(m) * 2.0
    lat = math.atan2(z, math.hypot(x, y))
    phi = math.atan2(y, x) if math.hypot(x, y) > 0.0 else 0.0
    return HemispherePoint(lat, _wrap(phi, TWO_PI))


def sides_to_shape(s: SquaredSides) -> np.ndarray:
    """A shape matrix with the given sides (canonical representative, U = I)."""
    return svd_to_shape(sides_to_svd(s))


def hemisphere_to_cartesian(h: HemispherePoint) -> np.ndarray:
    """Embed (latitude, longitude) as the 3-vector (1/2)(cos lat cos lon, cos lat sin lon, sin lat)."""
    cl = math.cos(h.latitude)
    return 0.5 * np.array([
        cl * math.cos(h.longitude),
        cl * math.sin(h.longitude),
        math.sin(h.latitude),
    ])


# ---------------------------------------------------------------------------
# Hopf map and quaternion equivariance


def hopf(m) -> np.ndarray:
    """Hopf map of a unit-norm 2x2 matrix onto the unit sphere.

    The third coordinate is 2 det(M), so its sign records the orientation;
    the shape construction folds it positive (see shape_to_hemisphere_cartesian).
    """
    m = _check_unit_matrix(m)
    return np.array([
        (m[0, 0] ** 2 + m[1, 0] ** 2) - (m[0, 1] ** 2 + m[1, 1] ** 2),
        2.0 * (m[0, 0] * m[0, 1] + m[1, 0] * m[1, 1]),
        2.0 * (m[0, 0] * m[1, 1] - m[1, 0] * m[0, 1]),
    ])


def shape_to_hemisphere_cartesian(m) -> np.ndarray:
    """Cartesian hemisphere point (1/2) Hopf(M) with the height folded positive."""
    v = 0.5 * hopf(m)
    v[2] = abs(v[2])
    return v


def q3_from_quaternion(quat: UnitQuaternion) -> np.ndarray:
    """3x3 rotation about axis (beta, gamma, delta) by angle 2 acos(alpha)."""
    a, b, g, d = quat.alpha, quat.beta, quat.gamma, quat.delta
    return np.array([
        [a * a + b * b - g * g - d * d, 2.0 * (a * d + b * g), 2.0 * (b * d - a * g)],
        [-2.0 * (a * d - b * g), a * a - b * b + g * g - d * d, 2.0 * (a * b + g * d)],
        [2.0 * (a * g + b * d), -2.0 * (a * b - g * d), a * a - b * b - g * g + d * d],
    ])


def q4_from_quaternion(quat: UnitQuaternion) -> np.ndarray:
    """4x4 rotation acting on column-flattened 2x2 matrices, paired with q3_from_quaternion."""
    a, b, g, d = quat.alpha, quat.beta, quat.gamma, quat.delta
    return np.array([
        [a, -b, d, -g],
        [b, a, g, d],
        [-d, -g, a, b],
        [g, -d, -b, a],
    ])


def hopf_equivariance_check(quat: UnitQuaternion, m) -> float:
    """Residual ||Hopf(Q4 M) - Q3 Hopf(M)|| (zero in exact arithmetic).

    Q4 acts by flattening M to (M11, M21, M12, M22), rotating, and reshaping.
    """
    m = _check_unit_matrix(m)
    q3 = q3_from_quaternion(quat)
    q4 = q4_from_quaternion(quat)
    rotated = (q4 @ m.flatten(order="F")).reshape(2, 2, order="F")
    return float(np.linalg.norm(hopf(rotated) - q3 @ hopf(m)))


# ---------------------------------------------------------------------------
# roundtrips

_KINDS = ("svd", "sides", "hemisphere", "disk", "matrix")

_CONVERT = {
    ("svd", "sides"): svd_to_sides,
    ("svd", "hemisphere"): svd_to_hemisphere,
    ("svd", "disk"): svd_to_disk,
    ("svd", "matrix"): svd_to_shape,
    ("sides", "svd"): sides_to_svd,
    ("sides", "hemisphere"): sides_to_hemisphere,
    ("sides", "disk"): sides_to_disk,
    ("sides", "matrix"): sides_to_shape,
    ("hemisphere", "svd"): hemisphere_to_svd,
    ("hemisphere", "sides"): hemisphere_to_sides,
    ("hemisphere", "disk"): hemisphere_to_disk,
    ("hemisphere", "matrix"): lambda h: svd_to_shape(hemisphere_to_svd(h)),
    ("disk", "svd"): disk_to_svd,
    ("disk", "sides"): disk_to_sides,
    ("disk", "hemisphere"): disk_to_hemisphere,
    ("disk", "matrix"): lambda d: svd_to_shape(disk_to_svd(d)),
    ("matrix", "svd"): svd2x2,
    ("matrix", "sides"): shape_to_sides,
    ("matrix", "hemisphere"): shape_to_hemisphere,
    ("matrix", "disk"): shape_to_disk,
}


def kind_of(x) -> str:
    """Representation tag of a value ('svd', 'sides', 'hemisphere', 'disk', 'matrix')."""
    if isinstance(x, SvdShape):
        return "svd"
    if isinstance(x, SquaredSides):
        return "sides"
    if isinstance(x, HemispherePoint):
        return "hemisphere"
    if isinstance(x, DiskPoint):
        return "disk"
    arr = np.asarray(x)
    if arr.shape == (2, 2):
        return "matrix"
    raise ValueError(f"not a shape representation: {x!r}")


def convert(x, target: str):
    """Convert a shape value to the named target representation."""
    src = kind_of(x)
    if target not in _KINDS:
        raise ValueError(f"unknown representation {target!r}")
    if src == target:
        return x
    return _CONVERT[(src, target)](x)


def shape_distance(x, y) -> float:
    """Discrepancy between two values of the same representation.

    Angle coordinates are compared through smooth embeddings, so the wrap
    at 2 pi and the undefined angle at the pole or disk center do not
    register as discrepancies.  Matrices compare via squared sides (the
    left SVD factor is not a shape property).
    """
    src = kind_of(x)
    if kind_of(y) != src:
        raise ValueError("cannot compare different representations")
    if src == "sides":
        return float(np.abs(x.as_array() - y.as_array()).max())
    if src == "disk":
        return float(np.abs(x.xy() - y.xy()).max())
    if src == "hemisphere":
        return float(np.abs(hemisphere_to_cartesian(x) - hemisphere_to_cartesian(y)).max())
    if src == "svd":
        return float(np.abs(
            hemisphere_to_cartesian(svd_to_hemisphere(x))
            - hemisphere_to_cartesian(svd_to_hemisphere(y))
        ).max())
    return shape_distance(shape_to_sides(x), shape_to_sides(y))


@dataclass
class RoundtripReport:
    """Worst-case discrepancy over all conversion cycles from one start value."""

    start_kind: str
    n_cycles: int
    max_discrepancy: float
    worst_cycle: tuple = field(default_factory=tuple)

    def __str__(self):
        path = " -> ".join(self.worst_cycle)
        return (
            f"{self.n_cycles} cycles from {self.start_kind}: "
            f"max discrepancy {self.max_discrepancy:.3e} (worst: {path})"
        )


def roundtrip_all(x, include_matrix: bool = True) -> RoundtripReport:
    """Run every conversion cycle that starts and ends at x's representation.

    Cycles visit each subset of the other representations in every order.
    The returned report carries the largest discrepancy found.
    """
    start = kind_of(x)
    others = [k for k in _KINDS if k != start and (include_matrix or k != "matrix")]
    worst = 0.0
    worst_cycle = (start, start)
    n = 0
    for size in range(1, len(others) + 1):
        for path in itertools.permutations(others, size):
            value = x
            for step in path:
                value = convert(value, step)
            value = convert(value, start)
            n += 1
            dist = shape_distance(x, value)
            if dist > worst:
                worst = dist
                worst_cycle = (start, *path, start)
    return RoundtripReport(start, n, worst, worst_cycle)
