"""Triangle-space geometry on the hemisphere and its equatorial disk.

Covers the angle/area formulas tied to the normalized squared sides, the
fixed-area special-triangle families, the big/little barycentric frames
with their parallelians, and the construction that realizes a triangle of
the correct proportions inside the hemisphere itself.
"""

import math
from dataclasses import dataclass

import numpy as np

from .conversions import DiskPoint, SquaredSides, disk_to_sides, sides_to_disk
from .core import INPUT_TOL
from .errors import DomainError, NotATriangleError

OMEGA = math.sqrt(3.0)            # scale tying parallelian lengths to side products
EQUILATERAL_AREA = 1.0 / math.sqrt(48.0)   # largest area at unit squared-side sum
DEGENERATE_TOL = 1e-12

# Vertices of the big equilateral triangle (columns, norm 1) and of the
# inverted little triangle of its edge midpoints (norm 1/2).  The little
# triangle is inscribed in the radius-1/2 disk and has a horizontal base.
BARY_BIG = np.array([
    [math.sqrt(3.0) / 2.0, -math.sqrt(3.0) / 2.0, 0.0],
    [0.5, 0.5, -1.0],
])
BARY_LITTLE = -0.5 * BARY_BIG


def _sides3(s) -> np.ndarray:
    if isinstance(s, SquaredSides):
        return s.as_array()
    arr = np.asarray(s, dtype=float)
    if arr.shape != (3,):
        raise ValueError(f"expected three squared sides, got shape {arr.shape}")
    SquaredSides(*arr)  # validate
    return arr


@dataclass
class TriangleAngles:
    """Interior angles (A, B, C) in radians, opposite sides a, b, c."""

    A: float
    B: float
    C: float

    def as_array(self) -> np.ndarray:
        return np.array([self.A, self.B, self.C])


@dataclass
class BarycentricFrames:
    """The big equilateral frame and the inverted little frame (= -big/2)."""

    big: np.ndarray
    little: np.ndarray


@dataclass
class Parallelian:
    """One segment through P parallel to a side of the little triangle.

    Endpoints are given as barycentric triples in both frames and as the
    common Cartesian points they map to.
    """

    index: int
    big_endpoints: tuple
    little_endpoints: tuple
    cartesian_endpoints: tuple


@dataclass
class ConstructionResult:
    """The in-hemisphere realization of a triangle shape.

    ``apex`` is the hemisphere point S; ``foot`` is its vertical projection P
    (third coordinate zero).  ``parallelians`` are the three segments through
    P, and ``triangles`` the three similar triangles with apex S standing on
    them, each a 3x3 array of vertex rows (S, endpoint, endpoint).
    """

    apex: np.ndarray
    foot: np.ndarray
    parallelians: list
    triangles: list
    degenerate: bool


def area(s) -> float:
    """Area K = (1/4) sqrt(1 - 2 (a^4 + b^4 + c^4)) of normalized squared sides."""
    arr = _sides3(s)
    radicand = 1.0 - 2.0 * float(arr @ arr)
    if radicand < -1e-12:
        raise NotATriangleError(f"negative area radicand {radicand}")
    return math.sqrt(max(radicand, 0.0)) / 4.0


def area_general(a: float, b: float, c: float) -> float:
    """Area from raw side lengths via 16 K^2 = (a+b+c)(-a+b+c)(a-b+c)(a+b-c)."""
    if min(a, b, c) < 0.0:
        raise ValueError("side lengths must be nonnegative")
    prod = (a + b + c) * (-a + b + c) * (a - b + c) * (a + b - c)
    scale = max(a * a + b * b + c * c, 1.0)
    if prod < -1e-12 * scale * scale:
        raise NotATriangleError(f"sides ({a}, {b}, {c}) violate the triangle inequality")
    return math.sqrt(max(prod, 0.0)) / 4.0


def angles_from_sides(s, K: float | None = None) -> TriangleAngles:
    """Angles via the two-argument arctangent of (4K, 1 - 2 a^2) and cyclic.

    Obtuse angles land in (pi/2, pi) because the denominator goes negative
    while 4K stays nonnegative.  Degenerate triangles give the limiting
    (0, 0, pi) pattern, or a right angle where a squared side is exactly 1/2.
    """
    arr = _sides3(s)
    if K is None:
        K = area(arr)
    out = []
    for v in arr:
        num, den = 4.0 * K, 1.0 - 2.0 * v
        if abs(num) <= DEGENERATE_TOL and abs(den) <= DEGENERATE_TOL:
            out.append(math.pi / 2.0)   # collapsed pair of sides at 1/2
        else:
            out.append(math.atan2(num, den))
    return TriangleAngles(*out)


def special_triangle(kind: str, K: float, phi: float | None = None):
    """Fixed-area representative of a special family, as (DiskPoint, SquaredSides).

    kind is one of ``right`` (K <= 1/8), ``isosceles_sharp`` / ``isosceles_flat``
    (K <= 1/sqrt(48)), or ``singular`` (K = 0, sweep the rim with ``phi``).
    """
    if K < -INPUT_TOL:
        raise DomainError(f"area must be nonnegative, got {K}")
    K = max(float(K), 0.0)

    if kind == "singular":
        if K > INPUT_TOL:
            raise DomainError(f"singular triangles have area 0, got K = {K}")
        disk = DiskPoint(0.5, math.pi if phi is None else phi)
        return disk, disk_to_sides(disk)

    if phi is not None:
        raise ValueError("phi only parametrizes the singular family")
    radicand = 1.0 - 48.0 * K * K

    if kind == "right":
        if K > 0.125 + INPUT_TOL:
            raise DomainError(f"right triangles need K <= 1/8, got {K}")
        r = math.sqrt(max(radicand, 0.25)) / 2.0
        disk = DiskPoint(r, math.acos(max(-1.0, -1.0 / (4.0 * r))) - 2.0 * math.pi / 3.0)
        return disk, disk_to_sides(disk)

    if kind in ("isosceles_sharp", "isosceles_flat"):
        if K > EQUILATERAL_AREA + INPUT_TOL:
            raise DomainError(f"isosceles triangles need K <= 1/sqrt(48), got {K}")
        r = math.sqrt(max(radicand, 0.0)) / 2.0
        disk = DiskPoint(r, 0.0 if kind == "isosceles_sharp" else math.pi / 3.0)
        return disk, disk_to_sides(disk)

    raise ValueError(f"unknown special-triangle kind {kind!r}")


def singular_sides(phi: float) -> np.ndarray:
    """Actual (not squared) sides of the rim triangle at angle phi.

    These are sqrt(2/3) |sin(x/2)| at x = phi + 2pi/3, phi - 2pi/3, phi;
    the longest equals the sum of the other two.
    """
    offs = np.array([2.0 * math.pi / 3.0, -2.0 * math.pi / 3.0, 0.0])
    return math.sqrt(2.0 / 3.0) * np.abs(np.sin((phi + offs) / 2.0))


def barycentric_frames() -> BarycentricFrames:
    return BarycentricFrames(BARY_BIG.copy(), BARY_LITTLE.copy())


def little_coords(s) -> np.ndarray:
    """Coordinates (1 - 2a^2, 1 - 2b^2, 1 - 2c^2) on the inverted little triangle."""
    return 1.0 - 2.0 * _sides3(s)


def parallelian_endpoints(s) -> list:
    """The three parallelians through P = (a2, b2, c2), endpoints per frame.

    Segment i is parallel to side i of the little triangle, has total length
    sqrt(3) * (squared side i), and is split by P into pieces of length
    omega (1/2 - s_j) for the other two squared sides s_j.
    """
    a2, b2, c2 = _sides3(s)
    table = [
        ((a2, 0.5, 0.5 - a2), (a2, 0.5 - a2, 0.5),
         (1.0 - 2.0 * a2, 0.0, 2.0 * a2), (1.0 - 2.0 * a2, 2.0 * a2, 0.0)),
        ((0.5, b2, 0.5 - b2), (0.5 - b2, b2, 0.5),
         (0.0, 1.0 - 2.0 * b2, 2.0 * b2), (2.0 * b2, 1.0 - 2.0 * b2, 0.0)),
        ((0.5, 0.5 - c2, c2), (0.5 - c2, 0.5, c2),
         (0.0, 2.0 * c2, 1.0 - 2.0 * c2), (2.0 * c2, 0.0, 1.0 - 2.0 * c2)),
    ]
    out = []
    for i, (big_u, big_v, lit_u, lit_v) in enumerate(table, start=1):
        cart = (BARY_BIG @ np.asarray(big_u), BARY_BIG @ np.asarray(big_v))
        out.append(Parallelian(i, (np.asarray(big_u), np.asarray(big_v)),
                               (np.asarray(lit_u), np.asarray(lit_v)), cart))
    return out


def construct_in_hemisphere(s) -> ConstructionResult:
    """Stand the triangle up inside the hemisphere.

    P, X, Y come from one matrix product with the big frame; the apex S is P
    lifted to the sphere.  Triangle S-X-Y has sides omega*b*c, omega*a*c,
    omega*c^2, i.e. proportions a : b : c, and the other two parallelians
    carry the two rotated copies (the three similar triangles).
    """
    arr = _sides3(s)
    a2, b2, c2 = arr
    cols = np.array([
        [a2, 0.5, 0.5 - c2],
        [b2, 0.5 - c2, 0.5],
        [c2, c2, c2],
    ])
    pxy = BARY_BIG @ cols
    p2 = pxy[:, 0]
    apex = np.array([p2[0], p2[1], math.sqrt(max(0.25 - float(p2 @ p2), 0.0))])
    foot = np.array([p2[0], p2[1], 0.0])
    paras = parallelian_endpoints(arr)
    triangles = []
    for para in paras:
        u, v = para.cartesian_endpoints
        triangles.append(np.array([apex, [u[0], u[1], 0.0], [v[0], v[1], 0.0]]))
    degenerate = area(arr) <= DEGENERATE_TOL
    return ConstructionResult(apex, foot, paras, triangles, degenerate)


def three_similar_triangles(s) -> list:
    """The three similar triangles over the parallelians, each a 3x3 vertex array.

    All three share the vertical segment from apex to foot as an altitude and
    have side lengths proportional to a, b, c.
    """
    return construct_in_hemisphere(s).triangles
