"""Triangle shape space: representations, geometry, random shapes, and tests.

The shape of a triangle (its similarity class with ordered vertices) is a
point on a hemisphere of radius 1/2.  This package converts losslessly
among five equivalent representations of that point, constructs the
shape's geometry inside the hemisphere, draws random shapes whose
hemisphere distribution is provably uniform, and tests empirical shape
samples for uniformity.
"""

from .conversions import (
    DiskPoint,
    HemispherePoint,
    RoundtripReport,
    SquaredSides,
    SvdShape,
    UnitQuaternion,
    convert,
    disk_to_hemisphere,
    disk_to_sides,
    disk_to_svd,
    hemisphere_to_cartesian,
    hemisphere_to_disk,
    hemisphere_to_sides,
    hemisphere_to_svd,
    hopf,
    hopf_equivariance_check,
    kind_of,
    q3_from_quaternion,
    q4_from_quaternion,
    roundtrip_all,
    shape_distance,
    shape_to_disk,
    shape_to_hemisphere,
    shape_to_hemisphere_cartesian,
    shape_to_sides,
    sides_to_disk,
    sides_to_hemisphere,
    sides_to_shape,
    sides_to_svd,
    svd2x2,
    svd2x2_factors,
    svd_to_disk,
    svd_to_hemisphere,
    svd_to_shape,
    svd_to_sides,
)
from .core import (
    EDGE_TO_VERTEX_VIEW,
    center_vertices,
    edges_to_vertices,
    helmert,
    shape_from_edges,
    shape_from_vertices,
    vertices_to_edges,
)
from .errors import DomainError, NotATriangleError
from .geometry import (
    BarycentricFrames,
    ConstructionResult,
    Parallelian,
    TriangleAngles,
    angles_from_sides,
    area,
    area_general,
    barycentric_frames,
    construct_in_hemisphere,
    little_coords,
    parallelian_endpoints,
    singular_sides,
    special_triangle,
    three_similar_triangles,
)
from .sampling import (
    ClassifiedShape,
    MonteCarloEstimate,
    RngSeed,
    SimplexAngles,
    acute_probability_mc,
    acute_probability_ndim,
    angle_bin_counts,
    angle_bin_probabilities,
    angle_density,
    broken_stick_fraction,
    class_fractions,
    classify,
    gaussian_shapes,
    ndim_shapes,
    obtuse_fraction_ndim_mc,
    obtuse_probability_ndim,
    sample_gaussian_shape,
    sample_ndim_shape,
    sample_uniform_angles,
    sample_uniform_hemisphere,
    squared_side_marginal_cdf,
)
from .uniformity import (
    SuiteReport,
    TestReport,
    chi2_upper_tail,
    chikuse_jupp,
    gauss_2f1,
    inv_sigma_min_cdf,
    inv_sigma_min_density,
    ks_test,
    preshape,
    uniformity_suite,
)

__version__ = "0.1.0"
