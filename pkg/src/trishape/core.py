"""Reference frames and triangle matrix representations.

Triangles are carried as small NumPy arrays:

* vertex matrix: 2x3, columns are vertex coordinates; centered means each
  row sums to zero (centroid at the origin)
* edge matrix: 2x3, columns are edge vectors; columns sum to the zero
  vector, which is what makes the triangle close up
* shape matrix: 2x2 with unit Frobenius norm

The bridge between the 2x3 matrices and the 2x2 shape matrix is the
3-point Helmert frame: M = X @ helmert(3).T, rescaled to unit norm.
"""

import numpy as np

from .errors import DomainError

EXACT_TOL = 1e-12   # closed-form linear-algebra identities
INPUT_TOL = 1e-9    # validation of user-supplied values

# E = T @ EDGE_FROM_VERTEX maps centered vertices to edge vectors;
# T = E @ VERTEX_FROM_EDGE inverts it on the zero-column-sum subspace
# (the two 3x3 matrices are pseudoinverses of each other).
EDGE_FROM_VERTEX = np.array([
    [1.0, -1.0, 0.0],
    [0.0, 1.0, -1.0],
    [-1.0, 0.0, 1.0],
])
VERTEX_FROM_EDGE = np.array([
    [1.0, 0.0, -1.0],
    [-1.0, 1.0, 0.0],
    [0.0, -1.0, 1.0],
]) / 3.0

# Fixed rotation-scaling relating the two shape-matrix views of the same
# triangle: M_vertex = M_edge @ EDGE_TO_VERTEX_VIEW.
EDGE_TO_VERTEX_VIEW = np.array([
    [0.5, np.sqrt(3.0) / 6.0],
    [-np.sqrt(3.0) / 6.0, 0.5],
])


def helmert(n: int) -> np.ndarray:
    """(n-1) x n frame with orthonormal rows orthogonal to (1, ..., 1).

    Row j is (1, ..., 1, -j, 0, ..., 0) / sqrt(j (j+1)) with j leading ones.
    The columns are the vertices (equivalently edges) of a regular simplex,
    so helmert(3) is the reference equilateral triangle.
    """
    if not isinstance(n, (int, np.integer)) or n < 2:
        raise ValueError(f"helmert frame needs an integer n >= 2, got {n!r}")
    mat = np.zeros((n - 1, n))
    for j in range(1, n):
        mat[j - 1, :j] = 1.0
        mat[j - 1, j] = -float(j)
        mat[j - 1] /= np.sqrt(j * (j + 1.0))
    return mat


HELMERT3 = helmert(3)


def center_vertices(t_raw) -> np.ndarray:
    """Translate the centroid of a 2x3 vertex matrix to the origin."""
    t_raw = np.asarray(t_raw, dtype=float)
    if t_raw.shape != (2, 3):
        raise ValueError(f"vertex matrix must be 2x3, got shape {t_raw.shape}")
    return t_raw - t_raw.mean(axis=1, keepdims=True)


def vertices_to_edges(t) -> np.ndarray:
    """Edge matrix of a centered vertex matrix (columns sum to zero)."""
    t = np.asarray(t, dtype=float)
    if t.shape != (2, 3):
        raise ValueError(f"vertex matrix must be 2x3, got shape {t.shape}")
    return t @ EDGE_FROM_VERTEX


def edges_to_vertices(e) -> np.ndarray:
    """Centered vertex matrix recovered from an edge matrix."""
    e = np.asarray(e, dtype=float)
    if e.shape != (2, 3):
        raise ValueError(f"edge matrix must be 2x3, got shape {e.shape}")
    colsum = e.sum(axis=1)
    if np.abs(colsum).max() > INPUT_TOL * max(1.0, np.abs(e).max()):
        raise DomainError(
            "edge matrix columns must sum to zero (not a closed triangle), "
            f"got column sum {colsum}"
        )
    return e @ VERTEX_FROM_EDGE


def _shape_from(x) -> np.ndarray:
    m = np.asarray(x, dtype=float) @ HELMERT3.T
    norm = np.linalg.norm(m)
    if norm <= 0.0:
        raise DomainError("zero matrix has no shape")
    return m / norm


def shape_from_vertices(t) -> np.ndarray:
    """Unit-norm 2x2 shape matrix in the vertex view: T @ helmert(3).T, normalized."""
    t = np.asarray(t, dtype=float)
    if t.shape != (2, 3):
        raise ValueError(f"vertex matrix must be 2x3, got shape {t.shape}")
    return _shape_from(t)


def shape_from_edges(e) -> np.ndarray:
    """Unit-norm 2x2 shape matrix in the edge view (the default view): E @ helmert(3).T."""
    e = np.asarray(e, dtype=float)
    if e.shape != (2, 3):
        raise ValueError(f"edge matrix must be 2x3, got shape {e.shape}")
    return _shape_from(e)
