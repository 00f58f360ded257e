"""Shared test utilities: independent oracles kept separate from the package."""

import numpy as np


def _pairsum_base(x, y):
    # direct O(n^2) sum over i<j of (x_j - x_i) |y_j - y_i|, x ascending
    dx = x[None, :] - x[:, None]
    dy = np.abs(y[None, :] - y[:, None])
    return float((np.triu(dx * dy)).sum())


def _pairsum_cross(xl, yl, xr, yr):
    # sum over i in left, j in right of (x_j - x_i) |y_j - y_i|; all xr >= all xl
    order = np.argsort(yl, kind="mergesort")
    yls, xls = yl[order], xl[order]
    px = np.concatenate([[0.0], np.cumsum(xls)])
    py = np.concatenate([[0.0], np.cumsum(yls)])
    pxy = np.concatenate([[0.0], np.cumsum(xls * yls)])
    pos = np.searchsorted(yls, yr, side="right")
    nl = len(xls)
    c_lo, sx_lo, sy_lo, sxy_lo = pos, px[pos], py[pos], pxy[pos]
    c_hi = nl - pos
    sx_hi, sy_hi, sxy_hi = px[nl] - sx_lo, py[nl] - sy_lo, pxy[nl] - sxy_lo
    low = xr * yr * c_lo - xr * sy_lo - yr * sx_lo + sxy_lo
    high = xr * sy_hi - xr * yr * c_hi - sxy_hi + yr * sx_hi
    return float((low + high).sum())


def _pairsum(x, y):
    n = len(x)
    if n <= 64:
        return _pairsum_base(x, y)
    mid = n // 2
    return (_pairsum(x[:mid], y[:mid]) + _pairsum(x[mid:], y[mid:])
            + _pairsum_cross(x[:mid], y[:mid], x[mid:], y[mid:]))


def _abs_rowsums(x):
    # row sums of the |x_i - x_j| distance matrix in O(n log n)
    order = np.argsort(x, kind="mergesort")
    xs = x[order]
    n = len(xs)
    csum = np.concatenate([[0.0], np.cumsum(xs)])
    ranks = np.arange(n)
    rows_sorted = xs * (2 * ranks - n + 2) - 2 * csum[ranks + 1] + csum[n]
    out = np.empty(n)
    out[order] = rows_sorted
    return out


def distance_correlation(x, y):
    """Distance correlation of two 1-d samples, O(n log n)."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    n = len(x)
    order = np.argsort(x, kind="mergesort")
    xs, ys = x[order], y[order]

    s1_xy = 2.0 * _pairsum(xs, ys)
    s1_xx = 2.0 * _pairsum(np.sort(x), np.sort(x))
    s1_yy = 2.0 * _pairsum(np.sort(y), np.sort(y))
    ax, ay = _abs_rowsums(x), _abs_rowsums(y)
    s2_xy, s2_xx, s2_yy = (ax * ay).sum(), (ax * ax).sum(), (ay * ay).sum()
    s3_x, s3_y = ax.sum(), ay.sum()

    def dcov2(s1, s2, ta, tb):
        return s1 / n**2 - 2.0 * s2 / n**3 + ta * tb / n**4

    vxy = dcov2(s1_xy, s2_xy, s3_x, s3_y)
    vxx = dcov2(s1_xx, s2_xx, s3_x, s3_x)
    vyy = dcov2(s1_yy, s2_yy, s3_y, s3_y)
    denom = np.sqrt(max(vxx, 0.0) * max(vyy, 0.0))
    if denom <= 0.0:
        return 0.0
    return float(np.sqrt(max(vxy, 0.0) / np.sqrt(vxx * vyy)))


def chi2_stat(counts, expected):
    counts = np.asarray(counts, dtype=float)
    expected = np.asarray(expected, dtype=float)
    return float(((counts - expected) ** 2 / expected).sum())
