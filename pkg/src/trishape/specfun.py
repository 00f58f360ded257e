"""Scalar special functions backing the exact probabilities and tests.

Self-contained evaluators (no SciPy at runtime): the regularized incomplete
beta and upper incomplete gamma by Lentz continued fractions, the Gauss
hypergeometric 2F1 by series plus linear transformations for negative
arguments, and the Kolmogorov distribution tail.
"""

import math

_EPS = 1e-15
_TINY = 1e-300
_MAX_ITER = 500


def _betacf(a: float, b: float, x: float) -> float:
    # Lentz evaluation of the continued fraction for the incomplete beta.
    qab, qap, qam = a + b, a + 1.0, a - 1.0
    c = 1.0
    d = 1.0 - qab * x / qap
    if abs(d) < _TINY:
        d = _TINY
    d = 1.0 / d
    h = d
    for m in range(1, _MAX_ITER + 1):
        m2 = 2 * m
        aa = m * (b - m) * x / ((qam + m2) * (a + m2))
        d = 1.0 + aa * d
        if abs(d) < _TINY:
            d = _TINY
        c = 1.0 + aa / c
        if abs(c) < _TINY:
            c = _TINY
        d = 1.0 / d
        h *= d * c
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2))
        d = 1.0 + aa * d
        if abs(d) < _TINY:
            d = _TINY
        c = 1.0 + aa / c
        if abs(c) < _TINY:
            c = _TINY
        d = 1.0 / d
        delta = d * c
        h *= delta
        if abs(delta - 1.0) < _EPS:
            return h
    raise RuntimeError(f"incomplete beta continued fraction stalled at a={a}, b={b}, x={x}")


def betainc_reg(a: float, b: float, x: float) -> float:
    """Regularized incomplete beta I_x(a, b)."""
    if a <= 0.0 or b <= 0.0:
        raise ValueError(f"beta parameters must be positive, got a={a}, b={b}")
    if x < 0.0 or x > 1.0:
        raise ValueError(f"beta argument must lie in [0, 1], got {x}")
    if x == 0.0 or x == 1.0:
        return x
    front = math.exp(
        math.lgamma(a + b) - math.lgamma(a) - math.lgamma(b)
        + a * math.log(x) + b * math.log1p(-x)
    )
    # continued fraction converges fastest on the side below the mean
    if x < (a + 1.0) / (a + b + 2.0):
        return front * _betacf(a, b, x) / a
    return 1.0 - front * _betacf(b, a, 1.0 - x) / b


def _gamma_q_series(s: float, x: float) -> float:
    # P(s, x) by series, returned as Q = 1 - P; good for x < s + 1.
    term = 1.0 / s
    total = term
    n = s
    for _ in range(_MAX_ITER * 4):
        n += 1.0
        term *= x / n
        total += term
        if abs(term) < abs(total) * _EPS:
            return 1.0 - total * math.exp(-x + s * math.log(x) - math.lgamma(s))
    raise RuntimeError(f"incomplete gamma series stalled at s={s}, x={x}")


def _gamma_q_cf(s: float, x: float) -> float:
    # Q(s, x) by Lentz continued fraction; good for x >= s + 1.
    b = x + 1.0 - s
    c = 1.0 / _TINY
    d = 1.0 / b if abs(b) > _TINY else 1.0 / _TINY
    h = d
    for i in range(1, _MAX_ITER * 4):
        an = -i * (i - s)
        b += 2.0
        d = an * d + b
        if abs(d) < _TINY:
            d = _TINY
        c = b + an / c
        if abs(c) < _TINY:
            c = _TINY
        d = 1.0 / d
        delta = d * c
        h *= delta
        if abs(delta - 1.0) < _EPS:
            return h * math.exp(-x + s * math.log(x) - math.lgamma(s))
    raise RuntimeError(f"incomplete gamma continued fraction stalled at s={s}, x={x}")


def gamma_q(s: float, x: float) -> float:
    """Regularized upper incomplete gamma Q(s, x) = Gamma(s, x) / Gamma(s)."""
    if s <= 0.0:
        raise ValueError(f"shape parameter must be positive, got {s}")
    if x < 0.0:
        raise ValueError(f"argument must be nonnegative, got {x}")
    if x == 0.0:
        return 1.0
    if x < s + 1.0:
        return _gamma_q_series(s, x)
    return _gamma_q_cf(s, x)


# ---------------------------------------------------------------------------
# Gauss hypergeometric


def _is_nonpositive_integer(x: float) -> bool:
    return x <= 0.0 and abs(x - round(x)) < 1e-12


def _rgamma(x: float) -> float:
    # 1 / Gamma(x), zero at the poles
    if _is_nonpositive_integer(x):
        return 0.0
    return 1.0 / math.gamma(x)


def _hyp2f1_series(a: float, b: float, c: float, z: float, max_terms: int = 200000) -> float:
    term = 1.0
    total = 1.0
    for n in range(max_terms):
        term *= (a + n) * (b + n) / ((c + n) * (n + 1.0)) * z
        total += term
        if abs(term) < abs(total) * _EPS and n > 2:
            return total
    raise RuntimeError(f"2F1 series did not converge at z={z}")


def _hyp2f1_pfaff(a: float, b: float, c: float, z: float) -> float:
    # 2F1(a,b;c;z) = (1-z)^(-a) 2F1(a, c-b; c; z/(z-1)); maps z<0 into (0,1)
    w = z / (z - 1.0)
    return (1.0 - z) ** (-a) * _hyp2f1_series(a, c - b, c, w)


def _hyp2f1_large_negative(a: float, b: float, c: float, z: float) -> float:
    # connection formula at infinity; requires b - a not an integer
    t1 = (math.gamma(c) * math.gamma(b - a) * _rgamma(b) * _rgamma(c - a)
          * (-z) ** (-a) * _hyp2f1_series(a, a - c + 1.0, a - b + 1.0, 1.0 / z))
    t2 = (math.gamma(c) * math.gamma(a - b) * _rgamma(a) * _rgamma(c - b)
          * (-z) ** (-b) * _hyp2f1_series(b, b - c + 1.0, b - a + 1.0, 1.0 / z))
    return t1 + t2


def gauss_2f1(a: float, b: float, c: float, z: float) -> float:
    """Gauss hypergeometric 2F1(a, b; c; z) for real parameters and z < 0.9.

    Direct series inside the disk, the Pfaff transformation on [-2, -0.9],
    and the expansion at infinity below that (falling back to Pfaff when
    b - a is an integer and the expansion degenerates).
    """
    if _is_nonpositive_integer(c):
        raise ValueError(f"2F1 undefined for non-positive integer c = {c}")
    if a == 0.0 or b == 0.0 or z == 0.0:
        return 1.0
    if z >= 0.9:
        raise ValueError(f"2F1 argument must satisfy z < 0.9, got {z}")
    if z > -0.9:
        return _hyp2f1_series(a, b, c, z)
    if z > -2.0:
        return _hyp2f1_pfaff(a, b, c, z)
    if abs((b - a) - round(b - a)) < 1e-9:
        return _hyp2f1_pfaff(a, b, c, z)
    return _hyp2f1_large_negative(a, b, c, z)


def kolmogorov_sf(x: float) -> float:
    """Upper tail of the Kolmogorov distribution: 2 sum (-1)^(k-1) exp(-2 k^2 x^2)."""
    if x <= 0.05:
        return 1.0
    total = 0.0
    sign = 1.0
    for k in range(1, 10000):
        term = math.exp(-2.0 * k * k * x * x)
        total += sign * term
        if term < 1e-17:
            break
        sign = -sign
    return min(max(2.0 * total, 0.0), 1.0)
