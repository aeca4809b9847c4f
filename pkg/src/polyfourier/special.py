"""Bessel J1 and the radial profile of the unit disk's Fourier transform."""

from __future__ import annotations

import math

from .errors import RangeExceeded

SERIES_LIMIT = 8.0
RANGE_LIMIT = 50.0


def _j1_series(x: float) -> float:
    half = x / 2
    term = half
    total = term
    q = -half * half
    k = 0
    while True:
        k += 1
        term *= q / (k * (k + 1))
        total += term
        if abs(term) < 1e-17 * max(abs(total), 1e-300):
            return total


def _j1_miller(x: float) -> float:
    # downward recurrence is stable for J_n; normalise with J0 + 2 sum J_2k = 1
    start = int(x + 30 + math.sqrt(40 * x))
    start += start % 2
    j_next, j_cur = 0.0, 1e-30
    norm = 0.0
    j1 = 0.0
    for n in range(start, 0, -1):
        j_prev = 2 * n / x * j_cur - j_next
        j_next, j_cur = j_cur, j_prev
        if n - 1 == 1:
            j1 = j_cur
        if (n - 1) % 2 == 0 and n - 1 > 0:
            norm += 2 * j_cur
        if abs(j_cur) > 1e250:
            j_cur *= 1e-250
            j_next *= 1e-250
            norm *= 1e-250
            j1 *= 1e-250
    norm += j_cur  # J0
    return j1 / norm


def bessel_j1(x: float) -> float:
    """Bessel function of the first kind of order one for ``|x| <= 50``."""
    x = float(x)
    if abs(x) > RANGE_LIMIT:
        raise RangeExceeded(f"|x| = {abs(x)} exceeds {RANGE_LIMIT}")
    if x == 0:
        return 0.0
    sign = -1.0 if x < 0 else 1.0
    ax = abs(x)
    value = _j1_series(ax) if ax <= SERIES_LIMIT else _j1_miller(ax)
    return sign * value


def bessel_j1_zero(lo=3.0, hi=4.5, tol=1e-14) -> float:
    """First positive zero of J1 by bisection on ``[lo, hi]``."""
    flo = bessel_j1(lo)
    if flo * bessel_j1(hi) > 0:
        raise ValueError("J1 does not change sign on the bracket")
    while hi - lo > tol:
        mid = (lo + hi) / 2
        fmid = bessel_j1(mid)
        if fmid == 0:
            return mid
        if (fmid > 0) == (flo > 0):
            lo, flo = mid, fmid
        else:
            hi = mid
    return (lo + hi) / 2


def disk_transform_profile(rho: float) -> float:
    """Transform of the unit disk's indicator at any frequency of length ``rho``: ``J1(2 pi rho) / rho``."""
    if not rho > 0:
        raise ValueError("rho must be positive")
    return bessel_j1(2 * math.pi * rho) / rho


def vanishing_radius() -> float:
    """Smallest ``rho > 0`` at which the disk transform vanishes."""
    return bessel_j1_zero() / (2 * math.pi)
