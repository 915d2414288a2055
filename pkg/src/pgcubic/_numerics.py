"""Scalar bracketing helpers: bisection and golden-section maximization."""

from __future__ import annotations

import math
from typing import Callable

from .exceptions import NumericalError

INV_PHI = (math.sqrt(5) - 1) / 2


def bisect(fun: Callable[[float], float], lo: float, hi: float,
           xtol: float = 1e-14, maxiter: int = 200) -> float:
    """Root of fun in [lo, hi]; fun(lo) and fun(hi) must differ in sign.

    Stops when the bracket is narrower than xtol * max(1, |x|) or cannot
    shrink further in floating point.
    """
    flo, fhi = fun(lo), fun(hi)
    if flo == 0:
        return lo
    if fhi == 0:
        return hi
    if (flo > 0) == (fhi > 0):
        raise NumericalError(f"no sign change on [{lo!r}, {hi!r}]: {flo!r}, {fhi!r}")
    for _ in range(maxiter):
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi or hi - lo <= xtol * max(1.0, abs(mid)):
            break
        fm = fun(mid)
        if fm == 0:
            return mid
        if (fm > 0) == (flo > 0):
            lo, flo = mid, fm
        else:
            hi = mid
    return 0.5 * (lo + hi)


def golden_max(fun: Callable[[float], float], lo: float, hi: float,
               xtol: float = 1e-10, maxiter: int = 200) -> tuple[float, float, int]:
    """Golden-section search for a maximum of a unimodal fun on [lo, hi].

    Returns (argmax, max, number of evaluations).
    """
    x1 = hi - INV_PHI * (hi - lo)
    x2 = lo + INV_PHI * (hi - lo)
    f1, f2 = fun(x1), fun(x2)
    n = 2
    while hi - lo > xtol and n < maxiter:
        if f1 < f2:
            lo, x1, f1 = x1, x2, f2
            x2 = lo + INV_PHI * (hi - lo)
            f2 = fun(x2)
        else:
            hi, x2, f2 = x2, x1, f1
            x1 = hi - INV_PHI * (hi - lo)
            f1 = fun(x1)
        n += 1
    return (x1, f1, n) if f1 >= f2 else (x2, f2, n)
