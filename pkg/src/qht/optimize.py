"""Golden-section search for unimodal functions on a closed interval."""

from __future__ import annotations

import math
from typing import Callable

INV_PHI = (math.sqrt(5.0) - 1.0) / 2.0
INV_PHI2 = (3.0 - math.sqrt(5.0)) / 2.0


def golden_section_minimize(
    f: Callable[[float], float], a: float, b: float, tol: float = 1e-10
) -> tuple[float, float]:
    """Minimize a unimodal ``f`` on ``[a, b]`` down to a bracket of width ``tol``.

    Returns the best evaluated point and its value.  Endpoints are not
    evaluated here; callers that care about the boundary compare separately.
    """
    a, b = min(a, b), max(a, b)
    h = b - a
    if h <= tol:
        x = 0.5 * (a + b)
        return x, f(x)
    steps = int(math.ceil(math.log(tol / h) / math.log(INV_PHI)))
    c = a + INV_PHI2 * h
    d = a + INV_PHI * h
    fc = f(c)
    fd = f(d)
    for _ in range(steps):
        if fc <= fd:
            b, d, fd = d, c, fc
            h *= INV_PHI
            c = a + INV_PHI2 * h
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            h *= INV_PHI
            d = a + INV_PHI * h
            fd = f(d)
    return (c, fc) if fc <= fd else (d, fd)


def golden_section_maximize(
    f: Callable[[float], float], a: float, b: float, tol: float = 1e-10
) -> tuple[float, float]:
    x, fx = golden_section_minimize(lambda t: -f(t), a, b, tol)
    return x, -fx
