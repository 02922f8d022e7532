"""Adaptive panel quadrature on Gauss-Kronrod 7/15 rules.

The per-panel error estimate is |K15 - G7|, which overestimates the true
Kronrod error on smooth integrands by orders of magnitude, so the reported
error is a conservative bound in practice. Panels are split worst-first
until the summed estimate meets the absolute tolerance.
"""

from __future__ import annotations

import heapq
import math
from typing import Callable, Sequence

from .errors import ConvergenceError, DomainError

# Kronrod abscissae for [-1, 1]; even indices are the Kronrod extension,
# odd indices the embedded 7-point Gauss nodes.
_XGK = (
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144838258730,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
)
_WGK = (
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
)
_WG = (
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
)


def _gk15(f: Callable[[float], float], a: float, b: float) -> tuple[float, float]:
    """(Kronrod value, |K15 - G7| estimate) on one panel."""
    center = 0.5 * (a + b)
    half = 0.5 * (b - a)
    fc = f(center)
    resk = _WGK[7] * fc
    resg = _WG[3] * fc
    for i in range(7):
        dx = half * _XGK[i]
        fsum = f(center - dx) + f(center + dx)
        resk += _WGK[i] * fsum
        if i % 2 == 1:
            resg += _WG[(i - 1) // 2] * fsum
    return resk * half, abs(resk - resg) * half


def adaptive_quad(
    f: Callable[[float], float],
    a: float,
    b: float,
    tol: float = 1e-10,
    *,
    max_panels: int = 4096,
    break_points: Sequence[float] = (),
) -> tuple[float, float]:
    """Integrate f over [a, b] to absolute tolerance tol.

    Returns (value, error_estimate) with error_estimate <= tol on success.
    break_points are interior abscissae used as initial panel boundaries
    (useful when the integrand has a known kink). Empty or inverted ranges
    integrate to zero. Raises ConvergenceError, carrying the partial
    result, if max_panels panels cannot reach the tolerance.
    """
    if tol <= 0:
        raise DomainError(f"tol must be positive, got {tol}")
    if not (math.isfinite(a) and math.isfinite(b)):
        raise DomainError(f"non-finite integration range [{a}, {b}]")
    if b <= a:
        return 0.0, 0.0
    edges = [a] + sorted(p for p in break_points if a < p < b) + [b]
    heap = []  # (-err, lo, hi, val)
    for lo, hi in zip(edges, edges[1:]):
        val, err = _gk15(f, lo, hi)
        heap.append((-err, lo, hi, val))
    heapq.heapify(heap)
    n_panels = len(heap)
    total_err = sum(-item[0] for item in heap)
    while total_err > tol:
        if n_panels >= max_panels:
            value = sum(item[3] for item in heap)
            raise ConvergenceError(
                f"quadrature did not reach tol={tol} within {max_panels} panels "
                f"(estimate {total_err:.3e})",
                partial=value,
                estimate=total_err,
            )
        neg_err, lo, hi, _ = heapq.heappop(heap)
        total_err += neg_err  # removes the popped panel's error
        mid = 0.5 * (lo + hi)
        for seg in ((lo, mid), (mid, hi)):
            val, err = _gk15(f, *seg)
            heapq.heappush(heap, (-err, seg[0], seg[1], val))
            total_err += err
        n_panels += 1
    value = math.fsum(item[3] for item in heap)
    return value, total_err


def nested_quadrature(
    f: Callable[..., float],
    bounds: Sequence[tuple],
    tol: float = 1e-9,
    *,
    max_panels: int = 4096,
) -> tuple[float, float]:
    """Iterated integral of f over a normal region described by bounds.

    bounds is one (lo, hi) pair per variable, outermost first; lo and hi may
    be numbers or callables of the outer coordinates accumulated so far.
    f takes len(bounds) floats. Inner integrals run at a tolerance budgeted
    so their accumulated contribution stays below tol/10 per nesting level;
    the returned error estimate includes that budget.
    """
    if not bounds:
        raise DomainError("bounds must name at least one variable")

    def level(coords: tuple, remaining: Sequence[tuple], budget: float) -> tuple[float, float]:
        lo, hi = remaining[0]
        lo = lo(*coords) if callable(lo) else float(lo)
        hi = hi(*coords) if callable(hi) else float(hi)
        if hi <= lo:
            return 0.0, 0.0
        if len(remaining) == 1:
            return adaptive_quad(
                lambda x: f(*coords, x), lo, hi, budget, max_panels=max_panels
            )
        inner_budget = budget / (10.0 * max(1.0, hi - lo))

        def g(x: float) -> float:
            val, _ = level(coords + (x,), remaining[1:], inner_budget)
            return val

        value, err = adaptive_quad(g, lo, hi, 0.8 * budget, max_panels=max_panels)
        return value, err + 0.1 * budget

    return level((), tuple(bounds), tol)
