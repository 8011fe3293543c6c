"""Central finite-difference stencils, 4th order accurate.

Used as the fallback whenever analytic derivative callbacks are not
supplied.  First derivatives use the 5-point stencil with step
h = eps**(1/3) * (1 + |x|); second derivatives use the wider-optimal
h = eps**(1/6) * (1 + |x|) so that roundoff and truncation balance.
"""

import numpy as np

from .errors import DerivativeFailure, PointOutsideChart

_EPS = np.finfo(float).eps
STEP_FIRST = _EPS ** (1.0 / 3.0)
STEP_SECOND = _EPS ** (1.0 / 6.0)


def step_first(x):
    return STEP_FIRST * (1.0 + abs(float(x)))


def step_second(x):
    return STEP_SECOND * (1.0 + abs(float(x)))


def _eval(f, x):
    try:
        return np.asarray(f(x), dtype=float)
    except PointOutsideChart as exc:
        raise DerivativeFailure(
            f"finite-difference stencil left the chart domain at {x}"
        ) from exc


def partial(f, x, axis):
    """d f / d x[axis] for an array-valued f, 4th-order central."""
    x = np.asarray(x, dtype=float)
    h = step_first(x[axis])
    e = np.zeros_like(x)
    e[axis] = 1.0
    fm2 = _eval(f, x - 2 * h * e)
    fm1 = _eval(f, x - h * e)
    fp1 = _eval(f, x + h * e)
    fp2 = _eval(f, x + 2 * h * e)
    return (fm2 - 8.0 * fm1 + 8.0 * fp1 - fp2) / (12.0 * h)


def gradient(f, x):
    """Stack of partials: result[i] = d f / d x[i]."""
    x = np.asarray(x, dtype=float)
    return np.stack([partial(f, x, i) for i in range(x.size)])


def second_partial(f, x, i, j):
    """d^2 f / d x[i] d x[j], 4th-order central."""
    x = np.asarray(x, dtype=float)
    if i == j:
        h = step_second(x[i])
        e = np.zeros_like(x)
        e[i] = 1.0
        fm2 = _eval(f, x - 2 * h * e)
        fm1 = _eval(f, x - h * e)
        f0 = _eval(f, x)
        fp1 = _eval(f, x + h * e)
        fp2 = _eval(f, x + 2 * h * e)
        return (-fm2 + 16.0 * fm1 - 30.0 * f0 + 16.0 * fp1 - fp2) / (12.0 * h * h)
    # Mixed partial: tensor product of two 4-point first-derivative stencils.
    hi = step_second(x[i])
    hj = step_second(x[j])
    offsets = (-2.0, -1.0, 1.0, 2.0)
    coeffs = (1.0, -8.0, 8.0, -1.0)
    ei = np.zeros_like(x)
    ei[i] = 1.0
    ej = np.zeros_like(x)
    ej[j] = 1.0
    acc = None
    for oi, ci in zip(offsets, coeffs):
        for oj, cj in zip(offsets, coeffs):
            val = _eval(f, x + oi * hi * ei + oj * hj * ej)
            term = (ci * cj) * val
            acc = term if acc is None else acc + term
    return acc / (144.0 * hi * hj)


def hessian(f, x):
    """All second partials: result[i, j] = d^2 f / dx[i] dx[j] (symmetric)."""
    x = np.asarray(x, dtype=float)
    n = x.size
    shape_probe = _eval(f, x).shape
    out = np.empty((n, n) + shape_probe)
    for i in range(n):
        out[i, i] = second_partial(f, x, i, i)
        for j in range(i + 1, n):
            val = second_partial(f, x, i, j)
            out[i, j] = val
            out[j, i] = val
    return out
