"""Seeded random objects for property runs: polynomial vector fields and
parameter points.  All randomness flows through an explicit numpy
Generator so runs are reproducible.
"""

import numpy as np

from .geometry import VectorField


def random_polynomial_field(rng, dim, degree=2, scale=0.5, name="random-poly"):
    """Random vector field with polynomial components of the given degree.

    Components are xi^mu = c0 + c1 . x + x . c2 . x with an analytic
    jacobian, so the field is exact for derivative-sensitive checks.
    """
    c0 = scale * rng.standard_normal(dim)
    c1 = scale * rng.standard_normal((dim, dim)) if degree >= 1 else np.zeros((dim, dim))
    if degree >= 2:
        c2 = scale * rng.standard_normal((dim, dim, dim))
        c2 = 0.5 * (c2 + c2.transpose(0, 2, 1))
    else:
        c2 = np.zeros((dim, dim, dim))

    def value(x):
        x = np.asarray(x, dtype=float)
        return c0 + c1 @ x + np.einsum("mnr,n,r->m", c2, x, x)

    def jacobian(x):
        x = np.asarray(x, dtype=float)
        return c1 + 2.0 * np.einsum("mnr,r->mn", c2, x)

    return VectorField(value=value, jacobian=jacobian, name=name)
