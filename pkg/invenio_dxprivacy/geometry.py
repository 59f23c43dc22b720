# -*- coding: utf-8 -*-
#
# This file is part of Invenio.
# Copyright (C) 2026 CERN.
#
# Invenio is free software; you can redistribute it and/or modify it
# under the terms of the MIT License; see LICENSE file for more details.

"""Poincaré ball and Lorentz hyperboloid models of hyperbolic space.

Points are numpy arrays whose last axis holds the coordinates. Every function
broadcasts over the leading axes, so a batch of points can be handled in one
call, and a single point gives a scalar result.

Lorentz points carry the time coordinate first, ``x = (x0, x1, ..., xn)``.

>>> round(float(poincare_distance([0.0, 0.0], [0.5, 0.0])), 6)
1.098612
>>> lift_to_lorentz([0.0, 0.0]).tolist()
[1.0, 0.0, 0.0]
"""

from dataclasses import dataclass

import numpy as np
from invenio_i18n import gettext as _

from .errors import (
    DimensionMismatchError,
    HyperboloidError,
    NonFiniteError,
    OutsideBallError,
)

BOUNDARY_LAMBDA = 1e-5
"""Default retraction distance of :func:`project_into_ball`."""

HYPERBOLOID_TOLERANCE = 1e-9
"""Tolerance of the hyperboloid constraint ``<x, x> = -1``."""


@dataclass
class Diagnostics:
    """Numerical events counted while evaluating distances."""

    arcosh_clamps: int = 0


def _as_points(x):
    """Convert to a float64 array of points and reject non-finite input."""
    x = np.asarray(x, dtype=np.float64)
    if x.ndim == 0:
        raise DimensionMismatchError(_("Expected a vector, got a scalar."))
    if not np.all(np.isfinite(x)):
        raise NonFiniteError(_("Coordinates must be finite."))
    return x


def _check_same_dim(u, v):
    if u.shape[-1] != v.shape[-1]:
        raise DimensionMismatchError(
            _(
                "Dimension mismatch: %(left)s != %(right)s.",
                left=u.shape[-1],
                right=v.shape[-1],
            )
        )


def _sq_norm(x):
    return np.sum(x * x, axis=-1)


def _check_inside(sq_norm):
    if np.any(sq_norm >= 1.0):
        raise OutsideBallError(_("Point must lie strictly inside the unit ball."))


def _arcosh1p(t):
    """Evaluate ``arcosh(1 + t)`` for ``t >= 0`` without cancellation."""
    return np.log1p(t + np.sqrt(t * (t + 2.0)))


def arcosh(z, diagnostics=None):
    """Inverse hyperbolic cosine ``ln(z + sqrt(z**2 - 1))``.

    Arguments below 1 are clamped to 1. Each clamped element increments
    ``diagnostics.arcosh_clamps`` when a :class:`Diagnostics` is given.
    """
    t = np.asarray(z, dtype=np.float64) - 1.0
    below = t < 0.0
    if np.any(below):
        if diagnostics is not None:
            diagnostics.arcosh_clamps += int(np.count_nonzero(below))
        t = np.maximum(t, 0.0)
    return _arcosh1p(t)


def lorentz_inner(u, v):
    """Minkowski bilinear form ``-u0 * v0 + sum(ui * vi)``."""
    u = _as_points(u)
    v = _as_points(v)
    _check_same_dim(u, v)
    return -u[..., 0] * v[..., 0] + np.sum(u[..., 1:] * v[..., 1:], axis=-1)


def lift_to_lorentz(x):
    """Lift Euclidean coordinates onto the hyperboloid.

    Returns ``(sqrt(1 + |x|**2), x)``.
    """
    x = _as_points(x)
    x0 = np.sqrt(1.0 + _sq_norm(x))
    return np.concatenate([x0[..., np.newaxis], x], axis=-1)


def lorentz_to_poincare(x):
    """Map a hyperboloid point into the Poincaré ball, ``x' / (1 + x0)``."""
    x = _as_points(x)
    if np.any(x[..., 0] <= 0.0):
        raise HyperboloidError(_("Time coordinate must be positive."))
    return x[..., 1:] / (1.0 + x[..., :1])


def poincare_to_lorentz(x):
    """Map a ball point onto the hyperboloid.

    Returns ``(1 + |x|**2, 2x) / (1 - |x|**2)``.
    """
    x = _as_points(x)
    sq_norm = _sq_norm(x)
    _check_inside(sq_norm)
    lifted = np.concatenate([(1.0 + sq_norm)[..., np.newaxis], 2.0 * x], axis=-1)
    return lifted / (1.0 - sq_norm)[..., np.newaxis]


def poincare_distance(u, v):
    """Hyperbolic distance between two points of the Poincaré ball.

    ``arcosh(1 + 2|u - v|**2 / ((1 - |u|**2)(1 - |v|**2)))``
    """
    u = _as_points(u)
    v = _as_points(v)
    _check_same_dim(u, v)
    sq_u = _sq_norm(u)
    sq_v = _sq_norm(v)
    _check_inside(sq_u)
    _check_inside(sq_v)
    diff = u - v
    delta = 2.0 * _sq_norm(diff) / ((1.0 - sq_u) * (1.0 - sq_v))
    return _arcosh1p(delta)


def lorentz_distance(u, v, diagnostics=None):
    """Hyperbolic distance between two hyperboloid points, ``arcosh(-<u, v>)``.

    Rounding can push ``-<u, v>`` slightly below 1; such values are clamped
    and counted in ``diagnostics``.
    """
    return arcosh(-lorentz_inner(u, v), diagnostics=diagnostics)


def euclidean_distance(u, v):
    """Euclidean distance ``|u - v|``."""
    u = _as_points(u)
    v = _as_points(v)
    _check_same_dim(u, v)
    diff = u - v
    return np.sqrt(_sq_norm(diff))


def project_into_ball(x, lam=BOUNDARY_LAMBDA):
    """Retract points with norm >= 1 to norm ``1 - lam``.

    Points already inside the ball are returned unchanged.

    :param x: Point or batch of points.
    :param lam: Retraction distance, ``0 < lam < 1``.
    """
    if not 0.0 < lam < 1.0:
        raise ValueError(_("Projection lambda must lie in (0, 1)."))
    x = _as_points(x)
    norm = np.sqrt(_sq_norm(x))
    scale = np.where(norm >= 1.0, (1.0 - lam) / np.maximum(norm, 1.0), 1.0)
    return x * scale[..., np.newaxis]


def mobius_add(x, y):
    """Mobius addition ``x (+) y`` in the Poincaré ball.

    For a fixed ``x`` the map ``y -> x (+) y`` is an isometry of the ball
    sending the origin to ``x``.
    """
    x = _as_points(x)
    y = _as_points(y)
    _check_same_dim(x, y)
    xy = np.sum(x * y, axis=-1)
    sq_x = _sq_norm(x)
    sq_y = _sq_norm(y)
    numerator = (1.0 + 2.0 * xy + sq_y)[..., np.newaxis] * x
    numerator = numerator + (1.0 - sq_x)[..., np.newaxis] * y
    denominator = 1.0 + 2.0 * xy + sq_x * sq_y
    return numerator / denominator[..., np.newaxis]


def conformal_factor(x):
    """Conformal factor ``2 / (1 - |x|**2)`` of the Poincaré metric."""
    x = _as_points(x)
    sq_norm = _sq_norm(x)
    _check_inside(sq_norm)
    return 2.0 / (1.0 - sq_norm)
