# -*- coding: utf-8 -*-
#
# This file is part of Invenio.
# Copyright (C) 2026 CERN.
#
# Invenio is free software; you can redistribute it and/or modify it
# under the terms of the MIT License; see LICENSE file for more details.

"""Hyperbolic noise density centred at the origin of the Poincaré ball.

The unnormalised density of a point ``x`` with ``r = |x|`` is

.. math::

    f(x) = \\left(\\frac{1 - r}{1 + r}\\right)^{\\varepsilon}
         = e^{-\\varepsilon d(0, x)}

The sampler only needs density ratios. The one-dimensional normalisation
``Z`` is available in closed form through the hypergeometric function
``2F1(1, eps; 2 + eps; -1)``.
"""

import math
from dataclasses import dataclass

import numpy as np
from invenio_i18n import gettext as _

from .errors import Hyp2F1ConvergenceError, OutsideBallError

MEASURES = ("lebesgue", "hyperbolic")
"""Reference measures of the density."""

SERIES_TOLERANCE = 1e-14
"""Magnitude below which series terms are neglected."""

DEFAULT_MAX_TERMS = 100000
"""Plain summation budget before switching to acceleration."""

ACCELERATION_DEPTHS = (32, 64)
"""Term counts of the two accelerated sums compared for convergence."""

ACCELERATION_TOLERANCE = 1e-12
"""Maximum disagreement between the two accelerated sums."""


def _check_epsilon(eps):
    eps = float(eps)
    if not (math.isfinite(eps) and eps > 0.0):
        raise ValueError(_("Epsilon must be a finite positive number."))
    return eps


def _radius(x):
    x = np.asarray(x, dtype=np.float64)
    if not np.all(np.isfinite(x)):
        raise ValueError(_("Coordinates must be finite."))
    r = np.sqrt(np.sum(x * x, axis=-1))
    if np.any(r >= 1.0):
        raise OutsideBallError(_("Point must lie strictly inside the unit ball."))
    return r


def _density_at_radius(r, eps):
    # (-2 / (r - 1) - 1) == (1 + r) / (1 - r)
    return (-2.0 / (r - 1.0) - 1.0) ** (-eps)


def log_density_at_radius(r, eps, dim=1, measure="lebesgue"):
    """Log of the unnormalised density at Euclidean radius ``r``.

    With ``measure="hyperbolic"`` the conformal volume factor
    ``(2 / (1 - r**2)) ** dim`` is included, which turns the density into one
    with respect to the hyperbolic volume element.
    """
    log_f = eps * (np.log1p(-r) - np.log1p(r))
    if measure == "hyperbolic":
        log_f = log_f + dim * (math.log(2.0) - np.log1p(-r * r))
    return log_f


def unnormalized_density(x, eps):
    """Unnormalised density ``((1 + |x|) / (1 - |x|)) ** -eps``.

    Underflows to 0.0 as ``|x|`` approaches 1.

    :param x: Point or batch of points of the Poincaré ball.
    :param eps: Privacy parameter, ``eps > 0``.
    """
    eps = _check_epsilon(eps)
    return _density_at_radius(_radius(x), eps)


def log_unnormalized_density(x, eps, measure="lebesgue"):
    """Log of :func:`unnormalized_density`, optionally w.r.t. hyperbolic volume."""
    eps = _check_epsilon(eps)
    if measure not in MEASURES:
        raise ValueError(_("Unknown measure: %(measure)s.", measure=measure))
    x = np.asarray(x, dtype=np.float64)
    return log_density_at_radius(_radius(x), eps, dim=x.shape[-1], measure=measure)


def _term_magnitudes(eps, count):
    k = np.arange(count, dtype=np.float64)
    return eps * (eps + 1.0) / ((k + eps) * (k + eps + 1.0))


def _signed(magnitudes):
    signs = np.where(np.arange(magnitudes.size) % 2 == 0, 1.0, -1.0)
    return signs * magnitudes


def _accelerated_sum(magnitudes):
    """Sum ``sum((-1)**k * a_k)`` by Chebyshev-weighted acceleration.

    Converges like ``5.83**-n`` for moment sequences ``a_k``, which the
    magnitudes ``eps (eps + 1) / ((k + eps)(k + eps + 1))`` are.
    """
    n = magnitudes.size
    d = (3.0 + math.sqrt(8.0)) ** n
    d = (d + 1.0 / d) / 2.0
    b = -1.0
    c = -d
    s = 0.0
    for k in range(n):
        c = b - c
        s += c * magnitudes[k]
        b = (k + n) * (k - n) * b / ((k + 0.5) * (k + 1.0))
    return s / d


def hyp2f1_partial_sums(eps, count):
    """Return the first ``count`` partial sums of ``2F1(1, eps; 2 + eps; -1)``.

    The series alternates with decreasing term magnitudes, so its limit lies
    between any two consecutive partial sums.
    """
    eps = _check_epsilon(eps)
    return np.cumsum(_signed(_term_magnitudes(eps, count)))


def hyp2f1_special(eps, max_terms=DEFAULT_MAX_TERMS):
    """Evaluate ``2F1(1, eps; 2 + eps; -1)``.

    The power series is summed directly when a term drops below
    :data:`SERIES_TOLERANCE` within ``max_terms`` terms; otherwise the
    alternating series is accelerated and two acceleration depths must agree.

    :raises invenio_dxprivacy.errors.Hyp2F1ConvergenceError: if the series
        cannot be summed to tolerance within the budget.
    """
    eps = _check_epsilon(eps)
    magnitudes = _term_magnitudes(eps, max_terms)
    small = np.flatnonzero(magnitudes < SERIES_TOLERANCE)
    if small.size:
        return math.fsum(_signed(magnitudes[: small[0]]))

    deep = min(ACCELERATION_DEPTHS[1], max_terms)
    shallow = min(ACCELERATION_DEPTHS[0], deep // 2)
    coarse = _accelerated_sum(magnitudes[:shallow])
    value = _accelerated_sum(magnitudes[:deep])
    if abs(value - coarse) > ACCELERATION_TOLERANCE * max(1.0, abs(value)):
        raise Hyp2F1ConvergenceError(
            _(
                "2F1(1, %(eps)s; 2 + %(eps)s; -1) did not converge "
                "within %(terms)s terms.",
                eps=eps,
                terms=max_terms,
            )
        )
    return value


def normalization_z(eps, max_terms=DEFAULT_MAX_TERMS):
    """One-dimensional normalisation ``2 * 2F1(1, eps; 2 + eps; -1) / (1 + eps)``.

    Equals ``4 ln 2 - 2`` for ``eps = 1`` and tends to 2 as ``eps -> 0``.
    """
    eps = _check_epsilon(eps)
    return 2.0 * hyp2f1_special(eps, max_terms=max_terms) / (1.0 + eps)


def _interval_radius(x):
    r = np.abs(np.asarray(x, dtype=np.float64))
    if np.any(~np.isfinite(r)) or np.any(r >= 1.0):
        raise OutsideBallError(_("Point must lie strictly inside (-1, 1)."))
    return r


def pdf_1d(x, eps, max_terms=DEFAULT_MAX_TERMS):
    """Normalised density on the interval ``(-1, 1)``."""
    eps = _check_epsilon(eps)
    r = _interval_radius(x)
    return _density_at_radius(r, eps) / normalization_z(eps, max_terms=max_terms)


@dataclass(frozen=True)
class HyperbolicDensity:
    """Origin-centred hyperbolic noise density of a given dimension.

    :param epsilon: Privacy parameter.
    :param dim: Dimension of the ball.
    :param measure: Reference measure, one of :data:`MEASURES`.
    """

    epsilon: float
    dim: int = 1
    measure: str = "lebesgue"

    def __post_init__(self):
        """Validate parameters."""
        _check_epsilon(self.epsilon)
        if int(self.dim) != self.dim or self.dim < 1:
            raise ValueError(_("Dimension must be a positive integer."))
        if self.measure not in MEASURES:
            raise ValueError(_("Unknown measure: %(measure)s.", measure=self.measure))
        if self.measure == "hyperbolic" and self.epsilon <= self.dim - 1:
            raise ValueError(
                _("The hyperbolic measure requires epsilon > dim - 1.")
            )

    def unnormalized(self, x):
        """Unnormalised density at ``x``."""
        return np.exp(self.log_unnormalized(x))

    def log_unnormalized(self, x):
        """Log of the unnormalised density at ``x``."""
        return log_unnormalized_density(x, self.epsilon, measure=self.measure)

    def normalization(self, max_terms=DEFAULT_MAX_TERMS):
        """Normalisation constant; defined for the 1-d Lebesgue density only."""
        if self.dim != 1 or self.measure != "lebesgue":
            raise ValueError(
                _("The normalisation is only known for the 1-d Lebesgue density.")
            )
        return normalization_z(self.epsilon, max_terms=max_terms)

    def pdf_1d(self, x, max_terms=DEFAULT_MAX_TERMS):
        """Normalised 1-d density at ``x``."""
        z = self.normalization(max_terms=max_terms)
        return _density_at_radius(_interval_radius(x), self.epsilon) / z
