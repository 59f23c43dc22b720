# -*- coding: utf-8 -*-
#
# This file is part of Invenio.
# Copyright (C) 2026 CERN.
#
# Invenio is free software; you can redistribute it and/or modify it
# under the terms of the MIT License; see LICENSE file for more details.

"""Noise samplers.

Hyperbolic noise is drawn with a random-walk Metropolis-Hastings chain
started at the origin of the Poincaré ball. The Euclidean baseline draws
from the multivariate distribution with density proportional to
``exp(-eps |z|)``.
"""

import math
from dataclasses import asdict, dataclass, replace

import numpy as np
from invenio_i18n import gettext as _
from marshmallow import Schema, ValidationError, fields, validate, validates_schema

from .density import MEASURES, log_density_at_radius
from .geometry import (
    BOUNDARY_LAMBDA,
    lift_to_lorentz,
    lorentz_to_poincare,
    poincare_to_lorentz,
    project_into_ball,
)
from .utils import make_rng

PROPOSALS = ("lift", "ball", "poincare")
"""Available proposal kinds, see :class:`MetropolisHastingsChain`."""

MAX_SEED = 2**64 - 1


class SamplerConfigSchema(Schema):
    """Validation schema of :class:`SamplerConfig`."""

    dim = fields.Int(required=True, strict=True, validate=validate.Range(min=1))
    epsilon = fields.Float(
        required=True, validate=validate.Range(min=0, min_inclusive=False)
    )
    burn_in = fields.Int(strict=True, validate=validate.Range(min=0))
    proposal_scale = fields.Float(validate=validate.Range(min=0, min_inclusive=False))
    seed = fields.Int(strict=True, validate=validate.Range(min=0, max=MAX_SEED))
    count = fields.Int(strict=True, validate=validate.Range(min=1))
    proposal = fields.Str(validate=validate.OneOf(PROPOSALS))
    measure = fields.Str(validate=validate.OneOf(MEASURES))
    thin = fields.Int(strict=True, validate=validate.Range(min=1))
    chains = fields.Int(strict=True, validate=validate.Range(min=1))
    projection_lambda = fields.Float(
        validate=validate.Range(
            min=0, max=1, min_inclusive=False, max_inclusive=False
        )
    )

    @validates_schema
    def validate_measure(self, data, **kwargs):
        """Check that the hyperbolic measure gives a proper density."""
        if data.get("measure") != "hyperbolic":
            return
        if "dim" in data and "epsilon" in data and data["epsilon"] <= data["dim"] - 1:
            raise ValidationError(
                _("The hyperbolic measure requires epsilon > dim - 1."),
                field_names=["epsilon"],
            )


@dataclass(frozen=True)
class SamplerConfig:
    """Parameters fully determining a noise stream.

    :param dim: Dimension ``n`` of the ball.
    :param epsilon: Privacy parameter.
    :param burn_in: Number of initial states discarded.
    :param proposal_scale: Standard deviation of the Gaussian proposal.
    :param seed: 64-bit unsigned master seed.
    :param count: Number of states returned by :func:`mh_sample`.
    :param proposal: One of :data:`PROPOSALS`.
    :param measure: Reference measure of the target density.
    :param thin: Chain steps per returned state.
    :param chains: Number of independent chains advanced together.
    :param projection_lambda: Retraction distance for escaping proposals.
    """

    dim: int
    epsilon: float
    burn_in: int = 1000
    proposal_scale: float = 0.5
    seed: int = 0
    count: int = 1000
    proposal: str = "lift"
    measure: str = "lebesgue"
    thin: int = 1
    chains: int = 1
    projection_lambda: float = BOUNDARY_LAMBDA

    def __post_init__(self):
        """Validate the configuration."""
        errors = SamplerConfigSchema().validate(asdict(self))
        if errors:
            raise ValidationError(errors)

    def replace(self, **changes):
        """Return a copy with some fields changed."""
        return replace(self, **changes)


def lag1_autocorrelation(values):
    """Lag-one autocorrelation of a sequence; 1.0 for a constant sequence."""
    values = np.asarray(values, dtype=np.float64)
    if values.size < 2:
        return 0.0
    centred = values - values.mean()
    variance = float(centred @ centred)
    if variance == 0.0:
        return 1.0
    return float(centred[:-1] @ centred[1:]) / variance


@dataclass(frozen=True, eq=False)
class NoiseStream:
    """States returned by :func:`mh_sample`."""

    samples: np.ndarray
    acceptance_rate: float
    clamp_count: int
    lag1_autocorrelation: float
    config: SamplerConfig

    def __len__(self):
        """Number of samples."""
        return len(self.samples)

    def __iter__(self):
        """Iterate over samples."""
        return iter(self.samples)

    @property
    def radii(self):
        """Euclidean norms of the samples."""
        return np.sqrt(np.sum(self.samples * self.samples, axis=-1))

    def to_dict(self):
        """Return the stream as a JSON-compatible dictionary."""
        return {
            "dim": self.config.dim,
            "epsilon": self.config.epsilon,
            "count": len(self),
            "chains": self.config.chains,
            "acceptance_rate": self.acceptance_rate,
            "clamp_count": self.clamp_count,
            "lag1_autocorrelation": self.lag1_autocorrelation,
            "samples": self.samples.tolist(),
        }

    def to_rows(self):
        """Return one row per sample with coordinates ``x0 ... xn-1``."""
        return [
            {"x{0}".format(i): float(value) for i, value in enumerate(sample)}
            for sample in self.samples
        ]


class MetropolisHastingsChain(object):
    """Resumable Metropolis-Hastings sampler targeting the hyperbolic density.

    Every chain starts at the origin. Each step draws an isotropic Gaussian
    proposal and accepts it when a uniform draw ``u`` satisfies
    ``u <= f(x') / f(x)``, with ``f`` the target written in the coordinates
    the walk moves in:

    ``lift``
        The walk moves in the spatial coordinates of the hyperboloid. A
        proposal is lifted onto the hyperboloid and mapped into the ball, and
        the target carries the Jacobian of that map.
    ``ball``
        The walk moves in ball coordinates and proposals outside the ball
        are rejected.
    ``poincare``
        The Gaussian step is taken around the current ball point, then lifted
        and mapped back without correction. The map roughly halves every
        step, so the chain stays close to the origin instead of sampling the
        target.

    Proposals that rounding maps onto the boundary are retracted with
    :func:`~.geometry.project_into_ball` and counted in :attr:`clamp_count`.
    Proposals with non-finite coordinates are rejected.

    ``config.chains`` independent chains advance together; their states are
    returned interleaved, chain by chain within each round.
    """

    def __init__(self, config, rng=None, block_size=4096):
        """Initialize sampler.

        :param config: A :class:`SamplerConfig`.
        :param rng: Generator to draw from; derived from ``config.seed`` when
            not given.
        :param block_size: Number of steps whose randomness is drawn at once.
        """
        self.config = config
        self.rng = rng if rng is not None else make_rng(config.seed)
        self.state = np.zeros((config.chains, config.dim))
        self.chart = np.zeros((config.chains, config.dim))
        self.log_target = np.full(
            config.chains, self._log_target(np.zeros(1), np.zeros(1))[0]
        )
        self.steps = 0
        self.accepted = 0
        self.clamp_count = 0
        self.burnt_in = False
        self._block_size = max(1, block_size // config.chains)
        self._cursor = self._block_size
        self._noise = None
        self._uniforms = None

    @property
    def acceptance_rate(self):
        """Fraction of accepted proposals over all steps so far."""
        proposals = self.steps * self.config.chains
        return self.accepted / proposals if proposals else 0.0

    def _log_target(self, sq_norm, chart_sq):
        log_f = log_density_at_radius(
            np.sqrt(sq_norm),
            self.config.epsilon,
            dim=self.config.dim,
            measure=self.config.measure,
        )
        if self.config.proposal == "lift":
            # log |det dx/dy| of y -> y / (1 + sqrt(1 + |y|**2))
            s = np.sqrt(1.0 + chart_sq)
            log_f = log_f - np.log(s) - self.config.dim * np.log1p(s)
        return log_f

    def _next_randomness(self):
        if self._cursor == self._block_size:
            shape = (self._block_size, self.config.chains)
            self._noise = self.config.proposal_scale * self.rng.standard_normal(
                shape + (self.config.dim,)
            )
            self._uniforms = self.rng.random(shape)
            self._cursor = 0
        index = self._cursor
        self._cursor += 1
        return self._noise[index], self._uniforms[index]

    def step(self):
        """Advance every chain by one proposal."""
        noise, u = self._next_randomness()
        self.steps += 1
        lift = self.config.proposal == "lift"
        with np.errstate(over="ignore", invalid="ignore"):
            chart = (self.chart if lift else self.state) + noise
            chart_sq = np.sum(chart * chart, axis=-1)
        finite = np.isfinite(chart_sq)
        chart[~finite] = 0.0
        chart_sq[~finite] = 0.0

        if self.config.proposal == "ball":
            candidate, sq_norm = chart, chart_sq
            inside = finite & (sq_norm < 1.0)
        else:
            candidate = lorentz_to_poincare(lift_to_lorentz(chart))
            sq_norm = np.sum(candidate * candidate, axis=-1)
            escaped = sq_norm >= 1.0
            if np.any(escaped):
                candidate = project_into_ball(candidate, self.config.projection_lambda)
                sq_norm = np.sum(candidate * candidate, axis=-1)
                self.clamp_count += int(np.count_nonzero(escaped))
                if lift:
                    chart[escaped] = poincare_to_lorentz(candidate[escaped])[..., 1:]
                    chart_sq = np.sum(chart * chart, axis=-1)
            inside = finite

        log_target = self._log_target(np.where(inside, sq_norm, 0.0), chart_sq)
        ratio = np.exp(np.minimum(0.0, log_target - self.log_target))
        accept = inside & (u <= ratio)
        self.state[accept] = candidate[accept]
        if lift:
            self.chart[accept] = chart[accept]
        self.log_target[accept] = log_target[accept]
        self.accepted += int(np.count_nonzero(accept))

    def burn_in(self):
        """Run the burn-in period once."""
        if not self.burnt_in:
            for _step in range(self.config.burn_in):
                self.step()
            self.burnt_in = True

    def advance(self, count):
        """Return the next ``count`` post-burn-in states.

        Every chain moves ``config.thin`` steps between two of its states.
        """
        self.burn_in()
        chains = self.config.chains
        rounds = -(-count // chains)
        samples = np.empty((rounds, chains, self.config.dim))
        for i in range(rounds):
            for _step in range(self.config.thin):
                self.step()
            samples[i] = self.state
        return samples.reshape(rounds * chains, self.config.dim)[:count]


def mh_sample(config):
    """Draw ``config.count`` hyperbolic noise points.

    :param config: A :class:`SamplerConfig`.
    :returns: A :class:`NoiseStream`, identical for identical configurations.
    """
    chain = MetropolisHastingsChain(config)
    samples = chain.advance(config.count)
    samples.setflags(write=False)
    radii = np.sqrt(np.sum(samples * samples, axis=-1))
    per_chain = [
        lag1_autocorrelation(radii[i :: config.chains])
        for i in range(min(config.chains, len(radii)))
    ]
    return NoiseStream(
        samples=samples,
        acceptance_rate=chain.acceptance_rate,
        clamp_count=chain.clamp_count,
        lag1_autocorrelation=float(np.mean(per_chain)),
        config=config,
    )


def sample_euclidean_laplace(dim, eps, rng, size=None):
    """Draw noise with density proportional to ``exp(-eps |z|)`` in R^dim.

    The direction is uniform on the unit sphere and the norm follows
    ``Gamma(shape=dim, rate=eps)``.

    :param dim: Dimension, ``>= 1``.
    :param eps: Privacy parameter, ``> 0``.
    :param rng: A :class:`numpy.random.Generator`.
    :param size: Number of vectors; a single vector when ``None``.
    """
    if int(dim) != dim or dim < 1:
        raise ValueError(_("Dimension must be a positive integer."))
    if not (math.isfinite(eps) and eps > 0):
        raise ValueError(_("Epsilon must be a finite positive number."))
    shape = (dim,) if size is None else (size, dim)
    direction = rng.standard_normal(shape)
    direction /= np.sqrt(np.sum(direction * direction, axis=-1, keepdims=True))
    magnitude = rng.gamma(
        shape=dim, scale=1.0 / eps, size=None if size is None else (size, 1)
    )
    return direction * magnitude
