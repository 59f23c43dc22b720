# -*- coding: utf-8 -*-
#
# This file is part of Invenio.
# Copyright (C) 2026 CERN.
#
# Invenio is free software; you can redistribute it and/or modify it
# under the terms of the MIT License; see LICENSE file for more details.

"""Sampler tests."""

import numpy as np
import pytest
from marshmallow import ValidationError
from scipy import integrate, stats

from invenio_dxprivacy.density import pdf_1d
from invenio_dxprivacy.sampler import (
    PROPOSALS,
    MetropolisHastingsChain,
    SamplerConfig,
    lag1_autocorrelation,
    mh_sample,
    sample_euclidean_laplace,
)
from invenio_dxprivacy.utils import make_rng


def quadrature_cdf(eps, points=20001):
    """Cumulative distribution function of the 1-d density on a fine grid."""
    grid = np.linspace(-1, 1, points)
    density = np.zeros_like(grid)
    density[1:-1] = pdf_1d(grid[1:-1], eps)
    cdf = integrate.cumulative_trapezoid(density, grid, initial=0)
    cdf /= cdf[-1]
    return lambda x: np.interp(x, grid, cdf)


@pytest.mark.parametrize(
    "changes",
    [
        dict(dim=0),
        dict(dim=1.5),
        dict(count=10.0),
        dict(seed=1.5),
        dict(proposal_scale=float("inf")),
        dict(epsilon=0),
        dict(epsilon=-1.0),
        dict(burn_in=-1),
        dict(proposal_scale=0),
        dict(proposal="gibbs"),
        dict(measure="counting"),
        dict(thin=0),
        dict(chains=0),
        dict(count=0),
        dict(seed=2**64),
        dict(projection_lambda=1.0),
        dict(measure="hyperbolic", dim=3, epsilon=2.0),
    ],
)
def test_config_validation(changes):
    """Test invalid sampler configurations."""
    settings = dict(dim=2, epsilon=1.0)
    settings.update(changes)
    with pytest.raises(ValidationError):
        SamplerConfig(**settings)


def test_config_replace():
    """Test copies of configurations."""
    config = SamplerConfig(dim=2, epsilon=1.0)
    assert config.replace(seed=3).seed == 3
    assert config.seed == 0
    with pytest.raises(ValidationError):
        config.replace(epsilon=0)


def test_mh_sample():
    """Test the shape and content of a noise stream."""
    config = SamplerConfig(dim=3, epsilon=2.0, count=500, seed=7)
    stream = mh_sample(config)
    assert len(stream) == 500
    assert stream.samples.shape == (500, 3)
    assert np.all(stream.radii < 1)
    assert 0 < stream.acceptance_rate <= 1
    assert stream.clamp_count == 0
    assert -1 <= stream.lag1_autocorrelation <= 1
    assert not stream.samples.flags.writeable

    data = stream.to_dict()
    assert data["count"] == 500
    assert data["chains"] == 1
    assert len(data["samples"]) == 500
    assert list(stream.to_rows()[0]) == ["x0", "x1", "x2"]


def test_mh_sample_is_deterministic():
    """Test that a seed determines the stream."""
    config = SamplerConfig(dim=2, epsilon=1.0, count=5, seed=7)
    np.testing.assert_array_equal(mh_sample(config).samples, mh_sample(config).samples)
    assert not np.array_equal(
        mh_sample(config).samples, mh_sample(config.replace(seed=8)).samples
    )


def test_chain_can_be_resumed():
    """Test that drawing in pieces continues the same chain."""
    config = SamplerConfig(dim=2, epsilon=1.0, burn_in=10, thin=3)
    chain = MetropolisHastingsChain(config)
    first = np.vstack([chain.advance(7), chain.advance(13)])
    second = MetropolisHastingsChain(config).advance(20)
    np.testing.assert_array_equal(first, second)
    assert chain.steps == 10 + 20 * 3


def test_chains_are_interleaved():
    """Test that several chains are advanced together."""
    config = SamplerConfig(dim=2, epsilon=1.0, burn_in=0, chains=4, count=10)
    chain = MetropolisHastingsChain(config)
    samples = chain.advance(10)
    assert samples.shape == (10, 2)
    assert chain.steps == 3
    np.testing.assert_array_equal(samples[8:10], chain.state[:2])

    stream = mh_sample(config)
    np.testing.assert_array_equal(stream.samples, samples)
    assert stream.to_dict()["chains"] == 4


def test_lift_proposal_clamps_escaping_points():
    """Test that proposals rounding onto the boundary are retracted."""
    config = SamplerConfig(
        dim=2, epsilon=1.0, burn_in=0, count=200, proposal_scale=1e20
    )
    stream = mh_sample(config)
    assert stream.clamp_count > 0
    assert np.all(stream.radii < 1)


def test_ball_proposal_rejects_outside_points():
    """Test that ball proposals outside the ball are rejected."""
    config = SamplerConfig(
        dim=2, epsilon=1.0, count=200, proposal="ball", proposal_scale=10.0
    )
    stream = mh_sample(config)
    assert stream.clamp_count == 0
    assert stream.acceptance_rate < 0.05
    assert np.all(stream.radii < 1)


@pytest.mark.parametrize("proposal", PROPOSALS)
def test_hyperbolic_measure(proposal):
    """Test sampling with respect to the hyperbolic volume."""
    config = SamplerConfig(
        dim=2, epsilon=2.0, measure="hyperbolic", proposal=proposal, count=200
    )
    stream = mh_sample(config)
    assert np.all(stream.radii < 1)
    assert 0 < stream.acceptance_rate < 1


def test_huge_proposals_are_rejected():
    """Test that proposals overflowing to infinity are rejected."""
    for proposal in PROPOSALS:
        config = SamplerConfig(
            dim=2,
            epsilon=1.0,
            burn_in=0,
            count=50,
            proposal=proposal,
            proposal_scale=1e160,
        )
        stream = mh_sample(config)
        assert stream.acceptance_rate == 0.0
        assert np.all(stream.samples == 0.0)


@pytest.mark.parametrize("eps", [0.125, 0.5, 1.0, 2.0, 8.0])
def test_acceptance_rate(eps):
    """Test that the default proposal is neither stuck nor blind."""
    stream = mh_sample(SamplerConfig(dim=2, epsilon=eps, count=2000, seed=3))
    assert 0.05 < stream.acceptance_rate < 0.95


@pytest.mark.slow
def test_mean_radius_decreases_with_epsilon():
    """Test that more privacy budget concentrates the noise."""
    means = []
    for eps in (0.125, 1.0, 8.0):
        config = SamplerConfig(dim=2, epsilon=eps, count=100000, chains=100, seed=5)
        means.append(np.mean(2 * np.arctanh(mh_sample(config).radii)))
    assert means[0] > means[1] > means[2]


@pytest.mark.slow
@pytest.mark.parametrize("proposal", ["lift", "ball"])
def test_one_dimensional_distribution(proposal):
    """Test the 1-d sampler against the normalised density."""
    config = SamplerConfig(
        dim=1,
        epsilon=2.0,
        count=20000,
        proposal=proposal,
        thin=20,
        chains=200,
        seed=11,
    )
    samples = mh_sample(config).samples[:, 0]
    result = stats.kstest(samples, quadrature_cdf(2.0))
    assert result.pvalue > 0.01


@pytest.mark.slow
def test_lift_and_ball_proposals_agree():
    """Test both exact proposals against the mean radius of the target."""
    def density(r):
        return r * ((1 - r) / (1 + r)) ** 2

    expected = (
        integrate.quad(lambda r: r * density(r), 0, 1)[0]
        / integrate.quad(density, 0, 1)[0]
    )
    radii = {}
    for proposal in ("lift", "ball"):
        config = SamplerConfig(
            dim=2,
            epsilon=2.0,
            count=50000,
            proposal=proposal,
            thin=10,
            chains=500,
            seed=13,
        )
        radii[proposal] = mh_sample(config).radii
        assert radii[proposal].mean() == pytest.approx(expected, abs=0.01)
    assert stats.ks_2samp(radii["lift"], radii["ball"]).statistic < 0.03


@pytest.mark.slow
def test_poincare_proposal_is_biased():
    """Test the distance of the uncorrected proposal to the target."""
    cdf = quadrature_cdf(2.0)
    statistic = {}
    for proposal, scale in (("lift", 0.5), ("poincare", 0.1)):
        config = SamplerConfig(
            dim=1,
            epsilon=2.0,
            count=20000,
            proposal=proposal,
            proposal_scale=scale,
            thin=20,
            chains=200,
            seed=11,
        )
        samples = mh_sample(config).samples[:, 0]
        statistic[proposal] = stats.kstest(samples, cdf).statistic
    assert statistic["lift"] < 0.02
    assert statistic["poincare"] > 0.1


def test_laplace_shape():
    """Test single and batched Euclidean noise."""
    rng = make_rng(1)
    assert sample_euclidean_laplace(4, 1.0, rng).shape == (4,)
    assert sample_euclidean_laplace(4, 1.0, rng, size=3).shape == (3, 4)
    with pytest.raises(ValueError):
        sample_euclidean_laplace(0, 1.0, rng)
    with pytest.raises(ValueError):
        sample_euclidean_laplace(2, 0.0, rng)


@pytest.mark.parametrize("dim,eps", [(1, 2.0), (3, 2.0), (10, 0.5)])
def test_laplace_norms(dim, eps):
    """Test that noise norms follow Gamma(dim, eps)."""
    noise = sample_euclidean_laplace(dim, eps, make_rng(2), size=100000)
    norms = np.linalg.norm(noise, axis=-1)
    assert np.mean(norms) == pytest.approx(dim / eps, rel=0.02)
    result = stats.kstest(norms, stats.gamma(a=dim, scale=1 / eps).cdf)
    assert result.pvalue > 0.01


def test_laplace_directions():
    """Test that noise directions are centred."""
    noise = sample_euclidean_laplace(2, 1.0, make_rng(3), size=100000)
    directions = noise / np.linalg.norm(noise, axis=-1, keepdims=True)
    np.testing.assert_allclose(directions.mean(axis=0), 0, atol=0.02)


def test_lag1_autocorrelation():
    """Test the lag-one autocorrelation estimate."""
    assert lag1_autocorrelation([2.0, 2.0, 2.0]) == 1.0
    assert lag1_autocorrelation([1.0]) == 0.0
    assert lag1_autocorrelation([1.0, -1.0, 1.0, -1.0]) < 0
