# -*- coding: utf-8 -*-
#
# This file is part of Invenio.
# Copyright (C) 2026 CERN.
#
# Invenio is free software; you can redistribute it and/or modify it
# under the terms of the MIT License; see LICENSE file for more details.

"""Word-level privacy mechanism and text redaction.

Each selected word is mapped to its embedding, perturbed with noise drawn
for the vocabulary geometry and replaced by the nearest vocabulary word.
Unselected and unknown tokens are released unchanged and labelled.
"""

import re
from dataclasses import dataclass, field, replace
from enum import Enum

import numpy as np
from invenio_i18n import gettext as _
from marshmallow import Schema, ValidationError, fields, validate

from .embeddings import GEOMETRIES, nearest_words
from .errors import GeometryError
from .geometry import BOUNDARY_LAMBDA, mobius_add, project_into_ball
from .sampler import (
    MetropolisHastingsChain,
    SamplerConfig,
    SamplerConfigSchema,
    sample_euclidean_laplace,
)
from .stopwords import DEFAULT_STOPWORDS

NOISE_MODES = ("ambient", "mobius")
"""Ways of applying hyperbolic noise to an embedding."""

SAMPLER_OVERRIDES = (
    "burn_in",
    "proposal_scale",
    "proposal",
    "measure",
    "thin",
    "chains",
    "projection_lambda",
)
"""Sampler settings a :class:`MechanismConfig` may override."""

_PUNCTUATION = re.compile(r"^(\W*)(.*?)(\W*)$", re.DOTALL)


class TokenStatus(Enum):
    """Outcome of a token in :func:`redact_text`."""

    PERTURBED = "perturbed"
    UNCHANGED_BY_POLICY = "unchanged-by-policy"
    UNKNOWN_WORD = "unchanged-unknown-word"
    SELF_SAMPLE = "unchanged-self-sample"


@dataclass(frozen=True)
class SelectionPolicy:
    """Predicate choosing the tokens eligible for perturbation.

    ``all`` selects every token, ``nonstop`` every token that is not a
    stopword and ``slots`` the tokens at the given 0-based positions.
    """

    kind: str = "nonstop"
    slots: frozenset = frozenset()

    @classmethod
    def parse(cls, descriptor):
        """Build a policy from ``all``, ``nonstop`` or ``slots:<i,j,...>``."""
        if isinstance(descriptor, cls):
            return descriptor
        descriptor = descriptor.strip()
        if descriptor in ("all", "nonstop"):
            return cls(kind=descriptor)
        if descriptor.startswith("slots:"):
            try:
                slots = frozenset(
                    int(part) for part in descriptor[6:].split(",") if part.strip()
                )
            except ValueError:
                slots = None
            if slots and min(slots) >= 0:
                return cls(kind="slots", slots=slots)
        raise ValueError(_("Invalid policy: %(policy)s.", policy=descriptor))

    def selects(self, position, key, stopwords):
        """Check whether the token at ``position`` with lookup ``key`` is eligible."""
        if self.kind == "all":
            return True
        if self.kind == "slots":
            return position in self.slots
        return key not in stopwords

    def __str__(self):
        """Return the descriptor of the policy."""
        if self.kind == "slots":
            return "slots:" + ",".join(str(slot) for slot in sorted(self.slots))
        return self.kind


class MechanismConfigSchema(Schema):
    """Validation schema of :class:`MechanismConfig`."""

    epsilon = fields.Float(
        required=True, validate=validate.Range(min=0, min_inclusive=False)
    )
    geometry = fields.Str(validate=validate.OneOf(GEOMETRIES))
    noise_mode = fields.Str(validate=validate.OneOf(NOISE_MODES))


@dataclass(frozen=True)
class MechanismConfig:
    """Parameters of the mechanism.

    :param epsilon: Privacy parameter.
    :param geometry: Geometry of the vocabulary the mechanism runs on.
    :param sampler: Overrides of the :class:`~.sampler.SamplerConfig`
        defaults, restricted to :data:`SAMPLER_OVERRIDES`.
    :param policy: A :class:`SelectionPolicy` or its descriptor.
    :param stopwords: Lower-case words skipped by the ``nonstop`` policy.
    :param noise_mode: One of :data:`NOISE_MODES`.
    """

    epsilon: float
    geometry: str = "hyperbolic"
    sampler: dict = field(default_factory=dict)
    policy: SelectionPolicy = SelectionPolicy()
    stopwords: frozenset = DEFAULT_STOPWORDS
    noise_mode: str = "ambient"

    def __post_init__(self):
        """Validate the configuration and normalise the policy."""
        errors = MechanismConfigSchema().validate(
            {
                "epsilon": self.epsilon,
                "geometry": self.geometry,
                "noise_mode": self.noise_mode,
            }
        )
        sampler_errors = SamplerConfigSchema(only=SAMPLER_OVERRIDES).validate(
            dict(self.sampler)
        )
        if sampler_errors:
            errors["sampler"] = sampler_errors
        if errors:
            raise ValidationError(errors)
        object.__setattr__(self, "sampler", dict(self.sampler))
        object.__setattr__(self, "policy", SelectionPolicy.parse(self.policy))
        object.__setattr__(self, "stopwords", frozenset(self.stopwords))

    @property
    def projection_lambda(self):
        """Retraction distance used when noisy points leave the ball."""
        return self.sampler.get("projection_lambda", BOUNDARY_LAMBDA)

    def replace(self, **changes):
        """Return a copy with some fields changed."""
        return replace(self, **changes)

    def sampler_config(self, dim, seed=0, count=1):
        """Sampler configuration for noise of dimension ``dim``."""
        return SamplerConfig(
            dim=dim, epsilon=self.epsilon, seed=seed, count=count, **self.sampler
        )


class LaplaceNoise(object):
    """Euclidean noise with density proportional to ``exp(-eps |z|)``."""

    def __init__(self, dim, epsilon, rng):
        """Initialize noise source."""
        self.dim = dim
        self.epsilon = epsilon
        self.rng = rng

    def draw(self, count):
        """Return ``count`` noise vectors."""
        return sample_euclidean_laplace(self.dim, self.epsilon, self.rng, size=count)


class HyperbolicNoise(object):
    """Hyperbolic noise read from one pooled Metropolis-Hastings chain.

    Successive calls to :meth:`draw` continue the same chain, so the burn-in
    is paid once per source.
    """

    def __init__(self, config, rng):
        """Initialize noise source.

        :param config: A :class:`~.sampler.SamplerConfig`.
        :param rng: Generator feeding the chain.
        """
        self.chain = MetropolisHastingsChain(config, rng=rng)

    def draw(self, count):
        """Return the next ``count`` states of the chain."""
        return self.chain.advance(count)


def make_noise_source(vocab, config, rng):
    """Return the noise source matching the vocabulary geometry."""
    if config.geometry != vocab.geometry:
        raise GeometryError(
            _(
                "Mechanism configured for %(expected)s words, got %(actual)s.",
                expected=config.geometry,
                actual=vocab.geometry,
            )
        )
    if vocab.geometry == "euclidean":
        return LaplaceNoise(vocab.dim, config.epsilon, rng)
    return HyperbolicNoise(config.sampler_config(vocab.dim), rng)


def apply_noise(points, noise, vocab, config):
    """Perturb embeddings with noise in the vocabulary geometry.

    Euclidean points are translated. Hyperbolic points are translated in
    ambient coordinates (``ambient``) or by Mobius addition (``mobius``) and
    retracted into the ball when they leave it.
    """
    if vocab.geometry == "euclidean":
        return np.asarray(points) + noise
    if config.noise_mode == "mobius":
        moved = mobius_add(points, noise)
    else:
        moved = np.asarray(points) + noise
    return project_into_ball(moved, config.projection_lambda)


def perturb_batch(word, vocab, config, rng, count, source=None):
    """Run the mechanism ``count`` times on one word.

    :param word: Word or :data:`~.embeddings.WordId`.
    :param source: Noise source to continue; a fresh one is created from
        ``rng`` when not given.
    :returns: Array of ``count`` word ids.
    """
    word_id = vocab.resolve(word)
    if source is None:
        source = make_noise_source(vocab, config, rng)
    noise = source.draw(count)
    points = apply_noise(vocab.matrix[word_id], noise, vocab, config)
    return nearest_words(points, vocab)


def perturb_word(word, vocab, epsilon, rng, config=None, source=None):
    """Release a private replacement of ``word``.

    :param word: A word of ``vocab``.
    :param epsilon: Privacy parameter, overriding the one of ``config``.
    :param rng: A :class:`numpy.random.Generator`.
    :param config: Optional :class:`MechanismConfig`.
    :raises invenio_dxprivacy.errors.UnknownWordError: if ``word`` is absent.
    """
    if config is None:
        config = MechanismConfig(epsilon=epsilon, geometry=vocab.geometry)
    elif config.epsilon != epsilon:
        config = config.replace(epsilon=epsilon)
    return vocab.words[perturb_batch(word, vocab, config, rng, 1, source=source)[0]]


def tokenize(text):
    """Split text on whitespace."""
    return text.split()


def detokenize(tokens):
    """Join tokens with single spaces."""
    return " ".join(tokens)


def split_punctuation(token):
    """Return ``(prefix, core, suffix)`` with leading/trailing punctuation apart."""
    return _PUNCTUATION.match(token).groups()


@dataclass(frozen=True)
class RedactionResult:
    """Tokens before and after redaction with one status per token."""

    original_tokens: tuple
    released_tokens: tuple
    statuses: tuple

    def __post_init__(self):
        """Check that the three sequences are aligned."""
        if not (
            len(self.original_tokens) == len(self.released_tokens) == len(self.statuses)
        ):
            raise ValueError(_("Redaction sequences must have equal lengths."))

    def __len__(self):
        """Number of tokens."""
        return len(self.original_tokens)

    @property
    def text(self):
        """Released tokens joined with single spaces."""
        return detokenize(self.released_tokens)

    def to_rows(self):
        """One row per token for the status sidecar."""
        return [
            {
                "position": position,
                "original": original,
                "released": released,
                "status": status.value,
            }
            for position, (original, released, status) in enumerate(
                zip(self.original_tokens, self.released_tokens, self.statuses)
            )
        ]


def redact_text(tokens, vocab, config, rng):
    """Apply the mechanism to every eligible token of a text.

    Tokens are matched against the vocabulary after stripping punctuation
    and lower-casing; punctuation is put back around the released word. All
    eligible tokens share one noise source, created from ``rng``.

    :param tokens: Token sequence, or a string split with :func:`tokenize`.
    :param config: A :class:`MechanismConfig`.
    :returns: A :class:`RedactionResult` with as many tokens as the input.
    """
    if isinstance(tokens, str):
        tokens = tokenize(tokens)
    tokens = tuple(tokens)
    released = list(tokens)
    statuses = [TokenStatus.UNCHANGED_BY_POLICY] * len(tokens)

    eligible = []
    for position, token in enumerate(tokens):
        prefix, core, suffix = split_punctuation(token)
        key = core.lower()
        if not config.policy.selects(position, key, config.stopwords):
            continue
        if not key or key not in vocab:
            statuses[position] = TokenStatus.UNKNOWN_WORD
            continue
        eligible.append((position, prefix, vocab.index(key), suffix))

    if eligible:
        source = make_noise_source(vocab, config, rng)
        word_ids = np.array([word_id for _pos, _pre, word_id, _suf in eligible])
        noise = source.draw(len(eligible))
        points = apply_noise(vocab.matrix[word_ids], noise, vocab, config)
        outputs = nearest_words(points, vocab)
        for (position, prefix, word_id, suffix), output in zip(eligible, outputs):
            if output == word_id:
                statuses[position] = TokenStatus.SELF_SAMPLE
            else:
                released[position] = prefix + vocab.words[output] + suffix
                statuses[position] = TokenStatus.PERTURBED

    return RedactionResult(
        original_tokens=tokens,
        released_tokens=tuple(released),
        statuses=tuple(statuses),
    )
