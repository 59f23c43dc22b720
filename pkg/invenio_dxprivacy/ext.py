# -*- coding: utf-8 -*-
#
# This file is part of Invenio.
# Copyright (C) 2026 CERN.
#
# Invenio is free software; you can redistribute it and/or modify it
# under the terms of the MIT License; see LICENSE file for more details.

"""Invenio-DXPrivacy extension implementation."""

from invenio_base.utils import obj_or_import_string

from . import config
from .embeddings import load_embeddings
from .mechanism import MechanismConfig
from .sampler import SamplerConfig
from .stopwords import load_stopwords


class _AppState(object):
    """State for Invenio-DXPrivacy."""

    def __init__(self, app):
        """Initialize state.

        :param app: An instance of :class:`flask.Flask`.
        """
        self.app = app
        self._vocabulary = None

    @property
    def seed(self):
        """Master seed."""
        return self.app.config["DXPRIVACY_SEED"]

    @property
    def stopwords(self):
        """Get the stopword collection."""
        path = self.app.config["DXPRIVACY_STOPWORDS_FILE"]
        if path:
            return load_stopwords(path)
        stopwords = obj_or_import_string(self.app.config["DXPRIVACY_STOPWORDS"])
        if callable(stopwords):
            stopwords = stopwords()
        return frozenset(stopwords)

    @property
    def vocabulary(self):
        """Vocabulary of ``DXPRIVACY_EMBEDDINGS``, loaded on first access."""
        if self._vocabulary is None:
            path = self.app.config["DXPRIVACY_EMBEDDINGS"]
            if not path:
                raise RuntimeError("DXPRIVACY_EMBEDDINGS is not configured.")
            self._vocabulary = self.load_vocabulary(path)
        return self._vocabulary

    def load_vocabulary(self, path, geometry=None, clamp=None):
        """Load an embedding file and log what was loaded.

        :param geometry: Defaults to ``DXPRIVACY_GEOMETRY``.
        :param clamp: Defaults to ``DXPRIVACY_CLAMP``.
        """
        if geometry is None:
            geometry = self.app.config["DXPRIVACY_GEOMETRY"]
        if clamp is None:
            clamp = self.app.config["DXPRIVACY_CLAMP"]
        vocab = load_embeddings(path, geometry=geometry, clamp=clamp)
        self.app.logger.info(
            "Loaded %d %s words of dimension %d from %s (sha256 %s).",
            len(vocab),
            vocab.geometry,
            vocab.dim,
            path,
            vocab.checksum,
        )
        if vocab.clamped_lines:
            self.app.logger.warning(
                "Retracted %d embedding rows into the ball, first on line %d.",
                len(vocab.clamped_lines),
                vocab.clamped_lines[0],
            )
        return vocab

    def _epsilon(self, epsilon):
        if epsilon is None:
            return self.app.config["DXPRIVACY_EPSILON"]
        return epsilon

    def sampler_settings(self, **overrides):
        """Sampler settings from the configuration, updated with ``overrides``."""
        settings = {
            "burn_in": self.app.config["DXPRIVACY_BURN_IN"],
            "proposal_scale": self.app.config["DXPRIVACY_PROPOSAL_SCALE"],
            "proposal": self.app.config["DXPRIVACY_PROPOSAL"],
            "measure": self.app.config["DXPRIVACY_MEASURE"],
            "thin": self.app.config["DXPRIVACY_THIN"],
            "chains": self.app.config["DXPRIVACY_CHAINS"],
            "projection_lambda": self.app.config["DXPRIVACY_PROJECTION_LAMBDA"],
        }
        settings.update(
            (key, value) for key, value in overrides.items() if value is not None
        )
        return settings

    def sampler_config(self, dim, epsilon=None, seed=None, count=1000, **overrides):
        """Build a :class:`~.sampler.SamplerConfig` from the configuration."""
        return SamplerConfig(
            dim=dim,
            epsilon=self._epsilon(epsilon),
            seed=self.seed if seed is None else seed,
            count=count,
            **self.sampler_settings(**overrides),
        )

    def mechanism_config(
        self, epsilon=None, geometry=None, policy=None, noise_mode=None, **overrides
    ):
        """Build a :class:`~.mechanism.MechanismConfig` from the configuration."""
        return MechanismConfig(
            epsilon=self._epsilon(epsilon),
            geometry=geometry or self.app.config["DXPRIVACY_GEOMETRY"],
            sampler=self.sampler_settings(**overrides),
            policy=policy or self.app.config["DXPRIVACY_POLICY"],
            stopwords=self.stopwords,
            noise_mode=noise_mode or self.app.config["DXPRIVACY_NOISE_MODE"],
        )


class InvenioDXPrivacy(object):
    """Invenio-DXPrivacy extension."""

    def __init__(self, app=None):
        """Extension initialization.

        :param app: An instance of :class:`flask.Flask`. (Default: ``None``)
        """
        if app:
            self.init_app(app)

    def init_app(self, app):
        """Flask application initialization.

        :param app: An instance of :class:`flask.Flask`.
        """
        self.init_config(app)
        app.extensions["invenio-dxprivacy"] = _AppState(app=app)

    def init_config(self, app):
        """Initialize configuration.

        :param app: An instance of :class:`flask.Flask`.
        """
        for k in dir(config):
            if k.startswith("DXPRIVACY_"):
                app.config.setdefault(k, getattr(config, k))

        # warn user if SEED is not set
        if app.config.get("DXPRIVACY_SEED") is None:
            import warnings

            import numpy as np

            app.config["DXPRIVACY_SEED"] = int(
                np.random.SeedSequence().generate_state(1, dtype=np.uint64)[0]
            )
            warnings.warn(
                """Please specify the DXPRIVACY_SEED configuration. """
                """Outputs are not reproducible, the drawn seed is: {0}""".format(
                    app.config.get("DXPRIVACY_SEED")
                )
            )
