# -*- coding: utf-8 -*-
#
# This file is part of Invenio.
# Copyright (C) 2026 CERN.
#
# Invenio is free software; you can redistribute it and/or modify it
# under the terms of the MIT License; see LICENSE file for more details.

"""Test app."""

import pytest
from flask import Flask
from marshmallow import ValidationError

from invenio_dxprivacy import InvenioDXPrivacy, current_dxprivacy
from invenio_dxprivacy.mechanism import SelectionPolicy
from invenio_dxprivacy.stopwords import DEFAULT_STOPWORDS


def test_version():
    """Test version import."""
    from invenio_dxprivacy import __version__

    assert __version__


def test_init():
    """Test extension initialization."""
    app = Flask("testapp")
    app.config["DXPRIVACY_SEED"] = 1
    InvenioDXPrivacy(app)
    assert "invenio-dxprivacy" in app.extensions

    app = Flask("testapp")
    app.config["DXPRIVACY_SEED"] = 1
    ext = InvenioDXPrivacy()
    assert "invenio-dxprivacy" not in app.extensions
    ext.init_app(app)
    assert "invenio-dxprivacy" in app.extensions


def test_init_without_seed():
    """Test that a missing seed is drawn and reported."""
    app = Flask("testapp")
    with pytest.warns(
        UserWarning, match="Please specify the DXPRIVACY_SEED configuration"
    ):
        InvenioDXPrivacy(app)
    seed = app.config["DXPRIVACY_SEED"]
    assert isinstance(seed, int)
    assert 0 <= seed < 2**64


def test_default_config(app):
    """Test configuration defaults."""
    assert app.config["DXPRIVACY_EPSILON"] == 1.0
    assert app.config["DXPRIVACY_GEOMETRY"] == "hyperbolic"
    assert app.config["DXPRIVACY_BURN_IN"] == 1000
    assert app.config["DXPRIVACY_PROPOSAL_SCALE"] == 0.5
    assert app.config["DXPRIVACY_NOISE_MODE"] == "ambient"
    assert app.config["DXPRIVACY_SEED"] == 1234
    assert current_dxprivacy.seed == 1234


def test_sampler_config(app):
    """Test sampler settings from the configuration."""
    config = current_dxprivacy.sampler_config(3, count=10)
    assert config.dim == 3
    assert config.epsilon == 1.0
    assert config.seed == 1234
    assert config.burn_in == 1000

    config = current_dxprivacy.sampler_config(
        2, epsilon=4.0, seed=7, burn_in=50, proposal=None
    )
    assert (config.epsilon, config.seed, config.burn_in) == (4.0, 7, 50)
    assert config.proposal == "lift"

    app.config["DXPRIVACY_PROPOSAL"] = "unknown"
    with pytest.raises(ValidationError):
        current_dxprivacy.sampler_config(2)


def test_mechanism_config(app):
    """Test mechanism settings from the configuration."""
    config = current_dxprivacy.mechanism_config()
    assert config.epsilon == 1.0
    assert config.policy == SelectionPolicy(kind="nonstop")
    assert config.stopwords == DEFAULT_STOPWORDS

    config = current_dxprivacy.mechanism_config(
        epsilon=2.0, policy="slots:1,3", noise_mode="mobius", thin=5
    )
    assert config.policy.slots == frozenset([1, 3])
    assert config.noise_mode == "mobius"
    assert config.sampler["thin"] == 5
    assert config.sampler_config(2).thin == 5


def test_stopwords(app, tmp_path):
    """Test stopword configuration."""
    app.config["DXPRIVACY_STOPWORDS"] = ["London", "paris"]
    assert current_dxprivacy.stopwords == frozenset(["London", "paris"])

    path = tmp_path / "stopwords.txt"
    path.write_text("# cities\nLondon\n\nparis\n", encoding="utf-8")
    app.config["DXPRIVACY_STOPWORDS_FILE"] = str(path)
    assert current_dxprivacy.stopwords == frozenset(["london", "paris"])


def test_vocabulary(app, taxonomy_file):
    """Test the configured vocabulary."""
    with pytest.raises(RuntimeError):
        current_dxprivacy.vocabulary

    app.config["DXPRIVACY_EMBEDDINGS"] = taxonomy_file
    vocab = current_dxprivacy.vocabulary
    assert len(vocab) == 40
    assert vocab.geometry == "hyperbolic"
    assert current_dxprivacy.vocabulary is vocab


def test_load_vocabulary_logs_clamped_rows(app, write_embeddings, caplog):
    """Test that retracted rows are reported."""
    path = write_embeddings("a 0.1 0.2\nb 1.2 0.0\n")
    vocab = current_dxprivacy.load_vocabulary(path, clamp=True)
    assert vocab.clamped_lines == (2,)
    assert "Retracted 1 embedding rows" in caplog.text
