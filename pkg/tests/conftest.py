# -*- coding: utf-8 -*-
#
# This file is part of Invenio.
# Copyright (C) 2026 CERN.
#
# Invenio is free software; you can redistribute it and/or modify it
# under the terms of the MIT License; see LICENSE file for more details.

"""Pytest configuration."""

import shutil
import tempfile

import pytest
from flask import Flask
from invenio_i18n import InvenioI18N
from invenio_jsonschemas import InvenioJSONSchemas

from invenio_dxprivacy import InvenioDXPrivacy
from invenio_dxprivacy.embeddings import generate_synthetic_taxonomy, save_embeddings


@pytest.fixture()
def app():
    """Flask application fixture."""
    instance_path = tempfile.mkdtemp()
    app = Flask("testapp", instance_path=instance_path)
    app.config.update(
        TESTING=True,
        SECRET_KEY="CHANGE_ME",
        DXPRIVACY_SEED=1234,
    )
    InvenioI18N(app)
    InvenioJSONSchemas(app)
    InvenioDXPrivacy(app)

    with app.app_context():
        yield app

    shutil.rmtree(instance_path)


@pytest.fixture()
def runner(app):
    """CLI runner bound to the application."""
    return app.test_cli_runner()


@pytest.fixture(scope="session")
def taxonomy():
    """Hyperbolic 40-word tree of depth 3 and branching 3 in the plane."""
    return generate_synthetic_taxonomy(3, 3, 2, seed=1)


@pytest.fixture(scope="session")
def euclidean_taxonomy():
    """The same tree embedded in the Euclidean plane."""
    return generate_synthetic_taxonomy(3, 3, 2, seed=1, geometry="euclidean")


@pytest.fixture()
def taxonomy_file(taxonomy, tmp_path):
    """Embedding file of the hyperbolic tree."""
    path = tmp_path / "taxonomy.txt"
    save_embeddings(taxonomy, str(path))
    return str(path)


@pytest.fixture()
def euclidean_taxonomy_file(euclidean_taxonomy, tmp_path):
    """Embedding file of the Euclidean tree."""
    path = tmp_path / "taxonomy-euclidean.txt"
    save_embeddings(euclidean_taxonomy, str(path))
    return str(path)


@pytest.fixture()
def write_embeddings(tmp_path):
    """Write raw embedding text to a file and return its path."""

    def _write(content, name="embeddings.txt"):
        path = tmp_path / name
        path.write_text(content, encoding="utf-8")
        return str(path)

    return _write
