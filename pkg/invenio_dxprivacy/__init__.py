# -*- coding: utf-8 -*-
#
# This file is part of Invenio.
# Copyright (C) 2026 CERN.
#
# Invenio is free software; you can redistribute it and/or modify it
# under the terms of the MIT License; see LICENSE file for more details.

"""Invenio module for metric differential privacy on hyperbolic word embeddings.

Invenio-DXPrivacy releases private versions of short texts. Each selected
word is mapped to its embedding in the Poincaré ball, perturbed with noise
whose density decays exponentially with the hyperbolic distance from the
origin, and replaced by the nearest vocabulary word. Hierarchical embeddings
place general concepts near the origin, so a perturbed word tends to be
replaced by a more general one (a city name by ``city``) rather than by an
unrelated word.

Invenio-DXPrivacy consists of:

- Poincaré ball and hyperboloid geometry.
- A Metropolis-Hastings sampler of hyperbolic noise and a Euclidean baseline.
- The word-level mechanism and text redaction with selection policies.
- Estimators of privacy statistics, calibration against the Euclidean
  mechanism and an empirical check of the privacy bound.
- A ``dxprivacy`` command line interface.

Initialization
--------------

Create a Flask application and initialize the extension:

.. code-block:: python

    from flask import Flask
    from invenio_dxprivacy import InvenioDXPrivacy

    app = Flask('myapp')
    app.config['DXPRIVACY_SEED'] = 1234
    app.config['DXPRIVACY_EMBEDDINGS'] = '/path/to/poincare.txt'
    ext_dxprivacy = InvenioDXPrivacy(app)

If you use InvenioDXPrivacy as part of the invenio-base setup, the extension
is loaded automatically through an entry point.

Redacting text
--------------

Within an application context, the configured vocabulary and mechanism
settings are available through :data:`~.proxies.current_dxprivacy`:

.. code-block:: python

    from invenio_dxprivacy.mechanism import redact_text
    from invenio_dxprivacy.proxies import current_dxprivacy
    from invenio_dxprivacy.utils import make_rng

    with app.app_context():
        result = redact_text(
            'flights from london to paris',
            current_dxprivacy.vocabulary,
            current_dxprivacy.mechanism_config(epsilon=1.0),
            make_rng(current_dxprivacy.seed),
        )
        result.text

Every token keeps its position; tokens outside the vocabulary or excluded
by the selection policy are released unchanged and labelled in
``result.statuses``.

Command line
------------

The same operations are available from the shell:

.. code-block:: console

    $ dxprivacy gen-fixture --depth 3 --branching 3 --dim 2 -o tree.txt
    $ echo "n_0 n_1_2" | dxprivacy redact --embeddings tree.txt \\
        --epsilon 1 --seed 7 --policy all
    $ dxprivacy sample --dim 2 --epsilon 1 --count 5 --seed 7
"""

from .ext import InvenioDXPrivacy
from .proxies import current_dxprivacy

__version__ = "1.0.0"

__all__ = ("__version__", "InvenioDXPrivacy", "current_dxprivacy")
