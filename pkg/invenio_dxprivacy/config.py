# -*- coding: utf-8 -*-
#
# This file is part of Invenio.
# Copyright (C) 2026 CERN.
#
# Invenio is free software; you can redistribute it and/or modify it
# under the terms of the MIT License; see LICENSE file for more details.

"""The details of the configuration options for the privacy mechanism."""

DXPRIVACY_EPSILON = 1.0
"""Default privacy parameter used when a command does not set one."""

DXPRIVACY_GEOMETRY = "hyperbolic"
"""Geometry of the configured embeddings, ``hyperbolic`` or ``euclidean``."""

DXPRIVACY_EMBEDDINGS = None
"""Path of the embedding file exposed as ``current_dxprivacy.vocabulary``.

The file uses the usual text format of word-embedding releases: an optional
``<count> <dim>`` header followed by one ``<word> <v1> ... <vn>`` line per
word.
"""

DXPRIVACY_CLAMP = False
"""Retract hyperbolic rows with norm >= 1 into the ball instead of failing."""

DXPRIVACY_SEED = None
"""Master seed from which every random stream is derived.

If not set, a seed is drawn from the operating system and a warning is
issued, since outputs are then not reproducible.
"""

DXPRIVACY_BURN_IN = 1000
"""Number of Metropolis-Hastings states discarded before sampling."""

DXPRIVACY_PROPOSAL_SCALE = 0.5
"""Standard deviation of the isotropic Gaussian proposal."""

DXPRIVACY_PROPOSAL = "lift"
"""Proposal of the sampler.

``lift``
    Gaussian step in the spatial coordinates of the hyperboloid, lifted onto
    the hyperboloid and mapped into the ball.
``ball``
    Gaussian step taken directly in ball coordinates; steps leaving the ball
    are rejected.
``poincare``
    Gaussian step around the current ball point, lifted and mapped back
    without correction. Biased towards the origin.
"""

DXPRIVACY_MEASURE = "lebesgue"
"""Reference measure of the noise density, ``lebesgue`` or ``hyperbolic``.

The hyperbolic volume measure is only normalisable for ``epsilon > dim - 1``.
"""

DXPRIVACY_THIN = 1
"""Number of chain steps between two consecutive noise draws."""

DXPRIVACY_CHAINS = 1
"""Number of independent chains advanced together by the sampler.

With more than one chain, draws are taken from the chains in turn, which
lowers the correlation between consecutive draws at the same cost per step.
"""

DXPRIVACY_PROJECTION_LAMBDA = 1e-5
"""Distance from the boundary at which escaping points are retracted."""

DXPRIVACY_NOISE_MODE = "ambient"
"""How noise is applied to an embedding.

``ambient``
    Coordinate-wise addition followed by projection into the ball.
``mobius``
    Mobius addition, which translates the origin-centred noise to the word.
"""

DXPRIVACY_POLICY = "nonstop"
"""Word selection policy: ``all``, ``nonstop`` or ``slots:<i,j,...>``."""

DXPRIVACY_STOPWORDS = "invenio_dxprivacy.stopwords:DEFAULT_STOPWORDS"
"""Import string of the stopword collection (or of a callable returning it)."""

DXPRIVACY_STOPWORDS_FILE = None
"""Optional file with one stopword per line, overriding the bundled list."""

DXPRIVACY_RUNS = 1000
"""Mechanism runs per word used by the statistics commands."""

DXPRIVACY_SUPPORT_THRESHOLD = 50
"""Minimum observations per side for an output to enter a ratio check."""

DXPRIVACY_CONFIDENCE = 0.99
"""Family-wise confidence level of the empirical privacy check."""

DXPRIVACY_EPSILON_GRID = [2.0**k for k in range(-3, 11)]
"""Euclidean privacy parameters searched during calibration."""

DXPRIVACY_HYP2F1_MAX_TERMS = 100000
"""Plain summation budget of the hypergeometric series before acceleration."""

DXPRIVACY_REPORT_FORMATS = {
    "json": "invenio_dxprivacy.reports:dumps_json",
    "tsv": "invenio_dxprivacy.reports:dumps_tsv",
}
"""Report serializers by format name.

Values are import strings of callables ``(report, metadata) -> str``.
"""
