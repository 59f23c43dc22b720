# -*- coding: utf-8 -*-
#
# This file is part of Invenio.
# Copyright (C) 2026 CERN.
#
# Invenio is free software; you can redistribute it and/or modify it
# under the terms of the MIT License; see LICENSE file for more details.

"""Utilities."""

import hashlib
from functools import lru_cache, partial

import numpy as np
from flask import current_app
from invenio_base.utils import obj_or_import_string

SAMPLE_STREAM = 0
"""Spawn key of the stream used to draw word samples."""

WORD_STREAM = 1
"""Spawn key prefix of the per-word mechanism streams."""

RATIO_STREAM = 2
"""Spawn key prefix of the streams used by the ratio check."""


def make_rng(seed, *keys):
    """Return a random generator derived from ``seed`` and ``keys``.

    Streams are produced by the counter-based Philox bit generator keyed
    through :class:`numpy.random.SeedSequence`, so ``make_rng(s, i)`` and
    ``make_rng(s, j)`` are independent for ``i != j`` and reproducible on
    every platform for a given numpy release.

    :param seed: Non-negative integer master seed.
    :param keys: Non-negative integers selecting a child stream.
    """
    sequence = np.random.SeedSequence(entropy=seed, spawn_key=tuple(keys))
    return np.random.Generator(np.random.Philox(sequence))


def file_checksum(path, chunk_size=1 << 16):
    """Return the SHA-256 hex digest of a file."""
    digest = hashlib.sha256()
    with open(path, "rb") as fp:
        for chunk in iter(lambda: fp.read(chunk_size), b""):
            digest.update(chunk)
    return digest.hexdigest()


@lru_cache(maxsize=100)
def serializer(report_format):
    """Return the report serializer registered for a format.

    :param report_format: One of the format names configured in
        ``DXPRIVACY_REPORT_FORMATS``.
    """
    formats = current_app.config["DXPRIVACY_REPORT_FORMATS"]
    serializer_ = formats[report_format]
    if isinstance(serializer_, tuple):
        return partial(obj_or_import_string(serializer_[0]), **serializer_[1])
    return obj_or_import_string(serializer_)
