# -*- coding: utf-8 -*-
#
# This file is part of Invenio.
# Copyright (C) 2026 CERN.
#
# Invenio is free software; you can redistribute it and/or modify it
# under the terms of the MIT License; see LICENSE file for more details.

"""Bundled English stopword list."""

STOPWORDS_VERSION = "1.0"
"""Version of :data:`DEFAULT_STOPWORDS`; bumped whenever the list changes."""

DEFAULT_STOPWORDS = frozenset(
    """
    a about above after again against all am an and any are as at be because
    been before being below between both but by can could did do does doing
    down during each few for from further had has have having he her here hers
    herself him himself his how i if in into is it its itself just me more
    most my myself no nor not now of off on once only or other our ours
    ourselves out over own same she should so some such than that the their
    theirs them themselves then there these they this those through to too
    under until up very was we were what when where which while who whom why
    will with would you your yours yourself yourselves
    """.split()
)
"""Lower-case stopwords never perturbed by the ``nonstop`` policy."""


def load_stopwords(path):
    """Read a stopword file with one word per line.

    Blank lines and lines starting with ``#`` are ignored; words are
    lower-cased.
    """
    words = set()
    with open(path, encoding="utf-8") as fp:
        for line in fp:
            line = line.strip()
            if line and not line.startswith("#"):
                words.add(line.lower())
    return frozenset(words)
