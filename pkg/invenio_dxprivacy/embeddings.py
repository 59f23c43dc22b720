# -*- coding: utf-8 -*-
#
# This file is part of Invenio.
# Copyright (C) 2026 CERN.
#
# Invenio is free software; you can redistribute it and/or modify it
# under the terms of the MIT License; see LICENSE file for more details.

"""Word embeddings and discretisation.

Embedding files use the plain text format of public word-embedding
releases::

    3 2
    city 0.12 0.40
    london 0.31 0.85
    paris -0.29 0.86

The first line is an optional ``<count> <dim>`` header.
"""

import math

import numpy as np
from invenio_i18n import gettext as _

from .errors import (
    DimensionMismatchError,
    DuplicateWordError,
    EmbeddingFormatError,
    EmptyVocabularyError,
    GeometryError,
    OutsideBallError,
    UnknownWordError,
)
from .geometry import (
    BOUNDARY_LAMBDA,
    euclidean_distance,
    poincare_distance,
    project_into_ball,
)
from .utils import file_checksum, make_rng

GEOMETRIES = ("hyperbolic", "euclidean")
"""Supported vocabulary geometries."""

NORM_TOLERANCE = 1e-9
"""Norm gap required for one word to lie below another."""

MAX_PAIRWISE_ELEMENTS = 1 << 21
"""Upper bound on coordinates materialised per nearest-word chunk."""

WordId = int
"""Index of a word in :attr:`Vocabulary.words`."""


class Vocabulary(object):
    """Immutable list of words with their embedding rows.

    :param words: Unique, non-empty sequence of words.
    :param matrix: Array of shape ``(len(words), dim)``.
    :param geometry: One of :data:`GEOMETRIES`.
    :param clamped_lines: Lines of the source file whose rows were retracted.
    :param checksum: SHA-256 of the source file, if any.
    """

    def __init__(
        self, words, matrix, geometry="hyperbolic", clamped_lines=(), checksum=None
    ):
        """Initialize and validate vocabulary."""
        words = tuple(words)
        if not words:
            raise EmptyVocabularyError(_("Vocabulary is empty."))
        if geometry not in GEOMETRIES:
            raise GeometryError(_("Unknown geometry: %(geometry)s.", geometry=geometry))
        matrix = np.array(matrix, dtype=np.float64)
        if matrix.ndim != 2 or matrix.shape[0] != len(words) or matrix.shape[1] < 1:
            raise DimensionMismatchError(
                _("Expected one coordinate row per word.")
            )
        if not np.all(np.isfinite(matrix)):
            raise EmbeddingFormatError(_("Coordinates must be finite."))
        index = {}
        for i, word in enumerate(words):
            if word in index:
                raise DuplicateWordError(_("Duplicate word: %(word)s.", word=word))
            index[word] = i
        norms = np.sqrt(np.sum(matrix * matrix, axis=-1))
        if geometry == "hyperbolic" and np.any(norms >= 1.0):
            raise OutsideBallError(
                _("Hyperbolic embeddings must lie inside the unit ball.")
            )
        matrix.setflags(write=False)
        norms.setflags(write=False)
        self.words = words
        self.matrix = matrix
        self.geometry = geometry
        self.norms = norms
        self.clamped_lines = tuple(clamped_lines)
        self.checksum = checksum
        self._index = index

    def __len__(self):
        """Number of words."""
        return len(self.words)

    def __contains__(self, word):
        """Check if a word is in the vocabulary."""
        return word in self._index

    def __iter__(self):
        """Iterate over words."""
        return iter(self.words)

    def __eq__(self, other):
        """Compare words, geometry and coordinates."""
        if not isinstance(other, Vocabulary):
            return NotImplemented
        return (
            self.words == other.words
            and self.geometry == other.geometry
            and np.array_equal(self.matrix, other.matrix)
        )

    def __repr__(self):
        """Short representation."""
        return "<Vocabulary {0} words, dim={1}, {2}>".format(
            len(self), self.dim, self.geometry
        )

    @property
    def dim(self):
        """Embedding dimension."""
        return self.matrix.shape[1]

    def index(self, word):
        """Return the :data:`WordId` of a word.

        :raises invenio_dxprivacy.errors.UnknownWordError: if absent.
        """
        try:
            return self._index[word]
        except KeyError:
            raise UnknownWordError(word)

    def resolve(self, word_or_id):
        """Return a :data:`WordId` for either a word or an id."""
        if isinstance(word_or_id, str):
            return self.index(word_or_id)
        word_id = int(word_or_id)
        if not 0 <= word_id < len(self.words):
            raise UnknownWordError(word_or_id)
        return word_id

    def vector(self, word_or_id):
        """Embedding row of a word."""
        return self.matrix[self.resolve(word_or_id)]

    def distance(self, u, v):
        """Distance between points in the vocabulary geometry."""
        if self.geometry == "hyperbolic":
            return poincare_distance(u, v)
        return euclidean_distance(u, v)


def _parse_header(fields):
    if len(fields) == 2 and all(field.isdigit() for field in fields):
        return int(fields[0]), int(fields[1])
    return None


def load_embeddings(path, geometry="hyperbolic", clamp=False):
    """Load a vocabulary from an embedding text file.

    :param path: Path of a UTF-8 embedding file.
    :param geometry: ``hyperbolic`` or ``euclidean``.
    :param clamp: Retract hyperbolic rows with norm >= 1 into the ball
        instead of rejecting them.
    :raises invenio_dxprivacy.errors.EmbeddingFormatError: on the first
        offending line.
    """
    if geometry not in GEOMETRIES:
        raise GeometryError(_("Unknown geometry: %(geometry)s.", geometry=geometry))

    words, rows, clamped, seen = [], [], [], {}
    header = dim = None
    with open(path, "rb") as fp:
        for line_number, raw in enumerate(fp, start=1):
            try:
                line = raw.decode("utf-8")
            except UnicodeDecodeError:
                raise EmbeddingFormatError(
                    _("Line is not valid UTF-8."), line_number=line_number, path=path
                )
            fields = line.split()
            if not fields:
                continue
            if line_number == 1:
                header = _parse_header(fields)
                if header:
                    dim = header[1]
                    continue

            word, values = fields[0], fields[1:]
            if dim is None:
                dim = len(values)
            if not values or len(values) != dim:
                raise EmbeddingFormatError(
                    _(
                        "Expected %(dim)s coordinates, found %(found)s.",
                        dim=dim,
                        found=len(values),
                    ),
                    line_number=line_number,
                    path=path,
                )
            try:
                row = np.array([float(value) for value in values])
            except ValueError:
                raise EmbeddingFormatError(
                    _("Unparsable number."), line_number=line_number, path=path
                )
            if not np.all(np.isfinite(row)):
                raise EmbeddingFormatError(
                    _("Coordinates must be finite."),
                    line_number=line_number,
                    path=path,
                )
            if word in seen:
                raise DuplicateWordError(
                    _(
                        "Duplicate word %(word)s, first seen on line %(first)s.",
                        word=word,
                        first=seen[word],
                    ),
                    line_number=line_number,
                    path=path,
                )
            if geometry == "hyperbolic" and math.sqrt(row @ row) >= 1.0:
                if not clamp:
                    raise EmbeddingFormatError(
                        _("Norm must be smaller than 1 in the Poincaré ball."),
                        line_number=line_number,
                        path=path,
                    )
                row = project_into_ball(row, BOUNDARY_LAMBDA)
                clamped.append(line_number)
            seen[word] = line_number
            words.append(word)
            rows.append(row)

    if not words:
        raise EmptyVocabularyError(_("No words found in %(path)s.", path=path))
    if header and header[0] != len(words):
        raise EmbeddingFormatError(
            _(
                "Header announces %(count)s words, found %(found)s.",
                count=header[0],
                found=len(words),
            ),
            line_number=1,
            path=path,
        )
    return Vocabulary(
        words,
        np.vstack(rows),
        geometry=geometry,
        clamped_lines=clamped,
        checksum=file_checksum(path),
    )


def save_embeddings(vocab, path, header=True):
    """Write a vocabulary in the embedding text format.

    Coordinates are written with their shortest round-trip representation,
    so loading the file again gives an identical vocabulary.
    """
    with open(path, "w", encoding="utf-8", newline="\n") as fp:
        if header:
            fp.write("{0} {1}\n".format(len(vocab), vocab.dim))
        for word, row in zip(vocab.words, vocab.matrix):
            fp.write(word)
            for value in row:
                fp.write(" ")
                fp.write(repr(float(value)))
            fp.write("\n")


def nearest_words(points, vocab):
    """Return the nearest :data:`WordId` of each point.

    Distances are hyperbolic for hyperbolic vocabularies and Euclidean
    otherwise. The search is an exact scan; ties go to the lowest index.

    :param points: Array of shape ``(m, dim)``.
    :param vocab: A :class:`Vocabulary`.
    """
    points = np.asarray(points, dtype=np.float64)
    if points.ndim != 2 or points.shape[1] != vocab.dim:
        raise DimensionMismatchError(
            _("Points must have shape (m, %(dim)s).", dim=vocab.dim)
        )
    rows = vocab.matrix[np.newaxis, :, :]
    chunk = max(1, MAX_PAIRWISE_ELEMENTS // (len(vocab) * vocab.dim))
    nearest = np.empty(len(points), dtype=np.intp)
    for start in range(0, len(points), chunk):
        block = points[start : start + chunk, np.newaxis, :]
        nearest[start : start + chunk] = np.argmin(vocab.distance(block, rows), axis=1)
    return nearest


def nearest_word(point, vocab):
    """Return the :data:`WordId` nearest to ``point``."""
    point = np.asarray(point, dtype=np.float64)
    return int(nearest_words(point[np.newaxis, :], vocab)[0])


def is_below(word, other, vocab):
    """Check whether ``word`` lies below ``other`` in the embedded hierarchy.

    General concepts sit closer to the origin, so ``word`` is below ``other``
    when its norm exceeds the norm of ``other`` by more than
    :data:`NORM_TOLERANCE`.
    """
    if vocab.geometry != "hyperbolic":
        raise GeometryError(_("The hierarchy is only defined for hyperbolic words."))
    gap = vocab.norms[vocab.resolve(word)] - vocab.norms[vocab.resolve(other)]
    return bool(gap > NORM_TOLERANCE)


def generate_synthetic_taxonomy(
    depth, branching, dim, seed=0, geometry="hyperbolic", step=1.5
):
    """Embed a balanced tree as a small test vocabulary.

    The root is named ``n`` and the ``j``-th child of ``x`` is ``x_j``. Nodes
    of depth ``k`` sit at hyperbolic distance ``k * step`` from the origin,
    i.e. at Euclidean radius ``tanh(k * step / 2)``; with
    ``geometry="euclidean"`` the radius is ``k * step``. Each node owns an
    angular wedge that its children split evenly, so siblings stay close to
    their parent. Extra dimensions receive a small seeded offset.

    :param depth: Tree depth, ``>= 1``.
    :param branching: Children per node, ``>= 1``.
    :param dim: Embedding dimension, ``>= 2``.
    :param seed: Seed of the global rotation and off-plane offsets.
    """
    if depth < 1 or branching < 1 or dim < 2:
        raise ValueError(_("Require depth >= 1, branching >= 1 and dim >= 2."))
    if geometry not in GEOMETRIES:
        raise GeometryError(_("Unknown geometry: %(geometry)s.", geometry=geometry))

    rng = make_rng(seed)
    nodes = [("n", 0, rng.uniform(0.0, 2.0 * math.pi), 2.0 * math.pi)]
    frontier = list(nodes)
    for _level in range(depth):
        children = []
        for name, level, angle, width in frontier:
            child_width = width / branching
            for j in range(branching):
                offset = (j - (branching - 1) / 2.0) * child_width
                children.append(
                    ("{0}_{1}".format(name, j), level + 1, angle + offset, child_width)
                )
        nodes.extend(children)
        frontier = children

    words, rows = [], []
    for name, level, angle, _width in nodes:
        direction = np.zeros(dim)
        direction[0] = math.cos(angle)
        direction[1] = math.sin(angle)
        direction[2:] = 0.1 * rng.standard_normal(dim - 2)
        direction /= math.sqrt(direction @ direction)
        if geometry == "hyperbolic":
            radius = math.tanh(level * step / 2.0)
        else:
            radius = level * step
        words.append(name)
        rows.append(radius * direction)
    return Vocabulary(words, np.vstack(rows), geometry=geometry)
