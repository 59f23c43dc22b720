# -*- coding: utf-8 -*-
#
# This file is part of Invenio.
# Copyright (C) 2026 CERN.
#
# Invenio is free software; you can redistribute it and/or modify it
# under the terms of the MIT License; see LICENSE file for more details.

"""Errors."""


class DXPrivacyError(Exception):
    """Base class for errors raised by Invenio-DXPrivacy."""


class DimensionMismatchError(DXPrivacyError, ValueError):
    """Operands do not share the same dimension."""


class NonFiniteError(DXPrivacyError, ValueError):
    """Input contains NaN or infinite coordinates."""


class OutsideBallError(DXPrivacyError, ValueError):
    """Point does not lie strictly inside the unit ball."""


class HyperboloidError(DXPrivacyError, ValueError):
    """Point does not lie on the upper sheet of the hyperboloid."""


class Hyp2F1ConvergenceError(DXPrivacyError, ArithmeticError):
    """Hypergeometric series did not converge within the term budget."""


class EmbeddingFormatError(DXPrivacyError, ValueError):
    """Embedding file cannot be parsed or violates a vocabulary invariant.

    The offending line is available as :attr:`line_number` (1-based).
    """

    def __init__(self, message, line_number=None, path=None):
        """Initialize error.

        :param message: Human readable description.
        :param line_number: Line of the embedding file, if known.
        :param path: Path of the embedding file, if known.
        """
        super(EmbeddingFormatError, self).__init__(message)
        self.message = message
        self.line_number = line_number
        self.path = path

    def __str__(self):
        """Prefix the message with the file location."""
        location = [str(part) for part in (self.path, self.line_number) if part]
        if location:
            return "{0}: {1}".format(":".join(location), self.message)
        return str(self.message)


class DuplicateWordError(EmbeddingFormatError):
    """Word occurs more than once in a vocabulary."""


class EmptyVocabularyError(DXPrivacyError, ValueError):
    """Vocabulary has no words."""


class UnknownWordError(DXPrivacyError, KeyError):
    """Word is not part of the vocabulary."""

    def __init__(self, word):
        """Initialize error.

        :param word: The missing word.
        """
        super(UnknownWordError, self).__init__(word)
        self.word = word

    def __str__(self):
        """Return a readable message instead of the quoted key."""
        return "Word not in vocabulary: {0}".format(self.word)


class GeometryError(DXPrivacyError, ValueError):
    """Operation is not defined for the vocabulary geometry."""


class EmptySampleError(DXPrivacyError, ValueError):
    """No words were selected for estimation."""


class CalibrationError(DXPrivacyError, ValueError):
    """Euclidean calibration could not be carried out."""
