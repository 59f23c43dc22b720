# -*- coding: utf-8 -*-
#
# This file is part of Invenio.
# Copyright (C) 2026 CERN.
#
# Invenio is free software; you can redistribute it and/or modify it
# under the terms of the MIT License; see LICENSE file for more details.

"""Privacy statistics of the mechanism.

For a word ``w`` run ``runs`` times through the mechanism:

``n_w``
    number of runs releasing ``w`` itself;
``s_w``
    number of distinct released words;
``k_w``
    smallest number of observed outputs lying below an output that lies
    above ``w`` in the embedded hierarchy.

Every estimate draws from streams derived from ``(seed, word index)``, so
results do not depend on the order in which words are processed.
"""

import math
from dataclasses import dataclass, field
from enum import Enum

import numpy as np
from invenio_i18n import gettext as _
from scipy.stats import norm

from .embeddings import NORM_TOLERANCE
from .errors import CalibrationError, EmptySampleError, GeometryError
from .mechanism import MechanismConfig, perturb_batch
from .utils import RATIO_STREAM, SAMPLE_STREAM, WORD_STREAM, make_rng


@dataclass(frozen=True)
class WordRecord:
    """Tallies of one sampled word."""

    word: str
    runs: int
    n_w: int
    s_w: int
    k_w: int = None
    outputs: dict = field(default_factory=dict, compare=False)

    @property
    def h0(self):
        """Hartley entropy estimate ``log2(s_w)``."""
        return math.log2(self.s_w)

    @property
    def h_inf(self):
        """Min-entropy estimate ``-log2(n_w / runs)``; infinite when ``n_w = 0``."""
        if self.n_w == 0:
            return math.inf
        return math.log2(self.runs / self.n_w)


@dataclass(frozen=True)
class PrivacyStats:
    """Per-word records and their aggregates for one privacy parameter."""

    records: tuple
    epsilon: float
    geometry: str
    runs: int
    seed: int = 0

    @property
    def avg_n_w(self):
        """Average number of self releases."""
        return float(np.mean([record.n_w for record in self.records]))

    @property
    def max_n_w(self):
        """Worst-case number of self releases."""
        return max(record.n_w for record in self.records)

    @property
    def avg_s_w(self):
        """Average number of distinct outputs."""
        return float(np.mean([record.s_w for record in self.records]))

    @property
    def min_k_w(self):
        """Smallest ``k_w``, or ``None`` when the geometry has no hierarchy."""
        values = [record.k_w for record in self.records if record.k_w is not None]
        return min(values) if values else None

    def __getitem__(self, word):
        """Return the record of a word."""
        for record in self.records:
            if record.word == word:
                return record
        raise KeyError(word)

    def inputs_producing(self, output):
        """Map each sampled word to how often it released ``output``."""
        return {
            record.word: record.outputs[output]
            for record in self.records
            if output in record.outputs
        }

    def to_rows(self):
        """One row per word."""
        return [
            {
                "word": record.word,
                "runs": record.runs,
                "n_w": record.n_w,
                "s_w": record.s_w,
                "k_w": record.k_w,
                "h0": record.h0,
                "h_inf": record.h_inf,
            }
            for record in self.records
        ]

    def to_dict(self):
        """Aggregates and per-word rows."""
        return {
            "epsilon": self.epsilon,
            "geometry": self.geometry,
            "runs": self.runs,
            "words": len(self.records),
            "avg_n_w": self.avg_n_w,
            "max_n_w": self.max_n_w,
            "avg_s_w": self.avg_s_w,
            "min_k_w": self.min_k_w,
            "records": self.to_rows(),
        }


def _mechanism_config(vocab, epsilon, config):
    if config is None:
        return MechanismConfig(epsilon=epsilon, geometry=vocab.geometry)
    return config.replace(epsilon=epsilon, geometry=vocab.geometry)


def resolve_sample(vocab, word_sample=None, seed=0):
    """Return the sorted word ids selected by ``word_sample``.

    :param word_sample: ``None`` for the whole vocabulary, an integer for a
        seeded random subset of that size, or an iterable of words.
    """
    if word_sample is None:
        ids = range(len(vocab))
    elif isinstance(word_sample, (int, np.integer)):
        size = min(int(word_sample), len(vocab))
        rng = make_rng(seed, SAMPLE_STREAM)
        ids = rng.choice(len(vocab), size=max(size, 0), replace=False)
    else:
        ids = {vocab.resolve(word) for word in word_sample}
    ids = sorted(int(i) for i in ids)
    if not ids:
        raise EmptySampleError(_("No words selected for estimation."))
    return ids


def compute_kw(outputs, vocab):
    """Compute ``k_w`` from the observed outputs of each word.

    For an input ``w`` with observed outputs ``O``, each output lying above
    ``w`` is paired with the number of members of ``O`` lying below it;
    ``k_w`` is the smallest such number, and 0 when no output lies above
    ``w``.

    :param outputs: Mapping of word (or id) to an iterable of released words
        (or ids).
    :param vocab: A hyperbolic :class:`~.embeddings.Vocabulary`.
    :returns: Mapping of the same keys to ``k_w``.
    """
    if vocab.geometry != "hyperbolic":
        raise GeometryError(_("The hierarchy is only defined for hyperbolic words."))
    norms = vocab.norms
    result = {}
    for word, released in outputs.items():
        observed = np.array(sorted({vocab.resolve(output) for output in released}))
        if observed.size == 0:
            result[word] = 0
            continue
        observed_norms = norms[observed]
        word_norm = norms[vocab.resolve(word)]
        above = observed_norms[word_norm > observed_norms + NORM_TOLERANCE]
        result[word] = min(
            (
                int(np.count_nonzero(observed_norms > norm_above + NORM_TOLERANCE))
                for norm_above in above
            ),
            default=0,
        )
    return result


def estimate_stats(vocab, epsilon, runs, word_sample=None, seed=0, config=None):
    """Run the mechanism ``runs`` times on sampled words and tally the outputs.

    :param vocab: A :class:`~.embeddings.Vocabulary`.
    :param epsilon: Privacy parameter.
    :param runs: Mechanism runs per word, ``>= 1``.
    :param word_sample: See :func:`resolve_sample`.
    :param seed: Master seed.
    :param config: Optional :class:`~.mechanism.MechanismConfig` carrying
        sampler and noise settings.
    :returns: A :class:`PrivacyStats`.
    """
    if runs < 1:
        raise ValueError(_("At least one run is required."))
    config = _mechanism_config(vocab, epsilon, config)
    ids = resolve_sample(vocab, word_sample, seed=seed)

    tallies = {}
    for word_id in ids:
        rng = make_rng(seed, WORD_STREAM, word_id)
        released = perturb_batch(word_id, vocab, config, rng, runs)
        counts = np.bincount(released, minlength=len(vocab))
        tallies[word_id] = counts

    kw = {}
    if vocab.geometry == "hyperbolic":
        kw = compute_kw(
            {word_id: np.flatnonzero(counts) for word_id, counts in tallies.items()},
            vocab,
        )

    records = []
    for word_id, counts in tallies.items():
        nonzero = np.flatnonzero(counts)
        records.append(
            WordRecord(
                word=vocab.words[word_id],
                runs=runs,
                n_w=int(counts[word_id]),
                s_w=int(nonzero.size),
                k_w=kw.get(word_id),
                outputs={vocab.words[i]: int(counts[i]) for i in nonzero},
            )
        )
    return PrivacyStats(
        records=tuple(records),
        epsilon=float(epsilon),
        geometry=vocab.geometry,
        runs=runs,
        seed=seed,
    )


def entropy_proxies(stats):
    """Per-word entropy estimates.

    :returns: Mapping of word to ``{"h0": ..., "h_inf": ...}``.
    """
    return {
        record.word: {"h0": record.h0, "h_inf": record.h_inf}
        for record in stats.records
    }


@dataclass(frozen=True)
class CalibrationPoint:
    """Euclidean statistics at one privacy parameter of the search grid."""

    epsilon: float
    worst_n_w: int
    expected_n_w: float


@dataclass(frozen=True)
class CalibrationReport:
    """Hyperbolic statistics and the matching Euclidean parameter."""

    hyperbolic_epsilon: float
    euclidean_epsilon: float
    hyperbolic_worst_n_w: int
    euclidean_worst_n_w: int
    hyperbolic_expected_n_w: float
    euclidean_expected_n_w: float
    runs: int
    words: tuple
    seed: int
    grid: tuple = ()

    @property
    def worst_case_gap(self):
        """Relative difference of the matched worst-case statistics."""
        reference = max(self.hyperbolic_worst_n_w, 1)
        return abs(self.euclidean_worst_n_w - self.hyperbolic_worst_n_w) / reference

    def to_dict(self):
        """Return the report as a JSON-compatible dictionary."""
        return {
            "hyperbolic": {
                "epsilon": self.hyperbolic_epsilon,
                "worst_n_w": self.hyperbolic_worst_n_w,
                "expected_n_w": self.hyperbolic_expected_n_w,
            },
            "euclidean": {
                "epsilon": self.euclidean_epsilon,
                "worst_n_w": self.euclidean_worst_n_w,
                "expected_n_w": self.euclidean_expected_n_w,
            },
            "runs": self.runs,
            "seed": self.seed,
            "words": list(self.words),
            "grid": [
                {
                    "epsilon": point.epsilon,
                    "worst_n_w": point.worst_n_w,
                    "expected_n_w": point.expected_n_w,
                }
                for point in self.grid
            ],
        }

    def to_rows(self):
        """One row per searched Euclidean parameter."""
        return [
            {
                "euclidean_epsilon": point.epsilon,
                "worst_n_w": point.worst_n_w,
                "expected_n_w": point.expected_n_w,
                "selected": point.epsilon == self.euclidean_epsilon,
            }
            for point in self.grid
        ]


def calibrate_euclidean(
    hyp_vocab,
    euc_vocab,
    hyp_epsilon,
    runs,
    grid,
    word_sample=None,
    seed=0,
    config=None,
):
    """Find the Euclidean parameter matching a hyperbolic worst case.

    The hyperbolic worst-case ``n_w`` is the reference. Every Euclidean
    parameter of ``grid`` is evaluated on the same words with the same runs
    and seed, and the one whose worst-case ``n_w`` is closest is selected,
    the smaller parameter winning ties.

    :param grid: Euclidean privacy parameters to search.
    :param word_sample: See :func:`resolve_sample`; resolved on ``hyp_vocab``.
    :returns: A :class:`CalibrationReport`.
    """
    try:
        grid = sorted({float(epsilon) for epsilon in grid})
    except (TypeError, ValueError):
        raise CalibrationError(_("The search grid must contain numbers."))
    grid = [epsilon for epsilon in grid if math.isfinite(epsilon) and epsilon > 0]
    if not grid:
        raise CalibrationError(_("The search grid has no positive finite value."))
    if hyp_vocab.geometry != "hyperbolic" or euc_vocab.geometry != "euclidean":
        raise GeometryError(
            _("Calibration needs a hyperbolic and a Euclidean vocabulary.")
        )

    words = [hyp_vocab.words[i] for i in resolve_sample(hyp_vocab, word_sample, seed)]
    hyperbolic = estimate_stats(hyp_vocab, hyp_epsilon, runs, words, seed, config)

    points = []
    best = None
    for epsilon in grid:
        stats = estimate_stats(euc_vocab, epsilon, runs, words, seed, config)
        point = CalibrationPoint(
            epsilon=epsilon, worst_n_w=stats.max_n_w, expected_n_w=stats.avg_n_w
        )
        points.append(point)
        gap = abs(point.worst_n_w - hyperbolic.max_n_w)
        if best is None or gap < best[0]:
            best = (gap, point)

    selected = best[1]
    return CalibrationReport(
        hyperbolic_epsilon=float(hyp_epsilon),
        euclidean_epsilon=selected.epsilon,
        hyperbolic_worst_n_w=hyperbolic.max_n_w,
        euclidean_worst_n_w=selected.worst_n_w,
        hyperbolic_expected_n_w=hyperbolic.avg_n_w,
        euclidean_expected_n_w=selected.expected_n_w,
        runs=runs,
        words=tuple(words),
        seed=seed,
        grid=tuple(points),
    )


class DPStatus(Enum):
    """Verdict of :func:`empirical_dp_ratio`."""

    PASS = "PASS"
    FAIL = "FAIL"
    INSUFFICIENT_SUPPORT = "INSUFFICIENT_SUPPORT"


@dataclass(frozen=True)
class OutputRatio:
    """Log ratio of the release probabilities of one common output."""

    output: str
    count: int
    other_count: int
    log_ratio: float
    slack: float


@dataclass(frozen=True)
class DPRatioReport:
    """Empirical check of the privacy bound on a pair of words."""

    word: str
    other: str
    epsilon: float
    runs: int
    distance: float
    bound: float
    max_log_ratio: float
    status: DPStatus
    outputs: tuple
    support: int
    confidence: float
    seed: int

    @property
    def passed(self):
        """Whether every common output respects the bound."""
        return self.status is DPStatus.PASS

    def to_dict(self):
        """Return the report as a JSON-compatible dictionary."""
        return {
            "word": self.word,
            "other": self.other,
            "epsilon": self.epsilon,
            "runs": self.runs,
            "distance": self.distance,
            "bound": self.bound,
            "max_log_ratio": self.max_log_ratio,
            "status": self.status.value,
            "support": self.support,
            "confidence": self.confidence,
            "seed": self.seed,
            "outputs": self.to_rows(),
        }

    def to_rows(self):
        """One row per common output."""
        return [
            {
                "output": ratio.output,
                "count": ratio.count,
                "other_count": ratio.other_count,
                "log_ratio": ratio.log_ratio,
                "slack": ratio.slack,
                "within_bound": abs(ratio.log_ratio) <= self.bound + ratio.slack,
            }
            for ratio in self.outputs
        ]


def empirical_dp_ratio(
    word,
    other,
    vocab,
    epsilon,
    runs,
    seed=0,
    config=None,
    support=50,
    confidence=0.99,
):
    """Compare the output distributions of the mechanism on two words.

    Both words are run ``runs`` times on independent streams. For every
    output released at least ``support`` times from each word, the absolute
    log ratio of the release frequencies is compared with
    ``epsilon * d(w, w')`` plus a confidence slack. The slack is the normal
    quantile of a Bonferroni-corrected two-sided level times the
    delta-method standard error ``sqrt((1 - p) / a + (1 - q) / b)`` of the
    log ratio of two proportions.

    :returns: A :class:`DPRatioReport`.
    """
    if runs < 1:
        raise ValueError(_("At least one run is required."))
    if not 0.0 < confidence < 1.0:
        raise ValueError(_("Confidence must lie in (0, 1)."))
    config = _mechanism_config(vocab, epsilon, config)
    word_id = vocab.resolve(word)
    other_id = vocab.resolve(other)

    counts = []
    for side, input_id in enumerate((word_id, other_id)):
        rng = make_rng(seed, RATIO_STREAM, side)
        released = perturb_batch(input_id, vocab, config, rng, runs)
        counts.append(np.bincount(released, minlength=len(vocab)))
    counts, other_counts = counts

    distance = float(vocab.distance(vocab.matrix[word_id], vocab.matrix[other_id]))
    bound = float(epsilon) * distance
    common = np.flatnonzero((counts >= support) & (other_counts >= support))

    ratios = []
    if common.size:
        z = float(norm.ppf(1.0 - (1.0 - confidence) / (2.0 * common.size)))
        for output in common:
            a, b = int(counts[output]), int(other_counts[output])
            p, q = a / runs, b / runs
            ratios.append(
                OutputRatio(
                    output=vocab.words[output],
                    count=a,
                    other_count=b,
                    log_ratio=math.log(p / q),
                    slack=z * math.sqrt((1.0 - p) / a + (1.0 - q) / b),
                )
            )

    if not ratios:
        status = DPStatus.INSUFFICIENT_SUPPORT
        max_log_ratio = None
    else:
        max_log_ratio = max(abs(ratio.log_ratio) for ratio in ratios)
        violated = any(abs(ratio.log_ratio) > bound + ratio.slack for ratio in ratios)
        status = DPStatus.FAIL if violated else DPStatus.PASS

    return DPRatioReport(
        word=vocab.words[word_id],
        other=vocab.words[other_id],
        epsilon=float(epsilon),
        runs=runs,
        distance=distance,
        bound=bound,
        max_log_ratio=max_log_ratio,
        status=status,
        outputs=tuple(ratios),
        support=support,
        confidence=confidence,
        seed=seed,
    )


def indistinguishable_inputs(counts, gamma):
    """Largest set of inputs releasing an output with comparable probability.

    :param counts: Mapping of input word to how often it released the output
        (all inputs run the same number of times), e.g.
        :meth:`PrivacyStats.inputs_producing`.
    :param gamma: Maximum allowed ratio between any two probabilities.
    :returns: Sorted list of inputs; its length is the number of inputs the
        output cannot tell apart.
    """
    if gamma < 1.0:
        raise ValueError(_("Gamma must be at least 1."))
    ordered = sorted((count, word) for word, count in counts.items() if count > 0)
    best = (0, 0)
    start = 0
    for end in range(len(ordered)):
        while ordered[end][0] > gamma * ordered[start][0]:
            start += 1
        if end + 1 - start > best[1] - best[0]:
            best = (start, end + 1)
    return sorted(word for _count, word in ordered[best[0] : best[1]])
