# -*- coding: utf-8 -*-
#
# This file is part of Invenio.
# Copyright (C) 2026 CERN.
#
# Invenio is free software; you can redistribute it and/or modify it
# under the terms of the MIT License; see LICENSE file for more details.

"""Privacy statistics tests."""

import itertools
import math

import numpy as np
import pytest
from scipy.stats import norm

from invenio_dxprivacy.embeddings import Vocabulary
from invenio_dxprivacy.errors import (
    CalibrationError,
    EmptySampleError,
    GeometryError,
    UnknownWordError,
)
from invenio_dxprivacy.mechanism import MechanismConfig
from invenio_dxprivacy.stats import (
    DPStatus,
    WordRecord,
    calibrate_euclidean,
    compute_kw,
    empirical_dp_ratio,
    entropy_proxies,
    estimate_stats,
    indistinguishable_inputs,
    resolve_sample,
)

TREND_GRID = (0.125, 0.5, 1.0, 2.0, 8.0)

FINE_GRID = [2.0 ** (k / 4) for k in range(-12, 41)]


def test_word_record_entropies():
    """Test the entropy estimates of a record."""
    record = WordRecord(word="w", runs=1000, n_w=250, s_w=8)
    assert record.h0 == 3.0
    assert record.h_inf == 2.0
    assert WordRecord(word="w", runs=10, n_w=10, s_w=1).h_inf == 0.0
    assert WordRecord(word="w", runs=10, n_w=0, s_w=3).h_inf == math.inf


def test_resolve_sample(taxonomy):
    """Test the selection of sampled words."""
    assert resolve_sample(taxonomy) == list(range(40))
    assert resolve_sample(taxonomy, ["n_1", "n"]) == [0, 2]

    sample = resolve_sample(taxonomy, 5, seed=3)
    assert len(sample) == 5
    assert sample == sorted(set(sample))
    assert sample == resolve_sample(taxonomy, 5, seed=3)
    assert resolve_sample(taxonomy, 100) == list(range(40))

    with pytest.raises(EmptySampleError):
        resolve_sample(taxonomy, [])
    with pytest.raises(UnknownWordError):
        resolve_sample(taxonomy, ["london"])


def test_compute_kw(taxonomy, euclidean_taxonomy):
    """Test the hierarchy-based count on hand-made outputs."""
    leaf = "n_0_0_0"
    outputs = {
        leaf: [leaf],
        "n_0_0_1": [leaf, "n_0", "n_0_0_1", "n_0_1_2"],
        "n_0_1_2": [leaf, "n", "n_0", "n_0_0_1", "n_0_1_2"],
    }
    result = compute_kw(outputs, taxonomy)
    assert result[leaf] == 0
    # n_0 lies above the input and n_0_0_0, n_0_0_1, n_0_1_2 lie below n_0.
    assert result["n_0_0_1"] == 3
    # n lies above n_0 as well; the smallest count wins.
    assert result["n_0_1_2"] == 3

    assert compute_kw({"n": ["n_0", "n_1"]}, taxonomy) == {"n": 0}
    assert compute_kw({"n_1": []}, taxonomy) == {"n_1": 0}
    with pytest.raises(GeometryError):
        compute_kw({"n": ["n"]}, euclidean_taxonomy)


def test_estimate_stats(taxonomy):
    """Test the tallies of a small run."""
    stats = estimate_stats(taxonomy, 1.0, 50, word_sample=["n_0", "n_1_1"], seed=2)
    assert [record.word for record in stats.records] == ["n_0", "n_1_1"]
    assert stats.runs == 50
    assert stats.geometry == "hyperbolic"
    for record in stats.records:
        assert 0 <= record.n_w <= record.runs
        assert 1 <= record.s_w <= record.runs
        assert record.k_w <= record.s_w
        assert sum(record.outputs.values()) == 50
        assert record.outputs.get(record.word, 0) == record.n_w
        assert len(record.outputs) == record.s_w

    assert stats.max_n_w == max(record.n_w for record in stats.records)
    assert stats["n_0"] is stats.records[0]
    with pytest.raises(KeyError):
        stats["n"]

    data = stats.to_dict()
    assert data["words"] == 2
    assert data["avg_n_w"] == stats.avg_n_w
    assert [row["word"] for row in data["records"]] == ["n_0", "n_1_1"]
    assert set(entropy_proxies(stats)["n_0"]) == {"h0", "h_inf"}
    assert stats.inputs_producing("n_0")["n_0"] == stats["n_0"].n_w


def test_estimate_stats_per_word_streams(taxonomy):
    """Test that a word's tallies do not depend on the other sampled words."""
    alone = estimate_stats(taxonomy, 1.0, 30, word_sample=["n_2_1"], seed=4)
    together = estimate_stats(
        taxonomy, 1.0, 30, word_sample=["n", "n_2_1", "n_0_0_0"], seed=4
    )
    assert alone["n_2_1"].outputs == together["n_2_1"].outputs
    assert estimate_stats(taxonomy, 1.0, 30, ["n_2_1"], seed=5) != alone

    with pytest.raises(ValueError):
        estimate_stats(taxonomy, 1.0, 0)


def test_estimate_stats_euclidean(euclidean_taxonomy):
    """Test that Euclidean vocabularies have no hierarchy count."""
    stats = estimate_stats(euclidean_taxonomy, 2.0, 20, word_sample=3, seed=1)
    assert len(stats.records) == 3
    assert stats.min_k_w is None
    assert all(record.k_w is None for record in stats.records)


def test_stats_with_large_epsilon(taxonomy):
    """Test that negligible noise releases every word itself."""
    stats = estimate_stats(taxonomy, 1e6, 100, seed=1)
    assert len(stats.records) == 40
    for record in stats.records:
        assert record.n_w / record.runs > 0.99
        assert record.s_w in (1, 2)


@pytest.mark.slow
def test_stats_trends(taxonomy):
    """Test that more privacy budget releases the input more often."""
    config = MechanismConfig(
        epsilon=1.0,
        sampler={
            "proposal": "ball",
            "proposal_scale": 0.5,
            "burn_in": 500,
            "thin": 5,
            "chains": 10,
        },
    )
    results = [
        estimate_stats(taxonomy, eps, 1000, seed=3, config=config) for eps in TREND_GRID
    ]
    avg_n_w = [stats.avg_n_w for stats in results]
    avg_s_w = [stats.avg_s_w for stats in results]
    assert all(a <= b for a, b in zip(avg_n_w, avg_n_w[1:]))
    assert all(a >= b for a, b in zip(avg_s_w, avg_s_w[1:]))
    assert avg_n_w[0] < avg_n_w[-1]
    for stats in results:
        for record in stats.records:
            assert record.n_w <= record.runs
            assert record.k_w <= record.s_w


def test_calibrate_single_epsilon(taxonomy, euclidean_taxonomy):
    """Test that a one-point grid is returned as is."""
    report = calibrate_euclidean(
        taxonomy, euclidean_taxonomy, 1.0, 20, [2.0, 2.0], word_sample=4, seed=1
    )
    assert report.euclidean_epsilon == 2.0
    assert len(report.grid) == 1
    assert report.grid[0].worst_n_w == report.euclidean_worst_n_w
    assert len(report.words) == 4
    assert report.runs == 20

    data = report.to_dict()
    assert data["hyperbolic"]["epsilon"] == 1.0
    assert data["euclidean"]["epsilon"] == 2.0
    assert report.to_rows()[0]["selected"] is True


def test_calibrate_selects_closest_worst_case(taxonomy, euclidean_taxonomy):
    """Test the grid search."""
    report = calibrate_euclidean(
        taxonomy, euclidean_taxonomy, 1.0, 30, [64.0, 0.5, 8.0], word_sample=5
    )
    assert [point.epsilon for point in report.grid] == [0.5, 8.0, 64.0]
    gaps = [abs(p.worst_n_w - report.hyperbolic_worst_n_w) for p in report.grid]
    selected = [p.epsilon for p in report.grid].index(report.euclidean_epsilon)
    assert gaps[selected] == min(gaps)
    assert gaps.index(min(gaps)) == selected


def test_calibrate_errors(taxonomy, euclidean_taxonomy):
    """Test invalid calibration requests."""
    with pytest.raises(CalibrationError):
        calibrate_euclidean(taxonomy, euclidean_taxonomy, 1.0, 10, [])
    with pytest.raises(CalibrationError):
        calibrate_euclidean(taxonomy, euclidean_taxonomy, 1.0, 10, [0.0, -1.0])
    with pytest.raises(CalibrationError):
        calibrate_euclidean(taxonomy, euclidean_taxonomy, 1.0, 10, [float("inf")])
    with pytest.raises(GeometryError):
        calibrate_euclidean(euclidean_taxonomy, taxonomy, 1.0, 10, [1.0])


@pytest.mark.slow
@pytest.mark.parametrize("eps", [0.125, 1.0, 8.0])
def test_hyperbolic_mechanism_is_less_revealing(taxonomy, euclidean_taxonomy, eps):
    """Test expected self releases at a matched worst case."""
    report = calibrate_euclidean(taxonomy, euclidean_taxonomy, eps, 1000, FINE_GRID)
    assert report.worst_case_gap <= 0.1
    assert report.hyperbolic_expected_n_w < report.euclidean_expected_n_w


def test_dp_ratio_identical_words(euclidean_taxonomy):
    """Test that a word is indistinguishable from itself."""
    report = empirical_dp_ratio("n_1", "n_1", euclidean_taxonomy, 1.0, 10000, seed=3)
    assert report.distance == 0.0
    assert report.bound == 0.0
    assert report.outputs
    assert report.status is DPStatus.PASS
    assert report.passed
    for ratio in report.outputs:
        assert ratio.count >= 50 and ratio.other_count >= 50


def test_dp_ratio_insufficient_support(taxonomy):
    """Test that too few runs give no verdict."""
    report = empirical_dp_ratio("n_0", "n_1", taxonomy, 1.0, 10)
    assert report.status is DPStatus.INSUFFICIENT_SUPPORT
    assert report.max_log_ratio is None
    assert report.outputs == ()
    assert not report.passed
    assert report.to_dict()["status"] == "INSUFFICIENT_SUPPORT"


def test_dp_ratio_detects_violations(monkeypatch):
    """Test the verdict and slack on fixed release counts."""
    vocab = Vocabulary(["a", "b"], [[0.0, 0.0], [0.1, 0.0]])
    releases = iter([np.array([0] * 900 + [1] * 100), np.array([0] * 100 + [1] * 900)])
    monkeypatch.setattr(
        "invenio_dxprivacy.stats.perturb_batch", lambda *args, **kwargs: next(releases)
    )
    report = empirical_dp_ratio("a", "b", vocab, 0.1, 1000, confidence=0.99)
    assert report.status is DPStatus.FAIL
    assert report.max_log_ratio == pytest.approx(math.log(9))

    z = norm.ppf(1 - 0.01 / 4)
    slack = z * math.sqrt(0.1 / 900 + 0.9 / 100)
    assert report.outputs[0].output == "a"
    assert report.outputs[0].slack == pytest.approx(slack)
    assert report.to_rows()[0]["within_bound"] is False


def test_dp_ratio_errors(taxonomy):
    """Test invalid arguments."""
    with pytest.raises(ValueError):
        empirical_dp_ratio("n_0", "n_1", taxonomy, 1.0, 0)
    with pytest.raises(ValueError):
        empirical_dp_ratio("n_0", "n_1", taxonomy, 1.0, 10, confidence=1.0)
    with pytest.raises(UnknownWordError):
        empirical_dp_ratio("n_0", "london", taxonomy, 1.0, 10)


@pytest.mark.slow
@pytest.mark.parametrize(
    "word,other",
    [
        ("n_0_0_0", "n_0_0_1"),
        ("n_1_2_0", "n_1_2_2"),
        ("n_0_0_2", "n_0_1_0"),
        ("n_2_1_1", "n_2_1_2"),
        ("n_0_0", "n_0_1"),
    ],
)
def test_dp_ratio_on_fixture(taxonomy, word, other):
    """Test the privacy bound on close words of the fixture."""
    config = MechanismConfig(epsilon=2.0, sampler={"chains": 1000, "thin": 10})
    report = empirical_dp_ratio(
        word, other, taxonomy, 2.0, 100000, seed=1, config=config
    )
    assert report.outputs
    assert report.status is DPStatus.PASS
    assert report.max_log_ratio <= report.bound + max(r.slack for r in report.outputs)


@pytest.mark.slow
@pytest.mark.parametrize(
    "word,other",
    [
        ("n", "n_1"),
        ("n_0", "n_0_0"),
        ("n_0_0", "n_0_0_1"),
        ("n_0_0_0", "n_0_0_1"),
        ("n_1_2_0", "n_1_2_2"),
    ],
)
def test_dp_ratio_exact_mechanism(taxonomy, word, other):
    """Test the privacy bound with noise translated to the word."""
    config = MechanismConfig(
        epsilon=2.0,
        noise_mode="mobius",
        sampler={
            "proposal": "ball",
            "proposal_scale": 0.5,
            "measure": "hyperbolic",
            "chains": 1000,
            "thin": 10,
        },
    )
    report = empirical_dp_ratio(
        word, other, taxonomy, 2.0, 100000, seed=2, config=config
    )
    assert report.status is DPStatus.PASS


@pytest.mark.slow
def test_plausible_deniability(taxonomy):
    """Test that an output is produced by several comparable inputs."""
    config = MechanismConfig(epsilon=1.0, sampler={"chains": 1000})
    inputs = ["n_0", "n_0_0", "n_0_1", "n_0_2"]
    stats = estimate_stats(taxonomy, 1.0, 100000, inputs, seed=2, config=config)
    counts = stats.inputs_producing("n_0")
    d_max = max(
        float(taxonomy.distance(taxonomy.vector(u), taxonomy.vector(v)))
        for u, v in itertools.combinations(counts, 2)
    )
    witnesses = indistinguishable_inputs(counts, math.exp(1.0 * d_max))
    assert len(witnesses) >= 2


def test_indistinguishable_inputs():
    """Test the largest set of comparable inputs."""
    counts = {"a": 100, "b": 120, "c": 400, "d": 0}
    assert indistinguishable_inputs(counts, 1.5) == ["a", "b"]
    assert indistinguishable_inputs(counts, 4.0) == ["a", "b", "c"]
    assert indistinguishable_inputs(counts, 1.0) == ["a"]
    assert indistinguishable_inputs({}, 2.0) == []
    with pytest.raises(ValueError):
        indistinguishable_inputs(counts, 0.5)
