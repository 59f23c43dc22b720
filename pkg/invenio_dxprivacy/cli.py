# -*- coding: utf-8 -*-
#
# This file is part of Invenio.
# Copyright (C) 2026 CERN.
#
# Invenio is free software; you can redistribute it and/or modify it
# under the terms of the MIT License; see LICENSE file for more details.

"""Command line interface.

Exit codes: 0 success, 1 data error, 2 usage error, 3 failed privacy check,
4 insufficient support for a privacy check.
"""

import json
from contextlib import contextmanager

import click
from flask import Flask, current_app
from flask.cli import ScriptInfo, with_appcontext
from invenio_i18n import InvenioI18N
from marshmallow import ValidationError

from .density import MEASURES, normalization_z
from .embeddings import GEOMETRIES, generate_synthetic_taxonomy, save_embeddings
from .errors import DXPrivacyError
from .ext import InvenioDXPrivacy
from .mechanism import NOISE_MODES, redact_text, tokenize
from .proxies import current_dxprivacy
from .reports import build_metadata, dumps_rows
from .sampler import PROPOSALS, mh_sample
from .stats import (
    DPStatus,
    calibrate_euclidean,
    empirical_dp_ratio,
    estimate_stats,
)
from .stopwords import load_stopwords
from .utils import make_rng, serializer

EXIT_FAIL = 3
EXIT_INSUFFICIENT_SUPPORT = 4

ACCEPTANCE_RANGE = (0.05, 0.95)
"""Acceptance rates outside this range are logged as degenerate."""


@contextmanager
def _errors():
    """Translate library errors into click exceptions."""
    try:
        yield
    except ValidationError as exc:
        raise click.UsageError(json.dumps(exc.messages, sort_keys=True))
    except (DXPrivacyError, OSError) as exc:
        raise click.ClickException(str(exc))
    except ValueError as exc:
        raise click.UsageError(str(exc))


def _options(*options):
    def decorator(f):
        for option in reversed(options):
            f = option(f)
        return f

    return decorator


epsilon_option = click.option(
    "--epsilon",
    "-e",
    type=click.FloatRange(min=0, min_open=True),
    help="Privacy parameter (default: DXPRIVACY_EPSILON).",
)
seed_option = click.option(
    "--seed",
    type=click.IntRange(min=0, max=2**64 - 1),
    help="Master seed (default: DXPRIVACY_SEED).",
)
output_option = click.option(
    "--output",
    "-o",
    type=click.File("w", encoding="utf-8", lazy=True),
    default="-",
    help="Output file (default: standard output).",
)
format_option = click.option(
    "--format",
    "report_format",
    default="json",
    help="Report format, one of DXPRIVACY_REPORT_FORMATS.",
)
embeddings_options = _options(
    click.option(
        "--embeddings",
        type=click.Path(exists=True, dir_okay=False),
        help="Embedding file (default: DXPRIVACY_EMBEDDINGS).",
    ),
    click.option("--geometry", type=click.Choice(GEOMETRIES)),
    click.option(
        "--clamp/--no-clamp",
        default=None,
        help="Retract rows outside the Poincaré ball instead of failing.",
    ),
)
sampler_options = _options(
    click.option("--burn-in", type=click.IntRange(min=0)),
    click.option("--proposal-scale", type=click.FloatRange(min=0, min_open=True)),
    click.option("--proposal", type=click.Choice(PROPOSALS)),
    click.option("--measure", type=click.Choice(MEASURES)),
    click.option("--thin", type=click.IntRange(min=1)),
    click.option("--chains", type=click.IntRange(min=1)),
)
noise_option = click.option(
    "--noise",
    "noise_mode",
    type=click.Choice(NOISE_MODES),
    help="How hyperbolic noise is applied (default: DXPRIVACY_NOISE_MODE).",
)
runs_option = click.option(
    "--runs",
    type=click.IntRange(min=1),
    help="Mechanism runs per word (default: DXPRIVACY_RUNS).",
)


def _seed(seed):
    return current_dxprivacy.seed if seed is None else seed


def _runs(runs):
    return current_app.config["DXPRIVACY_RUNS"] if runs is None else runs


def _vocabulary(embeddings, geometry, clamp):
    if embeddings is None:
        if not current_app.config["DXPRIVACY_EMBEDDINGS"]:
            raise click.UsageError("Missing option '--embeddings'.")
        if geometry is None and clamp is None:
            return current_dxprivacy.vocabulary
        embeddings = current_app.config["DXPRIVACY_EMBEDDINGS"]
    return current_dxprivacy.load_vocabulary(embeddings, geometry=geometry, clamp=clamp)


def _serializer(report_format):
    if report_format not in current_app.config["DXPRIVACY_REPORT_FORMATS"]:
        raise click.BadParameter(
            "Unknown format: {0}.".format(report_format), param_hint="--format"
        )
    return serializer(report_format)


def _check_acceptance(acceptance_rate):
    low, high = ACCEPTANCE_RANGE
    if not low < acceptance_rate < high:
        current_app.logger.warning(
            "Degenerate acceptance rate %.3f; consider changing the proposal scale.",
            acceptance_rate,
        )


@click.group()
def dxprivacy():
    """Metric differential privacy on word embeddings."""


@dxprivacy.command()
@click.option(
    "--input",
    "-i",
    "input_",
    type=click.File("r", encoding="utf-8"),
    default="-",
    help="Text with one query per line (default: standard input).",
)
@output_option
@click.option(
    "--status-out",
    type=click.File("w", encoding="utf-8", lazy=True),
    help="Write the status of every token as TSV.",
)
@embeddings_options
@epsilon_option
@seed_option
@click.option("--policy", help="all, nonstop or slots:<i,j,...> (0-based).")
@click.option(
    "--stopwords",
    type=click.Path(exists=True, dir_okay=False),
    help="File with one stopword per line.",
)
@noise_option
@sampler_options
@with_appcontext
def redact(
    input_,
    output,
    status_out,
    embeddings,
    geometry,
    clamp,
    epsilon,
    seed,
    policy,
    stopwords,
    noise_mode,
    **overrides,
):
    """Release a private version of each input line."""
    with _errors():
        vocab = _vocabulary(embeddings, geometry, clamp)
        config = current_dxprivacy.mechanism_config(
            epsilon=epsilon,
            geometry=vocab.geometry,
            policy=policy,
            noise_mode=noise_mode,
            **overrides,
        )
        if stopwords:
            config = config.replace(stopwords=load_stopwords(stopwords))
        seed = _seed(seed)

        rows = []
        for line_number, line in enumerate(input_, start=1):
            result = redact_text(
                tokenize(line), vocab, config, make_rng(seed, line_number)
            )
            output.write(result.text + "\n")
            if status_out is not None:
                rows.extend(
                    dict(line=line_number, **row) for row in result.to_rows()
                )
        if status_out is not None:
            metadata = build_metadata(
                seed,
                epsilon=config.epsilon,
                geometry=vocab.geometry,
                checksum=vocab.checksum,
                policy=str(config.policy),
            )
            status_out.write(dumps_rows(rows, metadata))


@dxprivacy.command()
@click.option("--dim", "-n", type=click.IntRange(min=1), required=True)
@epsilon_option
@click.option("--count", "-k", type=click.IntRange(min=1), default=1000)
@seed_option
@sampler_options
@format_option
@output_option
@with_appcontext
def sample(dim, epsilon, count, seed, report_format, output, **overrides):
    """Draw hyperbolic noise vectors."""
    with _errors():
        dumps = _serializer(report_format)
        config = current_dxprivacy.sampler_config(
            dim, epsilon=epsilon, seed=_seed(seed), count=count, **overrides
        )
        stream = mh_sample(config)
        _check_acceptance(stream.acceptance_rate)
        if stream.clamp_count:
            current_app.logger.warning(
                "%d proposals were retracted into the ball.", stream.clamp_count
            )
        extra = {}
        if dim == 1 and config.measure == "lebesgue":
            extra["normalization"] = normalization_z(
                config.epsilon,
                max_terms=current_app.config["DXPRIVACY_HYP2F1_MAX_TERMS"],
            )
        metadata = build_metadata(
            config.seed,
            epsilon=config.epsilon,
            geometry="hyperbolic",
            acceptance_rate=stream.acceptance_rate,
            clamp_count=stream.clamp_count,
            lag1_autocorrelation=stream.lag1_autocorrelation,
            proposal=config.proposal,
            measure=config.measure,
            **extra,
        )
        output.write(dumps(stream, metadata))


@dxprivacy.command()
@embeddings_options
@epsilon_option
@runs_option
@click.option("--sample", "word_sample", type=click.IntRange(min=1))
@seed_option
@noise_option
@sampler_options
@format_option
@output_option
@with_appcontext
def stats(
    embeddings,
    geometry,
    clamp,
    epsilon,
    runs,
    word_sample,
    seed,
    noise_mode,
    report_format,
    output,
    **overrides,
):
    """Estimate per-word privacy statistics."""
    with _errors():
        dumps = _serializer(report_format)
        vocab = _vocabulary(embeddings, geometry, clamp)
        config = current_dxprivacy.mechanism_config(
            epsilon=epsilon, geometry=vocab.geometry, noise_mode=noise_mode, **overrides
        )
        seed = _seed(seed)
        result = estimate_stats(
            vocab,
            config.epsilon,
            _runs(runs),
            word_sample=word_sample,
            seed=seed,
            config=config,
        )
        metadata = build_metadata(
            seed,
            epsilon=config.epsilon,
            geometry=vocab.geometry,
            checksum=vocab.checksum,
        )
        output.write(dumps(result, metadata))


@dxprivacy.command()
@click.option(
    "--hyperbolic",
    type=click.Path(exists=True, dir_okay=False),
    required=True,
    help="Hyperbolic embedding file.",
)
@click.option(
    "--euclidean",
    type=click.Path(exists=True, dir_okay=False),
    required=True,
    help="Euclidean embedding file with the same words.",
)
@click.option("--clamp/--no-clamp", default=None)
@epsilon_option
@click.option(
    "--grid",
    type=click.FloatRange(min=0, min_open=True),
    multiple=True,
    help="Euclidean parameter to search; repeat for several "
    "(default: DXPRIVACY_EPSILON_GRID).",
)
@runs_option
@click.option("--sample", "word_sample", type=click.IntRange(min=1))
@seed_option
@noise_option
@sampler_options
@format_option
@output_option
@with_appcontext
def calibrate(
    hyperbolic,
    euclidean,
    clamp,
    epsilon,
    grid,
    runs,
    word_sample,
    seed,
    noise_mode,
    report_format,
    output,
    **overrides,
):
    """Match a Euclidean parameter to a hyperbolic one."""
    with _errors():
        dumps = _serializer(report_format)
        hyp_vocab = current_dxprivacy.load_vocabulary(
            hyperbolic, geometry="hyperbolic", clamp=clamp
        )
        euc_vocab = current_dxprivacy.load_vocabulary(
            euclidean, geometry="euclidean", clamp=clamp
        )
        config = current_dxprivacy.mechanism_config(
            epsilon=epsilon, noise_mode=noise_mode, **overrides
        )
        seed = _seed(seed)
        report = calibrate_euclidean(
            hyp_vocab,
            euc_vocab,
            config.epsilon,
            _runs(runs),
            grid or current_app.config["DXPRIVACY_EPSILON_GRID"],
            word_sample=word_sample,
            seed=seed,
            config=config,
        )
        metadata = build_metadata(
            seed,
            epsilon=config.epsilon,
            hyperbolic_checksum=hyp_vocab.checksum,
            euclidean_checksum=euc_vocab.checksum,
        )
        output.write(dumps(report, metadata))


@dxprivacy.command("check-dp")
@click.argument("word")
@click.argument("other")
@embeddings_options
@epsilon_option
@runs_option
@seed_option
@click.option(
    "--support",
    type=click.IntRange(min=1),
    help="Minimum count per side (default: DXPRIVACY_SUPPORT_THRESHOLD).",
)
@click.option(
    "--confidence",
    type=click.FloatRange(min=0, max=1, min_open=True, max_open=True),
    help="Family-wise confidence (default: DXPRIVACY_CONFIDENCE).",
)
@noise_option
@sampler_options
@format_option
@output_option
@click.pass_context
@with_appcontext
def check_dp(
    ctx,
    word,
    other,
    embeddings,
    geometry,
    clamp,
    epsilon,
    runs,
    seed,
    support,
    confidence,
    noise_mode,
    report_format,
    output,
    **overrides,
):
    """Check the privacy bound empirically on two words."""
    with _errors():
        dumps = _serializer(report_format)
        vocab = _vocabulary(embeddings, geometry, clamp)
        config = current_dxprivacy.mechanism_config(
            epsilon=epsilon, geometry=vocab.geometry, noise_mode=noise_mode, **overrides
        )
        seed = _seed(seed)
        report = empirical_dp_ratio(
            word,
            other,
            vocab,
            config.epsilon,
            _runs(runs),
            seed=seed,
            config=config,
            support=support or current_app.config["DXPRIVACY_SUPPORT_THRESHOLD"],
            confidence=confidence or current_app.config["DXPRIVACY_CONFIDENCE"],
        )
        metadata = build_metadata(
            seed,
            epsilon=config.epsilon,
            geometry=vocab.geometry,
            checksum=vocab.checksum,
        )
        output.write(dumps(report, metadata))

    if report.status is DPStatus.FAIL:
        current_app.logger.warning(
            "Privacy bound violated for %s and %s: %.4f > %.4f.",
            report.word,
            report.other,
            report.max_log_ratio,
            report.bound,
        )
        ctx.exit(EXIT_FAIL)
    if report.status is DPStatus.INSUFFICIENT_SUPPORT:
        ctx.exit(EXIT_INSUFFICIENT_SUPPORT)


@dxprivacy.command("gen-fixture")
@click.option("--depth", type=click.IntRange(min=1), default=3)
@click.option("--branching", type=click.IntRange(min=1), default=3)
@click.option("--dim", type=click.IntRange(min=2), default=2)
@click.option("--seed", type=click.IntRange(min=0), default=0)
@click.option("--geometry", type=click.Choice(GEOMETRIES), default="hyperbolic")
@click.option("--step", type=click.FloatRange(min=0, min_open=True), default=1.5)
@click.option("--no-header", is_flag=True, help="Omit the count/dimension line.")
@click.option(
    "--output", "-o", type=click.Path(dir_okay=False, writable=True), required=True
)
@with_appcontext
def gen_fixture(depth, branching, dim, seed, geometry, step, no_header, output):
    """Write the embedding of a balanced tree."""
    with _errors():
        vocab = generate_synthetic_taxonomy(
            depth, branching, dim, seed=seed, geometry=geometry, step=step
        )
        save_embeddings(vocab, output, header=not no_header)
        current_app.logger.info("Wrote %d words to %s.", len(vocab), output)


def main():
    """Run the ``dxprivacy`` console script.

    Configuration is read from ``INVENIO_``-prefixed environment variables,
    e.g. ``INVENIO_DXPRIVACY_SEED=1234``.
    """
    app = Flask("invenio_dxprivacy")
    app.config.from_prefixed_env("INVENIO")
    InvenioI18N(app)
    InvenioDXPrivacy(app)
    dxprivacy.main(prog_name="dxprivacy", obj=ScriptInfo(create_app=lambda *args: app))
