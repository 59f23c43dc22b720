# -*- coding: utf-8 -*-
#
# This file is part of Invenio.
# Copyright (C) 2026 CERN.
#
# Invenio is free software; you can redistribute it and/or modify it
# under the terms of the MIT License; see LICENSE file for more details.

"""Report serializers.

A serializer takes a report exposing ``to_dict()`` and ``to_rows()`` and a
metadata mapping, and returns text. Serializers are looked up by format name
from ``DXPRIVACY_REPORT_FORMATS``.
"""

import json
import math

from . import __version__
from .sampler import NoiseStream
from .stats import CalibrationReport, DPRatioReport, PrivacyStats

TOOL_NAME = "invenio-dxprivacy"

SCHEMAS = {
    CalibrationReport: "dxprivacy/calibration-report-v1.0.0.json",
    DPRatioReport: "dxprivacy/dp-check-v1.0.0.json",
    NoiseStream: "dxprivacy/noise-sample-v1.0.0.json",
    PrivacyStats: "dxprivacy/privacy-stats-v1.0.0.json",
}
"""JSON schema of each report type, relative to :mod:`invenio_dxprivacy.schemas`."""


def build_metadata(seed, epsilon=None, geometry=None, checksum=None, **extra):
    """Metadata attached to every machine-readable output."""
    metadata = {"tool": TOOL_NAME, "version": __version__, "seed": seed}
    if epsilon is not None:
        metadata["epsilon"] = epsilon
    if geometry is not None:
        metadata["geometry"] = geometry
    if checksum is not None:
        metadata["embeddings_checksum"] = checksum
    metadata.update(extra)
    return metadata


def _sanitize(value):
    """Replace non-finite floats by strings JSON can carry."""
    if isinstance(value, float) and not math.isfinite(value):
        return str(value)
    if isinstance(value, dict):
        return {key: _sanitize(item) for key, item in value.items()}
    if isinstance(value, (list, tuple)):
        return [_sanitize(item) for item in value]
    return value


def format_value(value):
    """Render one TSV cell."""
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return repr(value)
    return str(value)


def dumps_rows(rows, metadata=None):
    """Render rows of dictionaries as TSV with a header line.

    :param rows: Dictionaries sharing the keys of the first row.
    :param metadata: Optional mapping written first as ``# key<TAB>value``
        lines, sorted by key.
    """
    lines = [
        "# {0}\t{1}".format(key, format_value(value))
        for key, value in sorted((metadata or {}).items())
    ]
    if rows:
        columns = list(rows[0])
        lines.append("\t".join(columns))
        for row in rows:
            cells = (format_value(row.get(column)) for column in columns)
            lines.append("\t".join(cells))
    return "\n".join(lines) + "\n" if lines else ""


def dumps_json(report, metadata):
    """Serialize a report and its metadata as JSON."""
    payload = {"metadata": dict(metadata), "report": report.to_dict()}
    schema = SCHEMAS.get(type(report))
    if schema:
        payload["$schema"] = schema
    return (
        json.dumps(_sanitize(payload), indent=2, sort_keys=True, allow_nan=False)
        + "\n"
    )


def dumps_tsv(report, metadata):
    """Serialize a report as TSV preceded by ``# key<TAB>value`` metadata lines."""
    return dumps_rows(report.to_rows(), metadata)
