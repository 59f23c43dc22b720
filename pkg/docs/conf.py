# -*- coding: utf-8 -*-
#
# This file is part of Invenio.
# Copyright (C) 2026 CERN.
#
# Invenio is free software; you can redistribute it and/or modify it
# under the terms of the MIT License; see LICENSE file for more details.

"""Sphinx configuration."""

from invenio_dxprivacy import __version__

# -- General configuration ------------------------------------------------

# Do not warn on external images.
suppress_warnings = ["image.nonlocal_uri"]

extensions = [
    "sphinx.ext.autodoc",
    "sphinx.ext.coverage",
    "sphinx.ext.doctest",
    "sphinx.ext.intersphinx",
    "sphinx.ext.mathjax",
    "sphinx.ext.viewcode",
]

# Dataclass fields and numpy aliases documented with plain names.
nitpick_ignore = [
    ("py:class", "np.ndarray"),
    ("py:class", "numpy.ndarray"),
    ("py:class", "numpy.random.Generator"),
    ("py:data", "WordId"),
]

templates_path = ["_templates"]

source_suffix = ".rst"

master_doc = "index"

# General information about the project.
project = "Invenio-DXPrivacy"
copyright = "2026, CERN"
author = "CERN"

# The short X.Y version and the full version, including alpha/beta/rc tags.
version = ".".join(__version__.split(".")[:2])
release = __version__

language = "en"

exclude_patterns = ["_build"]

pygments_style = "sphinx"

todo_include_todos = False

# -- Options for HTML output ----------------------------------------------

html_theme = "alabaster"

html_theme_options = {
    "description": "Metric differential privacy on hyperbolic word embeddings.",
    "github_user": "inveniosoftware",
    "github_repo": "invenio-dxprivacy",
    "github_button": False,
    "github_banner": True,
    "show_powered_by": False,
    "extra_nav_links": {
        "invenio-dxprivacy@GitHub": "https://github.com/inveniosoftware/invenio-dxprivacy",
        "invenio-dxprivacy@PyPI": "https://pypi.python.org/pypi/invenio-dxprivacy/",
    },
}

html_sidebars = {
    "**": [
        "about.html",
        "navigation.html",
        "relations.html",
        "searchbox.html",
    ]
}

htmlhelp_basename = "invenio-dxprivacy_namedoc"

# -- Options for LaTeX, manual page and Texinfo output --------------------

latex_documents = [
    (
        master_doc,
        "invenio-dxprivacy.tex",
        "invenio-dxprivacy Documentation",
        "CERN",
        "manual",
    ),
]

man_pages = [
    (master_doc, "invenio-dxprivacy", "invenio-dxprivacy Documentation", [author], 1)
]

texinfo_documents = [
    (
        master_doc,
        "invenio-dxprivacy",
        "Invenio-DXPrivacy Documentation",
        author,
        "invenio-dxprivacy",
        "Metric differential privacy on hyperbolic word embeddings.",
        "Miscellaneous",
    ),
]

# Example configuration for intersphinx: refer to the Python standard library.
intersphinx_mapping = {
    "python": ("https://docs.python.org/3/", None),
    "flask": ("https://flask.palletsprojects.com/en/2.0.x/", None),
    "numpy": ("https://numpy.org/doc/stable/", None),
    "scipy": ("https://docs.scipy.org/doc/scipy/", None),
    "marshmallow": ("https://marshmallow.readthedocs.io/en/stable/", None),
}

# Autodoc configuraton.
autoclass_content = "both"
