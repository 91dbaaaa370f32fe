#!/usr/bin/env python3
# -*- coding: utf-8 -*-
#
# dtdgraph documentation build configuration file.
#
# This file is execfile()d with the current directory set to its
# containing dir.

from datetime import date

import sphinx_rtd_theme
import dtdgraph

# -- General configuration ------------------------------------------------

extensions = [
    'sphinx.ext.autodoc',
    'sphinx.ext.doctest',
    'sphinx.ext.autosummary',
]

templates_path = ['_templates']

source_suffix = '.rst'
source_encoding = 'utf-8-sig'

master_doc = 'index'

project = 'dtdgraph'
author = 'The dtdgraph developers'
today_ = date.today()
copyright = '2026-{}, {}'.format(today_.strftime('%Y'), author)

current_version = dtdgraph.__version__
version = current_version
release = current_version

language = None

exclude_patterns = []

pygments_style = 'sphinx'

todo_include_todos = False

# -- Options for HTML output ----------------------------------------------

html_theme = 'sphinx_rtd_theme'
html_theme_path = [sphinx_rtd_theme.get_html_theme_path()]

html_static_path = ['_static']

html_last_updated_fmt = '%b %d, %Y'

html_use_index = False

html_show_sourcelink = False

htmlhelp_basename = 'dtdgraphdoc'

# -- Options for manual page output ---------------------------------------

man_pages = [
    (master_doc, 'dtdgraph', 'dtdgraph Documentation',
     [author], 1)
]
