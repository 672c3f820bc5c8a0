# This file is a part of the faster_er project
#
#    Copyright (C) 2026 faster_er contributors
#
# This Source Code Form is subject to the terms of the Mozilla Public License,
# v. 2.0. If a copy of the MPL was not distributed with this file,You can
# obtain one at http://mozilla.org/MPL/2.0/.
#
# FasterER documentation build configuration file.
import os
import sys
sys.path.insert(0, os.path.abspath('../../'))

here = os.path.abspath(os.path.dirname(__file__))
with open(os.path.join(here, '..', '..', 'VERSION'), encoding='utf-8') as fp:
    release = fp.read().strip()

# -- General configuration ------------------------------------------------

extensions = ['sphinx.ext.autodoc']
templates_path = ['_templates']
source_suffix = '.rst'
master_doc = 'index'

project = 'FasterER'
copyright = '2026, faster_er contributors'
author = 'faster_er contributors'
version = release

language = 'en'
exclude_patterns = []
pygments_style = 'sphinx'
todo_include_todos = False

autodoc_member_order = 'bysource'

# -- Options for HTML output ----------------------------------------------

html_theme = 'alabaster'
html_static_path = []
html_sidebars = {
    '**': [
        'about.html',
        'navigation.html',
        'relations.html',
        'searchbox.html',
    ]
}
htmlhelp_basename = 'FasterERdoc'

# -- Options for LaTeX output ---------------------------------------------

latex_documents = [
    (master_doc, 'FasterER.tex', 'FasterER Documentation',
     author, 'manual'),
]

man_pages = [
    (master_doc, 'faster_er', 'FasterER Documentation', [author], 1)
]
