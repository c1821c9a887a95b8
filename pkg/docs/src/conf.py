# -*- coding: utf-8 -*-
#
# Configuration file for the Sphinx documentation builder.
import os
import sys


# -- Project information -----------------------------------------------------
project = u"csbp-sim"
copyright = u"2024, The csbp-sim Authors"
author = u"The csbp-sim Authors"


def repo_path(path):
    ret = os.path.join(os.path.dirname(__file__), '../..', path)
    return os.path.normpath(ret)


sys.path.insert(0, repo_path('src'))

extensions = [
    'sphinx.ext.autodoc',
    'sphinx.ext.autosummary',
    'sphinx.ext.coverage',
    'sphinx.ext.doctest',
    'sphinx.ext.imgmath',
    'sphinx.ext.intersphinx',
    'sphinx.ext.napoleon',
    'sphinx.ext.viewcode',
    'sphinx_autodoc_typehints',
]

import csbp  # noqa: E402
version = csbp.__version__
release = csbp.__version__

doctest_test_doctest_blocks = 'default'
source_suffix = '.rst'
master_doc = 'index'
language = 'en'
exclude_patterns = ['_build', 'env', 'tmp', 'Thumbs.db', '.DS_Store']
todo_include_todos = False
intersphinx_mapping = {
    'python': ('https://docs.python.org/3', None),
    'numpy': ('https://numpy.org/doc/stable', None),
    'scipy': ('https://docs.scipy.org/doc/scipy', None),
}
default_role = 'any'

# -- Options for HTML output -------------------------------------------------
html_theme = "sphinx_material"
html_theme_options = {
    'nav_title': 'csbp-sim',
    'color_primary': 'indigo',
    'color_accent': 'amber',
    'globaltoc_depth': 2,
    'globaltoc_collapse': False,
    'globaltoc_includehidden': True,
}
html_sidebars = {
    "**": ["logo-text.html", "globaltoc.html", "localtoc.html", "searchbox.html"]
}
htmlhelp_basename = 'csbp-sim'

man_pages = [
    (master_doc, 'csbp', 'csbp-sim Documentation', [author], 1)
]
