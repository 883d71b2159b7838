# Configuration file for the Sphinx documentation builder.

import os
import sys
sys.path.insert(0, os.path.abspath('../mixlab/'))

html_show_sourcelink = False

project = 'mixlab'
author = 'mixlab developers'

extensions = [
    'sphinx.ext.autodoc',
    'sphinx.ext.napoleon',
    'sphinx.ext.mathjax',
    'sphinx.ext.autosectionlabel',
]

source_suffix = '.rst'
napoleon_use_param = False
napoleon_use_rtype = False
master_doc = 'index'
language = None
exclude_patterns = []
pygments_style = None
html_theme = "sphinx_rtd_theme"
htmlhelp_basename = 'mixlab_doc'
