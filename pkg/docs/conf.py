# Sphinx configuration for the credalvol documentation.

import os
import sys
sys.path.insert(0, os.path.abspath('..'))
import credalvol  # noqa: E402

extensions = ['sphinx.ext.autodoc',
              'sphinx.ext.viewcode',
              'sphinx.ext.mathjax']

# Document members in source order
autodoc_member_order = 'bysource'

source_suffix = '.rst'
master_doc = 'index'
exclude_patterns = ['_build']

project = 'credalvol'
copyright = '2026, the credalvol developers'
author = 'the credalvol developers'
version = release = credalvol.__version__

pygments_style = 'sphinx'

html_theme = 'default'
htmlhelp_basename = 'credalvoldoc'

# Manual page for the command line tool
man_pages = [
    ('cli', 'credalvol', 'Volume of credal sets as an uncertainty measure',
     [author], 1)
]
