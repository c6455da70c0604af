"""
Copyright 2026 pyWmlr contributors

WMLR library - python -m pyWmlr
"""


import sys
from .cli import main

sys.exit(main())
