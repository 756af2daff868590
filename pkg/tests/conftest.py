"""Shared pytest configuration for the phylocover test suite.

Adds the repository root to ``sys.path`` so test modules can import the
flat top-level modules without installing the project.  Small graph
builders shared between modules live in ``_graphs.py`` next to this file.
"""

from __future__ import annotations

import sys
from pathlib import Path

ROOT = Path(__file__).resolve().parent.parent

if str(ROOT) not in sys.path:
    sys.path.insert(0, str(ROOT))
