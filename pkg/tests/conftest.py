"""Shared fixtures: cached catalog access so big rings build once per run."""
import os
import sys

sys.path.insert(0, os.path.dirname(__file__))

from skewlab.catalog import get_ring, get_map, get_system  # noqa: F401  re-exported for tests
