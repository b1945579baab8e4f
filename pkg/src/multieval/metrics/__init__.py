"""Bundled metric implementations, grouped by task family."""

from . import base, classification, generation, labeling  # noqa: F401
