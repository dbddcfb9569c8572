"""Recommend generic fix hints for new bug reports from a project's bug/fix history."""

__version__ = "0.1.0"
