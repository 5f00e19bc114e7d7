"""Vacuum-fluctuation modulation by a mirror on the open port of a beam splitter."""

__version__ = "0.1.0"
