"""Specifies the current version number of ddtlab."""

__version__ = "0.1.0"
