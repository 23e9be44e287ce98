"""Returns features of the ddtlab repository (e.g. version number)."""

from .version import __version__ as v

# repo version number
__version__ = v
