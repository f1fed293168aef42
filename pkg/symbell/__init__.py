"""Symmetric multipartite Bell inequalities and GHZ visibilities."""
from symbell.version import version as __version__  # noqa: F401
