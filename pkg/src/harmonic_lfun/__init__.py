"""harmonic-lfun: Generalized L-functions of polar harmonic Maass forms."""

from importlib.metadata import version

__version__ = version("harmonic-lfun")
