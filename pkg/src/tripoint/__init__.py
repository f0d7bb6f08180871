"""Exact and certified tools for plane curves with many ordinary triple points."""
from __future__ import annotations

from . import curve, exactnum, gallery, hesse, isolate, plot, poly, series, singular

__version__ = "0.1.0"

__all__ = ["curve", "exactnum", "gallery", "hesse", "isolate", "plot", "poly", "series", "singular", "__version__"]
