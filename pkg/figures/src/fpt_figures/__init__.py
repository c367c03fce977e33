"""Rendering for extreme-fpt figure bundles (CSV series + manifest contract)."""

from .bundle import BundleError, FigureBundle, Series, load_bundle
from .render import render

__version__ = "0.1.0"

__all__ = ["BundleError", "FigureBundle", "Series", "load_bundle", "render"]
