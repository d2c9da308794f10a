"""Saddle-node arcs of 1D maps and the horseshoe family built from them."""

__version__ = "0.1.0"
