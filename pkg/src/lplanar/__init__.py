"""Planar L-drawings of plane bimodal digraphs and outerplanar digraphs."""

__version__ = "0.1.0"
