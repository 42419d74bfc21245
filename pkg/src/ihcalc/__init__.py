"""Intersection homology of stratified simplicial pseudomanifolds, with
Witt condition checking and Witt group arithmetic over exact coefficients."""

__version__ = "0.1.0"
