"""Exact computations with affine actions of groups on Lambda-trees."""

__version__ = "0.1.0"
