"""Sensitivity-sampling coresets for (k,l)-median clustering of curves and point sets."""

__version__ = "0.1.0"
