"""Desk-scale DSA reconstruction lab: phantom, network, training, metrics."""

__version__ = "0.1.0"
