"""Exact enumeration toolkit for partially directed snake polyominoes."""

__version__ = "0.1.0"
