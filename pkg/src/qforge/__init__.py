"""Exact q-series arithmetic and Bailey-pair machinery for verifying q-series identities."""

__version__ = "0.1.0"
