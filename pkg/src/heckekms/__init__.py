"""Hecke algebras of affine pairs over Q and quadratic fields, with KMS and ground states."""

__version__ = "0.1.0"
