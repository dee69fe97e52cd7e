"""Polar-form spinor fields, tensorial connections and flat tetrad backgrounds."""

__version__ = "0.1.0"
