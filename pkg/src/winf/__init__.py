"""Exact computations for the W-infinity algebras of differential operators
on the circle, their classical subalgebras and free-field realizations."""

__version__ = "0.1.0"
