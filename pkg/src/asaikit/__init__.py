"""Exact-arithmetic toolkit for twisted Asai L-series, their interpolating
distributions, Eisenstein q-expansions, and finite-level p-adic congruence
checks."""

__version__ = "0.1.0"
