"""Exact machinery for supersymmetric XXX Bethe ansatz solutions:
difference-operator algebra, reproduction procedures, populations,
superflag factorizations and the two-dimensional appendix model."""

__version__ = "0.1.0"
