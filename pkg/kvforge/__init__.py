"""
KVForge Package

Exact, degree-truncated computation in free Lie algebras, tangential
derivations and cyclic words, with checkers and solvers for the
Kashiwara-Vergne, KRV and grt_1 equations and the wiring diagram operad.
"""

__version__ = "0.1.0"
