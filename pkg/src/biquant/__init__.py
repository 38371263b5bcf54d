"""Biquantization calculus at desk scale: exact Lie-algebra polynomial and
enveloping-algebra arithmetic, admissible-graph enumeration, configuration
space weights, truncated star products, and reduction-algebra solvers."""

__version__ = "0.1.0"
