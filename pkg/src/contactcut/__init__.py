"""Combinatorial contact cut systems and Lefschetz fibration translations."""

__version__ = "0.1.0"
