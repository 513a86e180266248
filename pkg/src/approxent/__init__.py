"""Graded approximate entailment over similarity spaces, chains and products of chains."""

__version__ = "0.1.0"
