"""Discourse-level temporality (past vs. future) of financial news."""

__version__ = "0.1.0"
