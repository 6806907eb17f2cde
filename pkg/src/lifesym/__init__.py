"""Seed evolution in the Immigration Game and ash censuses of the results."""

__version__ = "0.1.0"
