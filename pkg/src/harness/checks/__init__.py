"""
Registered verification checks.

Importing this package registers every check with ``src.harness.registry``.
"""

from src.harness.checks import azema, laws, minorant, samplers, straddle

__all__ = ["azema", "laws", "minorant", "samplers", "straddle"]
