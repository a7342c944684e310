"""Codenames Duet test bed.

Embedding-based players, pragmatic clue givers that infer the guesser's
culture from live interaction, a seeded interactive-evaluation harness, and
an analysis toolkit for probing learned representations.
"""

__version__ = "0.1.0"
