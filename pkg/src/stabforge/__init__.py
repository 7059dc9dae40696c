"""stabforge: exact Lie-theoretic invariant and stabilizer computations."""

SCHEMA_VERSION = "1"

__version__ = "0.1.0"
