"""Affine-logic toolkit: formulas, antithesis translation, pair semantics,
cut intervals, finite Heine-Borel subcovers, and finite-model topology checks."""

__version__ = "0.1.0"
