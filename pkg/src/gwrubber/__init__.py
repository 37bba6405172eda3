"""Exact generating-function machinery for rubber and relative invariants."""
