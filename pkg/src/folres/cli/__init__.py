"""CLI helpers for folres."""
