"""Bundled data files (built-in stop word list)."""
