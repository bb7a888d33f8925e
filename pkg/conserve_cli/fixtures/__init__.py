"""Bundled game files."""
