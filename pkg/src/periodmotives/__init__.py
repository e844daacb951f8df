"""Exact period calculator for 1-motives."""
