"""Exact combinatorics of fs monoids, Kato fans, cone stacks and toric skeletons."""

__version__ = "0.1.0"
