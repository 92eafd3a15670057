"""Minimal and maximal order-k color Voronoi diagrams with exact verification."""
