"""Exact solvers for Connected Maximum Cut and Maximum Minimal Cut."""
