"""konvex: exact and sampled convex-analysis calculus with executable characterizations
of strict and almost strict convexity."""
__version__ = "0.1.0"
