"""
oval - minimax invariant of convex curves
Exact section algorithm for convex polygons, approximation bounds for
smooth convex curves and the isoperimetric experiments built on them.
"""

__version__ = "1.0.0"
__author__ = "oval maintainers"
