"""
QB-Ring Workbench

Finite rings as dense operation tables, with exact checkers for
quasi-invertibility, the closure cl(R_q⁻¹), QB- and B-rings, corners,
2×2 matrix reduction, extensions and exchange rings.
"""

__version__ = "1.0.0"
