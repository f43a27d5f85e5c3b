"""L-polynomials of an Artin-Schreier tower over F_4.

Levels T_n are counted directly where cheap and otherwise assembled from
isogeny relations between Jacobians of intermediate quotient curves.
"""

__version__ = "0.1.0"
