"""Combinatorics of pasting schemes.

Subpackages cover monotone-map calculus (delta), augmented directed
complexes with basis (adc), their cell categories (omega), Theta terms
(theta), morphism classification and extensions (stn), decorated trees
(trees), string-generated pasting schemes (dgens), twisted-arrow posets
(twar) and the three-class factorization system (dk).
"""

__version__ = "0.1.0"
