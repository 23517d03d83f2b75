"""Sidon sequences from irreducible polynomials over prime fields.

Construction of an integer sequence whose pairwise sums are all distinct
(a Sidon set) and which still represents every large integer as a sum of
three members, via discrete logarithms of irreducible polynomials in a
mixed-radix encoding, plus the verification surface: auxiliary additive
sets, decomposition, collision attribution, product equidistribution
statistics, and a batch CLI.
"""

__version__ = "0.1.0"
