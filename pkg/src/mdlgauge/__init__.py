"""mdlgauge: description-length gauging for software component generality.

Library surface, by concern:

- lexcount: renaming-invariant token counting of source text
- mdl: scoring candidate components against use cases and picking a winner
- term: terms, substitutions, matching, unification, anti-unification
- treedist: ordered tree edit distance (with a brute-force oracle)
- viscosity: sampled Lipschitz estimates for abstractions
- tradeoff: synthetic corpora and compression/inversion tradeoff curves
- cli: the ``mdlgauge`` command
"""

__version__ = "0.1.0"
