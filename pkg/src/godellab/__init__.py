"""godellab: a desk-scale computability laboratory.

Total numbering of a small register machine, budget-capped evaluation,
finite-data stand-ins for limit problems over Baire space, limit learners,
and a checkable catalog of problem reductions.
"""

__version__ = "0.1.0"
