"""Exact tools for ordering CSPs over k linear orders and rooted-triplet
compatibility over k phylogenetic trees.

Subpackages by topic:

- ``orderings``: linear orderings, ternary pattern families, constraints.
- ``solver``:    exact decision / enumeration for k-order instances.
- ``gadgets``:   uniqueness gadgets and their brute-force verification.
- ``reductions``: instance transformers with constructive solution lifting.
- ``phylo``:     rooted binary trees, triplets, BUILD, caterpillars.
- ``extremal``:  full triplet sets, tau(n) covering numbers, missing triplets.
- ``cli``:       command-line frontend.
"""

__version__ = "0.1.0"
