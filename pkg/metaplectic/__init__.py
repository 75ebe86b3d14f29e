"""Fusion data, braid group simulations, link invariants
and Ising reductions for the metaplectic modular categories SO(m)_2.
"""

__version__ = "0.1.0"
