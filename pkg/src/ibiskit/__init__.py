"""ibiskit: irredundant bases and the IBIS property for the subspace
actions of finite classical groups, on top of exact GF(p^f) arithmetic
and certified Schreier-Sims stabilizer chains."""

from . import actions, gf, groups, ibis, linalg, perm, witnesses

__all__ = ["actions", "gf", "groups", "ibis", "linalg", "perm", "witnesses"]
__version__ = "0.1.0"
