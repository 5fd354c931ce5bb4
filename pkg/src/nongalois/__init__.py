"""Computational obstructions to pro-p groups being absolute Galois groups.

Modules, bottom up:

- fpmod: F_p linear algebra and F_p[C_p]-modules (Jordan types, module
  presentations over F_p[t]/(t^p))
- words, class2: group words and the class-two quotient V/V^(3)
- tgroup: T-groups, their invariants and a brute-force oracle
- presentation: pro-p presentations, characters, Schreier rewriting
- cohomology: H^1 and decomposable H^2 as Jordan types
- detector: the obstruction criteria, with re-checkable witnesses
- cli: the ``nongalois`` command
"""

__version__ = "0.1.0"
