"""One-relator groups x1^q ^f[x1,x2] are never absolute Galois groups.

For each f the T-group of the index-p subgroup containing x2 has a block
of size f, and x2 gives the witness tau with e = f - 1: the iterated
commutator ^e[x1, x2] survives modulo the top layer while ^(e+1)[x1, x2]
dies. The witness is then rechecked with sympy.
"""

import json

from nongalois.detector import theorem1_case1, tgroup_detect, verify_witness
from nongalois.presentation import corollary_presentation, format_presentation
from nongalois.words import Word

p, q = 5, 25
for f in range(2, p):
    pres, chi = corollary_presentation(p, q, f)
    v = theorem1_case1(pres, chi, Word.gen(0), Word.gen(1), f - 1)
    t = tgroup_detect(pres, chi)
    print(f"f={f}: thm1.1 {v.verdict} (rechecked: {verify_witness(v)}), T-group invariants {t.witness['invariants']}")

pres, chi = corollary_presentation(p, q, 3)
print()
print(format_presentation(pres, chi))
print(json.dumps(theorem1_case1(pres, chi, Word.gen(0), Word.gen(1), 2).to_json(), sort_keys=True, indent=1))
