"""The group Omega and its decomposable H^2.

Omega is generated by g_0..g_(p-1) with a single central commutator
h = [g_0, g_1] = [g_1, g_2] = ... and all other pairs commuting. C_p rotates
the generators. H^1 is the regular module M_p, while H^2(Omega)^dec has a
summand M_(p-1); that summand is what rules out the family built on Omega.
"""

from nongalois.cohomology import ProductKind, product_profile, profile
from nongalois.presentation import format_presentation, omega_presentation

for p in (5, 7, 11):
    pres, act = omega_presentation(p)
    prof = profile(pres, act)
    print(f"p={p}: {pres.d} generators, {len(pres.relators)} relators")
    print(f"  H^1     {dict(prof.h1)}")
    print(f"  H^2 dec {dict(prof.h2dec)}")

pres, act = omega_presentation(5)
print()
print(format_presentation(pres))

# Delta = Omega x Z_p: the Kuenneth-type formula adds H^1(Omega) to H^2
om = profile(pres, act)
delta = product_profile(om, None, ProductKind.DIRECT_WITH_PROCYCLIC)
print("Omega x Z_p:", delta.to_json())
