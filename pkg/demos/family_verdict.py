"""Groups ((Omega * Sigma) x| Z_p)/E for any Sigma are not absolute Galois groups.

The index-p subgroup Delta = (Omega * Sigma) x pZ_p keeps the M_(p-1)
summand of H^2(Omega)^dec, and quotients by E inside Delta^(3) do not
change decomposable H^2.
"""

from nongalois.detector import family_detect, verify_witness
from nongalois.presentation import ProPPresentation, free_presentation
from nongalois.words import parse_word

p = 7
sigmas = {
    "trivial": None,
    "free of rank 2": free_presentation(2, p),
    "Z_p x Z_p": ProPPresentation(p, ("a", "b"), (parse_word("[a,b]", ("a", "b")),)),
}
for label, sig in sigmas.items():
    v = family_detect(p, sig)
    print(f"Sigma {label}: {v.verdict}, offending summands {v.witness['summands']}, "
          f"H^2 dec {v.witness['h2dec']}, rechecked {verify_witness(v)}")
