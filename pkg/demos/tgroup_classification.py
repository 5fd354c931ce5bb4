"""T-groups are classified by (t_1..t_p, u).

Builds the canonical group for some invariants, checks it by brute force
on the explicit group, and lists which invariants can come from a field
extension of degree p.
"""

from nongalois.tgroup import (
    ExplicitTGroup,
    TInvariants,
    admissible,
    all_invariants,
    canonical,
    galois_realizable,
    invariants_from_data,
    oracle_invariants,
)

p = 5
for t, u in [({1: 1}, 1), ({2: 1}, 5), ({2: 1, 1: 1}, 2), ({3: 1}, 3), ({4: 1}, 4)]:
    inv = TInvariants.from_map(p, t, u)
    data = canonical(inv)
    g = ExplicitTGroup(data)
    print(f"{inv.to_json()}: order {g.order}, oracle {oracle_invariants(g).to_json()}, "
          f"galois-realizable {galois_realizable(inv)}")
    assert invariants_from_data(data) == inv

ok = [i for i in all_invariants(3, 2) if admissible(i)]
print(f"\np=3, sum t <= 2: {len(ok)} admissible, {sum(galois_realizable(i) for i in ok)} realizable")
