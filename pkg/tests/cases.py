"""Shared enumerations for the T-group oracle tests."""

from itertools import product

import numpy as np

from nongalois.fpmod import power_image
from nongalois.tgroup import TGroupData


def partitions(n, largest):
    if n == 0:
        yield []
        return
    for k in range(min(n, largest), 0, -1):
        for rest in partitions(n - k, k):
            yield [k] + rest


def oracle_cases(p, max_dim=4):
    """Every block shape of dim <= max_dim with every sigma^p up to block
    rescaling: each block bottom gets a coefficient, and a nonzero
    coefficient can be scaled to 1 by an automorphism of that block. For
    p = 3 we still take every coefficient, as a check on that reduction."""
    coeffs = range(p) if p == 3 else (0, 1)
    for n in range(max_dim + 1):
        for sizes in partitions(n, p):
            bottoms = np.cumsum(sizes, dtype=np.int64) - 1
            for c in product(coeffs, repeat=len(sizes)):
                sp = np.zeros(n, dtype=np.int64)
                sp[bottoms] = c
                yield TGroupData.from_blocks(sizes, sp, p)


def span_codes(g, vectors):
    """Codes of all elements (v, 0) with v in the span of ``vectors``."""
    p, n = g.p, g.n
    vectors = [np.asarray(v, dtype=np.int64) for v in vectors]
    out = set()
    for c in product(range(p), repeat=len(vectors)):
        v = np.zeros(n + 1, dtype=np.int64)
        for k, x in zip(c, vectors):
            v[:n] += k * x
        v %= p
        out.add(int(g.encode(v)[0]))
    return out


def check_series(g, data):
    """T_(i) = {(v, 0) : v in Im A^(i-1)} for i >= 2 and
    T^p = <sigma^p> T_(p), all as element sets."""
    p = data.p
    series = g.lower_central_series(p + 1)
    for i in range(2, p + 2):
        want = span_codes(g, power_image(data.action, i - 1).basis)
        if series[i - 1] != want:
            return False
    top = list(power_image(data.action, p - 1).basis) + [data.sigma_p]
    return g.power_subgroup() == span_codes(g, top)
