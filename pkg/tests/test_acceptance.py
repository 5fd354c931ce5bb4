"""Acceptance suite: one test per criterion, each printing a pass/fail line
with its runtime against the stated budget."""

import io
import itertools
import json
import time
from collections import deque

import numpy as np
import pytest

from cases import check_series, oracle_cases
from nongalois.class2 import ClassTwoGroup, GeneratorAction
from nongalois.cli import run
from nongalois.cohomology import ProductKind, h2dec_type, product_profile, profile, v3_invariance_check
from nongalois.detector import (
    family_detect,
    h2dec_detect,
    theorem1_case1,
    theorem1_case2,
    theorem1_case3,
    tgroup_detect,
    verify_witness,
)
from nongalois.presentation import (
    Character,
    ProPPresentation,
    corollary_presentation,
    family_presentation,
    free_presentation,
    omega_presentation,
    schreier_tgroup,
)
from nongalois.tgroup import (
    ExplicitTGroup,
    NotAdmissible,
    TInvariants,
    admissible,
    all_invariants,
    canonical,
    invariants_from_data,
    oracle_invariants,
)
from nongalois.words import Word, commutator


def report(capsys, n, title, ok, elapsed, budget, detail=""):
    ok = ok and elapsed < budget
    line = f"criterion {n} ({title}): {'PASS' if ok else 'FAIL'} in {elapsed:.2f}s (budget {budget}s)"
    if detail:
        line += f" {detail}"
    with capsys.disabled():
        print("\n" + line)
    assert ok, line


def cli(argv):
    out = io.StringIO()
    code = run(argv, out, io.StringIO())
    return code, json.loads(out.getvalue())


def omega_expected(p):
    return {"h1": {str(p): 1}, "h2dec": {str(p - 1): 1, str(p): (p - 3) // 2}}


def test_criterion_1_omega(capsys):
    ok, worst, notes = True, 0.0, []
    for p in (5, 7, 11):
        t = time.perf_counter()
        code, res = cli(["omega", "--p", str(p), "--verify"])
        dt = time.perf_counter() - t
        worst = max(worst, dt)
        good = code == 0 and {"h1": res["h1"], "h2dec": res["h2dec"]} == omega_expected(p) and dt < 5
        ok &= good
        notes.append(f"p={p}:{res['h2dec']}")
    report(capsys, 1, "Omega verification", ok, worst, 5, " ".join(notes))


def free_profile(p, n):
    t = {1: 1}
    if n > 1:
        t[p] = n - 1
    return TInvariants.from_map(p, t, 1)


def test_criterion_2_free_groups(capsys):
    t = time.perf_counter()
    rng = np.random.default_rng(2)
    ok, count = True, 0
    for p in (3, 5, 7):
        for n in range(1, 6):
            pres = free_presentation(n, p)
            chars = set()
            while len(chars) < min(3, p**n - 1):
                vals = tuple(int(v) for v in rng.integers(0, p, n))
                if any(vals):
                    chars.add(vals)
            for vals in sorted(chars):
                ok &= invariants_from_data(schreier_tgroup(pres, Character(vals, p))) == free_profile(p, n)
                count += 1
    report(capsys, 2, "free-group profile", ok, time.perf_counter() - t, 10, f"{count} characters")


def test_criterion_3_round_trip(capsys):
    t = time.perf_counter()
    ok, good, bad = True, 0, 0
    for p in (3, 5):
        for inv in all_invariants(p, 3):
            if admissible(inv):
                ok &= invariants_from_data(canonical(inv)) == inv
                good += 1
            else:
                try:
                    canonical(inv)
                    ok = False
                except NotAdmissible:
                    bad += 1
    report(capsys, 3, "classification round trip", ok, time.perf_counter() - t, 5, f"{good} admissible, {bad} rejected")


def test_criterion_4_oracle(capsys):
    t = time.perf_counter()
    ok, count = True, 0
    for p in (3, 5):
        for d in oracle_cases(p, 4):
            g = ExplicitTGroup(d)
            ok &= oracle_invariants(g) == invariants_from_data(d)
            ok &= check_series(g, d)
            count += 1
    report(capsys, 4, "oracle equivalence", ok, time.perf_counter() - t, 120, f"{count} groups")


def test_criterion_5_detections(capsys):
    t = time.perf_counter()
    x, y = Word.gen(0), Word.gen(1)
    ok, flagged, clean = True, 0, 0
    for p in (5, 7):
        for f in range(2, p):
            for q in (p * p, 2 * p * p):
                pres, chi = corollary_presentation(p, q, f)
                for v in (theorem1_case1(pres, chi, x, y, f - 1), tgroup_detect(pres, chi)):
                    ok &= v.flagged and verify_witness(v)
                    flagged += 1
    rng = np.random.default_rng(5)
    for p in (5, 7):
        for n in range(1, 6):
            pres = free_presentation(n, p)
            h2 = h2dec_type(pres, GeneratorAction.trivial(n, p))
            for _ in range(3):
                vals = rng.integers(0, p, n)
                vals[rng.integers(n)] = rng.integers(1, p)
                chi = Character(tuple(int(v) for v in vals), p)
                s0 = int(np.flatnonzero(vals)[0])
                s = Word.gen(s0)
                inv_s = pow(int(vals[s0]), -1, p)
                kernel = [Word.gen(i) * s ** (-int(vals[i]) * inv_s) for i in range(n)]
                vs = [tgroup_detect(pres, chi), theorem1_case3(pres, chi, s), h2dec_detect(h2, p, True)]
                for e in range(1, p - 1):
                    vs += [theorem1_case1(pres, chi, s, k, e) for k in kernel]
                vs += [theorem1_case2(pres, chi, s, a, b) for a, b in itertools.combinations(kernel, 2)]
                for v in vs:
                    ok &= not v.flagged and verify_witness(v)
                    clean += 1
    report(capsys, 5, "obstruction detections", ok, time.perf_counter() - t, 60,
           f"{flagged} flagged fixtures, {clean} clean free-group runs")


def test_criterion_6_class_two(capsys):
    t = time.perf_counter()
    ok = True
    rng = np.random.default_rng(6)
    for p, d in ((3, 3), (5, 4)):
        w = ClassTwoGroup(d, p)
        for _ in range(1000):
            a, b, c = w.random(rng), w.random(rng), w.random(rng)
            ok &= (a * b) * c == a * (b * c)
        for _ in range(200):
            ok &= (w.random(rng) ** (p * p)).is_identity()
    orders = []
    for p, d in ((3, 2), (3, 3)):
        w = ClassTwoGroup(d, p)
        gens = w.generators()
        seen = {w.identity().key()}
        queue = deque([w.identity()])
        while queue:
            x = queue.popleft()
            for g in gens:
                y = x * g
                if y.key() not in seen:
                    seen.add(y.key())
                    queue.append(y)
        orders.append(len(seen))
        ok &= len(seen) == p ** (2 * d + d * (d - 1) // 2)
    report(capsys, 6, "W_d correctness", ok, time.perf_counter() - t, 30, f"BFS orders {orders}")


def test_criterion_7_product_formula(capsys):
    t = time.perf_counter()
    ok = True
    p = 5
    omega, oact = omega_presentation(p)
    om = profile(omega, oact)
    for sig in (ProPPresentation(p, (), ()), free_presentation(1, p)):
        fam = family_presentation(p, sig)
        direct = h2dec_type(fam.delta, fam.delta_action)
        sp = profile(sig, GeneratorAction.trivial(sig.d, p))
        pred = product_profile(product_profile(om, sp, ProductKind.FREE), None, ProductKind.DIRECT_WITH_PROCYCLIC)
        ok &= direct == pred.h2dec
    v5 = family_detect(5)
    v7 = family_detect(7)
    ok &= v5.flagged and v5.witness["summands"] == [4] and verify_witness(v5)
    ok &= v7.flagged and v7.witness["summands"] == [6] and verify_witness(v7)
    report(capsys, 7, "product formula", ok, time.perf_counter() - t, 30)


def random_word(rng, d, length):
    return Word(tuple((int(rng.integers(d)), int(rng.choice([-2, -1, 1, 2]))) for _ in range(length)))


def test_criterion_8_v3_invariance(capsys):
    t = time.perf_counter()
    rng = np.random.default_rng(8)
    ok, cases = True, 0
    while cases < 50:
        p = int(rng.choice([3, 5]))
        d = int(rng.integers(2, 5))
        names = tuple(f"x{i}" for i in range(d))
        rels = [commutator(random_word(rng, d, 2), random_word(rng, d, 2)) for _ in range(int(rng.integers(1, 4)))]
        pres = ProPPresentation(p, names, tuple(rels))
        extras = []
        for _ in range(int(rng.integers(1, 4))):
            a, b, c = (random_word(rng, d, 2) for _ in range(3))
            extras.append(commutator(commutator(a, b), c) if rng.random() < 0.7 else a ** (p * p))
        try:
            ok &= v3_invariance_check(pres, GeneratorAction.trivial(d, p), extras)
        except AssertionError:
            ok = False
        cases += 1
    # and once with a nontrivial action
    omega, oact = omega_presentation(5)
    g = [Word.gen(i) for i in range(5)]
    ok &= v3_invariance_check(omega, oact, [commutator(commutator(g[0], g[2]), g[3])])
    report(capsys, 8, "V^(3) invariance", ok, time.perf_counter() - t, 30, f"{cases} random cases")


def test_criterion_9_wedge_sign(capsys):
    t = time.perf_counter()
    _, plus = cli(["omega", "--p", "5", "--verify"])
    code, minus = cli(["omega", "--p", "5", "--verify", "--wedge-sign", "-1"])
    ok = code == 0 and (plus["h1"], plus["h2dec"]) == (minus["h1"], minus["h2dec"])
    report(capsys, 9, "wedge-sign convention", ok, time.perf_counter() - t, 5)
