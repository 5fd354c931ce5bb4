import numpy as np
import pytest

from nongalois.presentation import (
    Character,
    NotACharacter,
    PresentationError,
    ProPPresentation,
    ZeroCharacter,
    corollary_presentation,
    family_presentation,
    format_presentation,
    free_presentation,
    omega_presentation,
    parse_action,
    parse_presentation,
    presentation_from_tgroup,
    schreier_rewrite,
    schreier_tgroup,
    zp2_lift_exists,
)
from nongalois.tgroup import TInvariants, admissible, all_invariants, canonical, invariants_from_data
from nongalois.words import Word, commutator, parse_word


def pres_of(p, names, rels):
    names = tuple(names.split())
    return ProPPresentation(p, names, tuple(parse_word(r, names) for r in rels))


def free_profile(p, n):
    t = {1: 1}
    if n > 1:
        t[p] = n - 1
    return TInvariants.from_map(p, t, 1)


def test_parse_roundtrip():
    text = """
    # a comment
    p 5
    gens a b
    rel [a,[a,b]] a^25
    chi a=2
    """
    pres, chi = parse_presentation(text)
    assert pres.names == ("a", "b")
    assert chi.values == (2, 0)
    again, chi2 = parse_presentation(format_presentation(pres, chi))
    assert [r.normalized() for r in again.relators] == [r.normalized() for r in pres.relators]
    assert chi2 == chi


@pytest.mark.parametrize(
    "text",
    [
        "gens a\n",
        "p 5\ngens a\nrel b\n",
        "p 5\ngens a\nrel a^b\n",
        "p 5\ngens a\nchi b=1\n",
        "p 5\ngens a\nchi a=x\n",
        "p 6\ngens a\n",
        "p 5\ngens a\nfoo\n",
    ],
)
def test_parse_errors(text):
    with pytest.raises(PresentationError):
        parse_presentation(text)


def test_zero_character():
    pres = free_presentation(2, 5)
    with pytest.raises(ZeroCharacter):
        Character.on(pres, {"x1": 5})


def test_character_must_kill_relators():
    pres = pres_of(5, "x y", ["x y^-2"])
    with pytest.raises(NotACharacter):
        schreier_tgroup(pres, Character.on(pres, {"x": 1}))


@pytest.mark.parametrize("p", [3, 5, 7])
@pytest.mark.parametrize("n", [1, 2, 3])
def test_free_groups(p, n):
    pres = free_presentation(n, p)
    rng = np.random.default_rng(p * 10 + n)
    for _ in range(3):
        vals = rng.integers(0, p, n)
        if not vals.any():
            vals[0] = 1
        assert invariants_from_data(schreier_tgroup(pres, Character(tuple(vals), p))) == free_profile(p, n)


def test_free_rank_one():
    res = schreier_rewrite(free_presentation(1, 5), Character((1,), 5))
    assert res.data.dim == 1
    assert res.data.sigma_p.tolist() == [1]


def test_second_commutator_by_hand():
    # Rewriting [x,[x,y]] with transversal powers of x gives t^2 y, so
    # N = R/(t^2) y + F_p z with z = x^p: t_2 = 1, t_1 = 1 and u = 1.
    pres = pres_of(5, "x y", ["[x,[x,y]]"])
    res = schreier_rewrite(pres, Character((1, 0), 5))
    row = res.relations[0]
    assert row[0].tolist() == [0, 0, 1, 0, 0]
    assert row[1].tolist() == [0] * 5
    assert invariants_from_data(res.data) == TInvariants.from_map(5, {1: 1, 2: 1}, 1)


def test_rewrite_large_exponents():
    # x^(p^2) gives p z = 0; x^p gives z
    pres = pres_of(5, "x", ["x^25"])
    assert schreier_rewrite(pres, Character((1,), 5)).relations[0, 0].tolist() == [0] * 5
    pres = pres_of(5, "x", ["x^5"])
    assert schreier_rewrite(pres, Character((1,), 5)).relations[0, 0].tolist() == [1, 0, 0, 0, 0]
    pres = pres_of(5, "x y", ["y^-7 x^-12 y^7 x^12"])
    res = schreier_rewrite(pres, Character((1, 0), 5))
    # x^12 acts as sigma^2 on y, so the relator is (sigma^-2 - 1)(-7 y) = 0
    assert invariants_from_data(res.data) == invariants_from_data(
        schreier_tgroup(pres_of(5, "x y", ["[x,y]"]), Character((1, 0), 5))
    )


def test_rescaling_invariance():
    pres = pres_of(5, "x y z", ["[x,[x,y]] [y,z]"])
    base = invariants_from_data(schreier_tgroup(pres, Character((1, 0, 0), 5)))
    for c in (2, 3, 4):
        assert invariants_from_data(schreier_tgroup(pres, Character((c, 0, 0), 5))) == base


def test_conjugate_products_change_nothing():
    rng = np.random.default_rng(7)
    pres = pres_of(5, "x y z", ["[x,[x,y]]", "[y,z] x^25"])
    chi = Character((1, 0, 0), 5)
    base = invariants_from_data(schreier_tgroup(pres, chi))
    gens = [Word.gen(i) for i in range(3)]
    for _ in range(10):
        w = Word()
        for _ in range(3):
            g = gens[rng.integers(3)] ** int(rng.integers(-3, 4))
            r = pres.relators[rng.integers(2)] ** int(rng.choice([-1, 1]))
            w = w * g * r * g.inverse()
        assert invariants_from_data(schreier_tgroup(pres.with_relators([w]), chi)) == base


def test_image_of_words():
    pres = pres_of(5, "x y", ["[x,[x,[x,y]]]"])
    res = schreier_rewrite(pres, Character((1, 0), 5))
    y = res.image(Word.gen(1))
    b = res.action_of(Word.gen(0))
    # [x, y] maps to (sigma - 1) y
    assert (res.image(commutator(Word.gen(0), Word.gen(1))) == b.apply(y)).all()
    with pytest.raises(PresentationError):
        res.image(Word.gen(0))


def test_zp2_lift():
    p = 5
    assert zp2_lift_exists(free_presentation(3, p), Character((1, 2, 0), p))
    assert not zp2_lift_exists(pres_of(p, "x", ["x^5"]), Character((1,), p))
    assert zp2_lift_exists(pres_of(p, "x", ["x^25"]), Character((1,), p))
    # a second generator can absorb the obstruction
    assert zp2_lift_exists(pres_of(p, "x y", ["x^5 y^5"]), Character((1, 4), p))


def test_omega_counts():
    pres, act = omega_presentation(5)
    assert pres.d == 5
    assert len(pres.relators) == 9 + 5
    pres7, _ = omega_presentation(7)
    assert len(pres7.relators) == 20 + 7
    for i in range(5):
        w = Word.gen(i)
        for _ in range(5):
            w = act.apply(w)
        assert w == Word.gen(i)
    with pytest.raises(PresentationError):
        omega_presentation(3)


def test_corollary_presentation():
    pres, chi = corollary_presentation(5, 25, 3)
    assert pres.names == ("x1", "x2")
    assert pres.relators[0].exponent_vector(2).tolist() == [25, 0]
    assert zp2_lift_exists(pres, chi)
    pres, chi = corollary_presentation(5, 0, 2, J=[("a", "b")], I=["a", "b"])
    assert pres.names == ("x1", "x2", "xa", "xb")
    assert chi.values == (1, 0, 0, 0)
    for bad in [dict(q=25, f=1), dict(q=25, f=5), dict(q=5, f=2), dict(q=-25, f=2)]:
        with pytest.raises(PresentationError):
            corollary_presentation(5, **bad)
    with pytest.raises(PresentationError):
        corollary_presentation(5, 25, 2, K=["c"], I=["a"])
    # labels 1 and 2 refer to x1 and x2
    pres, _ = corollary_presentation(5, 25, 2, J=[(1, "3")], I=[1, 3])
    assert pres.names == ("x1", "x2", "x3")


def test_family_counts():
    fam = family_presentation(5)
    assert fam.gamma.d == 6 and fam.delta.d == 6
    # Omega^ab/p is the regular module and s^p is a free M_1
    assert invariants_from_data(schreier_tgroup(fam.gamma, fam.chi)) == TInvariants.from_map(5, {1: 1, 5: 1}, 1)
    fam = family_presentation(5, free_presentation(1, 5))
    assert fam.delta.d == 7
    assert fam.delta.names[-1] == "z"
    # the Sigma generator commutes with s and adds a trivial summand
    assert invariants_from_data(schreier_tgroup(fam.gamma, fam.chi)) == TInvariants.from_map(5, {1: 2, 5: 1}, 1)


def test_family_renames_clashes():
    sig = ProPPresentation(5, ("g0", "s"), ())
    fam = family_presentation(5, sig)
    assert fam.sigma_names == ("sig_g0", "sig_s")


@pytest.mark.parametrize("p", [3, 5])
def test_presentation_from_tgroup_roundtrip(p):
    # the rewriting recovers every admissible T-group from its own presentation
    for inv in all_invariants(p, 3):
        if admissible(inv):
            pres, chi = presentation_from_tgroup(canonical(inv))
            assert invariants_from_data(schreier_tgroup(pres, chi)) == inv


def test_parse_action():
    pres, _ = omega_presentation(5)
    act = parse_action("g0 -> g4\ng1 -> g0\ng2 -> g1\ng3 -> g2\ng4 -> g3\n", pres)
    _, ref = omega_presentation(5)
    assert act.images == ref.images
    with pytest.raises(PresentationError):
        parse_action("h -> g0", pres)
    with pytest.raises(PresentationError):
        parse_action("g0 -> g1", pres)  # not of order p
