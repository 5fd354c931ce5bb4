"""Finitely presented pro-p groups, characters and Schreier rewriting.

For a character chi: Gamma -> Z/p with kernel Delta, the quotient
Gamma / Delta^p [Delta, Delta] is a T-group whose module N = Delta^ab / p is
computed here. After rescaling chi so that a designated generator s has
chi(s) = 1, the transversal is {1, s, ..., s^(p-1)} and the Schreier
generators of the free group's kernel are

    s^i x' s^-i   (x' = x s^-chi(x), x != s, 0 <= i < p)   and   z = s^p.

Modulo p-th powers and commutators they span R_p^(d-1) + M_1, with sigma
acting by conjugation with s; each relator contributes one R_p-relation.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

import numpy as np

from .class2 import GeneratorAction
from .fpmod import (
    ModulePresentation,
    NilpotentAction,
    QuotientMap,
    is_prime,
    matmul,
    matpow,
    present_normal_form,
    sigma_power,
    solve,
)
from .tgroup import TGroupData
from .words import Word, WordSyntaxError, commutator, iterated_commutator, parse_word

__all__ = [
    "ProPPresentation",
    "Character",
    "ZeroCharacter",
    "NotACharacter",
    "PresentationError",
    "SchreierResult",
    "schreier_rewrite",
    "schreier_tgroup",
    "zp2_lift_exists",
    "omega_presentation",
    "corollary_presentation",
    "family_presentation",
    "FamilyGroup",
    "free_presentation",
    "presentation_from_tgroup",
    "parse_presentation",
    "parse_action",
    "format_presentation",
]


class PresentationError(ValueError):
    pass


class ZeroCharacter(PresentationError):
    pass


class NotACharacter(PresentationError):
    """The character does not kill every relator."""


@dataclass(frozen=True)
class ProPPresentation:
    p: int
    names: tuple[str, ...]
    relators: tuple[Word, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "names", tuple(self.names))
        object.__setattr__(self, "relators", tuple(self.relators))
        if not is_prime(self.p):
            raise PresentationError(f"p must be prime, got {self.p}")
        if len(set(self.names)) != len(self.names):
            raise PresentationError("duplicate generator names")
        for r in self.relators:
            if r.max_index() >= len(self.names):
                raise PresentationError("relator refers to an undeclared generator")

    @property
    def d(self) -> int:
        return len(self.names)

    def word(self, text: str) -> Word:
        return parse_word(text, self.names)

    def gen(self, name: str) -> Word:
        return Word.gen(self.names.index(name))

    def with_relators(self, extra: Iterable[Word]) -> "ProPPresentation":
        return ProPPresentation(self.p, self.names, self.relators + tuple(extra))

    def exponent_matrix(self) -> np.ndarray:
        return np.array([r.exponent_vector(self.d) for r in self.relators], dtype=np.int64).reshape(len(self.relators), self.d)


@dataclass(frozen=True)
class Character:
    """Values in F_p on the generators; the kernel is the subgroup Delta."""

    values: tuple[int, ...]
    p: int

    def __post_init__(self):
        vals = tuple(int(v) % self.p for v in self.values)
        object.__setattr__(self, "values", vals)
        if not any(vals):
            raise ZeroCharacter("the character is identically zero")

    @classmethod
    def on(cls, pres: ProPPresentation, mapping: Mapping[str, int]) -> "Character":
        for k in mapping:
            if k not in pres.names:
                raise PresentationError(f"character names undeclared generator {k!r}")
        return cls(tuple(mapping.get(n, 0) for n in pres.names), pres.p)

    def __call__(self, w: Word) -> int:
        return sum(self.values[g] * e for g, e in w.letters) % self.p

    def scaled(self, c: int) -> "Character":
        return Character(tuple(c * v for v in self.values), self.p)

    def check(self, pres: ProPPresentation) -> None:
        if len(self.values) != pres.d or self.p != pres.p:
            raise PresentationError("character does not match the presentation")
        for k, r in enumerate(pres.relators):
            if self(r):
                raise NotACharacter(f"relator {k} is not in the kernel of the character")


# ---------------------------------------------------------------------------
# Schreier rewriting
# ---------------------------------------------------------------------------

@dataclass
class SchreierResult:
    """The T-group module of (pres, chi) with its rewriting table.

    ``columns`` labels the free R_p-generators: one per generator other than
    the transversal generator, plus ``z`` for s^p. ``image`` sends a word in
    Delta to N in the adapted coordinates of ``data``.
    """

    pres: ProPPresentation
    chi: Character
    transversal: int
    columns: list[str]
    relations: np.ndarray
    data: TGroupData
    sizes: list[int]
    qmap: QuotientMap
    change: np.ndarray
    _col: dict[int, int] = field(repr=False, default_factory=dict)

    @property
    def p(self) -> int:
        return self.pres.p

    def rewrite(self, w: Word) -> tuple[np.ndarray, int]:
        return _rewrite(w, self.chi.values, self.transversal, self._col, len(self.columns), self.p)

    def image(self, w: Word) -> np.ndarray:
        """Class of w in N = Delta / Delta^p [Delta, Delta]."""
        vec, end = self.rewrite(w)
        if end != 0:
            raise PresentationError("word is not in the kernel of the character")
        return matmul(self.change, self.qmap(vec), self.p)

    def action_of(self, w: Word) -> NilpotentAction:
        """sigma_w - 1 on N, for the conjugation action of a word w."""
        c = self.chi(w)
        s = matpow(self.data.action.sigma(), c, self.p)
        return NilpotentAction.from_sigma(s, self.p)

    def table(self) -> list[dict]:
        names = self.pres.names
        rows = []
        for k, rel in enumerate(self.relations[:-1]):
            rows.append(
                {
                    "relator": self.pres.relators[k].format(names),
                    "row": {c: rel[j].tolist() for j, c in enumerate(self.columns) if rel[j].any()},
                }
            )
        return rows


def _rewrite(w: Word, vals, s: int, col: dict[int, int], r: int, p: int) -> tuple[np.ndarray, int]:
    vec = np.zeros((r, p), dtype=np.int64)
    z = r - 1
    norm = np.zeros(p, dtype=np.int64)
    norm[p - 1] = 1  # 1 + sigma + ... + sigma^(p-1) = t^(p-1)
    i = 0
    for g, e in w.letters:
        a = vals[g]
        j = col.get(g)
        if a == 0:
            if j is not None:
                vec[j] = (vec[j] + e * sigma_power(i, p)) % p
            continue
        sign = 1 if e > 0 else -1
        cycles, rest = divmod(abs(e), p)
        # p steps visit every coset once and wrap a times
        if j is not None:
            vec[j] = (vec[j] + sign * cycles * norm) % p
        vec[z, 0] += sign * cycles * a
        for _ in range(rest):
            if sign > 0:
                if j is not None:
                    vec[j] = (vec[j] + sigma_power(i, p)) % p
                if i + a >= p:
                    vec[z, 0] += 1
                i = (i + a) % p
            else:
                nxt = (i - a) % p
                if j is not None:
                    vec[j] = (vec[j] - sigma_power(nxt, p)) % p
                if i < a:
                    vec[z, 0] -= 1
                i = nxt
    return vec % p, i


def schreier_rewrite(pres: ProPPresentation, chi: Character) -> SchreierResult:
    p = pres.p
    chi.check(pres)
    s = next(k for k, v in enumerate(chi.values) if v)
    chi = chi.scaled(pow(chi.values[s], -1, p))
    col = {}
    columns = []
    for g, name in enumerate(pres.names):
        if g != s:
            col[g] = len(columns)
            columns.append(f"{name}*{pres.names[s]}^-{chi.values[g]}" if chi.values[g] else name)
    columns.append(f"{pres.names[s]}^{p}")
    r = len(columns)

    rows = []
    for rel in pres.relators:
        vec, end = _rewrite(rel, chi.values, s, col, r, p)
        assert end == 0
        rows.append(vec)
    fixed = np.zeros((r, p), dtype=np.int64)
    fixed[r - 1, 1] = 1  # sigma fixes s^p
    rows.append(fixed)
    relations = np.array(rows, dtype=np.int64)

    jt, qmap = present_normal_form(ModulePresentation(p, r, relations))
    zvec = np.zeros((r, p), dtype=np.int64)
    zvec[r - 1, 0] = 1
    raw = TGroupData(qmap.action, qmap(zvec))
    data, sizes, change = raw.adapted_with_basis()
    if data.action.apply(data.sigma_p).any():
        raise AssertionError("rewriting produced sigma^p outside the fixed space")
    return SchreierResult(pres, chi, s, columns, relations, data, sizes, qmap, change, col)


def schreier_tgroup(pres: ProPPresentation, chi: Character) -> TGroupData:
    return schreier_rewrite(pres, chi).data


def zp2_lift_exists(pres: ProPPresentation, chi: Character) -> bool:
    """Is there a map generators -> Z/p^2 reducing to chi and killing R?"""
    p = pres.p
    chi.check(pres)
    e = pres.exponent_matrix()
    if e.shape[0] == 0:
        return True
    base = e @ np.array(chi.values, dtype=np.int64)
    assert not (base % p).any()
    c = (base // p) % p
    return solve(e % p, (-c) % p, p) is not None


# ---------------------------------------------------------------------------
# named groups
# ---------------------------------------------------------------------------

def free_presentation(n: int, p: int, prefix: str = "x") -> ProPPresentation:
    return ProPPresentation(p, tuple(f"{prefix}{i + 1}" for i in range(n)), ())


def omega_presentation(p: int) -> tuple[ProPPresentation, GeneratorAction]:
    """The nilpotent group generated by g_0..g_(p-1) with h = [g_0, g_1],
    [g_i, g_(i+1)] = h (indices mod p), other [g_i, g_j] = 1 and h central;
    C acts by g_i -> g_(i-1)."""
    if not is_prime(p) or p <= 3:
        raise PresentationError(f"the construction needs a prime p > 3, got {p}")
    g = [Word.gen(i) for i in range(p)]
    h = commutator(g[0], g[1])
    rels = [commutator(g[i], g[(i + 1) % p]) * h.inverse() for i in range(1, p)]
    for i in range(p):
        for j in range(i + 1, p):
            if j != i + 1 and not (i == 0 and j == p - 1):
                rels.append(commutator(g[i], g[j]))
    rels.extend(commutator(h, g[k]) for k in range(p))
    names = tuple(f"g{i}" for i in range(p))
    act = GeneratorAction([g[(i - 1) % p] for i in range(p)], p, names)
    return ProPPresentation(p, names, tuple(rels)), act


def corollary_presentation(
    p: int,
    q: int,
    f: int,
    J: Sequence[tuple] = (),
    K: Sequence = (),
    I: Sequence = (),
) -> tuple[ProPPresentation, Character]:
    """One relator x1^q ^f[x1,x2] prod_J [x_i,x_j] prod_K [x1^p, x_k].

    Generators are x1, x2 and x<i> for each label i in I; the labels 1 and 2
    name x1 and x2 themselves rather than new generators.
    """
    if not is_prime(p) or p == 2:
        raise PresentationError(f"p must be an odd prime, got {p}")
    if not 2 <= f <= p - 1:
        raise PresentationError(f"f={f} outside [2, {p - 1}]")
    if q < 0 or q % (p * p):
        raise PresentationError(f"q={q} must be a natural number divisible by p^2")
    labels = [str(i) for i in I]
    if len(set(labels)) != len(labels):
        raise PresentationError("index set I has repeated labels")
    extra = [lab for lab in labels if lab not in ("1", "2")]
    names = ("x1", "x2") + tuple(f"x{i}" for i in extra)
    idx = {lab: names.index(f"x{lab}") for lab in labels}
    for pair in J:
        if len(pair) != 2 or any(str(i) not in idx for i in pair):
            raise PresentationError(f"J entry {pair!r} is not a pair from I")
    for k in K:
        if str(k) not in idx:
            raise PresentationError(f"K entry {k!r} is not in I")
    x1, x2 = Word.gen(0), Word.gen(1)
    rel = x1**q * iterated_commutator(f, x1, x2)
    for i, j in J:
        rel = rel * commutator(Word.gen(idx[str(i)]), Word.gen(idx[str(j)]))
    for k in K:
        rel = rel * commutator(x1**p, Word.gen(idx[str(k)]))
    pres = ProPPresentation(p, names, (rel,))
    return pres, Character.on(pres, {"x1": 1})


@dataclass(frozen=True)
class FamilyGroup:
    """Gamma = ((Omega * Sigma) x| Z_p) with Delta = (Omega * Sigma) x pZ_p."""

    gamma: ProPPresentation
    chi: Character
    gamma_action: GeneratorAction
    delta: ProPPresentation
    delta_action: GeneratorAction
    omega_names: tuple[str, ...]
    sigma_names: tuple[str, ...]


def family_presentation(p: int, sigma_pres: ProPPresentation | None = None) -> FamilyGroup:
    omega, oact = omega_presentation(p)
    if sigma_pres is None:
        sigma_pres = ProPPresentation(p, (), ())
    if sigma_pres.p != p:
        raise PresentationError("Sigma is presented over a different prime")
    reserved = set(omega.names) | {"s", "z"}
    snames = tuple(n if n not in reserved else f"sig_{n}" for n in sigma_pres.names)
    if len(set(snames) | reserved) != len(snames) + len(reserved):
        raise PresentationError("cannot rename Sigma generators apart from Omega's")
    n_om, n_sig = omega.d, sigma_pres.d

    def shift(w: Word, by: int) -> Word:
        return Word(tuple((g + by, e) for g, e in w.letters))

    s = Word.gen(n_om + n_sig)
    g = [Word.gen(i) for i in range(n_om)]
    sig = [Word.gen(n_om + k) for k in range(n_sig)]
    rels = list(omega.relators) + [shift(r, n_om) for r in sigma_pres.relators]
    rels += [s * g[i] * s.inverse() * g[(i - 1) % p].inverse() for i in range(p)]
    rels += [commutator(s, x) for x in sig]
    gnames = omega.names + snames + ("s",)
    gamma = ProPPresentation(p, gnames, tuple(rels))
    chi = Character.on(gamma, {"s": 1})
    gimages = [g[(i - 1) % p] for i in range(p)] + sig + [s]
    gamma_action = GeneratorAction(gimages, p, gnames)

    z = Word.gen(n_om + n_sig)
    drels = list(omega.relators) + [shift(r, n_om) for r in sigma_pres.relators]
    drels += [commutator(z, x) for x in g + sig]
    dnames = omega.names + snames + ("z",)
    delta = ProPPresentation(p, dnames, tuple(drels))
    dimages = [g[(i - 1) % p] for i in range(p)] + sig + [z]
    delta_action = GeneratorAction(dimages, p, dnames)
    return FamilyGroup(gamma, chi, gamma_action, delta, delta_action, omega.names, snames)


def presentation_from_tgroup(data: TGroupData) -> tuple[ProPPresentation, Character]:
    """A presentation of the T-group itself, on s and one generator per block.

    ``data`` must already be in Jordan form (as produced by canonical or
    TGroupData.adapted).
    """
    from .fpmod import jordan_matrix, jordan_type

    p = data.p
    sizes = jordan_type(data.action).sizes()
    if not np.array_equal(data.action.matrix, jordan_matrix(sizes, p)):
        raise PresentationError("T-group data must be in Jordan form")
    names = ("s",) + tuple(f"n{b + 1}" for b in range(len(sizes)))
    s = Word.gen(0)
    gens = [Word.gen(b + 1) for b in range(len(sizes))]
    rels = [iterated_commutator(k, s, gens[b]) for b, k in enumerate(sizes)]
    rels += [gens[b] ** p for b in range(len(sizes))]
    rels += [commutator(gens[b], gens[c]) for b in range(len(sizes)) for c in range(b + 1, len(sizes))]
    word = s ** (-p)
    off = 0
    for b, k in enumerate(sizes):
        for j in range(k):
            c = int(data.sigma_p[off + j])
            if c:
                word = word * iterated_commutator(j, s, gens[b]) ** c
        off += k
    rels.append(word)
    pres = ProPPresentation(p, names, tuple(rels))
    return pres, Character.on(pres, {"s": 1})


# ---------------------------------------------------------------------------
# text format
# ---------------------------------------------------------------------------

def _lines(text: str):
    for n, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if line:
            yield n, line


def parse_presentation(text: str) -> tuple[ProPPresentation, Character | None]:
    """Parse ``p``, ``gens``, ``rel`` and ``chi`` lines.

    >>> pres, chi = parse_presentation("p 5\\ngens a b\\nrel [a,[a,b]]\\nchi a=1")
    >>> pres.d, chi.values
    (2, (1, 0))
    """
    p = None
    names: tuple[str, ...] | None = None
    rel_text: list[tuple[int, str]] = []
    chi_text = None
    for n, line in _lines(text):
        key, _, rest = line.partition(" ")
        rest = rest.strip()
        if key == "p":
            try:
                p = int(rest)
            except ValueError:
                raise PresentationError(f"line {n}: bad prime {rest!r}") from None
        elif key == "gens":
            names = tuple(rest.split())
            for nm in names:
                if not re.fullmatch(r"[A-Za-z_][A-Za-z0-9_]*", nm):
                    raise PresentationError(f"line {n}: bad generator name {nm!r}")
        elif key == "rel":
            rel_text.append((n, rest))
        elif key == "chi":
            chi_text = (n, rest)
        else:
            raise PresentationError(f"line {n}: unknown directive {key!r}")
    if p is None:
        raise PresentationError("missing 'p' line")
    if names is None:
        names = ()
    rels = []
    for n, t in rel_text:
        try:
            rels.append(parse_word(t, names))
        except WordSyntaxError as exc:
            raise PresentationError(f"line {n}: {exc}") from None
    pres = ProPPresentation(p, names, tuple(rels))
    chi = None
    if chi_text is not None:
        n, t = chi_text
        mapping = {}
        for item in t.split():
            name, eq, val = item.partition("=")
            if not eq:
                raise PresentationError(f"line {n}: expected name=value, got {item!r}")
            if name not in names:
                raise PresentationError(f"line {n}: undeclared generator {name!r}")
            try:
                mapping[name] = int(val)
            except ValueError:
                raise PresentationError(f"line {n}: non-integer character value {val!r}") from None
        chi = Character.on(pres, mapping)
    return pres, chi


def parse_action(text: str, pres: ProPPresentation) -> GeneratorAction:
    """Lines ``gen -> word``; unmentioned generators are fixed."""
    images = [Word.gen(i) for i in range(pres.d)]
    for n, line in _lines(text):
        lhs, arrow, rhs = line.partition("->")
        lhs = lhs.strip()
        if not arrow or lhs not in pres.names:
            raise PresentationError(f"line {n}: expected '<generator> -> <word>'")
        try:
            images[pres.names.index(lhs)] = parse_word(rhs, pres.names)
        except WordSyntaxError as exc:
            raise PresentationError(f"line {n}: {exc}") from None
    try:
        return GeneratorAction(images, pres.p, pres.names)
    except ValueError as exc:
        raise PresentationError(str(exc)) from None


def format_presentation(pres: ProPPresentation, chi: Character | None = None) -> str:
    lines = [f"p {pres.p}", "gens " + " ".join(pres.names)]
    lines += ["rel " + r.format(pres.names) for r in pres.relators]
    if chi is not None:
        lines.append("chi " + " ".join(f"{n}={v}" for n, v in zip(pres.names, chi.values)))
    return "\n".join(lines) + "\n"
