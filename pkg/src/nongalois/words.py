"""Group words over indexed generators and the text syntax for them.

Commutators follow the left-normed convention [x, y] = x y x^-1 y^-1, and
iterated commutators are ^0[x,y] = y, ^n[x,y] = [x, ^(n-1)[x,y]].
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

__all__ = ["Word", "commutator", "iterated_commutator", "parse_word", "WordSyntaxError"]


class WordSyntaxError(ValueError):
    pass


@dataclass(frozen=True)
class Word:
    """A word as a tuple of letters (generator index, nonzero exponent).

    Words are stored exactly as given; ``normalized`` merges adjacent letters.
    """

    letters: tuple[tuple[int, int], ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "letters", tuple((int(g), int(e)) for g, e in self.letters))

    @classmethod
    def gen(cls, i: int, e: int = 1) -> "Word":
        return cls(((i, e),))

    def __mul__(self, other: "Word") -> "Word":
        return Word(self.letters + other.letters)

    def __pow__(self, n: int) -> "Word":
        if n < 0:
            return self.inverse() ** (-n)
        if len(self.letters) == 1:
            g, e = self.letters[0]
            return Word(((g, e * n),)) if n else Word()
        return Word(self.letters * n)

    def __len__(self) -> int:
        return len(self.letters)

    def __iter__(self):
        return iter(self.letters)

    def inverse(self) -> "Word":
        return Word(tuple((g, -e) for g, e in reversed(self.letters)))

    def normalized(self) -> "Word":
        out: list[list[int]] = []
        for g, e in self.letters:
            if e == 0:
                continue
            if out and out[-1][0] == g:
                out[-1][1] += e
                if out[-1][1] == 0:
                    out.pop()
            else:
                out.append([g, e])
        return Word(tuple((g, e) for g, e in out))

    def max_index(self) -> int:
        return max((g for g, _ in self.letters), default=-1)

    def exponent_vector(self, d: int) -> np.ndarray:
        v = np.zeros(d, dtype=np.int64)
        for g, e in self.letters:
            v[g] += e
        return v

    def substitute(self, images: Sequence["Word"]) -> "Word":
        out: tuple = ()
        for g, e in self.letters:
            out += (images[g] ** e).letters
        return Word(out)

    def format(self, names: Sequence[str]) -> str:
        parts = []
        for g, e in self.normalized().letters:
            parts.append(names[g] if e == 1 else f"{names[g]}^{e}")
        return " ".join(parts) if parts else "1"


def commutator(x: Word, y: Word) -> Word:
    return x * y * x.inverse() * y.inverse()


def iterated_commutator(n: int, x: Word, y: Word) -> Word:
    w = y
    for _ in range(n):
        w = commutator(x, w)
    return w


_TOKEN = re.compile(r"\s*(?:(?P<name>[A-Za-z_][A-Za-z0-9_]*)|(?P<int>[+-]?\d+)|(?P<sym>[\[\](),^])|(?P<bad>\S))")


def _tokenize(text: str) -> list[tuple[str, str]]:
    toks = []
    pos = 0
    text = text.rstrip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            break
        pos = m.end()
        kind = m.lastgroup
        if kind == "bad":
            raise WordSyntaxError(f"unexpected character {m.group('bad')!r} in {text!r}")
        toks.append((kind, m.group(kind)))
    return toks


def parse_word(text: str, names: Sequence[str]) -> Word:
    """Parse e.g. ``a b^-1 [a,b] [a,[a,b]]^2 (a b)^3`` over the given names.

    ``1`` alone denotes the empty word.
    """
    index = {n: i for i, n in enumerate(names)}
    toks = _tokenize(text)
    pos = 0

    def peek():
        return toks[pos] if pos < len(toks) else (None, None)

    def take(sym=None):
        nonlocal pos
        tok = peek()
        if tok[0] is None or (sym is not None and tok[1] != sym):
            raise WordSyntaxError(f"expected {sym or 'token'} in {text!r}")
        pos += 1
        return tok

    def word(stop: Iterable[str]) -> Word:
        out = Word()
        while True:
            kind, val = peek()
            if kind is None or (kind == "sym" and val in stop):
                return out
            out = out * factor()

    def factor() -> Word:
        kind, val = take()
        if kind == "name":
            if val not in index:
                raise WordSyntaxError(f"undeclared generator {val!r}")
            atom = Word.gen(index[val])
        elif kind == "int" and val == "1":
            atom = Word()
        elif kind == "sym" and val == "[":
            a = word({","})
            take(",")
            b = word({"]"})
            take("]")
            atom = commutator(a, b)
        elif kind == "sym" and val == "(":
            atom = word({")"})
            take(")")
        else:
            raise WordSyntaxError(f"unexpected {val!r} in {text!r}")
        if peek() == ("sym", "^"):
            take("^")
            kind, val = take()
            if kind != "int":
                raise WordSyntaxError(f"exponent must be an integer, got {val!r}")
            atom = atom ** int(val)
        return atom

    w = word(set())
    if pos != len(toks):
        raise WordSyntaxError(f"trailing input in {text!r}")
    return w
