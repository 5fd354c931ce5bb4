"""The class-two quotient W_d = V / V^(3) of a free pro-p group, p odd.

V^(n) is the p-central series, V^(n+1) = (V^(n))^p [V^(n), V]. Every element
of W_d has a unique normal form

    x_1^a_1 ... x_d^a_d  *  prod_{i<j} [x_i, x_j]^b_ij

with a_i mod p^2 and b_ij mod p. The commutators and the p-th powers x_i^p
are central of order p, and together they span V^(2)/V^(3), an F_p-space of
dimension d + d(d-1)/2.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Sequence

import numpy as np

from .fpmod import NilpotentAction, is_prime, mod
from .words import Word

__all__ = [
    "ClassTwoGroup",
    "ClassTwoElement",
    "GeneratorAction",
    "NotCentral",
    "AmbientMismatch",
    "induced_central_action",
]


class NotCentral(ValueError):
    """An element outside V^(2)/V^(3), i.e. with a nonzero linear part."""


class AmbientMismatch(ValueError):
    pass


class ClassTwoGroup:
    """Ambient descriptor for W_d at the prime p.

    ``wedge_sign`` fixes the orientation of the commutator coordinates seen
    by ``central_coords``: +1 reads [x_i, x_j] (i < j) as +e_ij, -1 as -e_ij.
    """

    def __init__(self, d: int, p: int, wedge_sign: int = 1):
        if not is_prime(p) or p == 2:
            raise ValueError(f"class-two arithmetic needs an odd prime, got p={p}")
        if d < 0:
            raise ValueError("rank must be nonnegative")
        if wedge_sign not in (1, -1):
            raise ValueError("wedge_sign must be +1 or -1")
        self.d = d
        self.p = p
        self.wedge_sign = wedge_sign
        self.pairs = list(combinations(range(d), 2))
        self.pair_index = {pr: k for k, pr in enumerate(self.pairs)}

    def __eq__(self, other):
        return isinstance(other, ClassTwoGroup) and (self.d, self.p) == (other.d, other.p)

    def __hash__(self):
        return hash((self.d, self.p))

    def __repr__(self):
        return f"ClassTwoGroup(d={self.d}, p={self.p})"

    @property
    def order(self) -> int:
        return self.p ** (2 * self.d + len(self.pairs))

    @property
    def central_dim(self) -> int:
        return self.d + len(self.pairs)

    def element(self, a: Sequence[int], b: Sequence[int]) -> "ClassTwoElement":
        p2 = self.p * self.p
        return ClassTwoElement(self, tuple(int(x) % p2 for x in a), tuple(int(x) % self.p for x in b))

    def identity(self) -> "ClassTwoElement":
        return ClassTwoElement(self, (0,) * self.d, (0,) * len(self.pairs))

    def generator(self, i: int) -> "ClassTwoElement":
        a = [0] * self.d
        a[i] = 1
        return self.element(a, [0] * len(self.pairs))

    def generators(self) -> list["ClassTwoElement"]:
        return [self.generator(i) for i in range(self.d)]

    def random(self, rng: np.random.Generator) -> "ClassTwoElement":
        return self.element(
            rng.integers(0, self.p**2, self.d), rng.integers(0, self.p, len(self.pairs))
        )

    def multiply(self, x: "ClassTwoElement", y: "ClassTwoElement") -> "ClassTwoElement":
        if x.group != self or y.group != self:
            raise AmbientMismatch(f"elements of {x.group} and {y.group} in {self}")
        p = self.p
        a = [xa + ya for xa, ya in zip(x.a, y.a)]
        b = [xb + yb for xb, yb in zip(x.b, y.b)]
        # moving x_j^{y.a_j} left past x_i^{x.a_i} (i > j) costs [x_j, x_i]^(-x.a_i y.a_j)
        for k, (j, i) in enumerate(self.pairs):
            if y.a[j] and x.a[i]:
                b[k] -= x.a[i] * y.a[j]
        return self.element(a, [v % p for v in b])

    def inverse(self, x: "ClassTwoElement") -> "ClassTwoElement":
        b = [-v for v in x.b]
        for k, (j, i) in enumerate(self.pairs):
            b[k] -= x.a[i] * x.a[j]
        return self.element([-v for v in x.a], b)

    def power(self, x: "ClassTwoElement", n: int) -> "ClassTwoElement":
        if n < 0:
            x, n = self.inverse(x), -n
        out = self.identity()
        base = x
        while n:
            if n & 1:
                out = self.multiply(out, base)
            base = self.multiply(base, base)
            n >>= 1
        return out

    def commutator(self, x: "ClassTwoElement", y: "ClassTwoElement") -> "ClassTwoElement":
        return x * y * x.inverse() * y.inverse()

    def evaluate(self, w: Word, images: Sequence["ClassTwoElement"] | None = None) -> "ClassTwoElement":
        """Left-to-right product of the letters' images (generators by default)."""
        if images is None:
            images = self.generators()
        out = self.identity()
        for g, e in w.letters:
            if not 0 <= g < len(images):
                raise IndexError(f"generator index {g} out of range")
            out = self.multiply(out, self.power(images[g], e))
        return out

    def central_coords(self, x: "ClassTwoElement") -> np.ndarray:
        """Coordinates of x in V^(2)/V^(3): (a/p mod p) then the wedge block."""
        p = self.p
        bad = [i for i, v in enumerate(x.a) if v % p]
        if bad:
            raise NotCentral(f"linear part nonzero mod p at generator(s) {bad}")
        return mod(
            [v // p for v in x.a] + [self.wedge_sign * v for v in x.b], p
        )

    def from_central(self, coords: Sequence[int]) -> "ClassTwoElement":
        c = mod(coords, self.p)
        return self.element(
            [self.p * int(v) for v in c[: self.d]], [self.wedge_sign * int(v) for v in c[self.d :]]
        )


@dataclass(frozen=True)
class ClassTwoElement:
    group: ClassTwoGroup
    a: tuple[int, ...]
    b: tuple[int, ...]

    def __mul__(self, other):
        return self.group.multiply(self, other)

    def __pow__(self, n: int):
        return self.group.power(self, n)

    def inverse(self):
        return self.group.inverse(self)

    def is_identity(self) -> bool:
        return not any(self.a) and not any(self.b)

    def is_central(self) -> bool:
        return all(v % self.group.p == 0 for v in self.a)

    def key(self):
        return self.a + self.b


class GeneratorAction:
    """An automorphism of order dividing p, given by images of the generators.

    Validation happens in W_d: applying the induced endomorphism p times must
    fix every generator there.
    """

    def __init__(self, images: Sequence[Word], p: int, names: Sequence[str] | None = None):
        self.images = [Word(w.letters) for w in images]
        self.p = p
        self.d = len(self.images)
        self.names = list(names) if names is not None else [f"x{i}" for i in range(self.d)]
        for w in self.images:
            if w.max_index() >= self.d:
                raise ValueError("generator image refers to an unknown generator")
        if p != 2:
            self._validate()

    @classmethod
    def trivial(cls, d: int, p: int, names=None) -> "GeneratorAction":
        return cls([Word.gen(i) for i in range(d)], p, names)

    def _validate(self):
        w = ClassTwoGroup(self.d, self.p)
        gens = w.generators()
        cur = list(gens)
        imgs = [w.evaluate(img) for img in self.images]
        for _ in range(self.p):
            cur = [_apply(w, c, imgs) for c in cur]
        if any(c != g for c, g in zip(cur, gens)):
            raise ValueError("generator action does not have order dividing p in W_d")

    def apply(self, word: Word) -> Word:
        return word.substitute(self.images)

    def on(self, w: ClassTwoGroup, x: ClassTwoElement) -> ClassTwoElement:
        return _apply(w, x, [w.evaluate(img) for img in self.images])

    def linear_matrix(self) -> np.ndarray:
        """Action on V/Phi(V) = F_p^d (column j = exponent vector of image j)."""
        return mod(np.array([img.exponent_vector(self.d) for img in self.images]).T.reshape(self.d, self.d), self.p)


def _apply(w: ClassTwoGroup, x: ClassTwoElement, imgs: Sequence[ClassTwoElement]) -> ClassTwoElement:
    """Image of x under the endomorphism sending generator i to imgs[i]."""
    out = w.identity()
    for i, ai in enumerate(x.a):
        if ai:
            out = out * w.power(imgs[i], ai)
    for (i, j), bij in zip(w.pairs, x.b):
        if bij:
            out = out * w.power(w.commutator(imgs[i], imgs[j]), bij)
    return out


def induced_central_action(act: GeneratorAction, wedge_sign: int = 1) -> NilpotentAction:
    """sigma - 1 on V^(2)/V^(3), sigma the functorial extension of ``act``."""
    w = ClassTwoGroup(act.d, act.p, wedge_sign)
    imgs = [w.evaluate(img) for img in act.images]
    n = w.central_dim
    cols = []
    for k in range(n):
        e = np.zeros(n, dtype=np.int64)
        e[k] = 1
        cols.append(w.central_coords(_apply(w, w.from_central(e), imgs)))
    sigma = np.array(cols, dtype=np.int64).T.reshape(n, n)
    return NilpotentAction.from_sigma(sigma, act.p)
