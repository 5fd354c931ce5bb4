"""Jordan types of H^1 and decomposable H^2 for presented groups with a C_p-action.

For a minimal presentation 1 -> R -> V -> Delta -> 1 the decomposable part of
H^2(Delta) is dual to R V^(3) / V^(3), a submodule of V^(2)/V^(3). Relators of
a minimal presentation are central in W_d = V/V^(3), so that image is just
the span of the relators' central coordinates.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Sequence

import numpy as np

from .class2 import ClassTwoElement, ClassTwoGroup, GeneratorAction, induced_central_action
from .fpmod import (
    JordanType,
    NilpotentAction,
    Subspace,
    direct_sum,
    mod,
    nullspace,
    quotient_type,
    solve,
    submodule_type,
)
from .presentation import ProPPresentation
from .words import Word

__all__ = [
    "CohomologyProfile",
    "ProductKind",
    "IncompatibleAction",
    "NotMinimal",
    "ExtraRelatorNotInV3",
    "Unsupported",
    "ClassTwoClosure",
    "h1_type",
    "h2dec_type",
    "relator_span",
    "profile",
    "product_profile",
    "v3_invariance_check",
    "full_h2",
]


class IncompatibleAction(ValueError):
    pass


class NotMinimal(ValueError):
    pass


class ExtraRelatorNotInV3(ValueError):
    pass


class Unsupported(NotImplementedError):
    pass


class ProductKind(Enum):
    FREE = "free"
    DIRECT_WITH_PROCYCLIC = "direct_procyclic"


@dataclass(frozen=True)
class CohomologyProfile:
    h1: JordanType
    h2dec: JordanType
    p: int

    def to_json(self) -> dict:
        return {"h1": self.h1.to_json(), "h2dec": self.h2dec.to_json()}


class ClassTwoClosure:
    """Normal closure K of a set of elements of W_d, kept as

    - L, the span of their linear parts mod p, and
    - C, the central elements of K.

    Any element with linear part l in L is in K iff dividing it by a fixed
    product of the given elements with linear part l leaves a central
    element of C.
    """

    def __init__(self, w: ClassTwoGroup, elems: Sequence[ClassTwoElement]):
        p, d = w.p, w.d
        self.w = w
        self.elems = list(elems)
        lin = np.array([[v % p for v in x.a] for x in self.elems], dtype=np.int64).reshape(len(self.elems), d)
        self.lin = lin
        self.L = Subspace.span(lin, d, p)
        central = []
        for l in self.L.basis:
            lift = w.element([int(v) for v in l], [0] * len(w.pairs))
            central.append(w.central_coords(lift**p))
            for j in range(d):
                central.append(w.central_coords(w.commutator(lift, w.generator(j))))
        for c in nullspace(lin.T, p) if len(self.elems) else []:
            central.append(w.central_coords(self._product(c)))
        self.C = Subspace.span(
            np.array(central, dtype=np.int64).reshape(len(central), w.central_dim), w.central_dim, p
        )

    def _product(self, coeffs) -> ClassTwoElement:
        out = self.w.identity()
        for x, c in zip(self.elems, coeffs):
            if int(c) % self.w.p:
                out = out * x ** int(c)
        return out

    def __contains__(self, y: ClassTwoElement) -> bool:
        p = self.w.p
        l = np.array([v % p for v in y.a], dtype=np.int64)
        if not self.elems:
            return y.is_identity()
        c = solve(self.lin.T, l, p)
        if c is None:
            return False
        rest = y * self._product(c).inverse()
        return self.w.central_coords(rest) in self.C


def _check_compatible(pres: ProPPresentation, act: GeneratorAction, w: ClassTwoGroup | None = None):
    if act.d != pres.d or act.p != pres.p:
        raise IncompatibleAction("action and presentation disagree on generators or prime")
    if pres.p == 2:
        # no class-two model at p = 2; fall back to the linear check
        e = pres.exponent_matrix() % 2
        img = np.array([act.apply(r).exponent_vector(pres.d) for r in pres.relators], dtype=np.int64)
        img = img.reshape(len(pres.relators), pres.d) % 2
        span = Subspace.span(e, pres.d, 2)
        if any(row not in span for row in img):
            raise IncompatibleAction("action does not preserve the relator span mod 2")
        return
    w = w or ClassTwoGroup(pres.d, pres.p)
    closure = ClassTwoClosure(w, [w.evaluate(r) for r in pres.relators])
    for k, r in enumerate(pres.relators):
        if w.evaluate(act.apply(r)) not in closure:
            raise IncompatibleAction(
                f"image of relator {k} ({r.format(pres.names)}) is not in the normal closure of the relators modulo V^(3)"
            )


def h1_type(pres: ProPPresentation, act: GeneratorAction) -> JordanType:
    """F_p^d / (relator exponent vectors mod p) with the induced action."""
    _check_compatible(pres, act)
    p, d = pres.p, pres.d
    a = NilpotentAction.from_sigma(act.linear_matrix(), p)
    sub = Subspace.span(mod(pres.exponent_matrix(), p), d, p)
    return JordanType(quotient_type(a, sub), p)


def relator_span(pres: ProPPresentation, wedge_sign: int = 1) -> np.ndarray:
    """Central coordinates of the relators (rows); requires minimality."""
    p, d = pres.p, pres.d
    w = ClassTwoGroup(d, p, wedge_sign)
    rows = []
    for k, r in enumerate(pres.relators):
        bad = [pres.names[i] for i, v in enumerate(r.exponent_vector(d)) if v % p]
        if bad:
            raise NotMinimal(
                f"relator {k} ({r.format(pres.names)}) has nonzero exponent sum mod p in {bad}; "
                "eliminate redundant generators first"
            )
        rows.append(w.central_coords(w.evaluate(r)))
    return np.array(rows, dtype=np.int64).reshape(len(rows), w.central_dim)


def h2dec_type(pres: ProPPresentation, act: GeneratorAction, wedge_sign: int = 1) -> JordanType:
    """Jordan type of R V^(3) / V^(3), dual (and isomorphic) to H^2(Delta)^dec."""
    rows = relator_span(pres, wedge_sign)
    _check_compatible(pres, act)
    a = induced_central_action(act, wedge_sign)
    span = Subspace.span(rows, a.dim, pres.p)
    t = submodule_type(a, rows)
    if t.dim != span.dim:
        raise IncompatibleAction("relator span is not stable under the action")
    return JordanType(t, pres.p)


def profile(pres: ProPPresentation, act: GeneratorAction, wedge_sign: int = 1) -> CohomologyProfile:
    return CohomologyProfile(h1_type(pres, act), h2dec_type(pres, act, wedge_sign), pres.p)


def product_profile(a: CohomologyProfile, b: CohomologyProfile | None, kind: ProductKind) -> CohomologyProfile:
    """Profiles of a free product, or of a direct product with Z_p (b ignored)."""
    kind = ProductKind(kind)
    if kind is ProductKind.FREE:
        if b is None or a.p != b.p:
            raise ValueError("free product needs two profiles over the same prime")
        return CohomologyProfile(direct_sum(a.h1, b.h1), direct_sum(a.h2dec, b.h2dec), a.p)
    if b is not None and b.p != a.p:
        raise ValueError("profiles over different primes")
    one = JordanType({1: 1}, a.p)
    return CohomologyProfile(direct_sum(a.h1, one), direct_sum(a.h2dec, a.h1), a.p)


def v3_invariance_check(
    pres: ProPPresentation, act: GeneratorAction, extra_relators: Sequence[Word], wedge_sign: int = 1
) -> bool:
    w = ClassTwoGroup(pres.d, pres.p, wedge_sign)
    for k, r in enumerate(extra_relators):
        if not w.evaluate(r).is_identity():
            raise ExtraRelatorNotInV3(f"extra relator {k} ({r.format(pres.names)}) is nontrivial modulo V^(3)")
    before = h2dec_type(pres, act, wedge_sign)
    after = h2dec_type(pres.with_relators(extra_relators), act, wedge_sign)
    if before != after:
        raise AssertionError(f"library defect: h2dec changed from {before} to {after}")
    return True


def full_h2(pres: ProPPresentation, act: GeneratorAction):
    raise Unsupported("full H^2 needs the p-covering group algorithm, which is not implemented")
