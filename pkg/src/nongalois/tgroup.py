"""T-groups: extensions 1 -> N -> T -> C_p -> 1 with N elementary abelian.

A T-group is determined up to isomorphism by the F_p C-module N (as a
nilpotent action A = sigma - 1) together with the class of sigma^p in the
fixed space N^C. The invariants t_1..t_p, u are read off from the Jordan
type of A and the depth of sigma^p in the filtration Im A^k.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import product
from typing import Iterator, Mapping

import numpy as np

from .fpmod import (
    NilpotentAction,
    adapted_basis,
    jordan_matrix,
    jordan_type,
    matmul,
    matpow,
    membership,
    mod,
    power_image,
    solve,
)

__all__ = [
    "TInvariants",
    "TGroupData",
    "ExplicitTGroup",
    "NotAdmissible",
    "SizeBound",
    "invariants_from_data",
    "admissible",
    "canonical",
    "isomorphic",
    "galois_realizable",
    "oracle_invariants",
    "all_invariants",
]


class NotAdmissible(ValueError):
    pass


class SizeBound(ValueError):
    pass


@dataclass(frozen=True)
class TInvariants:
    """t = (t_1, ..., t_p) and u, with 1 <= u <= p."""

    p: int
    t: tuple[int, ...]
    u: int

    def __post_init__(self):
        object.__setattr__(self, "t", tuple(int(x) for x in self.t))
        if len(self.t) != self.p:
            raise ValueError(f"need exactly p={self.p} invariants t_i, got {len(self.t)}")
        if any(x < 0 for x in self.t):
            raise ValueError("invariants t_i must be natural numbers")
        if not 1 <= self.u <= self.p:
            raise ValueError(f"u={self.u} outside [1, {self.p}]")

    @classmethod
    def from_map(cls, p: int, t: Mapping[int, int], u: int) -> "TInvariants":
        for i in t:
            if not 1 <= int(i) <= p:
                raise ValueError(f"invariant index {i} outside [1, {p}]")
        return cls(p, tuple(int(t.get(i, t.get(str(i), 0))) for i in range(1, p + 1)), u)

    def __getitem__(self, i: int) -> int:
        """t_i, 1-based."""
        return self.t[i - 1]

    def to_json(self) -> dict:
        return {"t": {str(i): v for i, v in enumerate(self.t, 1) if v}, "u": self.u}


@dataclass(frozen=True, eq=False)
class TGroupData:
    """(p, action of sigma - 1 on N, class of sigma^p in N)."""

    action: NilpotentAction
    sigma_p: np.ndarray

    def __post_init__(self):
        sp = mod(self.sigma_p, self.p).reshape(-1)
        if sp.shape[0] != self.action.dim:
            raise ValueError("sigma_p has the wrong length")
        if self.action.apply(sp).any():
            raise ValueError("sigma_p is not fixed by sigma")
        sp.setflags(write=False)
        object.__setattr__(self, "sigma_p", sp)

    @property
    def p(self) -> int:
        return self.action.p

    @property
    def dim(self) -> int:
        return self.action.dim

    @classmethod
    def from_blocks(cls, sizes, sigma_p, p: int) -> "TGroupData":
        return cls(NilpotentAction(jordan_matrix(list(sizes), p), p), np.asarray(sigma_p))

    def adapted(self) -> tuple["TGroupData", list[int]]:
        """Same group in a Jordan basis, sigma^p at the bottom of the first
        block of length u when sigma^p != 0."""
        new, sizes, _ = self.adapted_with_basis()
        return new, sizes

    def adapted_with_basis(self) -> tuple["TGroupData", list[int], np.ndarray]:
        a = self.action
        if self.sigma_p.any():
            u = invariants_from_data(self).u
            w = solve(a.power(u - 1), self.sigma_p, self.p)
            c, sizes = adapted_basis(a, seed=w)
        else:
            c, sizes = adapted_basis(a)
        new = TGroupData(
            NilpotentAction(jordan_matrix(sizes, self.p), self.p), matmul(c, self.sigma_p, self.p)
        )
        return new, sizes, c

    def to_json(self) -> dict:
        return {
            "p": self.p,
            "action": self.action.matrix.tolist(),
            "sigma_p": self.sigma_p.tolist(),
            "jordan_type": jordan_type(self.action).to_json(),
        }


def invariants_from_data(d: TGroupData) -> TInvariants:
    p = d.p
    jt = jordan_type(d.action)
    t = [jt.get(i, 0) for i in range(1, p + 1)]
    sp_zero = not d.sigma_p.any()
    if sp_zero and all(s == 1 for s in jt):
        # T abelian of exponent p: the complement <sigma> is an extra M_1
        t[0] += 1
    if sp_zero:
        u = p
    else:
        u = max(i for i in range(1, p + 1) if membership(d.sigma_p, power_image(d.action, i - 1)))
    return TInvariants(p, tuple(t), u)


def admissible(inv: TInvariants) -> bool:
    p, u = inv.p, inv.u
    if u < p and inv[u] < 1:
        return False
    if u == p and all(inv[i] == 0 for i in range(2, p + 1)) and inv[1] < 1:
        return False
    return True


def canonical(inv: TInvariants) -> TGroupData:
    """The model T-group for admissible invariants.

    For u < p the first block of size u is the distinguished factor X and
    sigma^p is (sigma - 1)^(u-1) of its generator; for u = p the extension
    splits.
    """
    if not admissible(inv):
        raise NotAdmissible(f"invariants {inv.to_json()} violate the admissibility conditions")
    p, u = inv.p, inv.u
    mult = {i: inv[i] for i in range(1, p + 1)}
    if u == p:
        if all(inv[i] == 0 for i in range(2, p + 1)):
            mult[1] -= 1
        sizes = [s for s in range(p, 0, -1) for _ in range(mult[s])]
        return TGroupData.from_blocks(sizes, np.zeros(sum(sizes), dtype=np.int64), p)
    sizes = [s for s in range(p, 0, -1) for _ in range(mult[s])]
    sp = np.zeros(sum(sizes), dtype=np.int64)
    offset = sum(s for s in sizes if s > u)
    sp[offset + u - 1] = 1
    return TGroupData.from_blocks(sizes, sp, p)


def isomorphic(a: TGroupData, b: TGroupData) -> bool:
    return a.p == b.p and invariants_from_data(a) == invariants_from_data(b)


def galois_realizable(inv: TInvariants, p: int | None = None) -> bool:
    """Whether the invariants are those of some T_{E/F} (xi_p in F or char p)."""
    p = inv.p if p is None else p
    if p != inv.p:
        raise ValueError("prime mismatch")
    if p == 2:
        return True
    return inv.u in (1, 2) and inv[2] == inv.u - 1 and all(inv[i] == 0 for i in range(3, p))


def all_invariants(p: int, max_total: int) -> Iterator[TInvariants]:
    """Every (t, u) with sum(t) <= max_total, admissible or not."""
    for t in product(range(max_total + 1), repeat=p):
        if sum(t) <= max_total:
            for u in range(1, p + 1):
                yield TInvariants(p, t, u)


# ---------------------------------------------------------------------------
# explicit groups, for brute-force validation
# ---------------------------------------------------------------------------

class ExplicitTGroup:
    """All p^(dim N + 1) elements (n, k) with

        (n, k)(n', k') = (n + sigma^k n' + carry * sigma_p, k + k' mod p),

    carry = 1 iff k + k' >= p. Elements are coded as integers
    k * p^dim + sum n_j p^j so subgroups are plain Python sets.
    """

    def __init__(self, data: TGroupData, bound: int | None = None):
        p, n = data.p, data.dim
        bound = p**6 if bound is None else bound
        self.order = p ** (n + 1)
        if self.order > bound:
            raise SizeBound(f"group of order {self.order} exceeds the enumeration bound {bound}")
        self.data = data
        self.p, self.n = p, n
        sigma = data.action.sigma()
        self._spow = np.stack([matpow(sigma, k, p) for k in range(p)])
        self._weights = p ** np.arange(n + 1, dtype=np.int64)
        self._sp = data.sigma_p.astype(np.int64)

    # coding ---------------------------------------------------------------
    def encode(self, x: np.ndarray) -> np.ndarray:
        return np.atleast_2d(x) @ self._weights

    def decode(self, codes) -> np.ndarray:
        codes = np.asarray(codes, dtype=np.int64).reshape(-1)
        return (codes[:, None] // self._weights) % self.p

    def all_codes(self) -> np.ndarray:
        return np.arange(self.order, dtype=np.int64)

    def identity(self) -> int:
        return 0

    def generators(self) -> list[int]:
        return [int(w) for w in self._weights]

    # arithmetic on decoded arrays ------------------------------------------
    def mul(self, x: np.ndarray, y: np.ndarray) -> np.ndarray:
        p, n = self.p, self.n
        x, y = np.atleast_2d(x), np.atleast_2d(y)
        kx, ky = x[:, n], y[:, n]
        moved = np.einsum("mij,mj->mi", self._spow[kx], y[:, :n])
        carry = (kx + ky >= p).astype(np.int64)
        out = np.empty(np.broadcast_shapes(x.shape, y.shape), dtype=np.int64)
        out[:, :n] = (x[:, :n] + moved + carry[:, None] * self._sp) % p
        out[:, n] = (kx + ky) % p
        return out

    def inv(self, x: np.ndarray) -> np.ndarray:
        p, n = self.p, self.n
        x = np.atleast_2d(x)
        k = x[:, n]
        kinv = (-k) % p
        carry = (k != 0).astype(np.int64)
        base = x[:, :n] + carry[:, None] * self._sp
        out = np.empty_like(x)
        out[:, :n] = (-np.einsum("mij,mj->mi", self._spow[kinv], base)) % p
        out[:, n] = kinv
        return out

    def mul_codes(self, a, b) -> np.ndarray:
        return self.encode(self.mul(self.decode(a), self.decode(b)))

    def pow_codes(self, a, e: int) -> np.ndarray:
        x = self.decode(a)
        out = np.zeros_like(x)
        for _ in range(e):
            out = self.mul(out, x)
        return self.encode(out)

    def commutators(self, xs, ys) -> np.ndarray:
        """[x, y] = x y x^-1 y^-1 for all pairs (x in xs, y in ys)."""
        x = self.decode(np.repeat(np.asarray(xs, dtype=np.int64), len(ys)))
        y = self.decode(np.tile(np.asarray(ys, dtype=np.int64), len(xs)))
        return self.encode(self.mul(self.mul(x, y), self.mul(self.inv(x), self.inv(y))))

    # subgroups --------------------------------------------------------------
    def subgroup(self, gens) -> tuple[frozenset[int], list[int]]:
        """Subgroup generated by ``gens`` and an irredundant generating list."""
        elems = {0}
        kept: list[int] = []
        for g in np.unique(np.asarray(list(gens), dtype=np.int64)):
            g = int(g)
            if g in elems:
                continue
            kept.append(g)
            elems = self._close(elems, kept)
        return frozenset(elems), kept

    def _close(self, elems: set[int], gens: list[int]) -> set[int]:
        elems = set(elems)
        frontier = np.fromiter(elems, dtype=np.int64)
        g = np.asarray(gens, dtype=np.int64)
        while frontier.size:
            prods = self.mul_codes(np.repeat(frontier, len(g)), np.tile(g, len(frontier)))
            new = set(np.unique(prods).tolist()) - elems
            elems |= new
            frontier = np.fromiter(new, dtype=np.int64)
        return elems

    def normal_closure(self, gens) -> tuple[frozenset[int], list[int]]:
        h, hg = self.subgroup(gens)
        tg = np.asarray(self.generators(), dtype=np.int64)
        while True:
            hs = np.fromiter(h, dtype=np.int64)
            x = self.decode(np.repeat(tg, len(hs)))
            y = self.decode(np.tile(hs, len(tg)))
            conj = set(self.encode(self.mul(self.mul(x, y), self.inv(x))).tolist())
            if conj <= h:
                return h, hg
            h, hg = self.subgroup(hg + sorted(conj - h))

    def commutator_subgroup(self, h_gens) -> tuple[frozenset[int], list[int]]:
        """[T, H] for H generated by ``h_gens``: the normal closure of all
        [x, h] with x ranging over T and h over the generators of H."""
        if not h_gens:
            return frozenset({0}), []
        return self.normal_closure(self.commutators(self.all_codes(), h_gens))

    def lower_central_series(self, length: int) -> list[frozenset[int]]:
        """[T_(1), ..., T_(length)] with T_(1) = T, T_(i+1) = [T, T_(i)]."""
        series = [frozenset(range(self.order))]
        gens = self.generators()
        while len(series) < length:
            h, gens = self.commutator_subgroup(gens)
            series.append(h)
        return series

    def center(self) -> frozenset[int]:
        codes = self.all_codes()
        x = self.decode(codes)
        ok = np.ones(len(codes), dtype=bool)
        for g in self.generators():
            y = self.decode(np.full(len(codes), g))
            ok &= self.encode(self.mul(x, y)) == self.encode(self.mul(y, x))
        return frozenset(codes[ok].tolist())

    def power_subgroup(self) -> frozenset[int]:
        """T^p: the subgroup generated by all p-th powers."""
        return self.subgroup(self.pow_codes(self.all_codes(), self.p))[0]

    def element_order_divides(self, codes, e: int) -> np.ndarray:
        return self.pow_codes(codes, e) == 0

    def in_N(self, codes) -> set[int]:
        return {int(c) for c in codes if self.decode(c)[0, self.n] == 0}


def oracle_invariants(g: ExplicitTGroup) -> TInvariants:
    """Invariants computed from their group-theoretic definitions."""
    p = g.p
    series = g.lower_central_series(p + 1)
    z = g.center()
    zc = np.fromiter(z, dtype=np.int64)
    zp = set(zc[g.element_order_divides(zc, p)].tolist())

    def logp(a: int, b: int) -> int:
        assert a % b == 0
        k = round(math.log(a // b, p))
        assert p**k == a // b
        return k

    z2 = z & series[1]
    assert z2 <= zp
    t = [logp(len(zp), len(z2))]
    for i in range(2, p + 1):
        t.append(logp(len(z & series[i - 1]), len(z & series[i])))
    tp = g.power_subgroup()
    u = max(i for i in range(1, p + 1) if tp <= series[i - 1])
    return TInvariants(p, tuple(t), u)
