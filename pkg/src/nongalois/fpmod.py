"""Exact linear algebra over F_p and modules over R_p = F_p[t]/(t^p).

A cyclic group C = <sigma> of order p acting on an F_p-vector space is
encoded by the nilpotent matrix A = sigma - 1 acting on column vectors.
Over F_p, (sigma - 1)^p = sigma^p - 1 = 0, so every such module is a module
over the local ring R_p with t acting as A, and it splits as a sum of the
cyclic modules M_i = R_p / (t^i), 1 <= i <= p.

All arithmetic is residue arithmetic on int64 numpy arrays; nothing here
ever touches floating point.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

import numpy as np

__all__ = [
    "is_prime",
    "mod",
    "rref",
    "rank",
    "nullspace",
    "solve",
    "inverse",
    "matmul",
    "matpow",
    "Subspace",
    "NilpotentAction",
    "JordanType",
    "jordan_type",
    "adapted_basis",
    "power_image",
    "fixed_subspace",
    "membership",
    "quotient_type",
    "submodule_type",
    "direct_sum",
    "dual_type",
    "ModulePresentation",
    "QuotientMap",
    "present_normal_form",
    "jordan_matrix",
    "poly",
    "sigma_power",
    "stable_closure",
    "restrict",
]


def is_prime(p: int) -> bool:
    if p < 2:
        return False
    d = 2
    while d * d <= p:
        if p % d == 0:
            return False
        d += 1
    return True


def _check_prime(p: int) -> None:
    if not isinstance(p, (int, np.integer)) or not is_prime(int(p)):
        raise ValueError(f"p must be a prime, got {p!r}")


def mod(a, p: int) -> np.ndarray:
    return np.asarray(a, dtype=np.int64) % p


# ---------------------------------------------------------------------------
# plain F_p linear algebra
# ---------------------------------------------------------------------------

def rref(a, p: int) -> tuple[np.ndarray, list[int]]:
    """Reduced row echelon form over F_p.

    Returns the reduced matrix (same shape as the input) and the list of
    pivot columns.
    """
    m = mod(a, p).copy()
    if m.ndim != 2:
        raise ValueError("rref expects a 2-d array")
    rows, cols = m.shape
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.nonzero(m[r:, c])[0]
        if nz.size == 0:
            continue
        piv = r + int(nz[0])
        if piv != r:
            m[[r, piv]] = m[[piv, r]]
        m[r] = (m[r] * pow(int(m[r, c]), -1, p)) % p
        col = m[:, c].copy()
        col[r] = 0
        hit = np.nonzero(col)[0]
        if hit.size:
            m[hit] = (m[hit] - np.outer(col[hit], m[r])) % p
        pivots.append(c)
        r += 1
    return m, pivots


def rank(a, p: int) -> int:
    a = np.asarray(a)
    if a.size == 0:
        return 0
    return len(rref(a, p)[1])


def nullspace(a, p: int) -> np.ndarray:
    """Basis of the right kernel {x : a x = 0}, one basis vector per row."""
    a = mod(a, p)
    n = a.shape[1]
    if a.shape[0] == 0:
        return np.eye(n, dtype=np.int64)
    r, piv = rref(a, p)
    free = [j for j in range(n) if j not in piv]
    out = np.zeros((len(free), n), dtype=np.int64)
    for k, f in enumerate(free):
        out[k, f] = 1
        for i, pc in enumerate(piv):
            out[k, pc] = (-r[i, f]) % p
    return out


def solve(a, b, p: int) -> np.ndarray | None:
    """One solution x of a x = b over F_p, or None when inconsistent."""
    a = mod(a, p)
    b = mod(b, p).reshape(-1, 1)
    rows, n = a.shape
    if rows == 0:
        return np.zeros(n, dtype=np.int64)
    r, piv = rref(np.hstack([a, b]), p)
    if n in piv:
        return None
    x = np.zeros(n, dtype=np.int64)
    for i, pc in enumerate(piv):
        x[pc] = r[i, n]
    return x


def inverse(a, p: int) -> np.ndarray:
    a = mod(a, p)
    n = a.shape[0]
    if a.shape != (n, n):
        raise ValueError("inverse of a non-square matrix")
    r, piv = rref(np.hstack([a, np.eye(n, dtype=np.int64)]), p)
    if piv[:n] != list(range(n)):
        raise ValueError("matrix is singular mod p")
    return r[:, n:].copy()


def matmul(a, b, p: int) -> np.ndarray:
    return (np.asarray(a, dtype=np.int64) @ np.asarray(b, dtype=np.int64)) % p


def matpow(a, k: int, p: int) -> np.ndarray:
    a = mod(a, p)
    out = np.eye(a.shape[0], dtype=np.int64)
    base = a
    while k > 0:
        if k & 1:
            out = matmul(out, base, p)
        base = matmul(base, base, p)
        k >>= 1
    return out


# ---------------------------------------------------------------------------
# subspaces and actions
# ---------------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class Subspace:
    """Subspace of F_p^n stored by its canonical echelon basis (rows)."""

    basis: np.ndarray
    ambient: int
    p: int

    @classmethod
    def span(cls, vectors, ambient: int, p: int) -> "Subspace":
        vs = mod(vectors, p)
        if ambient == 0 or vs.size == 0:
            return cls(np.zeros((0, ambient), dtype=np.int64), ambient, p)
        vs = vs.reshape(-1, ambient)
        r, piv = rref(vs, p)
        return cls(r[: len(piv)].copy(), ambient, p)

    @classmethod
    def column_space(cls, a, p: int) -> "Subspace":
        a = mod(a, p)
        return cls.span(a.T, a.shape[0], p)

    @property
    def dim(self) -> int:
        return self.basis.shape[0]

    def __contains__(self, v) -> bool:
        return membership(v, self)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Subspace):
            return NotImplemented
        return (self.ambient, self.p) == (other.ambient, other.p) and np.array_equal(
            self.basis, other.basis
        )

    def __le__(self, other: "Subspace") -> bool:
        return all(membership(v, other) for v in self.basis)

    def __add__(self, other: "Subspace") -> "Subspace":
        return Subspace.span(np.vstack([self.basis, other.basis]), self.ambient, self.p)

    def __repr__(self) -> str:
        return f"Subspace(dim={self.dim}, ambient={self.ambient}, p={self.p})"


def membership(v, s: Subspace) -> bool:
    v = mod(v, s.p).reshape(-1)
    if v.shape[0] != s.ambient:
        raise ValueError(f"vector of length {v.shape[0]} in ambient space of dim {s.ambient}")
    if not v.any():
        return True
    if s.dim == 0:
        return False
    return rank(np.vstack([s.basis, v]), s.p) == s.dim


@dataclass(frozen=True, eq=False)
class NilpotentAction:
    """The matrix A of sigma - 1 on an n-dimensional F_p C-module.

    Validated on construction: A is square, reduced mod p and A^p = 0.
    """

    matrix: np.ndarray
    p: int

    def __post_init__(self):
        _check_prime(self.p)
        m = mod(self.matrix, self.p)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise ValueError(f"action matrix must be square, got shape {m.shape}")
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)
        if matpow(m, self.p, self.p).any():
            raise ValueError("action is not unipotent: (sigma - 1)^p != 0")

    @classmethod
    def from_sigma(cls, sigma, p: int) -> "NilpotentAction":
        s = mod(sigma, p)
        return cls((s - np.eye(s.shape[0], dtype=np.int64)) % p, p)

    @classmethod
    def zero(cls, n: int, p: int) -> "NilpotentAction":
        return cls(np.zeros((n, n), dtype=np.int64), p)

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    def power(self, k: int) -> np.ndarray:
        return matpow(self.matrix, k, self.p)

    def sigma(self) -> np.ndarray:
        return (self.matrix + np.eye(self.dim, dtype=np.int64)) % self.p

    def apply(self, v, k: int = 1) -> np.ndarray:
        return matmul(self.power(k), mod(v, self.p).reshape(-1), self.p)

    def __repr__(self) -> str:
        return f"NilpotentAction(dim={self.dim}, p={self.p})"


class JordanType(Mapping[int, int]):
    """Multiset of cyclic block sizes: block size -> multiplicity.

    Zero multiplicities are dropped, so equality is equality of the module's
    isomorphism class. Block sizes must lie in [1, p] when p is given.
    """

    __slots__ = ("_m", "p")

    def __init__(self, mult: Mapping[int, int] | Iterable[tuple[int, int]] = (), p: int | None = None):
        items = dict(mult)
        m = {}
        for size, k in items.items():
            size, k = int(size), int(k)
            if k < 0:
                raise ValueError(f"negative multiplicity {k} for block size {size}")
            if size < 1 or (p is not None and size > p):
                raise ValueError(f"block size {size} out of range for p={p}")
            if k:
                m[size] = k
        self._m = dict(sorted(m.items()))
        self.p = p

    @classmethod
    def from_sizes(cls, sizes: Iterable[int], p: int | None = None) -> "JordanType":
        m: dict[int, int] = {}
        for s in sizes:
            m[s] = m.get(s, 0) + 1
        return cls(m, p)

    def __getitem__(self, size: int) -> int:
        return self._m[size]

    def get(self, size, default=0):
        return self._m.get(size, default)

    def __iter__(self):
        return iter(self._m)

    def __len__(self) -> int:
        return len(self._m)

    def __eq__(self, other) -> bool:
        if isinstance(other, JordanType):
            return self._m == other._m
        if isinstance(other, Mapping):
            return self._m == {int(k): v for k, v in other.items() if v}
        return NotImplemented

    def __hash__(self):
        return hash(tuple(self._m.items()))

    @property
    def dim(self) -> int:
        return sum(s * k for s, k in self._m.items())

    def sizes(self) -> list[int]:
        """Block sizes in decreasing order, with repetition."""
        return [s for s in sorted(self._m, reverse=True) for _ in range(self._m[s])]

    def to_json(self) -> dict[str, int]:
        return {str(s): k for s, k in self._m.items()}

    def __repr__(self) -> str:
        body = ", ".join(f"{s}: {k}" for s, k in self._m.items())
        return f"JordanType({{{body}}})"


def direct_sum(a: JordanType, b: JordanType) -> JordanType:
    m = dict(a)
    for s, k in b.items():
        m[s] = m.get(s, 0) + k
    return JordanType(m, a.p if a.p is not None else b.p)


def dual_type(a: JordanType) -> JordanType:
    # every cyclic F_p C-module is self-dual
    return a


def _rank_profile(action: NilpotentAction) -> list[int]:
    """[rank A^0, rank A^1, ..., rank A^(p+1)]."""
    p, n = action.p, action.dim
    out = [n]
    cur = np.eye(n, dtype=np.int64)
    for _ in range(p + 1):
        cur = matmul(cur, action.matrix, p)
        out.append(rank(cur, p) if n else 0)
    return out


def _type_from_ranks(ranks: Sequence[int], p: int) -> JordanType:
    return JordanType(
        {i: ranks[i - 1] - 2 * ranks[i] + ranks[i + 1] for i in range(1, p + 1)}, p
    )


def jordan_type(action: NilpotentAction) -> JordanType:
    """Block multiplicities m_i = r_{i-1} - 2 r_i + r_{i+1}, r_k = rank A^k."""
    jt = _type_from_ranks(_rank_profile(action), action.p)
    assert jt.dim == action.dim
    return jt


def power_image(action: NilpotentAction, k: int) -> Subspace:
    if not 0 <= k <= action.p:
        raise ValueError(f"power {k} outside [0, {action.p}]")
    return Subspace.column_space(action.power(k), action.p)


def fixed_subspace(action: NilpotentAction) -> Subspace:
    return Subspace.span(nullspace(action.matrix, action.p), action.dim, action.p)


def jordan_matrix(sizes: Sequence[int], p: int) -> np.ndarray:
    """Nilpotent Jordan matrix with chains x, Ax, ..., A^(s-1)x per block.

    Within each block the generator comes first, so A is the lower shift.
    """
    n = sum(sizes)
    a = np.zeros((n, n), dtype=np.int64)
    off = 0
    for s in sizes:
        for j in range(s - 1):
            a[off + j + 1, off + j] = 1
        off += s
    return a


def adapted_basis(action: NilpotentAction, seed=None) -> tuple[np.ndarray, list[int]]:
    """Change of basis putting the action into Jordan form.

    Returns ``(C, sizes)`` with ``C @ A @ inv(C)`` equal to
    ``jordan_matrix(sizes)``; the block sizes are in decreasing order.
    Column j of ``inv(C)`` is the j-th adapted basis vector.

    ``seed`` optionally names a vector w whose chain w, Aw, ... must be the
    first block of its length. The bottom of that chain must not lie in
    ``power_image(action, len)``, otherwise ValueError.
    """
    p, n = action.p, action.dim
    a = action.matrix
    powers = [np.eye(n, dtype=np.int64)]
    for _ in range(p):
        powers.append(matmul(powers[-1], a, p))

    seed_len = None
    if seed is not None:
        seed = mod(seed, p).reshape(-1)
        if not seed.any():
            raise ValueError("seed vector is zero")
        seed_len = next(k for k in range(1, p + 1) if not matmul(powers[k], seed, p).any())

    chains: list[tuple[int, np.ndarray]] = []
    bottoms = np.zeros((0, n), dtype=np.int64)
    for s in range(p, 0, -1):
        candidates = []
        if seed_len == s:
            candidates.append(seed)
        candidates.extend(nullspace(powers[s], p))
        for v in candidates:
            bot = matmul(powers[s - 1], v, p)
            if not bot.any():
                if v is seed:
                    raise ValueError("seed chain is shorter than expected")
                continue
            trial = np.vstack([bottoms, bot])
            if rank(trial, p) == trial.shape[0]:
                bottoms = trial
                chains.append((s, v))
            elif v is seed:
                raise ValueError("seed chain is not a direct summand")
    sizes = [s for s, _ in chains]
    cols = [matmul(powers[j], v, p) for s, v in chains for j in range(s)]
    b = np.array(cols, dtype=np.int64).T.reshape(n, n) if n else np.zeros((0, 0), dtype=np.int64)
    c = inverse(b, p) if n else b
    return c, sizes


def quotient_type(action: NilpotentAction, sub: Subspace) -> JordanType:
    """Jordan type of the quotient module by an A-stable subspace."""
    p, n = action.p, action.dim
    ranks = []
    cur = np.eye(n, dtype=np.int64)
    for _ in range(p + 2):
        ranks.append(rank(np.vstack([cur.T, sub.basis]), p) - sub.dim if n else 0)
        cur = matmul(cur, action.matrix, p)
    return _type_from_ranks(ranks, p)


def stable_closure(action: NilpotentAction, generators) -> Subspace:
    """Smallest A-stable subspace containing the generators."""
    p, n = action.p, action.dim
    gens = mod(generators, p)
    if n == 0 or gens.size == 0:
        return Subspace.span([], n, p)
    gens = gens.reshape(-1, n)
    span = [gens]
    cur = gens
    for _ in range(p - 1):
        cur = matmul(cur, action.matrix.T, p)
        span.append(cur)
    return Subspace.span(np.vstack(span), n, p)


def restrict(action: NilpotentAction, sub: Subspace) -> NilpotentAction:
    """Restriction of A to an A-stable subspace, in the subspace's echelon basis."""
    p = action.p
    rows = []
    for b in sub.basis:
        image = matmul(action.matrix, b, p)
        x = solve(sub.basis.T, image, p)
        if x is None:
            raise ValueError("subspace is not stable under the action")
        rows.append(x)
    m = np.array(rows, dtype=np.int64).T.reshape(sub.dim, sub.dim)
    return NilpotentAction(m, p)


def submodule_type(action: NilpotentAction, generators) -> JordanType:
    closure = stable_closure(action, generators)
    return jordan_type(restrict(action, closure))


# ---------------------------------------------------------------------------
# presentations over the local ring R_p
# ---------------------------------------------------------------------------

def _pmul(f: np.ndarray, g: np.ndarray, p: int) -> np.ndarray:
    n = f.shape[-1]
    return np.convolve(f, g)[:n] % p


def _valuation(f: np.ndarray) -> int:
    nz = np.nonzero(f)[0]
    return int(nz[0]) if nz.size else f.shape[-1]


def _unit_inverse(f: np.ndarray, p: int) -> np.ndarray:
    n = f.shape[-1]
    c0 = int(f[0]) % p
    if c0 == 0:
        raise ValueError("not a unit of R_p")
    inv0 = pow(c0, -1, p)
    g = np.zeros(n, dtype=np.int64)
    g[0] = inv0
    for k in range(1, n):
        s = int(np.dot(f[1 : k + 1], g[k - 1 :: -1][:k])) % p
        g[k] = (-s * inv0) % p
    return g


def poly(coeffs: Sequence[int], p: int) -> np.ndarray:
    """Element of R_p from low-to-high coefficients (truncated at t^p)."""
    out = np.zeros(p, dtype=np.int64)
    c = list(coeffs)[:p]
    out[: len(c)] = c
    return out % p


def sigma_power(i: int, p: int) -> np.ndarray:
    """(1 + t)^i in R_p, i.e. sigma^i with sigma = 1 + t."""
    i %= p
    one_plus_t = poly([1, 1], p)
    out = poly([1], p)
    for _ in range(i):
        out = _pmul(out, one_plus_t, p)
    return out


@dataclass(frozen=True, eq=False)
class ModulePresentation:
    """Quotient of the free module R_p^rank by the R_p-span of relation rows.

    ``relations`` has shape (m, rank, p): entry [i, j] is the polynomial
    coefficient vector of the j-th coordinate of the i-th relation.
    """

    p: int
    rank: int
    relations: np.ndarray = field(default=None)

    def __post_init__(self):
        _check_prime(self.p)
        rel = self.relations
        if rel is None:
            rel = np.zeros((0, self.rank, self.p), dtype=np.int64)
        rel = mod(rel, self.p)
        if rel.ndim != 3 or rel.shape[1:] != (self.rank, self.p):
            raise ValueError(f"relations must have shape (m, {self.rank}, {self.p}), got {rel.shape}")
        object.__setattr__(self, "relations", rel)

    @classmethod
    def from_action(cls, action: NilpotentAction) -> "ModulePresentation":
        """The module F_p^n with t acting as A, presented on the basis e_j."""
        p, n = action.p, action.dim
        rel = np.zeros((n, n, p), dtype=np.int64)
        for j in range(n):
            rel[j, j, 1] = 1
            rel[j, :, 0] = (-action.matrix[:, j]) % p
        return cls(p, n, rel)


@dataclass(frozen=True, eq=False)
class QuotientMap:
    """Map R_p^rank -> adapted coordinates of the quotient module.

    ``transform`` (rank, rank, p) is the column-operation matrix V; an element
    x maps to x V, whose k-th coordinate, truncated to ``lengths[k]``
    coefficients, gives the block of column ``order[k]``.
    """

    p: int
    transform: np.ndarray
    columns: list[int]
    sizes: list[int]

    @property
    def dim(self) -> int:
        return sum(self.sizes)

    @property
    def action(self) -> NilpotentAction:
        return NilpotentAction(jordan_matrix(self.sizes, self.p), self.p)

    def __call__(self, x) -> np.ndarray:
        p = self.p
        x = mod(x, p)
        rank_ = self.transform.shape[0]
        x = x.reshape(rank_, p)
        y = np.zeros((rank_, p), dtype=np.int64)
        for j in range(rank_):
            for i in range(rank_):
                if x[i].any():
                    y[j] = (y[j] + _pmul(x[i], self.transform[i, j], p)) % p
        out = [y[c][:s] for c, s in zip(self.columns, self.sizes)]
        return np.concatenate(out).astype(np.int64) if out else np.zeros(0, dtype=np.int64)


def present_normal_form(mp: ModulePresentation) -> tuple[JordanType, QuotientMap]:
    """Diagonalize the relation matrix over the local ring R_p.

    Pivots on an entry of minimal t-valuation (lowest (row, column) on
    ties), scales it to exactly t^v with a column unit, then clears its row
    and column. A t^v pivot leaves the block R_p/(t^v) of size v; columns
    without a pivot are free blocks of size p.
    """
    p, r = mp.p, mp.rank
    m = mp.relations.copy()
    rows = m.shape[0]
    v_mat = np.zeros((r, r, p), dtype=np.int64)
    for j in range(r):
        v_mat[j, j, 0] = 1

    pivot_val: list[int] = []
    k = 0
    while k < min(rows, r):
        best = None
        for i in range(k, rows):
            for j in range(k, r):
                val = _valuation(m[i, j])
                if val < p and (best is None or val < best[0]):
                    best = (val, i, j)
        if best is None:
            break
        val, i0, j0 = best
        m[[k, i0]] = m[[i0, k]]
        m[:, [k, j0]] = m[:, [j0, k]]
        v_mat[:, [k, j0]] = v_mat[:, [j0, k]]

        unit = np.zeros(p, dtype=np.int64)
        unit[: p - val] = m[k, k, val:]
        uinv = _unit_inverse(unit, p)
        for i in range(rows):
            m[i, k] = _pmul(m[i, k], uinv, p)
        for i in range(r):
            v_mat[i, k] = _pmul(v_mat[i, k], uinv, p)

        # clear row k with column operations
        for j in range(r):
            if j == k or not m[k, j].any():
                continue
            q = np.zeros(p, dtype=np.int64)
            q[: p - val] = m[k, j, val:]
            for i in range(rows):
                m[i, j] = (m[i, j] - _pmul(q, m[i, k], p)) % p
            for i in range(r):
                v_mat[i, j] = (v_mat[i, j] - _pmul(q, v_mat[i, k], p)) % p
        # clear column k with row operations
        for i in range(rows):
            if i == k or not m[i, k].any():
                continue
            q = np.zeros(p, dtype=np.int64)
            q[: p - val] = m[i, k, val:]
            for j in range(r):
                m[i, j] = (m[i, j] - _pmul(q, m[k, j], p)) % p
        pivot_val.append(val)
        k += 1

    lengths = pivot_val + [p] * (r - len(pivot_val))
    order = sorted(range(r), key=lambda c: (-lengths[c], c))
    columns = [c for c in order if lengths[c] > 0]
    sizes = [lengths[c] for c in columns]
    qmap = QuotientMap(p, v_mat, columns, sizes)
    return JordanType.from_sizes(sizes, p), qmap
