"""Integer and local-ring (Z/p^e) linear algebra for cohomology computations."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .groups import prime_factors


@dataclass(frozen=True)
class IntMatrix:
    rows: int
    cols: int
    entries: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        if len(self.entries) != self.rows or any(len(r) != self.cols for r in self.entries):
            raise ValueError("entry count does not match dimensions")

    @classmethod
    def from_rows(cls, rows, cols: int | None = None) -> "IntMatrix":
        rows = [tuple(int(x) for x in r) for r in rows]
        if cols is None:
            cols = len(rows[0]) if rows else 0
        return cls(len(rows), cols, tuple(rows))

    @classmethod
    def identity(cls, n: int) -> "IntMatrix":
        return cls.from_rows([[int(i == j) for j in range(n)] for i in range(n)], n)

    def tolist(self) -> list[list[int]]:
        return [list(r) for r in self.entries]

    def __matmul__(self, other: "IntMatrix") -> "IntMatrix":
        if self.cols != other.rows:
            raise ValueError("dimension mismatch")
        cols = list(zip(*other.entries)) if other.rows else [()] * other.cols
        out = [[sum(a * b for a, b in zip(r, c)) for c in cols] for r in self.entries]
        return IntMatrix.from_rows(out, other.cols)

    def diagonal(self) -> list[int]:
        return [self.entries[i][i] for i in range(min(self.rows, self.cols))]


def smith_normal_form(A: IntMatrix) -> tuple[IntMatrix, IntMatrix, IntMatrix]:
    """Return (S, U, V) with U A V = S, U and V unimodular, S diagonal, d1 | d2 | ...

    Pivots are chosen deterministically: smallest nonzero absolute value,
    first in row-major order.
    """
    m, n = A.rows, A.cols
    S = [list(r) for r in A.entries]
    U = [[int(i == j) for j in range(m)] for i in range(m)]
    V = [[int(i == j) for j in range(n)] for i in range(n)]

    def swap_rows(i, j):
        S[i], S[j] = S[j], S[i]
        U[i], U[j] = U[j], U[i]

    def swap_cols(i, j):
        for row in S:
            row[i], row[j] = row[j], row[i]
        for row in V:
            row[i], row[j] = row[j], row[i]

    def add_row(dst, src, f):  # row_dst += f * row_src
        if f:
            S[dst] = [a + f * b for a, b in zip(S[dst], S[src])]
            U[dst] = [a + f * b for a, b in zip(U[dst], U[src])]

    def add_col(dst, src, f):
        if f:
            for row in S:
                row[dst] += f * row[src]
            for row in V:
                row[dst] += f * row[src]

    t = 0
    while t < min(m, n):
        best = None
        for i in range(t, m):
            for j in range(t, n):
                if S[i][j] and (best is None or abs(S[i][j]) < best[0]):
                    best = (abs(S[i][j]), i, j)
        if best is None:
            break
        _, i, j = best
        swap_rows(t, i)
        swap_cols(t, j)
        while True:
            p = S[t][t]
            done = True
            for i in range(t + 1, m):
                if S[i][t]:
                    add_row(i, t, -(S[i][t] // p))
                    if S[i][t]:
                        done = False
            for j in range(t + 1, n):
                if S[t][j]:
                    add_col(j, t, -(S[t][j] // p))
                    if S[t][j]:
                        done = False
            if not done:
                best = None
                for i in range(t, m):
                    if S[i][t] and (best is None or abs(S[i][t]) < best[0]):
                        best = (abs(S[i][t]), i, 0)
                for j in range(t, n):
                    if S[t][j] and abs(S[t][j]) < best[0]:
                        best = (abs(S[t][j]), 0, j)
                _, i, j = best
                if i:
                    swap_rows(t, i)
                elif j:
                    swap_cols(t, j)
                continue
            # divisibility: pivot must divide the rest of the submatrix
            bad = next(((i, j) for i in range(t + 1, m) for j in range(t + 1, n) if S[i][j] % p), None)
            if bad is None:
                break
            add_row(t, bad[0], 1)
        if S[t][t] < 0:
            S[t] = [-a for a in S[t]]
            U[t] = [-a for a in U[t]]
        t += 1
    return (IntMatrix.from_rows(S, n), IntMatrix.from_rows(U, m), IntMatrix.from_rows(V, n))


def invariant_factors(A: IntMatrix) -> list[int]:
    S, _, _ = smith_normal_form(A)
    return [d for d in S.diagonal() if d]


# ---------------------------------------------------------------- Z/p^e


def valuations(x: np.ndarray, p: int, e: int) -> np.ndarray:
    """p-adic valuation of residues mod p^e (zero counts as e)."""
    x = np.asarray(x, dtype=np.int64).copy()
    v = np.where(x == 0, e, 0)
    for _ in range(e):
        hit = (x != 0) & (x % p == 0)
        if not hit.any():
            break
        v = v + hit
        x = np.where(hit, x // p, x)
    return v


@dataclass
class LocalSNF:
    """U A V = D over Z/p^e; ``vals[i]`` is the valuation of the i-th diagonal entry."""

    p: int
    e: int
    vals: list[int]
    U: np.ndarray | None
    Uinv: np.ndarray | None
    V: np.ndarray | None
    Vinv: np.ndarray | None


def _pivot(sub: np.ndarray, p: int, e: int) -> tuple[int, int, int] | None:
    """Entry of least valuation, preferring a unit in the leading column."""
    col = sub[:, 0] % p != 0
    if col.any():
        return int(col.argmax()), 0, 0
    units = sub % p != 0
    flat = int(units.argmax())
    if units.flat[flat]:
        i, j = divmod(flat, sub.shape[1])
        return i, j, 0
    nz = np.nonzero(sub)
    if nz[0].size == 0:
        return None
    v = valuations(sub[nz], p, e)
    k = int(np.argmin(v))
    return int(nz[0][k]), int(nz[1][k]), int(v[k])


def local_snf(A: np.ndarray, p: int, e: int, left: bool = False, right: bool = False) -> LocalSNF:
    q = p**e
    A = np.asarray(A, dtype=np.int64) % q
    r, c = A.shape
    U = np.eye(r, dtype=np.int64) if left else None
    Uinv = np.eye(r, dtype=np.int64) if left else None
    V = np.eye(c, dtype=np.int64) if right else None
    Vinv = np.eye(c, dtype=np.int64) if right else None
    vals: list[int] = []
    for t in range(min(r, c)):
        piv = _pivot(A[t:, t:], p, e)
        if piv is None:
            break
        i, j, a = piv
        i, j = i + t, j + t
        if i != t:
            A[[t, i]] = A[[i, t]]
            if left:
                U[[t, i]] = U[[i, t]]
                Uinv[:, [t, i]] = Uinv[:, [i, t]]
        if j != t:
            A[:, [t, j]] = A[:, [j, t]]
            if right:
                V[:, [t, j]] = V[:, [j, t]]
                Vinv[[t, j]] = Vinv[[j, t]]
        pa = p**a
        unit = int(A[t, t]) // pa
        uinv = pow(unit, -1, q)
        A[t] = (A[t] * uinv) % q
        if left:
            U[t] = (U[t] * uinv) % q
            Uinv[:, t] = (Uinv[:, t] * unit) % q
        F = A[t + 1:, t] // pa
        rows = np.flatnonzero(F)
        if rows.size:
            F = F[rows]
            rows = rows + t + 1
            A[rows, t:] = (A[rows, t:] - np.outer(F, A[t, t:])) % q
            if left:
                U[rows] = (U[rows] - np.outer(F, U[t])) % q
                Uinv[:, t] = (Uinv[:, t] + Uinv[:, rows] @ F) % q
        G = A[t, t + 1:] // pa
        cols = np.flatnonzero(G)
        if cols.size:
            A[t, t + 1:] = 0
            if right:
                G = G[cols]
                cols = cols + t + 1
                V[:, cols] = (V[:, cols] - np.outer(V[:, t], G)) % q
                Vinv[t] = (Vinv[t] + G @ Vinv[cols]) % q
        vals.append(a)
    return LocalSNF(p, e, vals, U, Uinv, V, Vinv)


@dataclass
class LocalQuotient:
    """ker(C) / im(B) over Z/p^e, with generators and a coordinate map."""

    p: int
    e: int
    orders: list[int]            # p^b_j, all > 1
    generators: np.ndarray       # (len(orders), N) vectors mod p^e
    _kernel_basis: np.ndarray
    _kernel_scale: np.ndarray    # p^(e - a_i)
    _kernel_orders: np.ndarray   # p^a_i
    _Vinv: np.ndarray
    _P: np.ndarray
    _rows: np.ndarray            # which relation-matrix rows give nontrivial factors

    def coordinates(self, x: np.ndarray) -> np.ndarray:
        """Coordinates of a kernel vector in the cyclic decomposition (mod each order)."""
        q = self.p**self.e
        w = (self._Vinv @ (np.asarray(x, dtype=np.int64) % q)) % q
        if np.any(w % self._kernel_scale):
            raise ValueError("vector is not in the kernel")
        y = (w // self._kernel_scale) % self._kernel_orders
        z = (self._P @ y) % q
        return z[self._rows] % np.array(self.orders, dtype=np.int64)


def local_quotient(C: np.ndarray, B: np.ndarray, p: int, e: int) -> LocalQuotient:
    """Structure of ker(C) / im(B) for matrices over Z/p^e (columns of B must lie in ker C)."""
    q = p**e
    C = np.asarray(C, dtype=np.int64) % q
    N = C.shape[1]
    snf = local_snf(C, p, e, right=True)
    a = np.full(N, e, dtype=np.int64)
    a[: len(snf.vals)] = snf.vals
    keep = np.flatnonzero(a > 0)
    scale = np.array([p ** (e - int(x)) for x in a[keep]], dtype=np.int64)
    korders = np.array([p ** int(x) for x in a[keep]], dtype=np.int64)
    kbasis = (snf.V[:, keep] * scale[None, :]) % q  # columns
    Vinv = snf.Vinv[keep]
    B = np.asarray(B, dtype=np.int64).reshape(N, -1) % q
    W = (Vinv @ B) % q
    if np.any(W % scale[:, None]):
        raise ValueError("image is not contained in the kernel")
    Y = (W // scale[:, None]) % korders[:, None]
    k = len(keep)
    R = np.concatenate([Y, np.diag(korders)], axis=1) % q
    rsnf = local_snf(R, p, e, left=True)
    vals = list(rsnf.vals) + [e] * (k - len(rsnf.vals))
    rows = np.array([j for j in range(k) if vals[j] > 0], dtype=np.int64)
    orders = [p ** vals[j] for j in rows]
    Pinv = rsnf.Uinv
    gens = np.zeros((len(rows), N), dtype=np.int64)
    for idx, j in enumerate(rows):
        y = Pinv[:, j] % korders
        gens[idx] = (kbasis @ y) % q
    return LocalQuotient(p, e, orders, gens, kbasis, scale, korders, Vinv, rsnf.U, rows)


def factorize(m: int) -> list[tuple[int, int]]:
    out = []
    for p in prime_factors(m):
        e = 0
        while m % p == 0:
            m //= p
            e += 1
        out.append((p, e))
    return out


def _crt_lift(v: np.ndarray, q: int, m: int) -> np.ndarray:
    """The vector congruent to v mod q and to 0 mod m/q."""
    r = m // q
    # c = r * (r^-1 mod q)
    c = (r * pow(r, -1, q)) % m if q > 1 else 0
    return (np.asarray(v, dtype=np.int64) * c) % m


@dataclass
class ModQuotient:
    """ker(C) / im(B) over Z/m, assembled from its primary parts."""

    m: int
    factors: list[int]          # d1 | d2 | ... (all > 1)
    generators: np.ndarray      # one vector mod m per factor
    parts: list[LocalQuotient]
    _assembly: list[list[tuple[int, int]]]  # factor -> [(part idx, local idx)]

    @property
    def order(self) -> int:
        out = 1
        for d in self.factors:
            out *= d
        return out

    def coordinates(self, x: np.ndarray) -> list[int]:
        coords = [0] * len(self.factors)
        for f_idx, members in enumerate(self._assembly):
            # combine local coordinates by CRT
            val, mod = 0, 1
            for part_idx, local_idx in members:
                part = self.parts[part_idx]
                q = part.p**part.e
                c = int(part.coordinates(np.asarray(x) % q)[local_idx])
                o = part.orders[local_idx]
                # solve val' = val mod mod, = c mod o
                t = ((c - val) * pow(mod, -1, o)) % o
                val, mod = val + mod * t, mod * o
            coords[f_idx] = val % mod
        return coords

    def element_order(self, x: np.ndarray) -> int:
        out = 1
        for c, d in zip(self.coordinates(x), self.factors):
            out = math.lcm(out, d // math.gcd(c, d))
        return out


def mod_quotient(C: np.ndarray, B: np.ndarray, m: int) -> ModQuotient:
    N = np.asarray(C).shape[1]
    parts = []
    for p, e in factorize(m):
        parts.append(local_quotient(C, B, p, e))
    # merge p-primary cyclic factors into an invariant factor chain
    columns: list[list[tuple[int, int]]] = []
    for part_idx, part in enumerate(parts):
        ordered = sorted(range(len(part.orders)), key=lambda j: -part.orders[j])
        for pos, j in enumerate(ordered):
            while len(columns) <= pos:
                columns.append([])
            columns[pos].append((part_idx, j))
    columns.reverse()  # smallest factor first
    factors = []
    gens = np.zeros((len(columns), N), dtype=np.int64)
    for f_idx, members in enumerate(columns):
        d = 1
        for part_idx, j in members:
            part = parts[part_idx]
            d *= part.orders[j]
            gens[f_idx] = (gens[f_idx] + _crt_lift(part.generators[j], part.p**part.e, m)) % m
        factors.append(d)
    return ModQuotient(m, factors, gens, parts, columns)
